#include "safa/mta.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <set>

using namespace safa;
using namespace safa::testing;

namespace {

// Independent acceptance oracle: depth-bounded enumeration of runs matching
// the configuration, accepting when a (state, canonical position) pair
// repeats along the path. Complete when the quotient has at most `depth`
// nodes.
struct NaiveOracle {
    const MultiTapeAutomaton& M;
    const Config& c;
    std::vector<std::uint64_t> pre, per;

    NaiveOracle(const MultiTapeAutomaton& m, const Config& cfg) : M(m), c(cfg) {
        for (const auto& s : c) {
            pre.push_back(s.preperiod().size());
            per.push_back(s.period().size());
        }
    }

    std::uint64_t nodes() const {
        std::uint64_t n = M.states.size();
        for (std::size_t k = 0; k < pre.size(); ++k) n *= pre[k] + per[k];
        return n;
    }

    std::vector<std::uint64_t> canon(const std::vector<std::uint64_t>& h) const {
        std::vector<std::uint64_t> out(h.size());
        for (std::size_t k = 0; k < h.size(); ++k)
            out[k] = h[k] < pre[k] ? h[k] : pre[k] + (h[k] - pre[k]) % per[k];
        return out;
    }

    bool dfs(std::uint32_t q, const std::vector<std::uint64_t>& heads,
             std::vector<std::pair<std::uint32_t, std::vector<std::uint64_t>>>& path,
             int depth) const {
        auto node = std::make_pair(q, canon(heads));
        for (const auto& seen : path)
            if (seen == node) return true; // lasso confirmed
        if (depth == 0) return false;
        path.push_back(node);
        for (const auto& tr : M.transitions) {
            if (tr.from != q) continue;
            std::vector<std::uint64_t> h = heads;
            bool ok = true;
            for (std::size_t k = 0; k < tr.words.size() && ok; ++k)
                for (Symbol letter : tr.words[k].letters()) {
                    if (c[k].at(h[k]) != letter) {
                        ok = false;
                        break;
                    }
                    ++h[k];
                }
            if (ok && dfs(tr.to, h, path, depth - 1)) {
                path.pop_back();
                return true;
            }
        }
        path.pop_back();
        return false;
    }

    bool accepts(std::uint32_t q) const {
        std::vector<std::pair<std::uint32_t, std::vector<std::uint64_t>>> path;
        std::vector<std::uint64_t> zero(M.num_tapes(), 0);
        return dfs(q, zero, path, 12);
    }
};

ConfigPrefix cp(const MultiTapeAutomaton& M, const std::vector<std::string>& tapes) {
    std::vector<Word> words;
    for (std::size_t k = 0; k < tapes.size(); ++k)
        words.push_back(Word::from_chars(M.tape_alphabets[k], tapes[k]));
    return ConfigPrefix(std::move(words));
}

} // namespace

TEST_CASE("validate accepts the worked examples") {
    CHECK_NOTHROW(validate(example21()));
    CHECK_NOTHROW(validate(example24()));
    CHECK_NOTHROW(validate(sierpinski()));
    CHECK(example21().transitions.size() == 5);
}

TEST_CASE("validate rejects bad automata with named transitions") {
    MultiTapeAutomaton M = example24();
    M.transitions.push_back({0, 0, {Word(M.tape_alphabets[0])}});
    try {
        validate(M);
        FAIL("expected EmptyWordTransition");
    } catch (const ValidationError& e) {
        CHECK(e.kind() == ValidationError::Kind::EmptyWordTransition);
        CHECK(std::string(e.what()).find("transition #3") != std::string::npos);
    }

    MultiTapeAutomaton bad_state = example24();
    bad_state.transitions[0].to = 7;
    try {
        validate(bad_state);
        FAIL("expected UnknownState");
    } catch (const ValidationError& e) {
        CHECK(e.kind() == ValidationError::Kind::UnknownState);
    }

    MultiTapeAutomaton bad_word = example24();
    bad_word.transitions[0].words[0] = Word::from_chars(alpha({"0", "1", "2"}), "2");
    try {
        validate(bad_word);
        FAIL("expected UnknownSymbol");
    } catch (const ValidationError& e) {
        CHECK(e.kind() == ValidationError::Kind::UnknownSymbol);
    }
}

TEST_CASE("coaccessible_states") {
    auto co21 = coaccessible_states(example21());
    CHECK(co21 == std::vector<char>{1, 1});

    MultiTapeAutomaton chain;
    auto a = alpha({"0"});
    chain.tape_alphabets = {a};
    chain.states = {"q", "r"};
    chain.transitions = {tr(0, 1, {w(a, "0")})};
    CHECK(coaccessible_states(chain) == std::vector<char>{0, 0});

    CHECK(coaccessible_states(example24()) == std::vector<char>{1});
}

TEST_CASE("accepts_up on the 2-tape worked example") {
    MultiTapeAutomaton M = example21();
    Config c = {ups(M.tape_alphabets[0], "", "0"), ups(M.tape_alphabets[1], "", "2")};
    CHECK(accepts_up(M, 0, c));       // X-accepted via the 0|22 loop
    CHECK_FALSE(accepts_up(M, 1, c)); // not Y-accepted
}

TEST_CASE("accepts_up on the 1-tape example") {
    MultiTapeAutomaton M = example24();
    auto a = M.tape_alphabets[0];
    CHECK_FALSE(accepts_up(M, 0, {ups(a, "01", "0")}));
    CHECK(accepts_up(M, 0, {ups(a, "", "1")}));
    CHECK(accepts_up(M, 0, {ups(a, "1", "0")}));
    CHECK(accepts_up(M, 0, {ups(a, "1000011", "10")}));
    CHECK_FALSE(accepts_up(M, 0, {ups(a, "0001", "1")}));
}

TEST_CASE("accepts_up agrees with the naive oracle") {
    Rng rng(20240920);
    int checked = 0;
    for (int iter = 0; iter < 400; ++iter) {
        MultiTapeAutomaton M = random_automaton(rng);
        if (M.transitions.size() > 6) continue;
        Config c = random_config(rng, M, 2, 2);
        NaiveOracle oracle(M, c);
        if (oracle.nodes() > 12) continue;
        ++checked;
        for (std::uint32_t q = 0; q < M.states.size(); ++q)
            CHECK(accepts_up(M, q, c) == oracle.accepts(q));
    }
    CHECK(checked > 30);
}

TEST_CASE("is_dead_prefix on the worked examples") {
    MultiTapeAutomaton M = example24();
    CHECK(is_dead_prefix(M, 0, cp(M, {"01"})));
    CHECK_FALSE(is_dead_prefix(M, 0, cp(M, {"1"})));

    MultiTapeAutomaton S = sierpinski();
    CHECK(is_dead_prefix(S, 0, cp(S, {"1", "1"})));
    CHECK_FALSE(is_dead_prefix(S, 0, cp(S, {"1", "0"})));

    // the empty prefix is dead exactly when no infinite run exists at all
    MultiTapeAutomaton chain;
    auto a = alpha({"0"});
    chain.tape_alphabets = {a};
    chain.states = {"q", "r"};
    chain.transitions = {tr(0, 1, {w(a, "0")})};
    CHECK(is_dead_prefix(chain, 0, ConfigPrefix::empty(chain)));
    CHECK_FALSE(is_dead_prefix(example24(), 0, ConfigPrefix::empty(example24())));
}

TEST_CASE("dead prefixes are monotone under extension") {
    Rng rng(20240921);
    for (int iter = 0; iter < 60; ++iter) {
        MultiTapeAutomaton M = random_automaton(rng);
        ConfigPrefix p = ConfigPrefix::empty(M);
        std::size_t len = rng.next(1, 3);
        for (std::size_t i = 0; i < len; ++i) {
            std::vector<Symbol> col;
            for (std::size_t k = 0; k < M.num_tapes(); ++k)
                col.push_back(rng.next(0, M.tape_alphabets[k]->size() - 1));
            p.push_column(col);
        }
        if (!is_dead_prefix(M, 0, p)) continue;
        for (std::size_t k = 0; k < M.tape_alphabets[0]->size(); ++k) {
            ConfigPrefix q = p;
            std::vector<Symbol> col(M.num_tapes(), 0);
            col[0] = static_cast<Symbol>(k);
            q.push_column(col);
            CHECK(is_dead_prefix(M, 0, q));
        }
    }
}

TEST_CASE("prefixes of accepted configurations are never dead") {
    Rng rng(20240922);
    for (int iter = 0; iter < 60; ++iter) {
        MultiTapeAutomaton M = random_automaton(rng);
        Config c = random_config(rng, M);
        std::uint32_t q = rng.next(0, M.states.size() - 1);
        if (!accepts_up(M, q, c)) continue;
        for (std::size_t n : {0u, 1u, 2u, 4u, 6u}) {
            std::vector<Word> words;
            for (std::size_t k = 0; k < M.num_tapes(); ++k) words.push_back(c[k].prefix(n));
            CHECK_FALSE(is_dead_prefix(M, q, ConfigPrefix(std::move(words))));
        }
    }
}

TEST_CASE("check_universal: No with canonical witnesses") {
    Bounds bounds;
    MultiTapeAutomaton S = sierpinski();
    Verdict3 vs = check_universal(S, 0, bounds);
    CHECK(vs.no());
    REQUIRE(vs.witness.has_value());
    CHECK(vs.witness->str() == "1|1");
    CHECK(is_dead_prefix(S, 0, *vs.witness));

    MultiTapeAutomaton M = example24();
    Verdict3 vm = check_universal(M, 0, bounds);
    CHECK(vm.no());
    REQUIRE(vm.witness.has_value());
    CHECK(vm.witness->str() == "01");
    CHECK(is_dead_prefix(M, 0, *vm.witness));
}

TEST_CASE("check_universal: Yes for the full automaton at cap 1") {
    Bounds bounds;
    bounds.overhang_cap = 1;
    Verdict3 v = check_universal(full_square(), 0, bounds);
    CHECK(v.yes());
    CHECK(v.certificate.has_value());
}

TEST_CASE("check_universal_prefix on the 1-tape example") {
    MultiTapeAutomaton M = example24();
    Bounds bounds;
    bounds.overhang_cap = 2;
    Verdict3 yes = check_universal_prefix(M, 0, cp(M, {"1"}), bounds);
    CHECK(yes.yes());

    Verdict3 no = check_universal_prefix(M, 0, cp(M, {"0"}), bounds);
    CHECK(no.no());
    REQUIRE(no.witness.has_value());
    CHECK(no.witness->str() == "1"); // the dead extension: prefix 01 is dead

    // a dead prefix is refuted by the empty extension
    Verdict3 dead = check_universal_prefix(M, 0, cp(M, {"01"}), bounds);
    CHECK(dead.no());
    CHECK(dead.witness->length() == 0);

    CHECK(check_universal_prefix(full_square(), 0, cp(full_square(), {"0", "1"}), Bounds{}).yes());
}

TEST_CASE("search_universal_prefix") {
    MultiTapeAutomaton M = example24();
    auto [prefix, verdict] = search_universal_prefix(M, 0, Bounds{});
    REQUIRE(prefix.has_value());
    CHECK(prefix->str() == "1");
    CHECK(verdict.yes());

    Bounds small;
    small.max_prefix_len = 3;
    small.max_ext_len = 6;
    small.overhang_cap = 4;
    auto [sp, sv] = search_universal_prefix(sierpinski(), 0, small);
    CHECK_FALSE(sp.has_value());
    CHECK(sv.unknown());

    auto [fp, fv] = search_universal_prefix(full_square(), 0, Bounds{});
    REQUIRE(fp.has_value());
    CHECK(fp->length() == 0);
    CHECK(fv.yes());
}

TEST_CASE("check_common_universal_prefix") {
    MultiTapeAutomaton M = example24();
    auto [p, v] = check_common_universal_prefix(M, 0, 0, Bounds{});
    REQUIRE(p.has_value());
    CHECK(p->str() == "1");
    CHECK(v.yes());

    auto [fp, fv] = check_common_universal_prefix(full_square(), 0, 0, Bounds{});
    REQUIRE(fp.has_value());
    CHECK(fp->length() == 0);

    // two components with disjoint forced first symbols have no common prefix
    MultiTapeAutomaton D;
    auto a = alpha({"0", "1"});
    D.tape_alphabets = {a};
    D.states = {"q", "qq", "r", "rr"};
    D.transitions = {
        tr(0, 1, {w(a, "0")}), tr(1, 1, {w(a, "0")}), tr(1, 1, {w(a, "1")}),
        tr(2, 3, {w(a, "1")}), tr(3, 3, {w(a, "0")}), tr(3, 3, {w(a, "1")}),
    };
    Bounds small;
    small.max_prefix_len = 3;
    auto [dp, dv] = check_common_universal_prefix(D, 0, 2, small);
    CHECK_FALSE(dp.has_value());
    CHECK(dv.unknown());
}

TEST_CASE("universal prefix Yes implies acceptance of random extensions") {
    MultiTapeAutomaton M = example24();
    Bounds bounds;
    bounds.overhang_cap = 2;
    REQUIRE(check_universal_prefix(M, 0, cp(M, {"1"}), bounds).yes());
    Rng rng(20240923);
    auto a = M.tape_alphabets[0];
    for (int iter = 0; iter < 100; ++iter) {
        Word pre = w(a, "1");
        std::size_t np = rng.next(0, 4);
        for (std::size_t i = 0; i < np; ++i) pre.push_back(rng.next(0, 1));
        Word per(a);
        std::size_t pp = rng.next(1, 3);
        for (std::size_t i = 0; i < pp; ++i) per.push_back(rng.next(0, 1));
        CHECK(accepts_up(M, 0, {UltimatelyPeriodicSeq(pre, per)}));
    }
}

TEST_CASE("soundness cross-check on verdicts") {
    // whenever Yes, no dead prefix exists up to an independent sweep;
    // whenever No, the witness is dead
    std::vector<MultiTapeAutomaton> fixtures = {example24(), sierpinski(), full_square()};
    for (const auto& M : fixtures) {
        Verdict3 v = check_universal(M, 0, Bounds{});
        if (v.yes()) {
            // exhaustive sweep to length 4
            std::function<bool(ConfigPrefix&, std::size_t)> sweep = [&](ConfigPrefix& p,
                                                                        std::size_t left) {
                if (is_dead_prefix(M, 0, p)) return true;
                if (left == 0) return false;
                std::vector<std::uint32_t> digits(M.num_tapes(), 0);
                for (;;) {
                    std::vector<Symbol> col;
                    for (std::size_t k = 0; k < M.num_tapes(); ++k)
                        col.push_back(M.tape_alphabets[k]->symbol_of_digit(digits[k]));
                    ConfigPrefix q = p;
                    q.push_column(col);
                    if (sweep(q, left - 1)) return true;
                    std::size_t k = M.num_tapes();
                    while (k > 0 && digits[k - 1] + 1 == M.tape_alphabets[k - 1]->size())
                        digits[--k] = 0;
                    if (k == 0) break;
                    ++digits[k - 1];
                }
                return false;
            };
            ConfigPrefix root = ConfigPrefix::empty(M);
            CHECK_FALSE(sweep(root, 4));
        }
        if (v.no()) CHECK(is_dead_prefix(M, 0, *v.witness));
    }
}

TEST_CASE("count_accepting_runs") {
    MultiTapeAutomaton F = full_square();
    auto a = F.tape_alphabets[0];
    Config zeros = {ups(a, "", "0"), ups(a, "", "0")};
    CHECK(count_accepting_runs(F, 0, zeros) == 1);

    // two parallel ways to read 0^w -> infinitely many runs
    MultiTapeAutomaton P;
    P.tape_alphabets = {a};
    P.states = {"q"};
    P.transitions = {tr(0, 0, {w(a, "0")}), tr(0, 0, {w(a, "00")})};
    CHECK_FALSE(count_accepting_runs(P, 0, {ups(a, "", "0")}).has_value());

    // rejected configuration: zero runs
    CHECK(count_accepting_runs(example24(), 0, {ups(a, "01", "0")}) == 0);

    // finite branching before a deterministic tail
    MultiTapeAutomaton B;
    B.tape_alphabets = {a};
    B.states = {"s", "t"};
    B.transitions = {tr(0, 1, {w(a, "0")}), tr(0, 1, {w(a, "00")}), tr(1, 1, {w(a, "1")})};
    // config 0 0 1^w: run A reads 0,0 then 1s? "0" then "0"? only one 0-transition
    // from s; after s->t the t loop reads 1s. 001^w: s -(0)-> t needs 0 then 1s:
    // mismatch at the second 0; s -(00)-> t then 1^w works: exactly one run.
    CHECK(count_accepting_runs(B, 0, {ups(a, "00", "1")}) == 1);
}

TEST_CASE("boundary_run_prefixes cut at the padding") {
    MultiTapeAutomaton F = full_square();
    auto a = F.tape_alphabets[0];
    Config c = {ups(a, "01", "0"), ups(a, "1", "0")};
    auto prefixes = boundary_run_prefixes(F, 0, c, {2, 1});
    // every transition advances both heads by one, so the cut is reached
    // after exactly two steps; both steps are forced by the configuration
    REQUIRE(prefixes.size() == 1);
    CHECK(prefixes[0].steps.size() == 2);
    CHECK(prefixes[0].head_pos == std::vector<std::int64_t>{2, 2});
    CHECK(prefixes[0].head_gap() == 0);
    CHECK(prefixes[0].signed_gap() == 0);

    auto none = boundary_run_prefixes(example24(), 0, {ups(a, "01", "0")}, {2});
    CHECK(none.empty());
}

TEST_CASE("pad_pow2 duplicates symbols and preserves acceptance") {
    MultiTapeAutomaton M;
    auto t3 = alpha({"0", "1", "2"});
    M.tape_alphabets = {t3};
    M.states = {"q"};
    for (Symbol s = 0; s < 3; ++s) {
        Word word(t3);
        word.push_back(s);
        M.transitions.push_back(tr(0, 0, {word}));
    }
    MultiTapeAutomaton P = pad_pow2(M);
    CHECK(P.tape_alphabets[0]->size() == 4);
    CHECK(P.tape_alphabets[0]->token(3) == "0~1");
    CHECK(P.transitions.size() == 4); // the 0-transition gained a clone variant
    CHECK(check_universal(M, 0, Bounds{}).yes());
    CHECK(check_universal(P, 0, Bounds{}).yes());

    // already a power of two: unchanged
    MultiTapeAutomaton F = pad_pow2(full_square());
    CHECK(F.tape_alphabets[0]->size() == 2);
    CHECK(F.transitions.size() == 4);
}

TEST_CASE("verdicts record their bounds") {
    Bounds bounds;
    bounds.max_prefix_len = 5;
    bounds.overhang_cap = 3;
    Verdict3 v = check_universal(example24(), 0, bounds);
    CHECK(v.bounds.max_prefix_len == 5);
    CHECK(v.bounds.overhang_cap == 3);
}
