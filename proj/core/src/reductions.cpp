#include "safa/reductions.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <map>
#include <stdexcept>

namespace safa {

namespace {

std::string fresh_token(const std::vector<std::string>& taken, const std::string& base) {
    auto used = [&](const std::string& t) {
        return std::find(taken.begin(), taken.end(), t) != taken.end();
    };
    if (!used(base)) return base;
    for (int i = 1;; ++i) {
        std::string t = base + std::to_string(i);
        if (!used(t)) return t;
    }
}

std::vector<std::string> index_tokens(std::size_t n) {
    std::vector<std::string> tokens;
    for (std::size_t i = 1; i <= n; ++i) tokens.push_back(std::to_string(i));
    return tokens;
}

/// All words over `a` of length 1..max_len that are not a prefix of `ref`
/// and whose first letter satisfies `first_ok`, in (length, digit-lex) order.
std::vector<Word> non_prefix_words(const AlphabetPtr& a, const Word& ref, std::size_t max_len,
                                   const std::function<bool(Symbol)>& first_ok) {
    std::vector<Word> out;
    for (std::size_t len = 1; len <= max_len; ++len) {
        std::vector<std::uint32_t> odo(len, 0);
        for (;;) {
            Word w(a);
            for (std::size_t j = 0; j < len; ++j) w.push_back(a->symbol_of_digit(odo[j]));
            if (first_ok(w.at(0)) && !w.is_prefix_of(ref)) out.push_back(std::move(w));
            std::size_t k = len;
            while (k > 0 && odo[k - 1] + 1 == a->size()) odo[--k] = 0;
            if (k == 0) break;
            ++odo[k - 1];
        }
    }
    return out;
}

struct TransitionBag {
    // canonical accumulation: map keyed by (from, to, words) merging items
    struct Key {
        std::uint32_t from, to;
        std::vector<std::vector<Symbol>> letters;
        auto operator<=>(const Key&) const = default;
    };
    std::map<Key, std::vector<int>> entries;

    void add(std::uint32_t from, std::uint32_t to, const std::vector<Word>& words, int item) {
        Key k{from, to, {}};
        for (const Word& w : words) k.letters.push_back(w.letters());
        auto& items = entries[k];
        if (items.empty() || items.back() != item) items.push_back(item);
    }

    void emit(ReductionOutput& ro, const std::vector<AlphabetPtr>& alphabets) {
        for (auto& [k, its] : entries) {
            MultiTapeAutomaton::Transition tr;
            tr.from = k.from;
            tr.to = k.to;
            for (std::size_t i = 0; i < k.letters.size(); ++i)
                tr.words.emplace_back(alphabets[i], k.letters[i]);
            ro.automaton.transitions.push_back(std::move(tr));
            std::sort(its.begin(), its.end());
            its.erase(std::unique(its.begin(), its.end()), its.end());
            ro.items.push_back(its);
        }
    }
};

constexpr std::uint32_t X = 0, U = 1, V = 2;

std::size_t max_pair_word_len(const PcpInstance& inst) {
    std::size_t m = 0;
    for (const auto& [u, v] : inst.pairs) m = std::max({m, u.size(), v.size()});
    return m;
}

Word lift(const AlphabetPtr& target, const Word& w) {
    Word out(target);
    for (std::size_t j = 0; j < w.size(); ++j) {
        auto s = target->find(w.alphabet()->token(w.at(j)));
        if (!s) throw std::logic_error("symbol lost while lifting word");
        out.push_back(*s);
    }
    return out;
}

} // namespace

Symbol ReductionOutput::marker(std::size_t tape, SymbolProvenance::Kind kind) const {
    const auto& provs = alphabet_map.at(tape);
    for (Symbol s = 0; s < provs.size(); ++s)
        if (provs[s].kind == kind) return s;
    throw std::logic_error("marker not present on tape");
}

ReductionOutput build_universality_automaton(const PcpInstance& inst, std::size_t max_word_len) {
    if (max_pair_word_len(inst) > max_word_len)
        throw std::invalid_argument("instance words longer than the enumeration limit");
    const std::size_t n = inst.size();

    auto a1 = std::make_shared<TapeAlphabet>(index_tokens(n));
    std::vector<std::string> a2_tokens = inst.alphabet->tokens();
    const std::string hash_token = fresh_token(a2_tokens, "#");
    a2_tokens.push_back(hash_token);
    auto a2 = std::make_shared<TapeAlphabet>(a2_tokens);
    const Symbol hash = *a2->find(hash_token);

    ReductionOutput ro;
    ro.automaton.tape_alphabets = {a1, a2};
    ro.automaton.states = {"X", "U", "V"};
    ro.alphabet_map.resize(2);
    for (std::uint32_t i = 0; i < n; ++i)
        ro.alphabet_map[0].push_back({SymbolProvenance::Kind::Index, i + 1});
    for (Symbol s = 0; s < a2->size(); ++s)
        ro.alphabet_map[1].push_back(
            {s == hash ? SymbolProvenance::Kind::Hash : SymbolProvenance::Kind::Letter, 0});

    TransitionBag bag;
    auto index_word = [&](std::uint32_t i) {
        Word w(a1);
        w.push_back(i - 1); // token "i" is at position i-1
        return w;
    };
    for (std::uint32_t i = 1; i <= n; ++i) {
        Word ui = lift(a2, inst.u(i));
        Word vi = lift(a2, inst.v(i));
        bag.add(X, U, {index_word(i), ui}, 1);
        bag.add(U, U, {index_word(i), ui}, 1);
        bag.add(X, V, {index_word(i), vi}, 2);
        bag.add(V, V, {index_word(i), vi}, 2);
        auto not_hash_first = [&](Symbol s) { return s != hash; };
        auto any_first = [](Symbol) { return true; };
        for (const Word& u : non_prefix_words(a2, ui, ui.size(), not_hash_first))
            bag.add(U, X, {index_word(i), u}, 3);
        for (const Word& u : non_prefix_words(a2, ui, ui.size(), any_first))
            bag.add(X, X, {index_word(i), u}, 4);
        for (const Word& v : non_prefix_words(a2, vi, vi.size(), not_hash_first))
            bag.add(V, X, {index_word(i), v}, 5);
        for (const Word& v : non_prefix_words(a2, vi, vi.size(), any_first))
            bag.add(X, X, {index_word(i), v}, 6);
    }
    bag.emit(ro, ro.automaton.tape_alphabets);
    validate(ro.automaton);
    return ro;
}

std::vector<Word> blocking_words_universality(const PcpInstance& inst,
                                              const PrefixPcpSolution& sol) {
    const std::size_t n = inst.size();
    auto a1 = std::make_shared<TapeAlphabet>(index_tokens(n));
    std::vector<std::string> a2_tokens = inst.alphabet->tokens();
    const std::string hash_token = fresh_token(a2_tokens, "#");
    a2_tokens.push_back(hash_token);
    auto a2 = std::make_shared<TapeAlphabet>(a2_tokens);

    Word tape1(a1);
    for (std::uint32_t i : sol.longer.indices) tape1.push_back(i - 1);
    Word concat = sol.orientation == PrefixPcpSolution::Orientation::ULong
                      ? concat_u(inst, sol.longer)
                      : concat_v(inst, sol.longer);
    Word tape2 = lift(a2, concat);
    tape2.push_back(*a2->find(hash_token));
    return {tape1, tape2};
}

ConfigPrefix blocking_config_universality(const PcpInstance& inst, const PrefixPcpSolution& sol) {
    std::vector<Word> words = blocking_words_universality(inst, sol);
    std::size_t len = 0;
    for (const Word& w : words) len = std::max(len, w.size());
    for (Word& w : words)
        while (w.size() < len) w.push_back(w.alphabet()->symbol_of_digit(0));
    return ConfigPrefix(std::move(words));
}

Word star_interleave(const Word& w) {
    if (w.empty()) throw std::invalid_argument("cannot interleave the empty word");
    std::vector<std::string> tokens = w.alphabet()->tokens();
    const std::string star_token = fresh_token(tokens, "*");
    tokens.push_back(star_token);
    auto a = std::make_shared<TapeAlphabet>(tokens);
    const Symbol star = *a->find(star_token);
    Word out(a);
    for (std::size_t j = 0; j < w.size(); ++j) {
        out.push_back(*a->find(w.alphabet()->token(w.at(j))));
        out.push_back(star);
    }
    return out;
}

PcpInstance star_interleave_instance(const PcpInstance& inst) {
    std::vector<std::string> tokens = inst.alphabet->tokens();
    const std::string star_token = fresh_token(tokens, "*");
    tokens.push_back(star_token);
    auto a = std::make_shared<TapeAlphabet>(tokens);
    const Symbol star = *a->find(star_token);
    auto interleave = [&](const Word& w) {
        Word out(a);
        for (std::size_t j = 0; j < w.size(); ++j) {
            out.push_back(*a->find(w.alphabet()->token(w.at(j))));
            out.push_back(star);
        }
        return out;
    };
    std::vector<std::pair<Word, Word>> pairs;
    for (const auto& [u, v] : inst.pairs) pairs.emplace_back(interleave(u), interleave(v));
    return PcpInstance(a, std::move(pairs));
}

ReductionOutput build_universal_prefix_automaton(const PcpInstance& inst,
                                                 std::size_t max_word_len) {
    PcpInstance inst2 = star_interleave_instance(inst);
    if (max_pair_word_len(inst2) > max_word_len)
        throw std::invalid_argument(
            "interleaved instance words longer than the enumeration limit");
    const std::size_t n = inst2.size();
    const std::string star_token = inst2.alphabet->tokens().back();

    std::vector<std::string> a2_tokens = inst2.alphabet->tokens();
    const std::string hash_token = fresh_token(a2_tokens, "#");
    a2_tokens.push_back(hash_token);
    std::vector<std::string> amp_taken = a2_tokens;
    for (const auto& t : index_tokens(n)) amp_taken.push_back(t);
    const std::string amp_token = fresh_token(amp_taken, "&");
    a2_tokens.push_back(amp_token);
    auto a2 = std::make_shared<TapeAlphabet>(a2_tokens);

    std::vector<std::string> a1_tokens = index_tokens(n);
    a1_tokens.push_back(amp_token);
    auto a1 = std::make_shared<TapeAlphabet>(a1_tokens);

    const Symbol star2 = *a2->find(star_token);
    const Symbol hash2 = *a2->find(hash_token);
    const Symbol amp2 = *a2->find(amp_token);
    const Symbol amp1 = *a1->find(amp_token);

    ReductionOutput ro;
    ro.automaton.tape_alphabets = {a1, a2};
    ro.automaton.states = {"X", "U", "V"};
    ro.interleaved = inst2;
    ro.alphabet_map.resize(2);
    for (std::uint32_t i = 0; i < n; ++i)
        ro.alphabet_map[0].push_back({SymbolProvenance::Kind::Index, i + 1});
    ro.alphabet_map[0].push_back({SymbolProvenance::Kind::Amp, 0});
    for (Symbol s = 0; s < a2->size(); ++s) {
        SymbolProvenance p{SymbolProvenance::Kind::Letter, 0};
        if (s == star2) p.kind = SymbolProvenance::Kind::Star;
        if (s == hash2) p.kind = SymbolProvenance::Kind::Hash;
        if (s == amp2) p.kind = SymbolProvenance::Kind::Amp;
        ro.alphabet_map[1].push_back(p);
    }

    TransitionBag bag;
    auto index_word = [&](std::uint32_t i) {
        Word w(a1);
        w.push_back(*a1->find(std::to_string(i)));
        return w;
    };
    auto single2 = [&](Symbol s) {
        Word w(a2);
        w.push_back(s);
        return w;
    };
    // items (1)-(6) range over the pair indices only; the first letter of the
    // enumerated words must be a plain letter (or the end marker where
    // permitted), never & or *.
    for (std::uint32_t i = 1; i <= n; ++i) {
        Word ui = lift(a2, inst2.u(i));
        Word vi = lift(a2, inst2.v(i));
        bag.add(X, U, {index_word(i), ui}, 1);
        bag.add(U, U, {index_word(i), ui}, 1);
        bag.add(X, V, {index_word(i), vi}, 2);
        bag.add(V, V, {index_word(i), vi}, 2);
        auto letter_first = [&](Symbol s) { return s != hash2 && s != amp2 && s != star2; };
        auto letter_or_hash_first = [&](Symbol s) { return s != amp2 && s != star2; };
        for (const Word& u : non_prefix_words(a2, ui, ui.size(), letter_first))
            bag.add(U, X, {index_word(i), u}, 3);
        for (const Word& u : non_prefix_words(a2, ui, ui.size(), letter_or_hash_first))
            bag.add(X, X, {index_word(i), u}, 4);
        for (const Word& v : non_prefix_words(a2, vi, vi.size(), letter_first))
            bag.add(V, X, {index_word(i), v}, 5);
        for (const Word& v : non_prefix_words(a2, vi, vi.size(), letter_or_hash_first))
            bag.add(X, X, {index_word(i), v}, 6);
    }
    for (std::uint32_t q : {X, U, V}) {
        for (Symbol a = 0; a < a1->size(); ++a) {
            Word w1(a1);
            w1.push_back(a);
            bag.add(q, X, {w1, single2(amp2)}, 7);
        }
        for (Symbol a = 0; a < a2->size(); ++a) {
            if (a == star2) continue;
            Word w1(a1);
            w1.push_back(amp1);
            bag.add(q, X, {w1, single2(a)}, 8);
        }
        for (Symbol a = 0; a < a1->size(); ++a) {
            for (Symbol b = 0; b < a2->size(); ++b) {
                Word w1(a1);
                w1.push_back(a);
                Word w2(a2);
                w2.push_back(star2);
                w2.push_back(b);
                bag.add(q, X, {w1, w2}, 9);
            }
        }
    }
    bag.emit(ro, ro.automaton.tape_alphabets);
    validate(ro.automaton);
    return ro;
}

Config amp_padded_config(const ReductionOutput& ro, const Word& x, const Word& y) {
    const auto& a1 = ro.automaton.tape_alphabets[0];
    const auto& a2 = ro.automaton.tape_alphabets[1];
    Word amp1(a1), amp2(a2);
    amp1.push_back(ro.marker(0, SymbolProvenance::Kind::Amp));
    amp2.push_back(ro.marker(1, SymbolProvenance::Kind::Amp));
    return {UltimatelyPeriodicSeq(lift(a1, x), amp1), UltimatelyPeriodicSeq(lift(a2, y), amp2)};
}

WitnessExtension blocking_extension(const ReductionOutput& ro, const PcpInstance& interleaved,
                                    const PrefixPcpSolution& sol, const Word& x, const Word& y,
                                    std::size_t run_cap) {
    const auto& M = ro.automaton;
    Config c0 = amp_padded_config(ro, x, y);
    if (!accepts_up(M, ro.state_x, c0))
        throw NotAcceptedError("the padded configuration is already not accepted");

    auto prefixes = boundary_run_prefixes(M, ro.state_x, c0, {x.size(), y.size()}, run_cap);
    if (prefixes.empty()) throw NotAcceptedError("no accepting run reaches the padding");
    const RunPrefix* best = &prefixes.front();
    std::int64_t over1 = 0, over2 = 0; // head overshoot past x / y at the cut
    for (const RunPrefix& r : prefixes) {
        if (std::abs(r.signed_gap()) < std::abs(best->signed_gap())) best = &r;
        over1 = std::max(over1, r.head_pos[0] - static_cast<std::int64_t>(x.size()));
        over2 = std::max(over2, r.head_pos[1] - static_cast<std::int64_t>(y.size()));
    }
    const std::int64_t gap = best->signed_gap();

    const auto& a1 = M.tape_alphabets[0];
    const auto& a2 = M.tape_alphabets[1];
    const Symbol amp1 = ro.marker(0, SymbolProvenance::Kind::Amp);
    const Symbol amp2 = ro.marker(1, SymbolProvenance::Kind::Amp);
    const Symbol hash2 = ro.marker(1, SymbolProvenance::Kind::Hash);

    Word s(a1);
    for (std::uint32_t i : sol.longer.indices) s.push_back(*a1->find(std::to_string(i)));
    Word t = lift(a2, sol.orientation == PrefixPcpSolution::Orientation::ULong
                          ? concat_u(interleaved, sol.longer)
                          : concat_v(interleaved, sol.longer));

    // Place s so that it starts exactly `gap` positions behind t:
    // (|y| + L') - (|x| + L) = gap. Both paddings are stretched past every
    // enumerated run's cut point so the padded configuration agrees with
    // x &&.. | y &&.. wherever those runs live.
    std::int64_t delta = gap + static_cast<std::int64_t>(x.size()) -
                         static_cast<std::int64_t>(y.size());
    std::int64_t L = std::max({over1, over2 - delta, std::int64_t(0)});
    std::int64_t Lp = L + delta;
    WitnessExtension ext;
    ext.head_gap = gap;
    ext.pad_left = static_cast<std::uint64_t>(L);
    ext.pad_right = static_cast<std::uint64_t>(Lp);
    ext.x_ext = Word(a1);
    for (std::uint64_t j = 0; j < ext.pad_left; ++j) ext.x_ext.push_back(amp1);
    ext.x_ext = ext.x_ext + s;
    // One index symbol after s pins the exhausted solution thread: when it
    // faces the end marker the first tape must not yet show &, otherwise the
    // catch-all &|a move lets it escape.
    ext.x_ext.push_back(*a1->find("1"));
    ext.y_ext = Word(a2);
    for (std::uint64_t j = 0; j < ext.pad_right; ++j) ext.y_ext.push_back(amp2);
    ext.y_ext = ext.y_ext + t;
    ext.y_ext.push_back(hash2);
    return ext;
}

std::pair<Word, Word> iterate_blocking(const ReductionOutput& ro, const PcpInstance& interleaved,
                                       const PrefixPcpSolution& sol, Word x, Word y,
                                       std::size_t max_rounds) {
    const auto& a1 = ro.automaton.tape_alphabets[0];
    const auto& a2 = ro.automaton.tape_alphabets[1];
    x = lift(a1, x);
    y = lift(a2, y);
    for (std::size_t round = 0; round < max_rounds; ++round) {
        if (!accepts_up(ro.automaton, ro.state_x, amp_padded_config(ro, x, y))) return {x, y};
        WitnessExtension ext = blocking_extension(ro, interleaved, sol, x, y);
        x = x + ext.x_ext;
        y = y + ext.y_ext;
    }
    throw std::runtime_error("blocking iteration did not terminate");
}

} // namespace safa
