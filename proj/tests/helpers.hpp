// Shared fixtures and deterministic generators for the test suites.

#pragma once

#include "safa/gifs.hpp"
#include "safa/mta.hpp"
#include "safa/pcp.hpp"

#include <random>
#include <string>
#include <vector>

namespace safa::testing {

inline AlphabetPtr alpha(std::vector<std::string> tokens) {
    return std::make_shared<TapeAlphabet>(std::move(tokens));
}

inline Word w(const AlphabetPtr& a, const std::string& chars) {
    return Word::from_chars(a, chars);
}

inline MultiTapeAutomaton::Transition tr(std::uint32_t from, std::uint32_t to,
                                         std::vector<Word> words) {
    return {from, to, std::move(words)};
}

/// The 2-tape, 2-state worked example: states {X, Y} over {0,1} x {0,1,2}.
/// The Y self-loop whose printed label clashes with the tape-1 alphabet is
/// taken with its components swapped (1 | 20), the only reading over the
/// declared alphabets.
inline MultiTapeAutomaton example21() {
    MultiTapeAutomaton M;
    auto a1 = alpha({"0", "1"});
    auto a2 = alpha({"0", "1", "2"});
    M.tape_alphabets = {a1, a2};
    M.states = {"X", "Y"};
    M.transitions = {
        tr(0, 0, {w(a1, "0"), w(a2, "22")}),
        tr(0, 1, {w(a1, "10"), w(a2, "11")}),
        tr(1, 1, {w(a1, "1"), w(a2, "001")}),
        tr(1, 1, {w(a1, "1"), w(a2, "20")}),
        tr(1, 0, {w(a1, "110"), w(a2, "2")}),
    };
    return M;
}

/// 1-tape, 1-state automaton with transitions 1, 10, 00: not universal but
/// the word 1 is a universal prefix.
inline MultiTapeAutomaton example24() {
    MultiTapeAutomaton M;
    auto a = alpha({"0", "1"});
    M.tape_alphabets = {a};
    M.states = {"q"};
    M.transitions = {
        tr(0, 0, {w(a, "1")}),
        tr(0, 0, {w(a, "10")}),
        tr(0, 0, {w(a, "00")}),
    };
    return M;
}

/// 1-state, 2-tape automaton with transitions 0|0, 0|1, 1|0; its attractor is
/// the Sierpinski triangle.
inline MultiTapeAutomaton sierpinski() {
    MultiTapeAutomaton M;
    auto a = alpha({"0", "1"});
    M.tape_alphabets = {a, a};
    M.states = {"q"};
    M.transitions = {
        tr(0, 0, {w(a, "0"), w(a, "0")}),
        tr(0, 0, {w(a, "0"), w(a, "1")}),
        tr(0, 0, {w(a, "1"), w(a, "0")}),
    };
    return M;
}

/// 1-state, 2-tape automaton with all four length-1 transitions; universal,
/// attractor [0,1]^2.
inline MultiTapeAutomaton full_square() {
    MultiTapeAutomaton M;
    auto a = alpha({"0", "1"});
    M.tape_alphabets = {a, a};
    M.states = {"q"};
    for (std::string x : {"0", "1"})
        for (std::string y : {"0", "1"})
            M.transitions.push_back(tr(0, 0, {w(a, x), w(a, y)}));
    return M;
}

/// The prefix-PCP worked example {(a,abb),(bb,aa)}.
inline PcpInstance paper_instance() {
    auto a = alpha({"a", "b"});
    return PcpInstance(a, {{w(a, "a"), w(a, "abb")}, {w(a, "bb"), w(a, "aa")}});
}

inline PcpInstance make_instance(std::vector<std::string> tokens,
                                 std::vector<std::pair<std::string, std::string>> pairs) {
    auto a = alpha(std::move(tokens));
    std::vector<std::pair<Word, Word>> ps;
    for (const auto& [u, v] : pairs) ps.emplace_back(w(a, u), w(a, v));
    return PcpInstance(a, std::move(ps));
}

inline UltimatelyPeriodicSeq ups(const AlphabetPtr& a, const std::string& pre,
                                 const std::string& per) {
    return UltimatelyPeriodicSeq(w(a, pre), w(a, per));
}

/// Deterministic RNG wrapper; avoids distribution objects so frozen values
/// stay stable across standard libraries.
struct Rng {
    std::mt19937 gen;
    explicit Rng(std::uint32_t seed) : gen(seed) {}
    std::uint32_t next(std::uint32_t lo, std::uint32_t hi) { // inclusive
        return lo + static_cast<std::uint32_t>(gen() % (hi - lo + 1));
    }
};

/// Random PCP instance: alphabet <= 3 letters, 1..3 pairs, words of length
/// 1..3.
inline PcpInstance random_instance(Rng& rng) {
    static const std::vector<std::string> letters = {"a", "b", "c"};
    std::size_t alpha_size = rng.next(1, 3);
    auto a = alpha({letters.begin(), letters.begin() + alpha_size});
    auto random_word = [&] {
        Word word(a);
        std::size_t len = rng.next(1, 3);
        for (std::size_t i = 0; i < len; ++i) word.push_back(rng.next(0, alpha_size - 1));
        return word;
    };
    std::size_t n = rng.next(1, 3);
    std::vector<std::pair<Word, Word>> pairs;
    for (std::size_t i = 0; i < n; ++i) pairs.emplace_back(random_word(), random_word());
    return PcpInstance(a, std::move(pairs));
}

/// Random small automaton; every state gets at least one outgoing transition
/// so lassos always exist.
inline MultiTapeAutomaton random_automaton(Rng& rng, std::size_t max_states = 3,
                                           std::size_t max_tapes = 2) {
    static const std::vector<std::string> tokens = {"0", "1", "2", "3"};
    MultiTapeAutomaton M;
    std::size_t d = rng.next(1, max_tapes);
    for (std::size_t k = 0; k < d; ++k) {
        std::size_t size = rng.next(2, 3);
        M.tape_alphabets.push_back(alpha({tokens.begin(), tokens.begin() + size}));
    }
    std::size_t nstates = rng.next(1, max_states);
    for (std::size_t q = 0; q < nstates; ++q) M.states.push_back("q" + std::to_string(q));
    auto random_word = [&](std::size_t k) {
        Word word(M.tape_alphabets[k]);
        std::size_t len = rng.next(1, 3);
        for (std::size_t i = 0; i < len; ++i)
            word.push_back(rng.next(0, M.tape_alphabets[k]->size() - 1));
        return word;
    };
    std::size_t extra = rng.next(1, 3);
    for (std::size_t t = 0; t < nstates + extra; ++t) {
        MultiTapeAutomaton::Transition transition;
        transition.from = t < nstates ? static_cast<std::uint32_t>(t) : rng.next(0, nstates - 1);
        transition.to = rng.next(0, nstates - 1);
        for (std::size_t k = 0; k < d; ++k) transition.words.push_back(random_word(k));
        M.transitions.push_back(std::move(transition));
    }
    return M;
}

/// Random eventually periodic configuration over the automaton's alphabets.
inline Config random_config(Rng& rng, const MultiTapeAutomaton& M, std::size_t max_pre = 3,
                            std::size_t max_per = 3) {
    Config c;
    for (std::size_t k = 0; k < M.num_tapes(); ++k) {
        const auto& a = M.tape_alphabets[k];
        Word pre(a), per(a);
        std::size_t np = rng.next(0, max_pre);
        for (std::size_t i = 0; i < np; ++i) pre.push_back(rng.next(0, a->size() - 1));
        std::size_t pp = rng.next(1, max_per);
        for (std::size_t i = 0; i < pp; ++i) per.push_back(rng.next(0, a->size() - 1));
        c.emplace_back(pre, per);
    }
    return c;
}

} // namespace safa::testing
