// Compilation of prefix-PCP instances into 2-tape, 3-state automata whose
// universality (resp. existence of a universal prefix) encodes solvability,
// plus the blocking-configuration builders that witness the solvable case.

#pragma once

#include "safa/mta.hpp"
#include "safa/pcp.hpp"

#include <optional>
#include <vector>

namespace safa {

struct SymbolProvenance {
    enum class Kind { Index, Letter, Hash, Amp, Star };
    Kind kind = Kind::Letter;
    std::uint32_t index = 0; // pair index when kind == Index
};

/// A compiled reduction automaton. States are always {X, U, V} in that
/// order; the items table maps each transition to the construction rules
/// (1)-(9) that emitted it.
struct ReductionOutput {
    MultiTapeAutomaton automaton;
    std::uint32_t state_x = 0, state_u = 1, state_v = 2;
    std::vector<std::vector<int>> items;                    // per transition
    std::vector<std::vector<SymbolProvenance>> alphabet_map; // per tape, per symbol
    std::optional<PcpInstance> interleaved;                 // prefix variant only

    Symbol marker(std::size_t tape, SymbolProvenance::Kind kind) const;
};

/// The universality reduction: items (1)-(6) over A1 = {1..n},
/// A2 = B + a fresh end marker. Words longer than max_word_len are refused
/// (the item (3)-(6) enumeration is exponential in that length).
ReductionOutput build_universality_automaton(const PcpInstance& inst,
                                             std::size_t max_word_len = 8);

/// The per-tape words of the blocked configuration for a solution with the
/// longer index word i_1..i_m: first tape i_1..i_m, second tape the matching
/// concatenation followed by the end marker. Tapes have different lengths.
std::vector<Word> blocking_words_universality(const PcpInstance& inst,
                                              const PrefixPcpSolution& sol);

/// Same, padded to a rectangular ConfigPrefix with the canonical (digit 0)
/// symbol on the shorter tape; every completion of the padding is dead.
ConfigPrefix blocking_config_universality(const PcpInstance& inst, const PrefixPcpSolution& sol);

/// Insert a fresh star after every letter: x1 x2 .. xk -> x1 * x2 * .. xk *.
/// The result is over the word's alphabet extended by the star token.
Word star_interleave(const Word& w);

/// Star-interleave every word of the instance; solvability is preserved.
PcpInstance star_interleave_instance(const PcpInstance& inst);

/// The universal-prefix reduction: star-interleaves the instance, then emits
/// items (1)-(6) with the marker restrictions plus the catch-all items
/// (7)-(9) over A1 = {1..n, &}, A2 = B + {*, #, &}.
ReductionOutput build_universal_prefix_automaton(const PcpInstance& inst,
                                                 std::size_t max_word_len = 8);

class NotAcceptedError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The proof-shaped extension that removes at least one accepting run of
/// x &&.. | y &&.. from state X. The first tape carries one index symbol
/// after s: the solution thread consumes s | t in lockstep and must face the
/// end marker while the first tape still shows a non-& symbol, or the
/// catch-all &|a transition would let it escape.
struct WitnessExtension {
    Word x_ext;                 // appended to x on tape 1: &^L s i
    Word y_ext;                 // appended to y on tape 2: &^L' t #
    std::uint64_t pad_left = 0; // L
    std::uint64_t pad_right = 0; // L'
    std::int64_t head_gap = 0;  // signed gap (tape2 - tape1) of the chosen run
};

/// Enumerates the accepting runs of x &&.. | y &&.., picks the one with
/// minimal absolute head gap, and aligns the solution word s against its
/// concatenation t so that s starts exactly that far behind t followed by the
/// end marker. Throws NotAcceptedError when x &&.. | y &&.. is already dead.
WitnessExtension blocking_extension(const ReductionOutput& ro, const PcpInstance& interleaved,
                                    const PrefixPcpSolution& sol, const Word& x, const Word& y,
                                    std::size_t run_cap = 10000);

/// Applies blocking_extension until the padded configuration is no longer
/// accepted; the claim bounds the number of iterations by the initial number
/// of accepting runs.
std::pair<Word, Word> iterate_blocking(const ReductionOutput& ro, const PcpInstance& interleaved,
                                       const PrefixPcpSolution& sol, Word x, Word y,
                                       std::size_t max_rounds = 64);

/// The eventually periodic configuration x &&.. | y &&.. over the automaton
/// alphabets of ro.
Config amp_padded_config(const ReductionOutput& ro, const Word& x, const Word& y);

} // namespace safa
