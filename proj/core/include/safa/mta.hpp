// Multi-tape automata: validation, acceptance of eventually periodic
// configurations, decidable dead-prefix detection, and sound three-valued
// universality / universal-prefix certification.
//
// Universality of a state and existence of a universal prefix are undecidable
// in general; the checkers here return Yes/No only with a certificate or a
// finite witness and Unknown otherwise. Yes comes from a belief-state
// saturation that closed without overhang truncation, No from an exact
// bounded dead-prefix decision.

#pragma once

#include "safa/words.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace safa {

class ValidationError : public std::runtime_error {
public:
    enum class Kind { EmptyWordTransition, UnknownSymbol, UnknownState, BadShape };
    ValidationError(Kind kind, const std::string& message)
        : std::runtime_error(message), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

struct MultiTapeAutomaton {
    struct Transition {
        std::uint32_t from = 0;
        std::uint32_t to = 0;
        std::vector<Word> words; // one nonempty word per tape

        bool operator==(const Transition&) const = default;
    };

    std::vector<AlphabetPtr> tape_alphabets;
    std::vector<std::string> states;
    std::vector<Transition> transitions;

    std::size_t num_tapes() const { return tape_alphabets.size(); }
    std::optional<std::uint32_t> state_index(const std::string& name) const;
    const std::string& state_name(std::uint32_t q) const { return states.at(q); }
};

/// Checks the structural invariants; throws ValidationError naming the
/// offending transition.
void validate(const MultiTapeAutomaton& M);

/// States from which an infinite run exists (states reaching a cycle),
/// as a bool-per-state mask.
std::vector<char> coaccessible_states(const MultiTapeAutomaton& M);

/// A d-tape eventually periodic configuration, one sequence per tape.
using Config = std::vector<UltimatelyPeriodicSeq>;

/// A finite configuration prefix: d words of equal symbol length.
struct ConfigPrefix {
    std::vector<Word> per_tape;

    ConfigPrefix() = default;
    explicit ConfigPrefix(std::vector<Word> words);
    /// The empty prefix over the automaton's tape alphabets.
    static ConfigPrefix empty(const MultiTapeAutomaton& M);

    std::size_t length() const { return per_tape.empty() ? 0 : per_tape.front().size(); }
    std::size_t num_tapes() const { return per_tape.size(); }
    /// Product symbol at position i.
    std::vector<Symbol> column(std::size_t i) const;
    /// Append one product symbol.
    void push_column(const std::vector<Symbol>& col);

    std::string str() const; // "w1|w2|..."
    bool operator==(const ConfigPrefix&) const = default;
};

/// A finite partial run: chained transitions with per-tape emitted counts.
struct RunPrefix {
    std::uint32_t start = 0;
    std::vector<std::size_t> steps; // indices into M.transitions
    std::vector<std::int64_t> head_pos; // letters emitted per tape
    std::uint32_t end_state = 0;

    std::int64_t head_gap() const; // max - min over tapes
    /// head_pos[1] - head_pos[0]; only meaningful for 2-tape runs.
    std::int64_t signed_gap() const;
};

/// Search/cap parameters; every verdict records the bounds it was produced
/// under.
struct Bounds {
    std::uint32_t max_prefix_len = 8;
    std::uint32_t max_ext_len = 12;
    std::uint32_t overhang_cap = 8;
    std::size_t belief_budget = 200000;
};

/// Sound three-valued verdict. Yes and No are claims about the unbounded
/// property; Unknown carries no claim. No carries a witness prefix (or
/// witness extension), Yes a digest of the closed belief family.
struct Verdict3 {
    enum class Truth { Yes, No, Unknown };
    Truth value = Truth::Unknown;
    std::optional<ConfigPrefix> witness;
    std::optional<std::string> certificate;
    Bounds bounds;

    bool yes() const { return value == Truth::Yes; }
    bool no() const { return value == Truth::No; }
    bool unknown() const { return value == Truth::Unknown; }
};

const char* to_string(Verdict3::Truth t);

/// True iff some infinite run from `state` reads exactly `config`. Decided
/// exactly on the finite graph of (state, per-tape position) pairs with
/// positions reduced modulo the period.
bool accepts_up(const MultiTapeAutomaton& M, std::uint32_t state, const Config& config);

/// Number of distinct accepting runs, when finite; nullopt when infinitely
/// many. Counts saturate at 2^62.
std::optional<std::uint64_t> count_accepting_runs(const MultiTapeAutomaton& M,
                                                  std::uint32_t state, const Config& config);

/// All run prefixes consistent with `config` that can still be extended to an
/// accepting run, cut at the first moment every tape head has emitted at
/// least cut[k] letters. Throws std::runtime_error beyond `cap` prefixes.
std::vector<RunPrefix> boundary_run_prefixes(const MultiTapeAutomaton& M, std::uint32_t state,
                                             const Config& config,
                                             const std::vector<std::uint64_t>& cut,
                                             std::size_t cap = 10000);

/// True iff no configuration extending w is accepted from `state`. Exact.
bool is_dead_prefix(const MultiTapeAutomaton& M, std::uint32_t state, const ConfigPrefix& w);

/// Dead-prefix check over every completion of a rectangular constraint whose
/// tapes are pinned to different depths; the shorter tapes range over all
/// extensions up to the longest tape's length.
bool is_dead_rectangle(const MultiTapeAutomaton& M, std::uint32_t state,
                       const std::vector<Word>& pinned);

/// Universality of `state`: No with a witness if a dead prefix of length
/// <= bounds.max_prefix_len exists, Yes if the capped belief saturation
/// closes nonempty without truncation, Unknown otherwise.
Verdict3 check_universal(const MultiTapeAutomaton& M, std::uint32_t state, const Bounds& bounds);

/// Universal-prefix check for a concrete prefix x; the No witness is the
/// dead extension (empty when x itself is dead).
Verdict3 check_universal_prefix(const MultiTapeAutomaton& M, std::uint32_t state,
                                const ConfigPrefix& x, const Bounds& bounds);

/// Enumerates prefixes by length then lexicographically by digit values and
/// returns the first that certifies Yes; never certifies nonexistence.
std::pair<std::optional<ConfigPrefix>, Verdict3>
search_universal_prefix(const MultiTapeAutomaton& M, std::uint32_t state, const Bounds& bounds);

/// Like search_universal_prefix but the certificate must close for both
/// start states.
std::pair<std::optional<ConfigPrefix>, Verdict3>
check_common_universal_prefix(const MultiTapeAutomaton& M, std::uint32_t q, std::uint32_t r,
                              const Bounds& bounds);

/// Pads every tape alphabet to the next power of two with dummy duplicates of
/// its first symbol and duplicates transitions over all clone choices, so all
/// contraction ratios of the compiled GIFS become negative powers of two.
MultiTapeAutomaton pad_pow2(const MultiTapeAutomaton& M);

} // namespace safa
