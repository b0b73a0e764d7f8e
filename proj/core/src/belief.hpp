// Internal belief-state machinery backing the universality checkers.
//
// A belief element is a partial run that has already emitted every revealed
// letter, represented by its state and the per-tape overhang (letters emitted
// beyond the revealed input). Firing is lazy: transitions are taken only from
// elements with an exhausted overhang on some tape, which is enough because
// every transition emits at least one letter on every tape. With a negative
// cap the system is exact: a revealed prefix is dead iff its belief is empty.
//
// Elements are interned; a belief is a sorted vector of element ids. The
// searches prune by subsumption: a belief that contains an already-visited
// one dies no earlier, so it can never produce a shorter dead witness nor a
// new emptiness.

#pragma once

#include "safa/mta.hpp"

#include <cstdint>
#include <map>
#include <vector>

namespace safa::detail {

struct BeliefElem {
    std::uint32_t state = 0;
    std::vector<std::vector<Symbol>> ov; // per-tape overhang

    bool operator==(const BeliefElem&) const = default;
    auto operator<=>(const BeliefElem&) const = default;
};

using Belief = std::vector<std::int32_t>; // sorted interned element ids

class BeliefBudgetExceeded : public std::exception {
public:
    const char* what() const noexcept override { return "belief element budget exceeded"; }
};

class BeliefOps {
public:
    // cap >= 0 drops elements whose overhang would exceed it and reports
    // truncation (the sound-but-incomplete capped system). trim >= 0 instead
    // silently cuts overhangs to that many letters; letters beyond the
    // remaining reveal horizon cannot influence emptiness, so a search of
    // depth d over a trim-d system decides exactly what the uncapped system
    // would. Both -1 gives the plain exact system.
    //
    // Element and effort budgets make every search terminate in bounded,
    // deterministic time; exceeding either raises BeliefBudgetExceeded. A
    // shared effort counter lets several engines draw from one pool.
    BeliefOps(const MultiTapeAutomaton& M, long cap, long trim = -1,
              std::size_t element_budget = 4000000, std::size_t effort_budget = 50000000,
              std::size_t* shared_effort = nullptr);

    std::size_t effort_spent() const { return *effort_; }

    /// closure({(state, empty overhangs)}).
    Belief initial(std::uint32_t state, bool* truncated) const;

    /// Consume the product symbol columns()[column], then close. Sets
    /// *truncated when a child overhang exceeded the cap and was dropped.
    Belief step(const Belief& b, std::size_t column, bool* truncated) const;

    const std::vector<std::vector<Symbol>>& columns() const { return columns_; }
    std::size_t column_index(const std::vector<Symbol>& col) const;
    const MultiTapeAutomaton& automaton() const { return *M_; }
    std::size_t interned_elements() const { return elems_.size(); }

private:
    std::int32_t intern(BeliefElem&& e) const;
    // children of an element whose overhang is exhausted somewhere; second =
    // truncation happened
    const std::pair<std::vector<std::int32_t>, bool>& expansion(std::int32_t id) const;
    void close(Belief& b, bool* truncated) const;

    const MultiTapeAutomaton* M_;
    std::vector<char> coacc_;
    long cap_;
    long trim_;
    std::size_t element_budget_;
    std::size_t effort_budget_;
    mutable std::size_t effort_ = 0;
    std::vector<std::vector<std::size_t>> out_; // state -> transition indices
    std::vector<std::vector<Symbol>> columns_;

    mutable std::map<BeliefElem, std::int32_t> ids_;
    mutable std::vector<BeliefElem> elems_;
    mutable std::vector<char> exhausted_; // element has an empty tape overhang
    mutable std::vector<std::pair<std::vector<std::int32_t>, bool>> expand_memo_;
    mutable std::vector<char> expand_done_;
    mutable std::vector<std::vector<std::int32_t>> consume_memo_; // per element, per column
};

/// All product symbols in lexicographic order of their digit values.
std::vector<std::vector<Symbol>> product_columns(const MultiTapeAutomaton& M);

struct DeadSearchResult {
    bool found = false;
    std::vector<std::vector<Symbol>> witness_columns; // relative to the start belief
    bool complete = true; // false when a budget was exhausted
};

/// Breadth-first search for an empty belief within `depth` steps of `start`,
/// pruning subsumed beliefs. Symbols are explored in canonical order; the
/// witness is a shortest dead word.
DeadSearchResult exact_dead_search(const BeliefOps& ops, const Belief& start,
                                   std::uint32_t depth, std::size_t budget);

struct SaturationResult {
    enum class Outcome { Closed, SawEmpty, Truncated, BudgetExhausted };
    Outcome outcome = Outcome::BudgetExhausted;
    std::string digest;        // set when Closed
    std::size_t family_size = 0;
};

/// Explores every reachable belief of the capped system modulo subsumption.
/// Closed means: exploration finished, no empty belief, no truncation
/// observed; both nonemptiness and the Yes claim survive the pruning because
/// a superset belief never dies earlier than the subset that subsumed it.
SaturationResult saturate(const BeliefOps& ops, const Belief& start, bool seed_truncated,
                          std::size_t budget);

} // namespace safa::detail
