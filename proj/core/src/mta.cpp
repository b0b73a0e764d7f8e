#include "safa/mta.hpp"

#include "belief.hpp"

#include <algorithm>
#include <cassert>
#include <deque>
#include <functional>
#include <limits>
#include <set>
#include <stdexcept>

namespace safa {

std::optional<std::uint32_t> MultiTapeAutomaton::state_index(const std::string& name) const {
    for (std::uint32_t q = 0; q < states.size(); ++q)
        if (states[q] == name) return q;
    return std::nullopt;
}

namespace {

std::string transition_label(const MultiTapeAutomaton& M, std::size_t t) {
    const auto& tr = M.transitions[t];
    std::string s = "transition #" + std::to_string(t);
    if (tr.from < M.states.size() && tr.to < M.states.size())
        s += " (" + M.states[tr.from] + " -> " + M.states[tr.to] + ")";
    return s;
}

} // namespace

void validate(const MultiTapeAutomaton& M) {
    if (M.num_tapes() == 0)
        throw ValidationError(ValidationError::Kind::BadShape, "automaton needs at least one tape");
    if (M.states.empty())
        throw ValidationError(ValidationError::Kind::BadShape, "automaton needs at least one state");
    for (const auto& a : M.tape_alphabets)
        if (!a) throw ValidationError(ValidationError::Kind::BadShape, "missing tape alphabet");
    for (std::size_t t = 0; t < M.transitions.size(); ++t) {
        const auto& tr = M.transitions[t];
        if (tr.from >= M.states.size() || tr.to >= M.states.size())
            throw ValidationError(ValidationError::Kind::UnknownState,
                                  transition_label(M, t) + ": state out of range");
        if (tr.words.size() != M.num_tapes())
            throw ValidationError(ValidationError::Kind::BadShape,
                                  transition_label(M, t) + ": wrong number of tape words");
        for (std::size_t k = 0; k < tr.words.size(); ++k) {
            const Word& w = tr.words[k];
            if (w.empty())
                throw ValidationError(ValidationError::Kind::EmptyWordTransition,
                                      transition_label(M, t) + ": empty word on tape " +
                                          std::to_string(k + 1));
            if (!w.alphabet() || !(*w.alphabet() == *M.tape_alphabets[k]))
                throw ValidationError(ValidationError::Kind::UnknownSymbol,
                                      transition_label(M, t) + ": word on tape " +
                                          std::to_string(k + 1) +
                                          " is not over the tape alphabet");
        }
    }
}

std::vector<char> coaccessible_states(const MultiTapeAutomaton& M) {
    const std::size_t n = M.states.size();
    std::vector<std::size_t> outdeg(n, 0);
    std::vector<std::vector<std::uint32_t>> preds(n);
    for (const auto& tr : M.transitions) {
        ++outdeg[tr.from];
        preds[tr.to].push_back(tr.from);
    }
    std::vector<char> alive(n, 1);
    std::deque<std::uint32_t> queue;
    for (std::uint32_t q = 0; q < n; ++q)
        if (outdeg[q] == 0) queue.push_back(q);
    while (!queue.empty()) {
        std::uint32_t q = queue.front();
        queue.pop_front();
        alive[q] = 0;
        for (std::uint32_t p : preds[q])
            if (alive[p] && --outdeg[p] == 0) queue.push_back(p);
    }
    return alive;
}

ConfigPrefix::ConfigPrefix(std::vector<Word> words) : per_tape(std::move(words)) {
    if (per_tape.empty()) throw std::invalid_argument("config prefix needs at least one tape");
    for (const Word& w : per_tape) {
        if (!w.alphabet()) throw std::invalid_argument("config prefix word without alphabet");
        if (w.size() != per_tape.front().size())
            throw std::invalid_argument("config prefix tapes must have equal length");
    }
}

ConfigPrefix ConfigPrefix::empty(const MultiTapeAutomaton& M) {
    std::vector<Word> words;
    words.reserve(M.num_tapes());
    for (const auto& a : M.tape_alphabets) words.emplace_back(a);
    return ConfigPrefix(std::move(words));
}

std::vector<Symbol> ConfigPrefix::column(std::size_t i) const {
    std::vector<Symbol> col;
    col.reserve(per_tape.size());
    for (const Word& w : per_tape) col.push_back(w.at(i));
    return col;
}

void ConfigPrefix::push_column(const std::vector<Symbol>& col) {
    if (col.size() != per_tape.size()) throw std::invalid_argument("column arity mismatch");
    for (std::size_t k = 0; k < col.size(); ++k) per_tape[k].push_back(col[k]);
}

std::string ConfigPrefix::str() const {
    std::string s;
    for (std::size_t k = 0; k < per_tape.size(); ++k) {
        if (k) s += '|';
        s += per_tape[k].str();
    }
    return s;
}

std::int64_t RunPrefix::head_gap() const {
    auto [mn, mx] = std::minmax_element(head_pos.begin(), head_pos.end());
    return *mx - *mn;
}

std::int64_t RunPrefix::signed_gap() const {
    if (head_pos.size() < 2) throw std::logic_error("signed gap needs two tapes");
    return head_pos[1] - head_pos[0];
}

const char* to_string(Verdict3::Truth t) {
    switch (t) {
        case Verdict3::Truth::Yes: return "Yes";
        case Verdict3::Truth::No: return "No";
        default: return "Unknown";
    }
}

// ---------------------------------------------------------------------------
// Position graph: the finite quotient on which acceptance of eventually
// periodic configurations is decided. A node is (state, per-tape position)
// with positions >= preperiod reduced modulo the period.
// ---------------------------------------------------------------------------

namespace {

struct PositionGraph {
    const MultiTapeAutomaton* M = nullptr;
    const Config* config = nullptr;
    std::vector<std::uint32_t> pre, per, span;
    std::size_t num_nodes = 0;

    // adjacency: per node, (target node, transition index)
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> edges;
    std::vector<char> alive; // nodes with an infinite outgoing path

    std::size_t encode(std::uint32_t state, const std::vector<std::uint32_t>& pos) const {
        std::size_t id = 0;
        for (std::size_t k = pos.size(); k-- > 0;) id = id * span[k] + pos[k];
        return id * M->states.size() + state;
    }

    std::uint32_t canon(std::size_t tape, std::uint64_t absolute) const {
        if (absolute < pre[tape]) return static_cast<std::uint32_t>(absolute);
        return pre[tape] + static_cast<std::uint32_t>((absolute - pre[tape]) % per[tape]);
    }

    Symbol symbol_at(std::size_t tape, std::uint32_t pos) const {
        const auto& seq = (*config)[tape];
        return pos < pre[tape] ? seq.preperiod().at(pos) : seq.period().at(pos - pre[tape]);
    }

    std::uint32_t advance(std::size_t tape, std::uint32_t pos) const {
        return pos + 1 < span[tape] ? pos + 1 : pre[tape];
    }

    // Match one transition from (state, pos); on success fills next position.
    bool match(const MultiTapeAutomaton::Transition& tr, const std::vector<std::uint32_t>& pos,
               std::vector<std::uint32_t>& next) const {
        next = pos;
        for (std::size_t k = 0; k < tr.words.size(); ++k) {
            for (Symbol letter : tr.words[k].letters()) {
                if (symbol_at(k, next[k]) != letter) return false;
                next[k] = advance(k, next[k]);
            }
        }
        return true;
    }
};

PositionGraph build_position_graph(const MultiTapeAutomaton& M, const Config& config) {
    if (config.size() != M.num_tapes())
        throw std::invalid_argument("configuration arity does not match the automaton");
    for (std::size_t k = 0; k < config.size(); ++k)
        if (!(*config[k].alphabet() == *M.tape_alphabets[k]))
            throw std::invalid_argument("configuration tape " + std::to_string(k + 1) +
                                        " is over the wrong alphabet");
    PositionGraph g;
    g.M = &M;
    g.config = &config;
    g.num_nodes = M.states.size();
    for (std::size_t k = 0; k < config.size(); ++k) {
        g.pre.push_back(static_cast<std::uint32_t>(config[k].preperiod().size()));
        g.per.push_back(static_cast<std::uint32_t>(config[k].period().size()));
        g.span.push_back(g.pre.back() + g.per.back());
        g.num_nodes *= g.span.back();
    }
    g.edges.assign(g.num_nodes, {});
    std::vector<std::vector<std::size_t>> out(M.states.size());
    for (std::size_t t = 0; t < M.transitions.size(); ++t)
        out[M.transitions[t].from].push_back(t);

    // enumerate all nodes (the graph is small by construction)
    std::vector<std::uint32_t> pos(M.num_tapes(), 0), next;
    for (;;) {
        for (std::uint32_t q = 0; q < M.states.size(); ++q) {
            std::size_t id = g.encode(q, pos);
            for (std::size_t t : out[q]) {
                if (g.match(M.transitions[t], pos, next))
                    g.edges[id].emplace_back(g.encode(M.transitions[t].to, next), t);
            }
        }
        std::size_t k = 0;
        while (k < pos.size() && pos[k] + 1 == g.span[k]) pos[k++] = 0;
        if (k == pos.size()) break;
        ++pos[k];
    }

    // greatest fixpoint: nodes with an infinite outgoing path
    std::vector<std::size_t> outdeg(g.num_nodes);
    std::vector<std::vector<std::size_t>> preds(g.num_nodes);
    for (std::size_t v = 0; v < g.num_nodes; ++v) {
        outdeg[v] = g.edges[v].size();
        for (const auto& [w, t] : g.edges[v]) preds[w].push_back(v);
    }
    g.alive.assign(g.num_nodes, 1);
    std::deque<std::size_t> queue;
    for (std::size_t v = 0; v < g.num_nodes; ++v)
        if (outdeg[v] == 0) queue.push_back(v);
    while (!queue.empty()) {
        std::size_t v = queue.front();
        queue.pop_front();
        g.alive[v] = 0;
        for (std::size_t u : preds[v])
            if (g.alive[u] && --outdeg[u] == 0) queue.push_back(u);
    }
    return g;
}

std::size_t start_node(const PositionGraph& g, std::uint32_t state) {
    std::vector<std::uint32_t> zero(g.M->num_tapes(), 0);
    return g.encode(state, zero);
}

} // namespace

bool accepts_up(const MultiTapeAutomaton& M, std::uint32_t state, const Config& config) {
    if (state >= M.states.size()) throw std::out_of_range("state out of range");
    PositionGraph g = build_position_graph(M, config);
    return g.alive[start_node(g, state)] != 0;
}

std::optional<std::uint64_t> count_accepting_runs(const MultiTapeAutomaton& M,
                                                  std::uint32_t state, const Config& config) {
    constexpr std::uint64_t kSat = 1ull << 62;
    PositionGraph g = build_position_graph(M, config);
    std::size_t start = start_node(g, state);
    if (!g.alive[start]) return 0;

    // Restricted graph on alive nodes. Find the nodes lying on a cycle via
    // Tarjan SCCs, then the forward closure D; within D every run must be
    // deterministic for the total number of runs to be finite.
    std::vector<int> index(g.num_nodes, -1), low(g.num_nodes, 0);
    std::vector<char> on_stack(g.num_nodes, 0), on_cycle(g.num_nodes, 0);
    std::vector<std::size_t> stack;
    int counter = 0;
    struct Frame {
        std::size_t v;
        std::size_t edge = 0;
    };
    for (std::size_t root = 0; root < g.num_nodes; ++root) {
        if (!g.alive[root] || index[root] != -1) continue;
        std::vector<Frame> frames{{root}};
        index[root] = low[root] = counter++;
        stack.push_back(root);
        on_stack[root] = 1;
        while (!frames.empty()) {
            Frame& f = frames.back();
            if (f.edge < g.edges[f.v].size()) {
                auto [w, t] = g.edges[f.v][f.edge++];
                if (!g.alive[w]) continue;
                if (w == f.v) on_cycle[f.v] = 1; // self-loop
                if (index[w] == -1) {
                    index[w] = low[w] = counter++;
                    stack.push_back(w);
                    on_stack[w] = 1;
                    frames.push_back({w});
                } else if (on_stack[w]) {
                    low[f.v] = std::min(low[f.v], index[w]);
                }
            } else {
                std::size_t v = f.v;
                frames.pop_back();
                if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
                if (low[v] == index[v]) {
                    std::vector<std::size_t> comp;
                    for (;;) {
                        std::size_t w = stack.back();
                        stack.pop_back();
                        on_stack[w] = 0;
                        comp.push_back(w);
                        if (w == v) break;
                    }
                    if (comp.size() > 1)
                        for (std::size_t w : comp) on_cycle[w] = 1;
                }
            }
        }
    }

    std::vector<char> in_d(g.num_nodes, 0);
    std::deque<std::size_t> queue;
    for (std::size_t v = 0; v < g.num_nodes; ++v)
        if (g.alive[v] && on_cycle[v]) {
            in_d[v] = 1;
            queue.push_back(v);
        }
    while (!queue.empty()) {
        std::size_t v = queue.front();
        queue.pop_front();
        for (const auto& [w, t] : g.edges[v])
            if (g.alive[w] && !in_d[w]) {
                in_d[w] = 1;
                queue.push_back(w);
            }
    }
    for (std::size_t v = 0; v < g.num_nodes; ++v) {
        if (!in_d[v]) continue;
        std::size_t deg = 0;
        for (const auto& [w, t] : g.edges[v])
            if (g.alive[w]) ++deg;
        if (deg >= 2) return std::nullopt; // branching reachable from a cycle
    }
    if (in_d[start]) return 1;

    // The region outside D is acyclic; count paths to the first D entry.
    std::vector<std::uint64_t> memo(g.num_nodes, 0);
    std::vector<char> done(g.num_nodes, 0);
    struct CFrame {
        std::size_t v;
        std::size_t edge = 0;
        std::uint64_t acc = 0;
    };
    std::vector<CFrame> cstack{{start}};
    while (!cstack.empty()) {
        CFrame& f = cstack.back();
        if (f.edge < g.edges[f.v].size()) {
            auto [w, t] = g.edges[f.v][f.edge++];
            if (!g.alive[w]) continue;
            std::uint64_t add = 0;
            if (in_d[w]) {
                add = 1;
            } else if (done[w]) {
                add = memo[w];
            } else {
                cstack.push_back({w});
                continue;
            }
            f.acc = std::min(kSat, f.acc + add);
        } else {
            done[f.v] = 1;
            memo[f.v] = f.acc;
            std::uint64_t value = f.acc;
            std::size_t v = f.v;
            cstack.pop_back();
            if (!cstack.empty()) {
                (void)v;
                cstack.back().acc = std::min(kSat, cstack.back().acc + value);
            }
        }
    }
    return memo[start];
}

std::vector<RunPrefix> boundary_run_prefixes(const MultiTapeAutomaton& M, std::uint32_t state,
                                             const Config& config,
                                             const std::vector<std::uint64_t>& cut,
                                             std::size_t cap) {
    if (cut.size() != M.num_tapes()) throw std::invalid_argument("cut arity mismatch");
    PositionGraph g = build_position_graph(M, config);
    std::vector<RunPrefix> result;
    if (!g.alive[start_node(g, state)]) return result;

    std::vector<std::vector<std::size_t>> out(M.states.size());
    for (std::size_t t = 0; t < M.transitions.size(); ++t)
        out[M.transitions[t].from].push_back(t);

    struct Node {
        std::uint32_t q;
        std::vector<std::uint64_t> heads;
    };
    std::vector<std::size_t> steps;
    auto collapsed = [&](const Node& n) {
        std::vector<std::uint32_t> pos(M.num_tapes());
        for (std::size_t k = 0; k < pos.size(); ++k) pos[k] = g.canon(k, n.heads[k]);
        return g.encode(n.q, pos);
    };
    auto at_cut = [&](const Node& n) {
        for (std::size_t k = 0; k < cut.size(); ++k)
            if (n.heads[k] < cut[k]) return false;
        return true;
    };

    // depth-first in transition order; the tree is finite because every step
    // advances every head
    std::function<void(const Node&)> visit = [&](const Node& n) {
        if (at_cut(n)) {
            RunPrefix r;
            r.start = state;
            r.steps = steps;
            r.end_state = n.q;
            r.head_pos.assign(n.heads.begin(), n.heads.end());
            result.push_back(std::move(r));
            if (result.size() > cap)
                throw std::runtime_error("boundary run enumeration exceeded cap");
            return;
        }
        for (std::size_t t : out[n.q]) {
            const auto& tr = M.transitions[t];
            Node child{tr.to, n.heads};
            bool ok = true;
            for (std::size_t k = 0; k < tr.words.size() && ok; ++k) {
                for (Symbol letter : tr.words[k].letters()) {
                    if (g.symbol_at(k, g.canon(k, child.heads[k])) != letter) {
                        ok = false;
                        break;
                    }
                    ++child.heads[k];
                }
            }
            if (!ok || !g.alive[collapsed(child)]) continue;
            steps.push_back(t);
            visit(child);
            steps.pop_back();
        }
    };
    Node root{state, std::vector<std::uint64_t>(M.num_tapes(), 0)};
    visit(root);
    return result;
}

bool is_dead_prefix(const MultiTapeAutomaton& M, std::uint32_t state, const ConfigPrefix& w) {
    if (w.num_tapes() != M.num_tapes())
        throw std::invalid_argument("prefix arity does not match the automaton");
    for (std::size_t k = 0; k < w.num_tapes(); ++k)
        if (!(*w.per_tape[k].alphabet() == *M.tape_alphabets[k]))
            throw std::invalid_argument("prefix tape " + std::to_string(k + 1) +
                                        " is over the wrong alphabet");
    const std::size_t n = w.length();
    const std::vector<char> coacc = coaccessible_states(M);
    std::vector<std::vector<std::size_t>> out(M.states.size());
    for (std::size_t t = 0; t < M.transitions.size(); ++t)
        out[M.transitions[t].from].push_back(t);

    // node = (state, per-tape emitted count capped at n); liveness = some run
    // reaches all-caps in a coaccessible state
    auto key = [&](std::uint32_t q, const std::vector<std::size_t>& h) {
        std::size_t id = 0;
        for (std::size_t k = h.size(); k-- > 0;) id = id * (n + 1) + h[k];
        return id * M.states.size() + q;
    };
    auto all_done = [&](const std::vector<std::size_t>& h) {
        for (std::size_t x : h)
            if (x < n) return false;
        return true;
    };
    std::set<std::size_t> visited;
    struct Item {
        std::uint32_t q;
        std::vector<std::size_t> heads;
    };
    std::vector<Item> stack{{state, std::vector<std::size_t>(M.num_tapes(), 0)}};
    visited.insert(key(state, stack.back().heads));
    while (!stack.empty()) {
        Item item = std::move(stack.back());
        stack.pop_back();
        if (all_done(item.heads)) {
            if (coacc[item.q]) return false; // live
            continue;
        }
        for (std::size_t t : out[item.q]) {
            const auto& tr = M.transitions[t];
            Item child{tr.to, item.heads};
            bool ok = true;
            for (std::size_t k = 0; k < tr.words.size() && ok; ++k) {
                const auto& letters = tr.words[k].letters();
                for (std::size_t j = 0; j < letters.size(); ++j) {
                    std::size_t pos = item.heads[k] + j;
                    if (pos < n && w.per_tape[k].at(pos) != letters[j]) {
                        ok = false;
                        break;
                    }
                }
                child.heads[k] = std::min(item.heads[k] + letters.size(), n);
            }
            if (!ok) continue;
            if (all_done(child.heads) && coacc[child.q]) return false;
            if (visited.insert(key(child.q, child.heads)).second) stack.push_back(child);
        }
    }
    return true;
}

bool is_dead_rectangle(const MultiTapeAutomaton& M, std::uint32_t state,
                       const std::vector<Word>& pinned) {
    if (pinned.size() != M.num_tapes()) throw std::invalid_argument("tape arity mismatch");
    std::size_t target = 0;
    for (const Word& w : pinned) target = std::max(target, w.size());
    // enumerate all completions of the shorter tapes
    std::vector<std::size_t> missing(pinned.size());
    std::size_t total = 1;
    for (std::size_t k = 0; k < pinned.size(); ++k) {
        missing[k] = target - pinned[k].size();
        for (std::size_t j = 0; j < missing[k]; ++j) {
            total *= M.tape_alphabets[k]->size();
            if (total > 1000000)
                throw std::runtime_error("too many completions in rectangular deadness check");
        }
    }
    std::vector<std::uint32_t> odo;
    std::vector<std::size_t> radix;
    for (std::size_t k = 0; k < pinned.size(); ++k)
        for (std::size_t j = 0; j < missing[k]; ++j) {
            odo.push_back(0);
            radix.push_back(M.tape_alphabets[k]->size());
        }
    for (;;) {
        std::vector<Word> tapes;
        std::size_t digit = 0;
        for (std::size_t k = 0; k < pinned.size(); ++k) {
            Word w = pinned[k];
            for (std::size_t j = 0; j < missing[k]; ++j)
                w.push_back(M.tape_alphabets[k]->symbol_of_digit(odo[digit++]));
            tapes.push_back(std::move(w));
        }
        if (!is_dead_prefix(M, state, ConfigPrefix(std::move(tapes)))) return false;
        std::size_t i = 0;
        while (i < odo.size() && odo[i] + 1 == radix[i]) odo[i++] = 0;
        if (i == odo.size()) break;
        ++odo[i];
    }
    return true;
}

// ---------------------------------------------------------------------------
// Three-valued universality
// ---------------------------------------------------------------------------

namespace {

ConfigPrefix prefix_from_columns(const MultiTapeAutomaton& M,
                                 const std::vector<std::vector<Symbol>>& cols) {
    ConfigPrefix p = ConfigPrefix::empty(M);
    for (const auto& col : cols) p.push_column(col);
    return p;
}

struct DeadSearch {
    bool found = false;
    std::vector<std::vector<Symbol>> witness; // extension beyond the seed
    bool complete = true;
};

std::size_t element_budget_for(const Bounds& bounds) {
    return std::min<std::size_t>(4000000, 20 * bounds.belief_budget);
}
std::size_t effort_budget_for(const Bounds& bounds) { return 100 * bounds.belief_budget; }

// Iterative deepening over the extension length: each target length L gets a
// fresh engine with overhangs trimmed to the total reveal horizon, which
// keeps the element space proportional to the depth actually searched while
// deciding exactly what the uncapped system would. The effort pool is shared
// across the iterations (and across callers) so searches terminate in
// bounded, deterministic time.
DeadSearch bounded_dead_search(const MultiTapeAutomaton& M, std::uint32_t state,
                               const ConfigPrefix* seed, std::uint32_t max_depth,
                               const Bounds& bounds, std::size_t& effort_pool) {
    DeadSearch out;
    const std::size_t seed_len = seed ? seed->length() : 0;
    for (std::uint32_t L = 0; L <= max_depth; ++L) {
        detail::BeliefOps ops(M, -1, static_cast<long>(seed_len + L), element_budget_for(bounds),
                              effort_pool);
        try {
            detail::Belief b = ops.initial(state, nullptr);
            for (std::size_t i = 0; i < seed_len && !b.empty(); ++i)
                b = ops.step(b, ops.column_index(seed->column(i)), nullptr);
            auto r = detail::exact_dead_search(ops, b, L, bounds.belief_budget);
            effort_pool -= std::min(effort_pool, ops.effort_spent());
            if (r.found) {
                out.found = true;
                out.witness = std::move(r.witness_columns);
                return out;
            }
            if (!r.complete) {
                out.complete = false;
                return out;
            }
        } catch (const detail::BeliefBudgetExceeded&) {
            effort_pool -= std::min(effort_pool, ops.effort_spent());
            out.complete = false;
            return out;
        }
    }
    return out;
}

// Capped saturation; nullopt when it did not close.
std::optional<std::string> saturation_certificate(const MultiTapeAutomaton& M,
                                                  std::uint32_t state, const ConfigPrefix* seed,
                                                  const Bounds& bounds,
                                                  std::size_t& effort_pool) {
    detail::BeliefOps capped(M, static_cast<long>(bounds.overhang_cap), -1,
                             element_budget_for(bounds), effort_pool);
    std::optional<std::string> certificate;
    try {
        bool truncated = false;
        detail::Belief c = capped.initial(state, &truncated);
        if (seed)
            for (std::size_t i = 0; i < seed->length() && !c.empty(); ++i)
                c = capped.step(c, capped.column_index(seed->column(i)), &truncated);
        auto sat = detail::saturate(capped, c, truncated, bounds.belief_budget);
        if (sat.outcome == detail::SaturationResult::Outcome::Closed) certificate = sat.digest;
    } catch (const detail::BeliefBudgetExceeded&) {
    }
    effort_pool -= std::min(effort_pool, capped.effort_spent());
    return certificate;
}

Verdict3 check_universal_prefix_pooled(const MultiTapeAutomaton& M, std::uint32_t state,
                                       const ConfigPrefix& x, const Bounds& bounds,
                                       std::size_t& effort_pool) {
    Verdict3 v;
    v.bounds = bounds;
    DeadSearch dead = bounded_dead_search(M, state, &x, bounds.max_ext_len, bounds, effort_pool);
    if (dead.found) {
        v.value = Verdict3::Truth::No;
        v.witness = prefix_from_columns(M, dead.witness); // the dead extension
        return v;
    }
    if (auto cert = saturation_certificate(M, state, &x, bounds, effort_pool)) {
        v.value = Verdict3::Truth::Yes;
        v.certificate = cert;
    }
    return v;
}

} // namespace

Verdict3 check_universal(const MultiTapeAutomaton& M, std::uint32_t state, const Bounds& bounds) {
    if (state >= M.states.size()) throw std::out_of_range("state out of range");
    Verdict3 v;
    v.bounds = bounds;

    std::size_t pool = effort_budget_for(bounds);
    DeadSearch dead = bounded_dead_search(M, state, nullptr, bounds.max_prefix_len, bounds, pool);
    if (dead.found) {
        v.value = Verdict3::Truth::No;
        v.witness = prefix_from_columns(M, dead.witness);
        return v;
    }
    if (auto cert = saturation_certificate(M, state, nullptr, bounds, pool)) {
        v.value = Verdict3::Truth::Yes;
        v.certificate = cert;
    }
    return v;
}

Verdict3 check_universal_prefix(const MultiTapeAutomaton& M, std::uint32_t state,
                                const ConfigPrefix& x, const Bounds& bounds) {
    if (state >= M.states.size()) throw std::out_of_range("state out of range");
    if (x.num_tapes() != M.num_tapes())
        throw std::invalid_argument("prefix arity does not match the automaton");
    std::size_t pool = effort_budget_for(bounds);
    return check_universal_prefix_pooled(M, state, x, bounds, pool);
}

namespace {

// Enumerate config prefixes by length, lexicographic in digit values;
// visit returns true to stop.
void enumerate_prefixes(const MultiTapeAutomaton& M, std::uint32_t max_len,
                        const std::function<bool(const ConfigPrefix&)>& visit) {
    const auto columns = detail::product_columns(M);
    for (std::uint32_t len = 0; len <= max_len; ++len) {
        std::vector<std::size_t> odo(len, 0);
        for (;;) {
            std::vector<std::vector<Symbol>> cols;
            cols.reserve(len);
            for (std::size_t i : odo) cols.push_back(columns[i]);
            if (visit(prefix_from_columns(M, cols))) return;
            std::size_t k = len;
            while (k > 0 && odo[k - 1] + 1 == columns.size()) odo[--k] = 0;
            if (k == 0) break;
            ++odo[k - 1];
        }
    }
}

} // namespace

std::pair<std::optional<ConfigPrefix>, Verdict3>
search_universal_prefix(const MultiTapeAutomaton& M, std::uint32_t state, const Bounds& bounds) {
    std::optional<ConfigPrefix> found;
    Verdict3 verdict;
    verdict.bounds = bounds;
    // one effort pool for the whole enumeration: when it drains the
    // remaining candidates cannot be decided and the answer is Unknown
    std::size_t pool = effort_budget_for(bounds);
    enumerate_prefixes(M, bounds.max_prefix_len, [&](const ConfigPrefix& x) {
        Verdict3 v = check_universal_prefix_pooled(M, state, x, bounds, pool);
        if (v.yes()) {
            found = x;
            verdict = v;
            verdict.witness = x;
            return true;
        }
        return pool == 0;
    });
    return {found, verdict};
}

std::pair<std::optional<ConfigPrefix>, Verdict3>
check_common_universal_prefix(const MultiTapeAutomaton& M, std::uint32_t q, std::uint32_t r,
                              const Bounds& bounds) {
    std::optional<ConfigPrefix> found;
    Verdict3 verdict;
    verdict.bounds = bounds;
    std::size_t pool = effort_budget_for(bounds);
    enumerate_prefixes(M, bounds.max_prefix_len, [&](const ConfigPrefix& x) {
        Verdict3 vq = check_universal_prefix_pooled(M, q, x, bounds, pool);
        if (!vq.yes()) return pool == 0;
        Verdict3 vr = check_universal_prefix_pooled(M, r, x, bounds, pool);
        if (!vr.yes()) return pool == 0;
        found = x;
        verdict = vq;
        verdict.witness = x;
        verdict.certificate = "q:" + vq.certificate.value_or("") + ";r:" + vr.certificate.value_or("");
        return true;
    });
    return {found, verdict};
}

MultiTapeAutomaton pad_pow2(const MultiTapeAutomaton& M) {
    MultiTapeAutomaton out;
    out.states = M.states;
    std::vector<std::vector<Symbol>> clones(M.num_tapes()); // clones of symbol 0, per tape
    for (std::size_t k = 0; k < M.num_tapes(); ++k) {
        const auto& a = *M.tape_alphabets[k];
        std::size_t p = 1;
        while (p < a.size()) p <<= 1;
        std::vector<std::string> tokens = a.tokens();
        for (std::size_t j = tokens.size(); j < p; ++j) {
            std::string t = a.token(0) + "~" + std::to_string(j - a.size() + 1);
            while (std::find(tokens.begin(), tokens.end(), t) != tokens.end()) t += "~";
            clones[k].push_back(static_cast<Symbol>(tokens.size()));
            tokens.push_back(t);
        }
        out.tape_alphabets.push_back(std::make_shared<TapeAlphabet>(tokens));
    }
    // duplicate each transition over every clone choice for letters equal to
    // the duplicated symbol
    for (const auto& tr : M.transitions) {
        std::vector<std::pair<std::size_t, std::size_t>> slots; // (tape, position) of symbol 0
        for (std::size_t k = 0; k < tr.words.size(); ++k)
            for (std::size_t j = 0; j < tr.words[k].size(); ++j)
                if (tr.words[k].at(j) == 0 && !clones[k].empty()) slots.emplace_back(k, j);
        std::size_t variants = 1;
        for (const auto& [k, j] : slots) {
            variants *= clones[k].size() + 1;
            if (variants > 100000)
                throw std::runtime_error("power-of-two padding would blow up a transition");
        }
        std::vector<std::size_t> odo(slots.size(), 0);
        for (;;) {
            MultiTapeAutomaton::Transition t2;
            t2.from = tr.from;
            t2.to = tr.to;
            for (std::size_t k = 0; k < tr.words.size(); ++k)
                t2.words.emplace_back(out.tape_alphabets[k], tr.words[k].letters());
            for (std::size_t s = 0; s < slots.size(); ++s) {
                if (odo[s] == 0) continue;
                auto [k, j] = slots[s];
                std::vector<Symbol> letters = t2.words[k].letters();
                letters[j] = clones[k][odo[s] - 1];
                t2.words[k] = Word(out.tape_alphabets[k], std::move(letters));
            }
            out.transitions.push_back(std::move(t2));
            std::size_t s = 0;
            while (s < slots.size() && odo[s] + 1 == clones[slots[s].first].size() + 1) odo[s++] = 0;
            if (s == slots.size()) break;
            ++odo[s];
        }
    }
    return out;
}

} // namespace safa
