#include "belief.hpp"

#include <algorithm>
#include <deque>
#include <queue>
#include <sstream>

namespace safa::detail {

std::vector<std::vector<Symbol>> product_columns(const MultiTapeAutomaton& M) {
    std::vector<std::vector<Symbol>> cols;
    std::vector<std::uint32_t> digits(M.num_tapes(), 0);
    for (;;) {
        std::vector<Symbol> col(M.num_tapes());
        for (std::size_t k = 0; k < M.num_tapes(); ++k)
            col[k] = M.tape_alphabets[k]->symbol_of_digit(digits[k]);
        cols.push_back(std::move(col));
        std::size_t k = M.num_tapes();
        while (k > 0 && digits[k - 1] + 1 == M.tape_alphabets[k - 1]->size())
            digits[--k] = 0;
        if (k == 0) break;
        ++digits[k - 1];
    }
    return cols;
}

BeliefOps::BeliefOps(const MultiTapeAutomaton& M, long cap, long trim,
                     std::size_t element_budget, std::size_t effort_budget)
    : M_(&M), coacc_(coaccessible_states(M)), cap_(cap), trim_(trim),
      element_budget_(element_budget), effort_budget_(effort_budget), out_(M.states.size()),
      columns_(product_columns(M)) {
    for (std::size_t t = 0; t < M.transitions.size(); ++t)
        out_[M.transitions[t].from].push_back(t);
}

std::size_t BeliefOps::column_index(const std::vector<Symbol>& col) const {
    std::size_t idx = 0;
    for (std::size_t k = 0; k < col.size(); ++k)
        idx = idx * M_->tape_alphabets[k]->size() + M_->tape_alphabets[k]->digit(col[k]);
    return idx;
}

std::int32_t BeliefOps::intern(BeliefElem&& e) const {
    if (++effort_ > effort_budget_) throw BeliefBudgetExceeded{};
    auto it = ids_.find(e);
    if (it != ids_.end()) return it->second;
    if (elems_.size() >= element_budget_) throw BeliefBudgetExceeded{};
    std::int32_t id = static_cast<std::int32_t>(elems_.size());
    bool exhausted = false;
    for (const auto& o : e.ov) exhausted = exhausted || o.empty();
    ids_.emplace(e, id);
    elems_.push_back(std::move(e));
    exhausted_.push_back(exhausted ? 1 : 0);
    expand_memo_.emplace_back();
    expand_done_.push_back(0);
    consume_memo_.emplace_back();
    return id;
}

const std::pair<std::vector<std::int32_t>, bool>& BeliefOps::expansion(std::int32_t id) const {
    if (expand_done_[id]) return expand_memo_[id];
    // Lazy firing: one round is enough because every transition emits at
    // least one letter on every tape.
    std::vector<std::int32_t> children;
    bool truncated = false;
    const BeliefElem elem = elems_[id]; // copy: intern may reallocate
    for (std::size_t t : out_[elem.state]) {
        const auto& tr = M_->transitions[t];
        if (!coacc_[tr.to]) continue;
        BeliefElem child;
        child.state = tr.to;
        child.ov = elem.ov;
        bool over = false;
        for (std::size_t k = 0; k < child.ov.size(); ++k) {
            const auto& w = tr.words[k].letters();
            child.ov[k].insert(child.ov[k].end(), w.begin(), w.end());
            if (cap_ >= 0 && child.ov[k].size() > static_cast<std::size_t>(cap_)) over = true;
            if (trim_ >= 0 && child.ov[k].size() > static_cast<std::size_t>(trim_))
                child.ov[k].resize(static_cast<std::size_t>(trim_));
        }
        if (over) {
            truncated = true;
            continue;
        }
        children.push_back(intern(std::move(child)));
    }
    std::sort(children.begin(), children.end());
    children.erase(std::unique(children.begin(), children.end()), children.end());
    expand_memo_[id] = {std::move(children), truncated};
    expand_done_[id] = 1;
    return expand_memo_[id];
}

void BeliefOps::close(Belief& b, bool* truncated) const {
    Belief out;
    out.reserve(b.size());
    for (std::int32_t id : b) {
        if (!exhausted_[id]) {
            out.push_back(id);
            continue;
        }
        const auto& [children, trunc] = expansion(id);
        if (trunc && truncated) *truncated = true;
        out.insert(out.end(), children.begin(), children.end());
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    b = std::move(out);
}

Belief BeliefOps::initial(std::uint32_t state, bool* truncated) const {
    Belief b;
    if (coacc_[state]) {
        BeliefElem e;
        e.state = state;
        e.ov.resize(M_->num_tapes());
        b.push_back(intern(std::move(e)));
    }
    close(b, truncated);
    return b;
}

Belief BeliefOps::step(const Belief& b, std::size_t column, bool* truncated) const {
    const auto& col = columns_[column];
    Belief out;
    out.reserve(b.size());
    effort_ += b.size();
    if (effort_ > effort_budget_) throw BeliefBudgetExceeded{};
    for (std::int32_t id : b) {
        auto& memo = consume_memo_[id];
        if (memo.empty()) memo.assign(columns_.size(), -2);
        std::int32_t survivor = memo[column];
        if (survivor == -2) {
            const BeliefElem& e = elems_[id];
            bool ok = !exhausted_[id];
            for (std::size_t k = 0; k < e.ov.size() && ok; ++k) ok = e.ov[k].front() == col[k];
            if (!ok) {
                survivor = -1;
            } else {
                BeliefElem next;
                next.state = e.state;
                next.ov.reserve(e.ov.size());
                for (const auto& o : e.ov) next.ov.emplace_back(o.begin() + 1, o.end());
                survivor = intern(std::move(next));
            }
            consume_memo_[id][column] = survivor;
        }
        if (survivor >= 0) out.push_back(survivor);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    close(out, truncated);
    return out;
}

namespace {

// Visited beliefs bucketed by size for subsumption checks. A candidate is
// pruned when a visited subset exists at depth no larger than the
// candidate's: whatever empties the candidate also empties the subset, no
// later and from no deeper.
class SubsumptionStore {
public:
    bool subsumed(const Belief& b, std::uint32_t depth) const {
        for (const auto& [size, members] : buckets_) {
            if (size > b.size()) break;
            for (const auto& [m, d] : members)
                if (d <= depth && std::includes(b.begin(), b.end(), m->begin(), m->end()))
                    return true;
        }
        return false;
    }

    void insert(const Belief* b, std::uint32_t depth) {
        buckets_[b->size()].emplace_back(b, depth);
    }

private:
    std::map<std::size_t, std::vector<std::pair<const Belief*, std::uint32_t>>> buckets_;
};

std::uint64_t fnv1a(std::uint64_t h, const void* data, std::size_t n) {
    const auto* p = static_cast<const unsigned char*>(data);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace

DeadSearchResult exact_dead_search(const BeliefOps& ops, const Belief& start,
                                   std::uint32_t depth, std::size_t budget) {
    DeadSearchResult res;
    if (start.empty()) {
        res.found = true;
        return res;
    }
    const std::size_t ncols = ops.columns().size();
    std::deque<Belief> storage;
    std::vector<int> parent{-1};
    std::vector<std::size_t> via_column{0};
    std::vector<std::uint32_t> node_depth{0};
    SubsumptionStore visited;
    storage.push_back(start);
    visited.insert(&storage.back(), 0);
    std::vector<const Belief*> nodes{&storage.back()};
    // best-first: smaller beliefs are closer to death; ties resolve by
    // depth then discovery order, keeping the search deterministic
    using Entry = std::tuple<std::size_t, std::uint32_t, int>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
    queue.push({start.size(), 0, 0});
    auto rebuild = [&](int leaf_parent, std::size_t last_col) {
        std::vector<std::vector<Symbol>> cols;
        for (int v = leaf_parent; v > 0; v = parent[v]) cols.push_back(ops.columns()[via_column[v]]);
        std::reverse(cols.begin(), cols.end());
        cols.push_back(ops.columns()[last_col]);
        return cols;
    };
    try {
        while (!queue.empty()) {
            auto [size, d, v] = queue.top();
            queue.pop();
            if (d >= depth) continue;
            for (std::size_t c = 0; c < ncols; ++c) {
                Belief succ = ops.step(*nodes[v], c, nullptr);
                if (succ.empty()) {
                    res.found = true;
                    res.witness_columns = rebuild(v, c);
                    return res;
                }
                if (visited.subsumed(succ, d + 1)) continue;
                if (nodes.size() >= budget) {
                    res.complete = false;
                    continue;
                }
                int id = static_cast<int>(nodes.size());
                storage.push_back(std::move(succ));
                nodes.push_back(&storage.back());
                visited.insert(&storage.back(), d + 1);
                parent.push_back(v);
                via_column.push_back(c);
                node_depth.push_back(d + 1);
                queue.push({storage.back().size(), d + 1, id});
            }
        }
    } catch (const BeliefBudgetExceeded&) {
        res.complete = false;
    }
    return res;
}

SaturationResult saturate(const BeliefOps& ops, const Belief& start, bool seed_truncated,
                          std::size_t budget) {
    SaturationResult res;
    if (seed_truncated) {
        res.outcome = SaturationResult::Outcome::Truncated;
        return res;
    }
    if (start.empty()) {
        res.outcome = SaturationResult::Outcome::SawEmpty;
        return res;
    }
    const std::size_t ncols = ops.columns().size();
    std::deque<Belief> storage;
    std::vector<const Belief*> order;
    SubsumptionStore visited;
    storage.push_back(start);
    order.push_back(&storage.back());
    visited.insert(&storage.back(), 0);
    std::uint64_t h = 1469598103934665603ull; // FNV offset basis
    try {
        for (std::size_t next = 0; next < order.size(); ++next) {
            const Belief current = *order[next];
            std::uint64_t size = current.size();
            h = fnv1a(h, &size, sizeof size);
            if (!current.empty()) h = fnv1a(h, current.data(), current.size() * sizeof(current[0]));
            for (std::size_t c = 0; c < ncols; ++c) {
                bool truncated = false;
                Belief succ = ops.step(current, c, &truncated);
                if (truncated) {
                    res.outcome = SaturationResult::Outcome::Truncated;
                    return res;
                }
                if (succ.empty()) {
                    res.outcome = SaturationResult::Outcome::SawEmpty;
                    return res;
                }
                if (visited.subsumed(succ, UINT32_MAX)) continue;
                if (order.size() >= budget) {
                    res.outcome = SaturationResult::Outcome::BudgetExhausted;
                    return res;
                }
                storage.push_back(std::move(succ));
                order.push_back(&storage.back());
                visited.insert(&storage.back(), 0);
            }
        }
    } catch (const BeliefBudgetExceeded&) {
        res.outcome = SaturationResult::Outcome::BudgetExhausted;
        return res;
    }
    res.outcome = SaturationResult::Outcome::Closed;
    res.family_size = order.size();
    std::ostringstream os;
    os << std::hex << h << "-" << order.size();
    res.digest = os.str();
    return res;
}

} // namespace safa::detail
