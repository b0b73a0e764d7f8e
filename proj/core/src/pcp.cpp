#include "safa/pcp.hpp"

#include <algorithm>
#include <stdexcept>

namespace safa {

const char* const kHashToken = "#";
const char* const kStarToken = "*";

PcpInstance::PcpInstance(AlphabetPtr alphabet_, std::vector<std::pair<Word, Word>> pairs_)
    : alphabet(std::move(alphabet_)), pairs(std::move(pairs_)) {
    if (!alphabet) throw std::invalid_argument("instance without alphabet");
    if (pairs.empty()) throw std::invalid_argument("instance must have at least one pair");
    for (const auto& [u, v] : pairs) {
        if (u.empty() || v.empty())
            throw std::invalid_argument("instance words must be nonempty");
        if (!(*u.alphabet() == *alphabet) || !(*v.alphabet() == *alphabet))
            throw std::invalid_argument("instance words over a foreign alphabet");
    }
}

bool IndexWord::is_prefix_of(const IndexWord& other) const {
    if (indices.size() > other.indices.size()) return false;
    return std::equal(indices.begin(), indices.end(), other.indices.begin());
}

std::string IndexWord::str() const {
    std::string s;
    for (std::size_t i = 0; i < indices.size(); ++i) {
        if (i && indices[i - 1] >= 10) s += '.';
        s += std::to_string(indices[i]);
    }
    return s;
}

namespace {

void check_indices(const PcpInstance& inst, const IndexWord& w) {
    if (w.indices.empty()) throw std::out_of_range("empty index word");
    for (auto i : w.indices)
        if (i < 1 || i > inst.size())
            throw std::out_of_range("pair index " + std::to_string(i) + " out of range");
}

} // namespace

Word concat_u(const PcpInstance& inst, const IndexWord& w) {
    check_indices(inst, w);
    Word out(inst.alphabet);
    for (auto i : w.indices) out = out + inst.u(i);
    return out;
}

Word concat_v(const PcpInstance& inst, const IndexWord& w) {
    check_indices(inst, w);
    Word out(inst.alphabet);
    for (auto i : w.indices) out = out + inst.v(i);
    return out;
}

bool check_pcp_solution(const PcpInstance& inst, const IndexWord& w) {
    return concat_u(inst, w) == concat_v(inst, w);
}

bool check_prefix_pcp_solution(const PcpInstance& inst, const IndexWord& wu, const IndexWord& wv) {
    check_indices(inst, wu);
    check_indices(inst, wv);
    if (!wu.is_prefix_of(wv) && !wv.is_prefix_of(wu)) return false;
    return concat_u(inst, wu) == concat_v(inst, wv);
}

bool check_prefix_pcp_solution(const PcpInstance& inst, const PrefixPcpSolution& sol) {
    if (!sol.shorter.is_prefix_of(sol.longer)) return false;
    return sol.orientation == PrefixPcpSolution::Orientation::ULong
               ? check_prefix_pcp_solution(inst, sol.longer, sol.shorter)
               : check_prefix_pcp_solution(inst, sol.shorter, sol.longer);
}

std::optional<IndexWord> search_pcp(const PcpInstance& inst, std::uint32_t max_index_len) {
    if (max_index_len < 1) throw std::invalid_argument("bound must be >= 1");
    const std::size_t n = inst.size();
    // Breadth-first over index length; children appended in index order keep
    // every level lexicographically sorted, so the first solution found is
    // the canonical one. A node stores the overhang of the longer side.
    struct Node {
        IndexWord w;
        bool u_ahead;     // true: u-concat is longer, overhang on the u side
        Word overhang;    // suffix of the longer concat beyond the shorter
    };
    std::vector<Node> level;
    auto step = [&](const Node* parent, std::uint32_t i,
                    std::vector<Node>& out) -> std::optional<IndexWord> {
        Word uc = parent ? (parent->u_ahead ? parent->overhang : Word(inst.alphabet))
                         : Word(inst.alphabet);
        Word vc = parent ? (parent->u_ahead ? Word(inst.alphabet) : parent->overhang)
                         : Word(inst.alphabet);
        uc = uc + inst.u(i);
        vc = vc + inst.v(i);
        if (!uc.is_prefix_of(vc) && !vc.is_prefix_of(uc)) return std::nullopt;
        Node child;
        if (parent) child.w = parent->w;
        child.w.indices.push_back(i);
        if (uc.size() == vc.size()) return child.w; // equal concatenations
        child.u_ahead = uc.size() > vc.size();
        const Word& longer = child.u_ahead ? uc : vc;
        const Word& shorter = child.u_ahead ? vc : uc;
        child.overhang = Word(inst.alphabet,
                              std::vector<Symbol>(longer.letters().begin() + shorter.size(),
                                                  longer.letters().end()));
        out.push_back(std::move(child));
        return std::nullopt;
    };
    std::vector<Node> next;
    for (std::uint32_t i = 1; i <= n; ++i)
        if (auto sol = step(nullptr, i, next)) return sol;
    level = std::move(next);
    for (std::uint32_t len = 2; len <= max_index_len; ++len) {
        next.clear();
        for (const Node& node : level)
            for (std::uint32_t i = 1; i <= n; ++i)
                if (auto sol = step(&node, i, next)) return sol;
        level = std::move(next);
    }
    return std::nullopt;
}

std::optional<PrefixPcpSolution> search_prefix_pcp(const PcpInstance& inst,
                                                   std::uint32_t max_index_len) {
    if (max_index_len < 1) throw std::invalid_argument("bound must be >= 1");
    const std::size_t n = inst.size();
    // Flat canonical enumeration: longer word by length then lexicographic
    // order; within a word, shorter prefixes by increasing length, u-long
    // orientation before v-long.
    for (std::uint32_t len = 1; len <= max_index_len; ++len) {
        std::vector<std::uint32_t> w(len, 1);
        for (;;) {
            IndexWord longer{w};
            Word uc = concat_u(inst, longer);
            Word vc = concat_v(inst, longer);
            // cumulative concatenation lengths of the prefixes
            std::vector<std::size_t> ulen(len + 1, 0), vlen(len + 1, 0);
            for (std::uint32_t j = 0; j < len; ++j) {
                ulen[j + 1] = ulen[j] + inst.u(w[j]).size();
                vlen[j + 1] = vlen[j] + inst.v(w[j]).size();
            }
            for (std::uint32_t s = 1; s <= len; ++s) {
                IndexWord shorter{std::vector<std::uint32_t>(w.begin(), w.begin() + s)};
                if (vlen[s] == uc.size() && concat_v(inst, shorter) == uc)
                    return PrefixPcpSolution{longer, shorter, PrefixPcpSolution::Orientation::ULong};
                if (ulen[s] == vc.size() && concat_u(inst, shorter) == vc)
                    return PrefixPcpSolution{longer, shorter, PrefixPcpSolution::Orientation::VLong};
            }
            // odometer increment in lexicographic order
            std::uint32_t pos = len;
            while (pos > 0 && w[pos - 1] == n) w[--pos] = 1;
            if (pos == 0) break;
            ++w[pos - 1];
        }
    }
    return std::nullopt;
}

PcpInstance reduce_pcp_to_prefix(const PcpInstance& inst) {
    for (const char* reserved : {kHashToken, kStarToken})
        if (inst.alphabet->contains(reserved))
            throw std::invalid_argument(std::string("instance alphabet already uses the reserved token '") +
                                        reserved + "'");
    std::vector<std::string> tokens = inst.alphabet->tokens();
    tokens.push_back(kHashToken);
    tokens.push_back(kStarToken);
    auto alphabet = std::make_shared<TapeAlphabet>(tokens);
    const Symbol hash = *alphabet->find(kHashToken);
    const Symbol star = *alphabet->find(kStarToken);

    auto lift = [&](Symbol s) { return *alphabet->find(inst.alphabet->token(s)); };

    std::vector<std::pair<Word, Word>> a_pairs, u_pairs;
    for (const auto& [u, v] : inst.pairs) {
        Word A(alphabet), B(alphabet), U(alphabet), V(alphabet);
        A.push_back(hash);
        for (std::size_t j = 0; j < u.size(); ++j) {
            if (j) A.push_back(star);
            A.push_back(lift(u.at(j)));
            U.push_back(star);
            U.push_back(lift(u.at(j)));
        }
        B.push_back(hash);
        for (std::size_t j = 0; j < v.size(); ++j) {
            B.push_back(lift(v.at(j)));
            B.push_back(star);
            V.push_back(lift(v.at(j)));
            V.push_back(star);
        }
        a_pairs.emplace_back(std::move(A), std::move(B));
        u_pairs.emplace_back(std::move(U), std::move(V));
    }
    std::vector<std::pair<Word, Word>> pairs;
    pairs.insert(pairs.end(), a_pairs.begin(), a_pairs.end());
    pairs.insert(pairs.end(), u_pairs.begin(), u_pairs.end());
    Word Y(alphabet), Z(alphabet);
    Y.push_back(star);
    Y.push_back(hash);
    Z.push_back(hash);
    pairs.emplace_back(std::move(Y), std::move(Z));
    return PcpInstance(alphabet, std::move(pairs));
}

PrefixPcpSolution encode_solution(const IndexWord& w, std::size_t n) {
    if (w.indices.empty()) throw std::invalid_argument("empty solution");
    IndexWord out;
    out.indices.push_back(w.indices.front());
    for (std::size_t j = 1; j < w.indices.size(); ++j)
        out.indices.push_back(static_cast<std::uint32_t>(w.indices[j] + n));
    out.indices.push_back(static_cast<std::uint32_t>(2 * n + 1));
    return PrefixPcpSolution{out, out, PrefixPcpSolution::Orientation::ULong};
}

IndexWord decode_reduced_solution(const PrefixPcpSolution& sol, std::size_t n) {
    const auto& longer = sol.longer.indices;
    if (longer != sol.shorter.indices)
        throw std::invalid_argument("malformed witness: index words differ");
    if (longer.size() < 2)
        throw std::invalid_argument("malformed witness: too short");
    if (longer.front() < 1 || longer.front() > n)
        throw std::invalid_argument("malformed witness: does not start with an A-pair");
    if (longer.back() != 2 * n + 1)
        throw std::invalid_argument("malformed witness: does not end with the (Y,Z) pair");
    IndexWord out;
    out.indices.push_back(longer.front());
    for (std::size_t j = 1; j + 1 < longer.size(); ++j) {
        if (longer[j] <= n || longer[j] > 2 * n)
            throw std::invalid_argument("malformed witness: interior pair is not a U-pair");
        out.indices.push_back(static_cast<std::uint32_t>(longer[j] - n));
    }
    return out;
}

} // namespace safa
