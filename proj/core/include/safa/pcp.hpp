// Post correspondence problem instances, the prefix variant, bounded
// canonical searches, and the marker reduction from PCP to prefix-PCP.

#pragma once

#include "safa/words.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace safa {

/// n pairs of nonempty words over a common alphabet.
struct PcpInstance {
    AlphabetPtr alphabet;
    std::vector<std::pair<Word, Word>> pairs;

    PcpInstance(AlphabetPtr alphabet, std::vector<std::pair<Word, Word>> pairs);

    std::size_t size() const { return pairs.size(); }
    const Word& u(std::size_t i) const { return pairs.at(i - 1).first; }  // 1-based
    const Word& v(std::size_t i) const { return pairs.at(i - 1).second; }
};

/// Nonempty sequence of pair indices, 1-based.
struct IndexWord {
    std::vector<std::uint32_t> indices;

    bool is_prefix_of(const IndexWord& other) const;
    std::string str() const;
    bool operator==(const IndexWord&) const = default;
    auto operator<=>(const IndexWord&) const = default;
};

/// A prefix-PCP witness. `shorter` is always a prefix of `longer`; the
/// orientation records which side the longer index word concatenates on:
/// ULong means u(longer) = v(shorter), VLong means u(shorter) = v(longer).
struct PrefixPcpSolution {
    enum class Orientation { ULong, VLong };
    IndexWord longer;
    IndexWord shorter;
    Orientation orientation = Orientation::ULong;

    bool operator==(const PrefixPcpSolution&) const = default;
};

Word concat_u(const PcpInstance& inst, const IndexWord& w);
Word concat_v(const PcpInstance& inst, const IndexWord& w);

/// True iff u_{i_1}...u_{i_m} = v_{i_1}...v_{i_m}.
bool check_pcp_solution(const PcpInstance& inst, const IndexWord& w);

/// True iff one of wu, wv is a prefix of the other and the u-concatenation of
/// wu equals the v-concatenation of wv.
bool check_prefix_pcp_solution(const PcpInstance& inst, const IndexWord& wu, const IndexWord& wv);

/// Orientation-aware wrapper: checks the (wu, wv) pair encoded by `sol`.
bool check_prefix_pcp_solution(const PcpInstance& inst, const PrefixPcpSolution& sol);

/// Bounded breadth-first search: shortest, then lexicographically first
/// solution with m <= max_index_len. Deterministic.
std::optional<IndexWord> search_pcp(const PcpInstance& inst, std::uint32_t max_index_len);

/// Bounded search for a prefix-PCP solution with max(m, m') <= max_index_len.
/// Longer words are enumerated by length then lexicographically; for each,
/// shorter prefixes by increasing length, u-long orientation first.
std::optional<PrefixPcpSolution> search_prefix_pcp(const PcpInstance& inst,
                                                   std::uint32_t max_index_len);

/// The marker reduction emitting the 2n+1-pair instance
/// (A_i,B_i), (U_i,V_i), (Y,Z) over the instance alphabet extended by the
/// reserved tokens "#" and "*". Throws if the instance already uses them.
PcpInstance reduce_pcp_to_prefix(const PcpInstance& inst);

/// Reserved marker tokens of reduce_pcp_to_prefix.
extern const char* const kHashToken;
extern const char* const kStarToken;

/// Map a PCP solution of the source instance to the corresponding solution of
/// the reduced instance (indices of A_{i_1}, U_{i_2..i_m}, Y on both sides).
PrefixPcpSolution encode_solution(const IndexWord& w, std::size_t n_source_pairs);

/// Inverse of encode_solution: validates the A/U/Y shape forced by the
/// construction and strips the markers. Throws std::invalid_argument on a
/// malformed witness.
IndexWord decode_reduced_solution(const PrefixPcpSolution& sol, std::size_t n_source_pairs);

} // namespace safa
