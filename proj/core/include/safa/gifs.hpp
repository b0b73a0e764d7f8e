// Exact-rational affine graph-directed IFS: compilation from automata,
// attractor outer approximation by box covers, box statistics, and
// three-valued interior reports.

#pragma once

#include "safa/mta.hpp"
#include "safa/rational.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace safa {

/// Closed axis-aligned box with rational corners.
struct Box {
    RatVec lo, hi;

    std::size_t dim() const { return lo.size(); }
    bool contains(const Box& other) const;
    bool contains_point(const RatVec& p) const;
    bool intersects(const Box& other) const; // closed intersection

    bool operator==(const Box&) const = default;
    bool operator<(const Box& rhs) const;
};

/// A contracting affine map x -> Mx + v with a certified contraction bound:
/// the largest |entry| for diagonal matrices, the infinity operator norm
/// otherwise. Construction rejects maps whose certified bound is >= 1 even
/// if the spectral radius is smaller.
struct AffineMapR {
    std::vector<RatVec> matrix;
    RatVec translation;
    Rat contraction;
    enum class Certificate { DiagonalMax, InfinityNorm };
    Certificate certificate = Certificate::InfinityNorm;

    static AffineMapR make(std::vector<RatVec> matrix, RatVec translation);

    std::size_t dim() const { return translation.size(); }
    bool is_diagonal() const;
    RatVec apply(const RatVec& x) const;
    /// Exact hull of the image of a box (exact for diagonal maps, the tight
    /// interval-arithmetic hull otherwise).
    Box hull(const Box& b) const;
    /// this ∘ other as a single affine map (certificate recomputed).
    AffineMapR compose(const AffineMapR& other) const;

    bool operator==(const AffineMapR& rhs) const {
        return matrix == rhs.matrix && translation == rhs.translation;
    }
};

struct GifsEdge {
    std::uint32_t from = 0, to = 0;
    AffineMapR map;

    bool operator==(const GifsEdge&) const = default;
};

/// Edge-labelled directed graph; every vertex needs at least one outgoing
/// edge so all attractors are nonempty.
struct GifsGraph {
    std::size_t dimension = 0;
    std::vector<std::string> vertices;
    std::vector<GifsEdge> edges;
    /// Domain override; compile_gifs sets the unit cube. When absent the
    /// centered box from the radius formula is used.
    std::optional<Box> domain;

    std::optional<std::uint32_t> vertex_index(const std::string& name) const;
    std::vector<std::size_t> out_edges(std::uint32_t vertex) const;

    bool operator==(const GifsGraph& rhs) const {
        return dimension == rhs.dimension && vertices == rhs.vertices && edges == rhs.edges &&
               domain == rhs.domain;
    }
};

void validate(const GifsGraph& G);

/// One vertex per state; each transition becomes an edge carrying
/// x -> diag(|A_k|^-|w_k|) x + Delta(w_1..w_d). The domain is [0,1]^d.
GifsGraph compile_gifs(const MultiTapeAutomaton& M);

/// Exact composition f_{e_1} o ... o f_{e_n} (seed); the path must chain.
RatVec run_point(const GifsGraph& G, const std::vector<std::size_t>& path, const RatVec& seed);

/// Exact attractor point of a lasso: the fixed point of the cycle
/// composition pushed through the stem. The stem starts at `vertex`; the
/// cycle loops on the stem's endpoint.
RatVec attractor_point(const GifsGraph& G, const std::vector<std::size_t>& stem,
                       const std::vector<std::size_t>& cycle, std::uint32_t vertex);

/// Domain override when present; otherwise the centered box of radius
/// max ||v_e||_inf / (1 - c_max), with radius 1 as fallback for the
/// degenerate all-zero-translation case.
Box bounding_box(const GifsGraph& G);

/// Depth-k outer approximation of all attractors.
struct BoxCover {
    std::uint32_t depth = 0;
    Box bounding;
    std::vector<std::vector<Box>> per_vertex; // sorted, duplicate-free
};

BoxCover outer_cover(const GifsGraph& G, std::uint32_t depth, std::size_t box_limit = 10000000);

struct StatsRow {
    std::uint32_t depth = 0;
    std::uint64_t count = 0;   // N_k
    Rat density;               // covered volume fraction; N_k / 2^(k d) on
                               // uniform dyadic systems
    double dim_estimate = 0.0; // log N_k / (k log 2)
};

StatsRow box_stats(const BoxCover& cover, std::uint32_t vertex);

/// Stats rows for depths 0..max_depth (covers computed incrementally).
std::vector<StatsRow> cover_statistics(const GifsGraph& G, std::uint32_t vertex,
                                       std::uint32_t max_depth,
                                       std::size_t box_limit = 10000000);

/// True iff the union of `boxes` covers `target` (exact, closed boxes).
bool covers_box(const std::vector<Box>& boxes, const Box& target,
                std::size_t cell_limit = 10000000);

/// Whether a point lies in some box of the list.
bool point_in_union(const std::vector<Box>& boxes, const RatVec& p);

/// Cylinder box of a configuration prefix: the product of
/// [Delta_k(w_k), Delta_k(w_k) + |A_k|^-|w_k|].
Box cylinder_box(const ConfigPrefix& w);

/// Three-valued topology report. With automaton provenance the claims are
/// delegated to the sound word-level checkers; without it only the density
/// trend is reported and nothing is certified.
struct InteriorReport {
    Verdict3 equals_cube; // X_q = [0,1]^d ?
    Verdict3 interior;    // X_q has nonempty interior? (never certified No)
    std::optional<Box> interior_box;
    std::vector<StatsRow> density;
};

InteriorReport interior_report(const GifsGraph& G, std::uint32_t vertex,
                               const MultiTapeAutomaton* source, const Bounds& bounds,
                               std::uint32_t stats_depth = 8);

} // namespace safa
