#include "safa/gifs.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace safa {

bool Box::contains(const Box& other) const {
    for (std::size_t i = 0; i < dim(); ++i)
        if (other.lo[i] < lo[i] || hi[i] < other.hi[i]) return false;
    return true;
}

bool Box::contains_point(const RatVec& p) const {
    for (std::size_t i = 0; i < dim(); ++i)
        if (p[i] < lo[i] || hi[i] < p[i]) return false;
    return true;
}

bool Box::intersects(const Box& other) const {
    for (std::size_t i = 0; i < dim(); ++i)
        if (other.hi[i] < lo[i] || hi[i] < other.lo[i]) return false;
    return true;
}

bool Box::operator<(const Box& rhs) const {
    for (std::size_t i = 0; i < dim(); ++i) {
        if (lo[i] != rhs.lo[i]) return lo[i] < rhs.lo[i];
        if (hi[i] != rhs.hi[i]) return hi[i] < rhs.hi[i];
    }
    return false;
}

AffineMapR AffineMapR::make(std::vector<RatVec> matrix, RatVec translation) {
    const std::size_t d = translation.size();
    if (matrix.size() != d) throw std::invalid_argument("matrix/translation dimension mismatch");
    for (const auto& row : matrix)
        if (row.size() != d) throw std::invalid_argument("matrix is not square");
    AffineMapR f;
    f.matrix = std::move(matrix);
    f.translation = std::move(translation);
    if (f.is_diagonal()) {
        f.certificate = Certificate::DiagonalMax;
        Rat c = 0;
        for (std::size_t i = 0; i < d; ++i) c = std::max(c, rat_abs(f.matrix[i][i]));
        f.contraction = c;
    } else {
        f.certificate = Certificate::InfinityNorm;
        Rat c = 0;
        for (std::size_t i = 0; i < d; ++i) {
            Rat row = 0;
            for (std::size_t j = 0; j < d; ++j) row += rat_abs(f.matrix[i][j]);
            c = std::max(c, row);
        }
        f.contraction = c;
    }
    if (f.contraction >= 1)
        throw std::invalid_argument("map is not certified contracting (bound " +
                                    rat_to_string(f.contraction) + " >= 1)");
    return f;
}

bool AffineMapR::is_diagonal() const {
    for (std::size_t i = 0; i < matrix.size(); ++i)
        for (std::size_t j = 0; j < matrix.size(); ++j)
            if (i != j && matrix[i][j] != 0) return false;
    return true;
}

RatVec AffineMapR::apply(const RatVec& x) const {
    const std::size_t d = dim();
    if (x.size() != d) throw std::invalid_argument("point dimension mismatch");
    RatVec y(d);
    for (std::size_t i = 0; i < d; ++i) {
        Rat acc = translation[i];
        for (std::size_t j = 0; j < d; ++j)
            if (matrix[i][j] != 0) acc += matrix[i][j] * x[j];
        y[i] = acc;
    }
    return y;
}

Box AffineMapR::hull(const Box& b) const {
    const std::size_t d = dim();
    Box out;
    out.lo.resize(d);
    out.hi.resize(d);
    for (std::size_t i = 0; i < d; ++i) {
        Rat lo = translation[i], hi = translation[i];
        for (std::size_t j = 0; j < d; ++j) {
            const Rat& m = matrix[i][j];
            if (m == 0) continue;
            Rat a = m * b.lo[j], c = m * b.hi[j];
            if (a > c) std::swap(a, c);
            lo += a;
            hi += c;
        }
        out.lo[i] = lo;
        out.hi[i] = hi;
    }
    return out;
}

AffineMapR AffineMapR::compose(const AffineMapR& g) const {
    const std::size_t d = dim();
    std::vector<RatVec> m(d, RatVec(d, Rat(0)));
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j) {
            Rat acc = 0;
            for (std::size_t k = 0; k < d; ++k) acc += matrix[i][k] * g.matrix[k][j];
            m[i][j] = acc;
        }
    RatVec v = apply(g.translation);
    // bypass make(): compositions of certified contractions stay below 1
    AffineMapR f;
    f.matrix = std::move(m);
    f.translation = std::move(v);
    f.contraction = contraction * g.contraction;
    f.certificate = (is_diagonal() && g.is_diagonal()) ? Certificate::DiagonalMax
                                                       : Certificate::InfinityNorm;
    return f;
}

std::optional<std::uint32_t> GifsGraph::vertex_index(const std::string& name) const {
    for (std::uint32_t v = 0; v < vertices.size(); ++v)
        if (vertices[v] == name) return v;
    return std::nullopt;
}

std::vector<std::size_t> GifsGraph::out_edges(std::uint32_t vertex) const {
    std::vector<std::size_t> out;
    for (std::size_t e = 0; e < edges.size(); ++e)
        if (edges[e].from == vertex) out.push_back(e);
    return out;
}

void validate(const GifsGraph& G) {
    if (G.dimension == 0) throw std::invalid_argument("GIFS dimension must be positive");
    if (G.vertices.empty()) throw std::invalid_argument("GIFS needs at least one vertex");
    std::vector<char> has_out(G.vertices.size(), 0);
    for (const auto& e : G.edges) {
        if (e.from >= G.vertices.size() || e.to >= G.vertices.size())
            throw std::invalid_argument("edge endpoint out of range");
        if (e.map.dim() != G.dimension) throw std::invalid_argument("edge map dimension mismatch");
        if (e.map.contraction >= 1) throw std::invalid_argument("edge map not contracting");
        has_out[e.from] = 1;
    }
    for (std::size_t v = 0; v < has_out.size(); ++v)
        if (!has_out[v])
            throw std::invalid_argument("vertex '" + G.vertices[v] +
                                        "' has no outgoing edge; its attractor would be empty");
    if (G.domain) {
        if (G.domain->dim() != G.dimension)
            throw std::invalid_argument("domain box dimension mismatch");
        for (std::size_t i = 0; i < G.dimension; ++i)
            if (G.domain->hi[i] < G.domain->lo[i])
                throw std::invalid_argument("domain box is empty");
    }
}

GifsGraph compile_gifs(const MultiTapeAutomaton& M) {
    validate(M);
    const std::size_t d = M.num_tapes();
    GifsGraph G;
    G.dimension = d;
    G.vertices = M.states;
    for (const auto& tr : M.transitions) {
        std::vector<RatVec> matrix(d, RatVec(d, Rat(0)));
        RatVec v(d);
        for (std::size_t k = 0; k < d; ++k) {
            matrix[k][k] = inv_pow(M.tape_alphabets[k]->size(), tr.words[k].size());
            v[k] = digit_value(tr.words[k]);
        }
        G.edges.push_back({tr.from, tr.to, AffineMapR::make(std::move(matrix), std::move(v))});
    }
    Box unit;
    unit.lo.assign(d, Rat(0));
    unit.hi.assign(d, Rat(1));
    G.domain = unit;
    validate(G);
    return G;
}

RatVec run_point(const GifsGraph& G, const std::vector<std::size_t>& path, const RatVec& seed) {
    for (std::size_t i = 0; i + 1 < path.size(); ++i)
        if (G.edges.at(path[i]).to != G.edges.at(path[i + 1]).from)
            throw std::invalid_argument("path is not a connected edge sequence");
    RatVec x = seed;
    for (std::size_t i = path.size(); i-- > 0;) x = G.edges.at(path[i]).map.apply(x);
    return x;
}

RatVec attractor_point(const GifsGraph& G, const std::vector<std::size_t>& stem,
                       const std::vector<std::size_t>& cycle, std::uint32_t vertex) {
    if (cycle.empty()) throw std::invalid_argument("cycle must be nonempty");
    std::uint32_t stem_end = vertex;
    for (std::size_t i = 0; i < stem.size(); ++i) {
        const auto& e = G.edges.at(stem[i]);
        if (e.from != stem_end) throw std::invalid_argument("stem does not chain from the vertex");
        stem_end = e.to;
    }
    std::uint32_t at = stem_end;
    for (std::size_t i = 0; i < cycle.size(); ++i) {
        const auto& e = G.edges.at(cycle[i]);
        if (e.from != at) throw std::invalid_argument("cycle does not chain");
        at = e.to;
    }
    if (at != stem_end) throw std::invalid_argument("cycle does not loop");

    AffineMapR f = G.edges.at(cycle.front()).map;
    for (std::size_t i = 1; i < cycle.size(); ++i) f = f.compose(G.edges.at(cycle[i]).map);

    // solve (I - M) p = v exactly by Gaussian elimination
    const std::size_t d = f.dim();
    std::vector<RatVec> a(d, RatVec(d + 1, Rat(0)));
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) a[i][j] = (i == j ? Rat(1) : Rat(0)) - f.matrix[i][j];
        a[i][d] = f.translation[i];
    }
    for (std::size_t col = 0; col < d; ++col) {
        std::size_t pivot = col;
        while (pivot < d && a[pivot][col] == 0) ++pivot;
        if (pivot == d) throw std::logic_error("singular cycle system for a contraction");
        std::swap(a[col], a[pivot]);
        for (std::size_t row = 0; row < d; ++row) {
            if (row == col || a[row][col] == 0) continue;
            Rat factor = a[row][col] / a[col][col];
            for (std::size_t j = col; j <= d; ++j) a[row][j] -= factor * a[col][j];
        }
    }
    RatVec p(d);
    for (std::size_t i = 0; i < d; ++i) p[i] = a[i][d] / a[i][i];

    RatVec x = p;
    for (std::size_t i = stem.size(); i-- > 0;) x = G.edges.at(stem[i]).map.apply(x);
    return x;
}

Box bounding_box(const GifsGraph& G) {
    if (G.domain) return *G.domain;
    Rat max_norm = 0, c_max = 0;
    for (const auto& e : G.edges) {
        max_norm = std::max(max_norm, linf_norm(e.map.translation));
        c_max = std::max(c_max, e.map.contraction);
    }
    Rat radius = max_norm / (Rat(1) - c_max);
    if (radius == 0) radius = 1; // degenerate single-point attractor
    Box b;
    b.lo.assign(G.dimension, -radius);
    b.hi.assign(G.dimension, radius);
    return b;
}

BoxCover outer_cover(const GifsGraph& G, std::uint32_t depth, std::size_t box_limit) {
    validate(G);
    BoxCover cover;
    cover.depth = depth;
    cover.bounding = bounding_box(G);
    cover.per_vertex.assign(G.vertices.size(), {cover.bounding});
    for (std::uint32_t k = 0; k < depth; ++k) {
        std::vector<std::vector<Box>> next(G.vertices.size());
        std::size_t total = 0;
        for (std::uint32_t q = 0; q < G.vertices.size(); ++q) {
            std::vector<Box>& acc = next[q];
            std::size_t compacted = 0;
            auto compact = [&] {
                std::sort(acc.begin(), acc.end());
                acc.erase(std::unique(acc.begin(), acc.end()), acc.end());
                compacted = acc.size();
            };
            for (const auto& e : G.edges) {
                if (e.from != q) continue;
                for (const Box& b : cover.per_vertex[e.to]) {
                    acc.push_back(e.map.hull(b));
                    if (acc.size() >= 2 * compacted + 65536) {
                        compact();
                        if (total + acc.size() > box_limit)
                            throw std::runtime_error(
                                "outer cover exceeded the box limit at depth " +
                                std::to_string(k + 1));
                    }
                }
            }
            compact();
            total += acc.size();
            if (total > box_limit)
                throw std::runtime_error("outer cover exceeded the box limit at depth " +
                                         std::to_string(k + 1));
        }
        cover.per_vertex = std::move(next);
    }
    return cover;
}

StatsRow box_stats(const BoxCover& cover, std::uint32_t vertex) {
    StatsRow row;
    row.depth = cover.depth;
    row.count = cover.per_vertex.at(vertex).size();
    const std::size_t d = cover.bounding.dim();
    auto volume = [d](const Box& b) {
        Rat v = 1;
        for (std::size_t i = 0; i < d; ++i) v *= b.hi[i] - b.lo[i];
        return v;
    };
    Rat total = 0;
    for (const Box& b : cover.per_vertex.at(vertex)) total += volume(b);
    Rat bound = volume(cover.bounding);
    // on uniform dyadic systems this is exactly N_k / 2^(k d)
    row.density = bound == 0 ? Rat(0) : total / bound;
    row.dim_estimate = cover.depth > 0 && row.count > 0
                           ? std::log(static_cast<double>(row.count)) /
                                 (cover.depth * std::log(2.0))
                           : 0.0;
    return row;
}

std::vector<StatsRow> cover_statistics(const GifsGraph& G, std::uint32_t vertex,
                                       std::uint32_t max_depth, std::size_t box_limit) {
    std::vector<StatsRow> rows;
    for (std::uint32_t k = 0; k <= max_depth; ++k)
        rows.push_back(box_stats(outer_cover(G, k, box_limit), vertex));
    return rows;
}

bool covers_box(const std::vector<Box>& boxes, const Box& target, std::size_t cell_limit) {
    const std::size_t d = target.dim();
    for (std::size_t i = 0; i < d; ++i)
        if (target.hi[i] < target.lo[i]) return true; // empty target
    // Coordinate-compressed arrangement: cut the target along every box edge
    // strictly inside it; the union covers the target iff every resulting
    // cell lies inside some single box.
    std::vector<std::vector<Rat>> cuts(d);
    for (std::size_t i = 0; i < d; ++i) {
        cuts[i].push_back(target.lo[i]);
        cuts[i].push_back(target.hi[i]);
        for (const Box& b : boxes) {
            if (!b.intersects(target)) continue;
            if (b.lo[i] > target.lo[i] && b.lo[i] < target.hi[i]) cuts[i].push_back(b.lo[i]);
            if (b.hi[i] > target.lo[i] && b.hi[i] < target.hi[i]) cuts[i].push_back(b.hi[i]);
        }
        std::sort(cuts[i].begin(), cuts[i].end());
        cuts[i].erase(std::unique(cuts[i].begin(), cuts[i].end()), cuts[i].end());
        if (cuts[i].size() == 1) cuts[i].push_back(cuts[i].front()); // degenerate axis
    }
    std::size_t cells = 1;
    std::vector<std::size_t> counts(d);
    for (std::size_t i = 0; i < d; ++i) {
        counts[i] = cuts[i].size() - 1;
        cells *= counts[i];
        if (cells > cell_limit) throw std::runtime_error("coverage check exceeded cell limit");
    }
    std::vector<char> covered(cells, 0);
    std::vector<std::size_t> lo_idx(d), hi_idx(d);
    for (const Box& b : boxes) {
        if (!b.intersects(target)) continue;
        bool ok = true;
        for (std::size_t i = 0; i < d; ++i) {
            const auto& cs = cuts[i];
            // cell c is inside b on this axis iff b.lo <= cs[c] and cs[c+1] <= b.hi
            std::size_t lo = std::lower_bound(cs.begin(), cs.end(), b.lo[i]) - cs.begin();
            std::size_t hi = std::upper_bound(cs.begin(), cs.end(), b.hi[i]) - cs.begin();
            if (hi == 0 || lo >= hi - 1) {
                ok = false;
                break;
            }
            lo_idx[i] = lo;
            hi_idx[i] = hi - 1; // cells [lo, hi-1)
        }
        if (!ok) continue;
        std::vector<std::size_t> idx = lo_idx;
        for (;;) {
            std::size_t flat = 0;
            for (std::size_t i = d; i-- > 0;) flat = flat * counts[i] + idx[i];
            covered[flat] = 1;
            std::size_t i = 0;
            while (i < d) {
                if (++idx[i] < hi_idx[i]) break;
                idx[i] = lo_idx[i];
                ++i;
            }
            if (i == d) break;
        }
    }
    return std::all_of(covered.begin(), covered.end(), [](char c) { return c != 0; });
}

bool point_in_union(const std::vector<Box>& boxes, const RatVec& p) {
    for (const Box& b : boxes)
        if (b.contains_point(p)) return true;
    return false;
}

Box cylinder_box(const ConfigPrefix& w) {
    Box b;
    for (const Word& word : w.per_tape) {
        Rat v = digit_value(word);
        b.lo.push_back(v);
        b.hi.push_back(v + inv_pow(word.alphabet()->size(), word.size()));
    }
    return b;
}

InteriorReport interior_report(const GifsGraph& G, std::uint32_t vertex,
                               const MultiTapeAutomaton* source, const Bounds& bounds,
                               std::uint32_t stats_depth) {
    InteriorReport report;
    report.equals_cube.bounds = bounds;
    report.interior.bounds = bounds;
    report.density = cover_statistics(G, vertex, stats_depth);
    if (!source) return report; // density trend only, nothing certified
    if (!(compile_gifs(*source) == G))
        throw std::invalid_argument("provenance mismatch: the GIFS was not compiled from the "
                                    "given automaton");
    report.equals_cube = check_universal(*source, vertex, bounds);
    auto [prefix, verdict] = search_universal_prefix(*source, vertex, bounds);
    if (verdict.yes() && prefix) {
        report.interior = verdict;
        report.interior_box = cylinder_box(*prefix);
    } else if (report.equals_cube.no()) {
        // a dead prefix certifies X != [0,1]^d but says nothing about the
        // interior; leave the interior verdict Unknown
        report.interior.bounds = bounds;
    }
    return report;
}

} // namespace safa
