// Deterministic rasterization of box covers and binary PGM output.

#pragma once

#include "safa/gifs.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace safa {

/// Occupancy bitmap. Row 0 is the lowest y coordinate; PGM output flips
/// vertically so the image top is the highest y.
struct ImageGrid {
    std::uint32_t width = 0, height = 0;
    std::vector<std::uint8_t> bits; // row-major, 1 = inside

    std::uint8_t at(std::uint32_t x, std::uint32_t y) const { return bits.at(std::size_t(y) * width + x); }
    void set(std::uint32_t x, std::uint32_t y) { bits.at(std::size_t(y) * width + x) = 1; }
    std::uint64_t popcount() const;

    bool operator==(const ImageGrid&) const = default;
};

inline constexpr std::uint32_t kMaxResolution = 1u << 14;

/// Pixel (i,j) covers the closed cell [lo+i s, lo+(i+1) s] x ...; it is set
/// iff it intersects some cover box of the vertex (closed intersection, so
/// pixels on a shared boundary are set on both sides). Supports 1- and
/// 2-dimensional covers; 1-dimensional images have height 1.
ImageGrid rasterize(const BoxCover& cover, std::uint32_t vertex, const Box& viewport,
                    std::uint32_t resolution);

/// Pixelwise AND of the two vertices' rasterizations over the bounding box.
ImageGrid intersection_raster(const GifsGraph& G, std::uint32_t vertex_q, std::uint32_t vertex_r,
                              std::uint32_t depth, std::uint32_t resolution);

/// Binary PGM (P5, maxval 255): 0 = inside, 255 = outside.
void write_pgm(const ImageGrid& img, const std::string& path);
ImageGrid read_pgm(const std::string& path);

} // namespace safa
