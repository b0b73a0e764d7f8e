#include "safa/raster.hpp"

#include <fstream>
#include <stdexcept>

namespace safa {

std::uint64_t ImageGrid::popcount() const {
    std::uint64_t n = 0;
    for (std::uint8_t b : bits) n += b;
    return n;
}

namespace {

// Largest pixel index whose cell start is <= value: floor((value - lo)/step).
std::int64_t floor_index(const Rat& value, const Rat& lo, const Rat& step) {
    Rat t = (value - lo) / step;
    return static_cast<std::int64_t>(rat_floor(t));
}

// Smallest pixel index whose cell end is >= value: ceil((value - lo)/step) - 1.
std::int64_t ceil_index_minus1(const Rat& value, const Rat& lo, const Rat& step) {
    Rat t = (value - lo) / step;
    Int f = rat_floor(t);
    if (Rat(f) == t) return static_cast<std::int64_t>(f) - 1;
    return static_cast<std::int64_t>(f);
}

} // namespace

ImageGrid rasterize(const BoxCover& cover, std::uint32_t vertex, const Box& viewport,
                    std::uint32_t resolution) {
    const std::size_t d = cover.bounding.dim();
    if (d != 1 && d != 2)
        throw std::invalid_argument("rasterization supports 1- and 2-dimensional covers");
    if (viewport.dim() != d) throw std::invalid_argument("viewport dimension mismatch");
    if (resolution == 0 || resolution > kMaxResolution)
        throw std::invalid_argument("resolution must be in [1, " + std::to_string(kMaxResolution) +
                                    "]");
    for (std::size_t i = 0; i < d; ++i)
        if (viewport.hi[i] <= viewport.lo[i])
            throw std::invalid_argument("viewport must have positive extent");

    ImageGrid img;
    img.width = resolution;
    img.height = d == 2 ? resolution : 1;
    img.bits.assign(std::size_t(img.width) * img.height, 0);

    Rat sx = (viewport.hi[0] - viewport.lo[0]) / resolution;
    Rat sy = d == 2 ? (viewport.hi[1] - viewport.lo[1]) / resolution : Rat(1);

    for (const Box& b : cover.per_vertex.at(vertex)) {
        std::int64_t x0 = ceil_index_minus1(b.lo[0], viewport.lo[0], sx);
        std::int64_t x1 = floor_index(b.hi[0], viewport.lo[0], sx);
        x0 = std::max<std::int64_t>(x0, 0);
        x1 = std::min<std::int64_t>(x1, img.width - 1);
        if (x0 > x1) continue;
        std::int64_t y0 = 0, y1 = 0;
        if (d == 2) {
            y0 = ceil_index_minus1(b.lo[1], viewport.lo[1], sy);
            y1 = floor_index(b.hi[1], viewport.lo[1], sy);
            y0 = std::max<std::int64_t>(y0, 0);
            y1 = std::min<std::int64_t>(y1, img.height - 1);
            if (y0 > y1) continue;
        }
        for (std::int64_t y = y0; y <= y1; ++y)
            for (std::int64_t x = x0; x <= x1; ++x)
                img.set(static_cast<std::uint32_t>(x), static_cast<std::uint32_t>(y));
    }
    return img;
}

ImageGrid intersection_raster(const GifsGraph& G, std::uint32_t vertex_q, std::uint32_t vertex_r,
                              std::uint32_t depth, std::uint32_t resolution) {
    BoxCover cover = outer_cover(G, depth);
    Box viewport = cover.bounding;
    ImageGrid a = rasterize(cover, vertex_q, viewport, resolution);
    ImageGrid b = rasterize(cover, vertex_r, viewport, resolution);
    ImageGrid out = a;
    for (std::size_t i = 0; i < out.bits.size(); ++i) out.bits[i] = a.bits[i] & b.bits[i];
    return out;
}

void write_pgm(const ImageGrid& img, const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
    os << "P5\n" << img.width << " " << img.height << "\n255\n";
    // top row of the file is the highest y
    for (std::uint32_t row = 0; row < img.height; ++row) {
        std::uint32_t y = img.height - 1 - row;
        for (std::uint32_t x = 0; x < img.width; ++x) {
            char byte = img.at(x, y) ? '\0' : '\xff';
            os.write(&byte, 1);
        }
    }
    if (!os) throw std::runtime_error("failed writing '" + path + "'");
}

ImageGrid read_pgm(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("cannot open '" + path + "'");
    std::string magic;
    is >> magic;
    if (magic != "P5") throw std::runtime_error("'" + path + "' is not a binary PGM");
    std::uint32_t w = 0, h = 0, maxval = 0;
    is >> w >> h >> maxval;
    is.get(); // single whitespace after the header
    if (w == 0 || h == 0 || maxval == 0 || maxval > 255)
        throw std::runtime_error("unsupported PGM header in '" + path + "'");
    ImageGrid img;
    img.width = w;
    img.height = h;
    img.bits.assign(std::size_t(w) * h, 0);
    std::vector<char> row(w);
    for (std::uint32_t r = 0; r < h; ++r) {
        is.read(row.data(), w);
        if (!is) throw std::runtime_error("truncated PGM '" + path + "'");
        std::uint32_t y = h - 1 - r;
        for (std::uint32_t x = 0; x < w; ++x)
            if (static_cast<unsigned char>(row[x]) < 128) img.set(x, y);
    }
    return img;
}

} // namespace safa
