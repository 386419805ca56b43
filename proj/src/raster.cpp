#include "polysemi/raster.hpp"

#include "polysemi/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

namespace polysemi {

RasterImage render_points(std::span<const cplx> points, const GridSpec& grid) {
    RasterImage img;
    img.width = grid.cols;
    img.height = grid.rows;
    img.channels = 1;
    img.pixels.assign(static_cast<std::size_t>(grid.rows) * grid.cols, 0);
    if (points.empty()) {
        std::cerr << "render_points: empty input, uniform background\n";
        return img;
    }
    std::vector<long> counts(img.pixels.size(), 0);
    long cmax = 0;
    for (const cplx& p : points) {
        const int col = static_cast<int>(std::floor((p.real() - grid.origin.real()) /
                                                    grid.spacing));
        const int row = static_cast<int>(std::floor((p.imag() - grid.origin.imag()) /
                                                    grid.spacing));
        if (col < 0 || col >= grid.cols || row < 0 || row >= grid.rows) continue;
        // row 0 at the top: flip the imaginary axis
        const std::size_t idx =
            static_cast<std::size_t>(grid.rows - 1 - row) * grid.cols +
            static_cast<std::size_t>(col);
        cmax = std::max(cmax, ++counts[idx]);
    }
    if (cmax == 0) return img;
    const double denom = std::log1p(static_cast<double>(cmax));
    for (std::size_t i = 0; i < counts.size(); ++i) {
        if (counts[i] > 0)
            img.pixels[i] = static_cast<std::uint8_t>(
                std::lround(255.0 * std::log1p(static_cast<double>(counts[i])) / denom));
    }
    return img;
}

RasterImage render_field(const GridField& field) {
    RasterImage img;
    img.width = field.cols;
    img.height = field.rows;
    img.channels = 1;
    img.pixels.assign(static_cast<std::size_t>(field.rows) * field.cols, 255);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < field.values.size(); ++i) {
        if (!field.singular.empty() && field.singular[i]) continue;
        const double v = field.values[i];
        if (std::isfinite(v)) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
    }
    if (!(hi > lo)) hi = lo + 1.0;
    for (int row = 0; row < field.rows; ++row) {
        for (int col = 0; col < field.cols; ++col) {
            const std::size_t src = field.index(row, col);
            const std::size_t dst =
                static_cast<std::size_t>(field.rows - 1 - row) * field.cols +
                static_cast<std::size_t>(col);
            const double v = field.values[src];
            const bool masked = !field.singular.empty() && field.singular[src];
            if (!masked && std::isfinite(v))
                img.pixels[dst] = static_cast<std::uint8_t>(
                    std::lround(255.0 * (v - lo) / (hi - lo)));
        }
    }
    return img;
}

void write_raster(const RasterImage& img, const std::string& path) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw OutputError("write_raster: cannot open " + tmp);
        out << (img.channels == 3 ? "P6" : "P5") << "\n"
            << img.width << " " << img.height << "\n255\n";
        out.write(reinterpret_cast<const char*>(img.pixels.data()),
                  static_cast<std::streamsize>(img.pixels.size()));
        if (!out) throw OutputError("write_raster: short write to " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw OutputError("write_raster: rename failed: " + ec.message());
}

} // namespace polysemi
