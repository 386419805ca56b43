#ifndef POLYSEMI_RASTER_HPP
#define POLYSEMI_RASTER_HPP

#include "polysemi/potential.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace polysemi {

/// Row-major 8-bit raster, 1 (grayscale) or 3 (RGB) channels. Row zero is
/// the top of the image (largest imaginary part of the grid window).
struct RasterImage {
    int width = 0;
    int height = 0;
    int channels = 1;
    std::vector<std::uint8_t> pixels;
};

/// Bin points into grid pixels with log-scaled intensity; empty input
/// yields a uniform background (a warning goes to the diagnostics stream).
RasterImage render_points(std::span<const cplx> points, const GridSpec& grid);

/// Map a field through the monotone grayscale ramp (min -> 0, max -> 255
/// over the finite values); non-finite or masked nodes take the sentinel
/// value 255.
RasterImage render_field(const GridField& field);

/// Binary PGM (P5) / PPM (P6), maxval 255, written atomically
/// (temp file + rename). Throws OutputError on failure.
void write_raster(const RasterImage& img, const std::string& path);

} // namespace polysemi

#endif
