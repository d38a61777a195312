#pragma once

#include <string>
#include <vector>

namespace kf {

/// Row-major scalar image; values live in [0, 1] by convention but are not
/// clamped until export.
struct Image {
    int width = 0;
    int height = 0;
    std::vector<double> data;

    Image() = default;
    Image(int w, int h) : width(w), height(h), data(static_cast<std::size_t>(w) * h, 0.0) {}

    double& at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
    double at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }
};

/// Binary PGM (P5, maxval 255 or 65535, 16-bit big-endian); ASCII P2 is also
/// accepted on read. Samples are normalized to [0, 1].
Image read_pgm(const std::string& path);

/// Writes P5 with the given maxval (255 -> 8-bit, otherwise 16-bit
/// big-endian). Values are clamped and rounded here and nowhere else.
void write_pgm(const Image& img, const std::string& path, int maxval = 255);

}  // namespace kf
