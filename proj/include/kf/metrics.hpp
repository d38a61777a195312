#pragma once

#include <map>
#include <string>
#include <vector>

#include "kf/image.hpp"
#include "kf/rational.hpp"

namespace kf {

/// Radial chirp test pattern (1 + cos(2 pi F (x^2 + y^2))) / 2 sampled at
/// (i dx, j dx), i, j = 0 .. n-1.
Image zone_plate(int n, double F, const Rat& dx);

/// Root mean square difference over the frame with `crop` pixels removed on
/// every side. Dimension mismatch -> invalid_argument.
double rmse(const Image& a, const Image& b, int crop = 0);

struct GradientField {
    int width = 0;
    int height = 0;
    std::vector<double> gx, gy;
};

/// 3x3 Scharr operator (maximally isotropic weights), replicate border.
GradientField scharr_gradients(const Image& img);

/// Gradient cosine similarity between two images: aggregated cosine of the
/// angle between their Scharr gradient fields, in [-1, 1].
double gcs(const Image& a, const Image& b);

/// Affine rescale of raw scores to [0, 100]: worst kernel -> 0, ground
/// truth -> 100.
std::map<std::string, double> standardize_scores(const std::map<std::string, double>& raw,
                                                 bool higher_better, double ground_truth_value);

/// Line segments of the iso-contour field == level (marching squares on
/// cell corners); grid point (i, j) sits at (x0 + i step, y0 + j step).
struct ContourSegment {
    double x1, y1, x2, y2;
};
std::vector<ContourSegment> contour_segments(const std::vector<double>& field, int w, int h,
                                             double x0, double y0, double step, double level);

}  // namespace kf
