#pragma once

#include <vector>

#include "kf/image.hpp"
#include "kf/rational.hpp"
#include "kf/zoo.hpp"

namespace kf {

enum class Boundary { replicate, reflect, zero };

/// Output sample n is read from input coordinate n / scale + phase.
struct ResamplePlan {
    Kernel1D kernel;
    Rat scale = Rat(1);
    Rat phase = Rat(0);
    Boundary boundary = Boundary::replicate;
};

/// Both grids anchored at coordinate 0: the last input sample keeps a
/// counterpart in the output.
int default_output_size(int input_size, const Rat& scale);

/// Samples-to-coefficients transform for beta_p interpolation: first-order
/// causal/anticausal recursive filtering with the pole of order p; the
/// output convolved with beta_p (under the same boundary extension)
/// reproduces the input.
std::vector<double> bspline_prefilter(const std::vector<double>& signal, int order,
                                      Boundary boundary);

std::vector<double> resample_line(const std::vector<double>& in, const ResamplePlan& plan,
                                  int out_n);

/// Separable resampling: a horizontal pass over rows, then a vertical pass
/// over columns. Lines are processed in parallel.
Image resample_2d(const Image& in, const ResamplePlan& plan, int out_w, int out_h);

namespace reference {
/// Direct 2D double sum, serial. Kept as the oracle for the separable path
/// and as the baseline of the benchmark.
Image resample_2d_direct(const Image& in, const ResamplePlan& plan, int out_w, int out_h);
}  // namespace reference

}  // namespace kf
