#pragma once

#include <functional>
#include <optional>
#include <string>

#include "kf/kernelspace.hpp"
#include "kf/staircase.hpp"

namespace kf {

/// Uniform runtime view of a 1D interpolation kernel: fast evaluation,
/// analytic derivative, support radius, and the exact piecewise form when
/// one exists. `prefilter_order` > 0 marks a B-spline basis that needs the
/// recursive prefilter to interpolate; the resampler applies it.
struct Kernel1D {
    std::string name;
    double radius = 0.0;
    bool half_integer_cells = false;
    bool interpolating = true;
    int prefilter_order = 0;  // 0 = none, else 2 or 3
    std::optional<PiecewiseKernel> poly;
    std::function<double(double)> f;
    std::function<double(double)> df;

    KernelFn fn() const { return KernelFn{f, df, radius, half_integer_cells}; }
};

double sinc(double x);
double sinc_deriv(double x);

Kernel1D nearest_kernel();
Kernel1D linear_kernel();
Kernel1D keys_kernel();         // the unique smooth (2,3) kernel
Kernel1D keys33_kernel();       // the smooth higher-order (3,3) interpolator
Kernel1D lanczos_kernel(int r);
Kernel1D lagrange_kernel(int r);  // local Lagrange interpolation, integer r
Kernel1D schaum_kernel();
Kernel1D mitchell_kernel();     // non-interpolating
Kernel1D bspline_basis(int p);  // beta_p itself, prefilter_order = p
/// Truncated explicit interpolating form beta*_p = sum w z^|k| beta_p(x-k).
Kernel1D bspline_interp_kernel(int p, int trunc_radius = 0);  // 0 = default
Kernel1D sinc_kernel(int radius);  // hard-truncated, for the E_g -> 0 demo
Kernel1D from_piecewise(const std::string& name, PiecewiseKernel k,
                        bool interpolating = true);

/// Max deviation of sum_k psi(x - k) from 1 over a dense grid on [0, 1).
double partition_unity_ripple(const Kernel1D& k, int grid = 4096);

/// Max |a(x) - b(x)| over a uniform grid covering the union support.
double kernel_sup_distance(const Kernel1D& a, const Kernel1D& b, int grid = 10000);

}  // namespace kf
