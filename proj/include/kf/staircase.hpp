#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "kf/kernelspace.hpp"
#include "kf/multipoly.hpp"

namespace kf {

/// Rasterized value of the diagonal step edge at grid offset diff = i - j,
/// for sub-pixel position theta in [0, 1].
Rat edge_sample(const Rat& theta, long diff);
/// Same value as a polynomial in the variable "theta".
MultiPoly edge_sample_poly(long diff);

enum class Metric { eg_sq_at_theta, eg_sq_avg, ed_at_theta };

/// Staircasing objective: a polynomial in the kernel's free coefficients
/// (a constant when the kernel is fully instantiated).
struct Objective {
    MultiPoly poly;
    Metric metric = Metric::eg_sq_at_theta;
    std::optional<Rat> theta;
    std::vector<std::string> free_names;

    /// Value for an instantiated kernel.
    Rat constant_value() const { return poly.constant_value(); }
};

/// One unit cell of the interpolant, [x0, x0+1] x [y0, y0+1]; u is a
/// bivariate polynomial in "x", "y" (plus free coefficients, plus "theta"
/// when the edge offset is kept symbolic).
struct EdgeCell {
    Rat x0, y0;
    MultiPoly u;
};

/// psi(x - m) restricted to the cell (cell_lo, cell_lo + 1), as a polynomial
/// in `var`. Cell boundaries must align with the kernel's piece grid.
MultiPoly restrict_shifted(const PiecewiseKernel& k, long m, const Rat& cell_lo,
                           const std::string& var);

/// Interpolant of the rasterized edge on one cell.
MultiPoly edge_u_on_cell(const PiecewiseKernel& k, const Rat& x0, const Rat& y0,
                         const std::optional<Rat>& theta);

/// Cells of one period of the edge interpolant (the staircase band of unit
/// squares crossing the edge). theta = nullopt keeps theta symbolic.
std::vector<EdgeCell> build_edge_interpolant(const PiecewiseKernel& k,
                                             const std::optional<Rat>& theta,
                                             int extra_cells = 0);

/// Exact E_g^2(theta): integral of (grad u . (1,1))^2 over the band.
Objective eg_squared(const PiecewiseKernel& k, const Rat& theta, int extra_cells = 0);
/// Exact <E_g>^2 = integral of E_g^2(theta) over theta in [0,1].
Objective eg_squared_avg(const PiecewiseKernel& k);
/// Exact E_d(theta): squared deviation of u from 1/2 along the edge line.
Objective ed_objective(const PiecewiseKernel& k, const Rat& theta);

/// Runtime kernel for the numeric path: arbitrary even function of compact
/// (or truncated) support. df may be empty; central differences are used.
struct KernelFn {
    std::function<double(double)> f;
    std::function<double(double)> df;
    double radius = 0.0;
    bool half_integer_cells = false;
};

struct QuadratureConfig {
    int order = 24;
    double diff_step = 1e-5;
    int extra_cells = 0;
};

/// Gauss-Legendre estimate of E_g^2(theta) for an arbitrary kernel;
/// agrees with the exact path on piecewise-polynomial kernels.
double eg_squared_numeric(const KernelFn& kfn, double theta,
                          const QuadratureConfig& q = {});

KernelFn kernel_fn(const PiecewiseKernel& k);

}  // namespace kf
