#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kf/kernelspace.hpp"
#include "kf/staircase.hpp"

namespace kf {

struct CriticalPoint {
    std::map<std::string, double> coords;
    double objective_value = 0.0;
    bool hessian_pd = false;
    bool converged = false;
    double residual = 0.0;  // max |dobj/dc| at coords
};

struct OptimizeOptions {
    double box_lo = -4.0;
    double box_hi = 4.0;
    int grid_per_dim = 3;
    int quasi_starts = 200;  // Halton points, deterministic
    int max_iterations = 120;
    double residual_tol = 1e-12;
    double dedup_tol = 1e-8;
    double cholesky_pivot_tol = 1e-12;
};

/// One exact polynomial per free coefficient: the zero-partial-derivative
/// conditions of the objective. Throws invalid_argument on a constant
/// objective.
std::vector<MultiPoly> gradient_system(const Objective& obj);

/// Newton iteration on the gradient system from a deterministic set of
/// starts (regular grid + Halton sequence in the box). Converged points are
/// deduplicated and classified by the exact Hessian evaluated at the point
/// (positive definiteness via Cholesky). Returns every distinct critical
/// point found; empty when no start converges.
std::vector<CriticalPoint> find_critical_points(const std::vector<MultiPoly>& grad,
                                                const std::vector<std::string>& vars,
                                                const MultiPoly& objective,
                                                const OptimizeOptions& opt = {});

struct DesignResult {
    GeneralSolution solution;
    PiecewiseKernel kernel;
    std::optional<Objective> objective;          // absent for unique systems
    std::vector<CriticalPoint> critical_points;  // all found, ordered
    std::optional<CriticalPoint> minimum;        // chosen PD minimum
    bool unique_solution = false;
    std::vector<std::string> warnings;
};

/// End-to-end kernel design: constraints -> general solution -> staircasing
/// objective -> minimization. Unique systems return the kernel directly;
/// overconstrained specs throw invalid_argument; a search with no PD minimum
/// throws NumericError.
DesignResult optimize_kernel(const KernelSpec& spec, Metric metric = Metric::eg_sq_at_theta,
                             const OptimizeOptions& opt = {});

}  // namespace kf
