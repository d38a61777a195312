#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "kf/multipoly.hpp"
#include "kf/rational.hpp"

namespace kf {

/// Family selector for a symmetric piecewise-polynomial kernel: support
/// radius r (integer or half-integer), polynomial degree p, optional C^1
/// smoothness. Piece boundaries sit at integers for integer r ("even"
/// variant) and at half-integers otherwise ("odd" variant).
struct KernelSpec {
    Rat r;
    int degree = 3;
    bool smooth = false;

    KernelSpec() = default;
    KernelSpec(Rat radius, int p, bool smooth_ = false);

    bool odd() const { return !is_integer(r); }
    Rat delta() const { return odd() ? ratio(1, 2) : Rat(0); }
    int pieces() const;  // piece index i runs over 0 .. pieces()-1
    std::string name() const;  // e.g. "K_2_2", "K_5/2_3_S"
};

std::string coeff_name(int piece, int power);  // "c_{i,j}"

/// psi(x) = sum_j c[i][j] (|x| - i)^j with i = floor(|x| + delta), zero for
/// |x| >= r. Coefficients are rational constants once instantiated but may be
/// polynomials in named free coefficients while a family is being designed.
class PiecewiseKernel {
  public:
    PiecewiseKernel(KernelSpec spec, std::vector<std::vector<MultiPoly>> coeffs);

    const KernelSpec& spec() const { return spec_; }
    int pieces() const { return static_cast<int>(coeffs_.size()); }
    int degree() const { return spec_.degree; }
    const MultiPoly& coeff(int piece, int power) const { return coeffs_[piece][power]; }

    bool instantiated() const { return instantiated_; }
    /// Names of free coefficients still present (empty when instantiated).
    std::vector<std::string> free_names() const;

    /// Fast evaluation; requires an instantiated kernel.
    double operator()(double x) const;
    double deriv(double x) const;
    /// Exact evaluation at a rational point (instantiated kernels).
    Rat eval_exact(const Rat& x) const;

    double radius() const { return to_double(spec_.r); }

  private:
    KernelSpec spec_;
    std::vector<std::vector<MultiPoly>> coeffs_;
    bool instantiated_ = false;
    std::vector<std::vector<double>> baked_;  // double coefficients when instantiated
};

/// Linear constraint system A c = b over the kernel coefficients.
struct ConstraintSystem {
    std::vector<std::string> unknowns;  // c_{i,j}, i major, j minor, j = 0..p
    std::vector<std::vector<Rat>> a;    // one row per equation
    std::vector<Rat> rhs;
};

/// Interpolation, C^0 continuity (junctions and support edge), partition of
/// unity, and linear-term reproduction; with spec.smooth additionally C^1
/// junction/edge matching and psi'(0) = 0.
ConstraintSystem build_constraints(const KernelSpec& spec);

enum class SolveStatus { unique, general, overconstrained };

/// All kernels satisfying a constraint set, written as an affine map
/// c = offset + coef * t over the retained free coefficients t.
struct GeneralSolution {
    KernelSpec spec;
    std::vector<std::string> unknowns;
    std::vector<std::string> free_names;   // ascending (i, j)
    std::vector<int> dependent_indices;    // pivot unknowns, ascending
    std::vector<Rat> offset;               // per unknown
    std::vector<std::vector<Rat>> coef;    // [unknown][free]

    int free_count() const { return static_cast<int>(free_names.size()); }
    /// Row of the dependent-variable matrix in the reference convention:
    /// [constant, d/dfree_0, d/dfree_1, ...].
    std::vector<Rat> dependent_row(int unknown_index) const;
};

struct SolveResult {
    SolveStatus status = SolveStatus::overconstrained;
    std::optional<GeneralSolution> solution;  // present unless overconstrained
};

/// Exact rational Gaussian elimination. Pivots prefer the highest (i, j)
/// coefficient, so the surviving free variables are the low-index ones and
/// the parameterization matches the dependent/free split used in the kernel
/// family listings.
SolveResult solve_general(const KernelSpec& spec, const ConstraintSystem& system);

SolveResult solve_kernel_family(const KernelSpec& spec);  // build + solve

/// Kernel whose coefficients are polynomials in the free names.
PiecewiseKernel symbolic_kernel(const GeneralSolution& gs);

/// Concrete kernel; `values` must cover every free name. Rational values keep
/// the constraint residuals exactly zero; doubles are converted exactly.
PiecewiseKernel instantiate(const GeneralSolution& gs, const std::map<std::string, Rat>& values);
PiecewiseKernel instantiate(const GeneralSolution& gs, const std::map<std::string, double>& values);

/// Max constraint violation of an instantiated kernel, as exact rationals:
/// interpolation at integers, junction continuity, partition of unity and
/// linear reproduction on the fundamental interval (and C^1 when smooth).
Rat constraint_residual(const PiecewiseKernel& k);

}  // namespace kf
