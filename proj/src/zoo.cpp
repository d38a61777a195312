#include "kf/zoo.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>

namespace kf {

double sinc(double x) {
    const double px = M_PI * x;
    if (std::fabs(x) < 1e-4) return 1.0 - px * px / 6.0 + px * px * px * px / 120.0;
    return std::sin(px) / px;
}

double sinc_deriv(double x) {
    if (std::fabs(x) < 1e-4)
        return -M_PI * M_PI * x / 3.0 + std::pow(M_PI, 4) * x * x * x / 30.0;
    return (std::cos(M_PI * x) - sinc(x)) / x;
}

namespace {

PiecewiseKernel make_piecewise(const Rat& r, bool smooth,
                               const std::vector<std::vector<Rat>>& rows) {
    KernelSpec spec(r, static_cast<int>(rows[0].size()) - 1, smooth);
    std::vector<std::vector<MultiPoly>> coeffs;
    for (const auto& row : rows) {
        std::vector<MultiPoly> prow;
        for (const auto& c : row) prow.push_back(MultiPoly::constant(c));
        coeffs.push_back(std::move(prow));
    }
    return PiecewiseKernel(spec, std::move(coeffs));
}

}  // namespace

Kernel1D from_piecewise(const std::string& name, PiecewiseKernel k, bool interpolating) {
    Kernel1D out;
    out.name = name;
    out.radius = k.radius();
    out.half_integer_cells = k.spec().odd();
    out.interpolating = interpolating;
    auto shared = std::make_shared<PiecewiseKernel>(std::move(k));
    out.poly = *shared;
    out.f = [shared](double x) { return (*shared)(x); };
    out.df = [shared](double x) { return shared->deriv(x); };
    return out;
}

Kernel1D nearest_kernel() {
    Kernel1D out;
    out.name = "nearest";
    out.radius = 0.5;
    out.half_integer_cells = true;
    out.f = [](double x) { return std::fabs(x) < 0.5 ? 1.0 : 0.0; };
    out.df = [](double) { return 0.0; };
    return out;
}

Kernel1D linear_kernel() {
    return from_piecewise("linear",
                          make_piecewise(Rat(1), false, {{Rat(1), Rat(-1)}}));
}

Kernel1D keys_kernel() {
    return from_piecewise("keys",
                          make_piecewise(Rat(2), true,
                                         {{Rat(1), Rat(0), ratio(-5, 2), ratio(3, 2)},
                                          {Rat(0), ratio(-1, 2), Rat(1), ratio(-1, 2)}}));
}

Kernel1D keys33_kernel() {
    return from_piecewise(
        "keys33",
        make_piecewise(Rat(3), true,
                       {{Rat(1), Rat(0), ratio(-28, 12), ratio(16, 12)},
                        {Rat(0), ratio(-8, 12), ratio(15, 12), ratio(-7, 12)},
                        {Rat(0), ratio(1, 12), ratio(-2, 12), ratio(1, 12)}}));
}

Kernel1D lanczos_kernel(int r) {
    if (r < 1) throw std::invalid_argument("lanczos: radius must be >= 1");
    Kernel1D out;
    out.name = "lanczos:" + std::to_string(r);
    out.radius = r;
    out.f = [r](double x) { return std::fabs(x) < r ? sinc(x) * sinc(x / r) : 0.0; };
    out.df = [r](double x) {
        if (std::fabs(x) >= r) return 0.0;
        return sinc_deriv(x) * sinc(x / r) + sinc(x) * sinc_deriv(x / r) / r;
    };
    return out;
}

Kernel1D lagrange_kernel(int r) {
    if (r < 1) throw std::invalid_argument("lagrange: radius must be a positive integer");
    // piece i is the Lagrange polynomial through delta data at the 2r
    // integers i-r+1 .. i+r, shifted to the local variable t = x - i
    const MultiPoly x = MultiPoly::variable("x");
    std::vector<std::vector<Rat>> rows;
    for (int i = 0; i < r; ++i) {
        MultiPoly li = MultiPoly::constant(1);
        for (int m = i - r + 1; m <= i + r; ++m) {
            if (m == 0) continue;
            li *= MultiPoly::constant(ratio(-1, m)) * (x - MultiPoly::constant(Rat(m)));
        }
        MultiPoly shifted = li.substitute("x", x + MultiPoly::constant(Rat(i)));
        auto cs = shifted.coefficients_in("x");
        std::vector<Rat> row(2 * r, Rat(0));
        for (std::size_t j = 0; j < cs.size(); ++j) row[j] = cs[j].constant_value();
        rows.push_back(std::move(row));
    }
    return from_piecewise("lagrange:" + std::to_string(r),
                          make_piecewise(Rat(r), false, rows));
}

Kernel1D schaum_kernel() {
    // (1-|x|)(5+4|x|-5x^2)/5 on [0,1), -( 7t - 12t^2 + 5t^3 )/15 on [1,2)
    return from_piecewise(
        "schaum",
        make_piecewise(Rat(2), false,
                       {{Rat(1), ratio(-1, 5), ratio(-9, 5), Rat(1)},
                        {Rat(0), ratio(-7, 15), ratio(4, 5), ratio(-1, 3)}}));
}

Kernel1D mitchell_kernel() {
    return from_piecewise(
        "mitchell",
        make_piecewise(Rat(2), true,
                       {{ratio(8, 9), Rat(0), Rat(-2), ratio(7, 6)},
                        {ratio(1, 18), ratio(-1, 2), ratio(5, 6), ratio(-7, 18)}}),
        /*interpolating=*/false);
}

Kernel1D bspline_basis(int p) {
    PiecewiseKernel k = [p] {
        switch (p) {
            case 2:
                return make_piecewise(ratio(3, 2), false,
                                      {{ratio(3, 4), Rat(0), Rat(-1)},
                                       {ratio(1, 8), ratio(-1, 2), ratio(1, 2)}});
            case 3:
                return make_piecewise(Rat(2), true,
                                      {{ratio(2, 3), Rat(0), Rat(-1), ratio(1, 2)},
                                       {ratio(1, 6), ratio(-1, 2), ratio(1, 2), ratio(-1, 6)}});
            default:
                throw std::invalid_argument("bspline_basis: order must be 2 or 3");
        }
    }();
    Kernel1D out = from_piecewise("bspline:" + std::to_string(p), std::move(k),
                                  /*interpolating=*/false);
    out.prefilter_order = p;
    return out;
}

Kernel1D bspline_interp_kernel(int p, int trunc_radius) {
    if (p != 2 && p != 3) throw std::invalid_argument("bspline_interp: order must be 2 or 3");
    // weights w z^|k|; geometric tails below 1e-10 at the default radii
    const double z = p == 2 ? 2.0 * std::sqrt(2.0) - 3.0 : std::sqrt(3.0) - 2.0;
    const double w = p == 2 ? std::sqrt(2.0) : std::sqrt(3.0);
    const int radius = trunc_radius > 0 ? trunc_radius : (p == 2 ? 16 : 22);
    auto basis = std::make_shared<Kernel1D>(bspline_basis(p));
    const double bsup = basis->radius;

    Kernel1D out;
    out.name = "bstar:" + std::to_string(p);
    out.radius = radius + bsup;
    out.half_integer_cells = p == 2;
    out.f = [=](double x) {
        if (std::fabs(x) >= radius + bsup) return 0.0;
        double acc = 0.0;
        const int lo = static_cast<int>(std::ceil(x - bsup));
        const int hi = static_cast<int>(std::floor(x + bsup));
        for (int k = std::max(lo, -radius); k <= std::min(hi, radius); ++k)
            acc += w * std::pow(z, std::abs(k)) * basis->f(x - k);
        return acc;
    };
    out.df = [=](double x) {
        if (std::fabs(x) >= radius + bsup) return 0.0;
        double acc = 0.0;
        const int lo = static_cast<int>(std::ceil(x - bsup));
        const int hi = static_cast<int>(std::floor(x + bsup));
        for (int k = std::max(lo, -radius); k <= std::min(hi, radius); ++k)
            acc += w * std::pow(z, std::abs(k)) * basis->df(x - k);
        return acc;
    };
    return out;
}

Kernel1D sinc_kernel(int radius) {
    Kernel1D out;
    out.name = "sinc:" + std::to_string(radius);
    out.radius = radius;
    out.f = [radius](double x) { return std::fabs(x) < radius ? sinc(x) : 0.0; };
    out.df = [radius](double x) { return std::fabs(x) < radius ? sinc_deriv(x) : 0.0; };
    return out;
}

double partition_unity_ripple(const Kernel1D& k, int grid) {
    const int reach = static_cast<int>(std::ceil(k.radius)) + 1;
    double worst = 0.0;
    for (int i = 0; i < grid; ++i) {
        const double x = static_cast<double>(i) / grid;
        double sum = 0.0;
        for (int m = -reach; m <= reach; ++m) sum += k.f(x - m);
        worst = std::max(worst, std::fabs(sum - 1.0));
    }
    return worst;
}

double kernel_sup_distance(const Kernel1D& a, const Kernel1D& b, int grid) {
    const double r = std::max(a.radius, b.radius);
    double worst = 0.0;
    for (int i = 0; i <= grid; ++i) {
        const double x = -r + 2.0 * r * i / grid;
        worst = std::max(worst, std::fabs(a.f(x) - b.f(x)));
    }
    return worst;
}

}  // namespace kf
