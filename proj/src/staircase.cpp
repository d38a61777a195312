#include "kf/staircase.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <set>

#include "kf/quadrature.hpp"

namespace kf {

Rat edge_sample(const Rat& theta, long diff) {
    if (diff < -1) return Rat(0);
    if (diff > 0) return Rat(1);
    if (diff == -1) return theta * theta / 2;
    return Rat(1) - (Rat(1) - theta) * (Rat(1) - theta) / 2;
}

MultiPoly edge_sample_poly(long diff) {
    const MultiPoly th = MultiPoly::variable("theta");
    if (diff < -1) return MultiPoly();
    if (diff > 0) return MultiPoly::constant(1);
    if (diff == -1) return ratio(1, 2) * (th * th);
    return MultiPoly::constant(1) - ratio(1, 2) * ((MultiPoly::constant(1) - th) *
                                                   (MultiPoly::constant(1) - th));
}

MultiPoly restrict_shifted(const PiecewiseKernel& k, long m, const Rat& cell_lo,
                           const std::string& var) {
    const KernelSpec& spec = k.spec();
    const Rat lo = cell_lo - Rat(m);
    if (lo >= spec.r || lo + 1 <= -spec.r) return MultiPoly();
    const MultiPoly x = MultiPoly::variable(var);

    const auto piece_index = [&](const Rat& v) {
        const Rat idx = v + spec.delta();
        assert(is_integer(idx));
        return static_cast<int>(idx.get_num().get_si());
    };

    MultiPoly out;
    if (lo >= 0) {
        const int i = piece_index(lo);
        if (i >= k.pieces()) return MultiPoly();
        const MultiPoly base = x - MultiPoly::constant(Rat(m + i));
        for (int j = 0; j <= k.degree(); ++j)
            if (!k.coeff(i, j).is_zero()) out += k.coeff(i, j) * base.pow(j);
    } else if (lo + 1 <= 0) {
        const int i = piece_index(-(lo + 1));
        if (i >= k.pieces()) return MultiPoly();
        const MultiPoly base = x - MultiPoly::constant(Rat(m - i));
        for (int j = 0; j <= k.degree(); ++j) {
            if (k.coeff(i, j).is_zero()) continue;
            MultiPoly t = k.coeff(i, j) * base.pow(j);
            out += (j % 2 == 1) ? -t : t;
        }
    } else {
        // cell straddles the center of the shifted kernel; only the odd
        // variant can get here (cells start at half-integers), and its
        // center piece must be even in |x| for the restriction to be a
        // polynomial. The constraint set forces exactly that.
        assert(spec.odd() && lo == ratio(-1, 2));
        const MultiPoly base = x - MultiPoly::constant(Rat(m));
        for (int j = 0; j <= k.degree(); ++j) {
            if (k.coeff(0, j).is_zero()) continue;
            if (j % 2 == 1)
                throw NumericError(
                    "restrict_shifted: center piece has odd-power terms; "
                    "interpolant is not polynomial on this cell");
            out += k.coeff(0, j) * base.pow(j);
        }
    }
    return out;
}

MultiPoly edge_u_on_cell(const PiecewiseKernel& k, const Rat& x0, const Rat& y0,
                         const std::optional<Rat>& theta) {
    const Rat r = k.spec().r;
    const auto offsets = [&](const Rat& lo) {
        std::vector<long> out;
        const long a = static_cast<long>(rat_floor(lo - r).get_si());
        const long b = static_cast<long>(rat_ceil(lo + 1 + r).get_si());
        for (long m = a; m <= b; ++m) out.push_back(m);
        return out;
    };
    std::vector<long> is = offsets(x0), js = offsets(y0);
    std::vector<MultiPoly> rx, ry;
    for (long m : is) rx.push_back(restrict_shifted(k, m, x0, "x"));
    for (long m : js) ry.push_back(restrict_shifted(k, m, y0, "y"));

    MultiPoly u;
    for (std::size_t a = 0; a < is.size(); ++a) {
        if (rx[a].is_zero()) continue;
        for (std::size_t b = 0; b < js.size(); ++b) {
            if (ry[b].is_zero()) continue;
            const long diff = is[a] - js[b];
            if (diff < -1) continue;  // d = 0
            const MultiPoly prod = rx[a] * ry[b];
            if (theta)
                u += MultiPoly::constant(edge_sample(*theta, diff)) * prod;
            else
                u += edge_sample_poly(diff) * prod;
        }
    }
    return u;
}

std::vector<EdgeCell> build_edge_interpolant(const PiecewiseKernel& k,
                                             const std::optional<Rat>& theta,
                                             int extra_cells) {
    const KernelSpec& spec = k.spec();
    const Rat delta = spec.delta();
    const long kmax = static_cast<long>(rat_ceil(spec.r).get_si()) + 1 + extra_cells;
    std::vector<EdgeCell> cells;
    for (long kk = -kmax; kk <= kmax; ++kk) {
        const Rat y0 = Rat(-kk) - delta;
        for (int half = 0; half < 2; ++half) {
            const Rat x0 = Rat(kk + half) - delta;
            cells.push_back({x0, y0, edge_u_on_cell(k, x0, y0, theta)});
        }
    }
    return cells;
}

namespace {

Objective eg_from_cells(const PiecewiseKernel& k, const std::vector<EdgeCell>& cells,
                        Metric metric, const std::optional<Rat>& theta) {
    MultiPoly total;
    for (const auto& cell : cells) {
        if (cell.u.is_zero()) continue;
        MultiPoly v = cell.u.derivative("x") + cell.u.derivative("y");
        if (v.is_zero()) continue;
        total += (v * v)
                     .integral("x", cell.x0, cell.x0 + 1)
                     .integral("y", cell.y0, cell.y0 + 1);
    }
    Objective obj;
    obj.poly = std::move(total);
    obj.metric = metric;
    obj.theta = theta;
    obj.free_names = k.free_names();
    return obj;
}

}  // namespace

Objective eg_squared(const PiecewiseKernel& k, const Rat& theta, int extra_cells) {
    return eg_from_cells(k, build_edge_interpolant(k, theta, extra_cells),
                         Metric::eg_sq_at_theta, theta);
}

Objective eg_squared_avg(const PiecewiseKernel& k) {
    Objective obj = eg_from_cells(k, build_edge_interpolant(k, std::nullopt),
                                  Metric::eg_sq_avg, std::nullopt);
    if (obj.poly.has_var("theta"))
        obj.poly = obj.poly.integral("theta", Rat(0), Rat(1));
    return obj;
}

Objective ed_objective(const PiecewiseKernel& k, const Rat& theta) {
    const KernelSpec& spec = k.spec();
    const Rat delta = spec.delta();
    // explicit Rat return; a deduced gmpxx expression template would dangle
    const auto cell_floor = [&](const Rat& q) -> Rat { return Rat(rat_floor(q + delta)) - delta; };

    // breakpoints of t in (0,1) where (t, theta + t) leaves a cell
    std::set<Rat> cuts{Rat(0), Rat(1)};
    if (spec.odd()) cuts.insert(ratio(1, 2));
    for (long n = -2; n <= 3; ++n) {
        const Rat t = Rat(n) - delta - theta;
        if (t > 0 && t < 1) cuts.insert(t);
    }

    const MultiPoly t_var = MultiPoly::variable("t");
    MultiPoly total;
    std::vector<Rat> pts(cuts.begin(), cuts.end());
    for (std::size_t s = 0; s + 1 < pts.size(); ++s) {
        const Rat t0 = pts[s], t1 = pts[s + 1];
        const Rat x0 = cell_floor(t0);
        const Rat y0 = cell_floor(t0 + theta);
        MultiPoly u = edge_u_on_cell(k, x0, y0, theta);
        MultiPoly w = u.has_var("x") ? u.substitute("x", t_var) : u;
        if (w.has_var("y")) w = w.substitute("y", t_var + MultiPoly::constant(theta));
        const MultiPoly dev = w - MultiPoly::constant(ratio(1, 2));
        total += (dev * dev).integral("t", t0, t1);
    }
    Objective obj;
    obj.poly = std::move(total);
    obj.metric = Metric::ed_at_theta;
    obj.theta = theta;
    obj.free_names = k.free_names();
    return obj;
}

// ---------------------------------------------------------------------------
// Numeric path

double eg_squared_numeric(const KernelFn& kfn, double theta, const QuadratureConfig& q) {
    // |k| <= ceil(radius) covers every cell a partition-of-unity kernel can
    // touch; kernels without partition of unity carry gradient ripple into
    // all farther cells, and those are excluded from the metric
    const double delta = kfn.half_integer_cells ? 0.5 : 0.0;
    const long kmax = static_cast<long>(std::ceil(kfn.radius)) + q.extra_cells;

    struct Cell {
        double x0, y0;
    };
    std::vector<Cell> cells;
    for (long kk = -kmax; kk <= kmax; ++kk)
        for (int half = 0; half < 2; ++half)
            cells.push_back({static_cast<double>(kk + half) - delta,
                             static_cast<double>(-kk) - delta});

    const GaussLegendre& gl = gauss_legendre(q.order);
    const auto df = [&](double x) {
        if (kfn.df) return kfn.df(x);
        const double h = q.diff_step;
        return (kfn.f(x + h) - kfn.f(x - h)) / (2.0 * h);
    };
    const auto dval = [theta](long diff) {
        if (diff < -1) return 0.0;
        if (diff > 0) return 1.0;
        if (diff == -1) return theta * theta / 2.0;
        return 1.0 - (1.0 - theta) * (1.0 - theta) / 2.0;
    };

    std::vector<double> vals(cells.size(), 0.0);
#pragma omp parallel for schedule(dynamic)
    for (std::size_t c = 0; c < cells.size(); ++c) {
        const double x0 = cells[c].x0, y0 = cells[c].y0;
        const long ia = static_cast<long>(std::floor(x0 - kfn.radius));
        const long ib = static_cast<long>(std::ceil(x0 + 1 + kfn.radius));
        const long ja = static_cast<long>(std::floor(y0 - kfn.radius));
        const long jb = static_cast<long>(std::ceil(y0 + 1 + kfn.radius));
        const std::size_t ni = ib - ia + 1, nj = jb - ja + 1;
        const int n = q.order;
        std::vector<double> fx(n * ni), dfx(n * ni), fy(n * nj), dfy(n * nj);
        for (int a = 0; a < n; ++a) {
            const double x = x0 + 0.5 + 0.5 * gl.nodes[a];
            const double y = y0 + 0.5 + 0.5 * gl.nodes[a];
            for (std::size_t i = 0; i < ni; ++i) {
                fx[a * ni + i] = kfn.f(x - (ia + static_cast<long>(i)));
                dfx[a * ni + i] = df(x - (ia + static_cast<long>(i)));
            }
            for (std::size_t j = 0; j < nj; ++j) {
                fy[a * nj + j] = kfn.f(y - (ja + static_cast<long>(j)));
                dfy[a * nj + j] = df(y - (ja + static_cast<long>(j)));
            }
        }
        double acc = 0.0;
        for (int a = 0; a < n; ++a) {
            for (int b = 0; b < n; ++b) {
                double v = 0.0;
                for (std::size_t i = 0; i < ni; ++i) {
                    const double fxi = fx[a * ni + i], dfxi = dfx[a * ni + i];
                    if (fxi == 0.0 && dfxi == 0.0) continue;
                    const long ii = ia + static_cast<long>(i);
                    for (std::size_t j = 0; j < nj; ++j) {
                        const long diff = ii - (ja + static_cast<long>(j));
                        if (diff < -1) continue;
                        const double d = dval(diff);
                        if (d == 0.0) continue;
                        v += d * (dfxi * fy[b * nj + j] + fxi * dfy[b * nj + j]);
                    }
                }
                acc += gl.weights[a] * gl.weights[b] * v * v;
            }
        }
        vals[c] = acc * 0.25;  // jacobian of [-1,1]^2 -> unit cell
    }
    double total = 0.0;
    for (double v : vals) total += v;
    if (!std::isfinite(total)) throw NumericError("eg_squared_numeric: non-finite result");
    return total;
}

KernelFn kernel_fn(const PiecewiseKernel& k) {
    KernelFn fn;
    fn.f = [k](double x) { return k(x); };
    fn.df = [k](double x) { return k.deriv(x); };
    fn.radius = k.radius();
    fn.half_integer_cells = k.spec().odd();
    return fn;
}

}  // namespace kf
