#include "kf/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace kf {

namespace {

// Flattened double-precision view of a MultiPoly for fast repeated
// evaluation inside Newton iterations.
struct CompiledPoly {
    struct Term {
        double coef;
        std::vector<unsigned> exps;
    };
    std::vector<Term> terms;

    static CompiledPoly from(const MultiPoly& p, const std::vector<std::string>& vars) {
        CompiledPoly c;
        std::vector<int> pos(p.vars().size(), -1);
        for (std::size_t i = 0; i < p.vars().size(); ++i) {
            auto it = std::find(vars.begin(), vars.end(), p.vars()[i]);
            if (it != vars.end()) pos[i] = static_cast<int>(it - vars.begin());
        }
        for (const auto& [e, q] : p.terms()) {
            Term t;
            t.coef = to_double(q);
            t.exps.assign(vars.size(), 0);
            for (std::size_t i = 0; i < e.size(); ++i) {
                if (e[i] == 0) continue;
                if (pos[i] < 0) throw std::logic_error("CompiledPoly: unmapped variable");
                t.exps[pos[i]] = e[i];
            }
            c.terms.push_back(std::move(t));
        }
        return c;
    }

    double eval(const std::vector<double>& x) const {
        double acc = 0.0;
        for (const auto& t : terms) {
            double v = t.coef;
            for (std::size_t i = 0; i < t.exps.size(); ++i)
                for (unsigned e = 0; e < t.exps[i]; ++e) v *= x[i];
            acc += v;
        }
        return acc;
    }
};

double halton(int index, int base) {
    double f = 1.0, r = 0.0;
    while (index > 0) {
        f /= base;
        r += f * (index % base);
        index /= base;
    }
    return r;
}

// Solve A dx = rhs in place (small dense system, partial pivoting).
bool solve_dense(std::vector<std::vector<double>> a, std::vector<double> rhs,
                 std::vector<double>& out) {
    const int n = static_cast<int>(rhs.size());
    for (int c = 0; c < n; ++c) {
        int p = c;
        for (int r = c + 1; r < n; ++r)
            if (std::fabs(a[r][c]) > std::fabs(a[p][c])) p = r;
        if (std::fabs(a[p][c]) < 1e-300) return false;
        std::swap(a[p], a[c]);
        std::swap(rhs[p], rhs[c]);
        for (int r = 0; r < n; ++r) {
            if (r == c) continue;
            const double f = a[r][c] / a[c][c];
            if (f == 0.0) continue;
            for (int cc = c; cc < n; ++cc) a[r][cc] -= f * a[c][cc];
            rhs[r] -= f * rhs[c];
        }
    }
    out.resize(n);
    for (int c = 0; c < n; ++c) out[c] = rhs[c] / a[c][c];
    return true;
}

bool cholesky_pd(std::vector<std::vector<double>> h, double pivot_tol) {
    const int n = static_cast<int>(h.size());
    for (int k = 0; k < n; ++k) {
        for (int j = 0; j < k; ++j) h[k][k] -= h[k][j] * h[k][j];
        if (h[k][k] <= pivot_tol) return false;
        h[k][k] = std::sqrt(h[k][k]);
        for (int i = k + 1; i < n; ++i) {
            for (int j = 0; j < k; ++j) h[i][k] -= h[i][j] * h[k][j];
            h[i][k] /= h[k][k];
        }
    }
    return true;
}

}  // namespace

std::vector<MultiPoly> gradient_system(const Objective& obj) {
    std::vector<std::string> free_vars;
    for (const auto& name : obj.free_names)
        if (obj.poly.has_var(name) && obj.poly.degree(name) > 0) free_vars.push_back(name);
    if (free_vars.empty())
        throw std::invalid_argument("gradient_system: objective is constant, nothing to optimize");
    std::vector<MultiPoly> grad;
    for (const auto& name : obj.free_names) grad.push_back(obj.poly.derivative(name));
    return grad;
}

std::vector<CriticalPoint> find_critical_points(const std::vector<MultiPoly>& grad,
                                                const std::vector<std::string>& vars,
                                                const MultiPoly& objective,
                                                const OptimizeOptions& opt) {
    const int d = static_cast<int>(vars.size());
    if (d == 0 || grad.size() != vars.size())
        throw std::invalid_argument("find_critical_points: bad gradient system");

    std::vector<CompiledPoly> g;
    for (const auto& p : grad) g.push_back(CompiledPoly::from(p, vars));
    std::vector<std::vector<CompiledPoly>> h(d, std::vector<CompiledPoly>(d));
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) h[i][j] = CompiledPoly::from(grad[i].derivative(vars[j]), vars);
    const CompiledPoly obj = CompiledPoly::from(objective, vars);

    // deterministic start set: regular grid + Halton points
    static const int primes[] = {2, 3, 5, 7, 11, 13, 17, 19};
    std::vector<std::vector<double>> starts;
    const int gpd = std::max(1, opt.grid_per_dim);
    long grid_total = 1;
    for (int i = 0; i < d; ++i) grid_total *= gpd;
    for (long idx = 0; idx < grid_total; ++idx) {
        std::vector<double> x(d);
        long rem = idx;
        for (int i = 0; i < d; ++i) {
            const int cell = static_cast<int>(rem % gpd);
            rem /= gpd;
            x[i] = opt.box_lo + (cell + 0.5) * (opt.box_hi - opt.box_lo) / gpd;
        }
        starts.push_back(std::move(x));
    }
    for (int s = 1; s <= opt.quasi_starts; ++s) {
        std::vector<double> x(d);
        for (int i = 0; i < d; ++i)
            x[i] = opt.box_lo + halton(s, primes[i % 8]) * (opt.box_hi - opt.box_lo);
        starts.push_back(std::move(x));
    }

    const auto residual_of = [&](const std::vector<double>& x) {
        double res = 0.0;
        for (int i = 0; i < d; ++i) res = std::max(res, std::fabs(g[i].eval(x)));
        return res;
    };

    struct Slot {
        bool ok = false;
        std::vector<double> x;
        double residual = 0.0;
    };
    std::vector<Slot> slots(starts.size());

#pragma omp parallel for schedule(dynamic)
    for (std::size_t s = 0; s < starts.size(); ++s) {
        std::vector<double> x = starts[s];
        double res = residual_of(x);
        bool ok = false;
        for (int it = 0; it < opt.max_iterations; ++it) {
            if (res < opt.residual_tol) {
                ok = true;
                break;
            }
            std::vector<std::vector<double>> hm(d, std::vector<double>(d));
            std::vector<double> rhs(d);
            for (int i = 0; i < d; ++i) {
                rhs[i] = -g[i].eval(x);
                for (int j = 0; j < d; ++j) hm[i][j] = h[i][j].eval(x);
            }
            std::vector<double> dx;
            if (!solve_dense(hm, rhs, dx)) break;
            // full Newton step when it behaves, halved otherwise
            double t = 1.0;
            bool moved = false;
            for (int half = 0; half < 12 && !moved; ++half, t *= 0.5) {
                std::vector<double> xn(d);
                for (int i = 0; i < d; ++i) xn[i] = x[i] + t * dx[i];
                const double rn = residual_of(xn);
                if (!std::isfinite(rn)) continue;
                if (rn < res || (half == 0 && rn < 2.0 * res)) {
                    x = std::move(xn);
                    res = rn;
                    moved = true;
                }
            }
            if (!moved) break;
        }
        if (ok && res < opt.residual_tol) {
            slots[s].ok = true;
            slots[s].x = std::move(x);
            slots[s].residual = res;
        }
    }

    // deduplicate in start order (deterministic)
    std::vector<CriticalPoint> out;
    std::vector<std::vector<double>> reps;
    for (const auto& slot : slots) {
        if (!slot.ok) continue;
        bool dup = false;
        for (std::size_t r = 0; r < reps.size(); ++r) {
            double dist = 0.0;
            for (int i = 0; i < d; ++i) dist = std::max(dist, std::fabs(reps[r][i] - slot.x[i]));
            if (dist < opt.dedup_tol) {
                if (slot.residual < out[r].residual) {
                    for (int i = 0; i < d; ++i) out[r].coords[vars[i]] = slot.x[i];
                    out[r].residual = slot.residual;
                    reps[r] = slot.x;
                }
                dup = true;
                break;
            }
        }
        if (dup) continue;
        CriticalPoint cp;
        for (int i = 0; i < d; ++i) cp.coords[vars[i]] = slot.x[i];
        cp.converged = true;
        cp.residual = slot.residual;
        reps.push_back(slot.x);
        out.push_back(std::move(cp));
    }

    for (std::size_t r = 0; r < out.size(); ++r) {
        std::vector<std::vector<double>> hm(d, std::vector<double>(d));
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) hm[i][j] = h[i][j].eval(reps[r]);
        out[r].hessian_pd = cholesky_pd(hm, opt.cholesky_pivot_tol);
        out[r].objective_value = obj.eval(reps[r]);
    }
    std::sort(out.begin(), out.end(), [](const CriticalPoint& a, const CriticalPoint& b) {
        if (a.objective_value != b.objective_value) return a.objective_value < b.objective_value;
        return a.coords < b.coords;
    });
    return out;
}

DesignResult optimize_kernel(const KernelSpec& spec, Metric metric, const OptimizeOptions& opt) {
    SolveResult sr = solve_kernel_family(spec);
    if (sr.status == SolveStatus::overconstrained)
        throw std::invalid_argument("optimize_kernel: " + spec.name() + " is overconstrained");
    const GeneralSolution& gs = *sr.solution;

    if (sr.status == SolveStatus::unique) {
        DesignResult res{gs, instantiate(gs, std::map<std::string, Rat>{}), std::nullopt,
                         {},  std::nullopt,                                 true,
                         {}};
        return res;
    }

    const PiecewiseKernel sym = symbolic_kernel(gs);
    Objective obj = metric == Metric::eg_sq_avg ? eg_squared_avg(sym)
                                                : eg_squared(sym, ratio(1, 2));
    std::vector<MultiPoly> grad = gradient_system(obj);
    std::vector<CriticalPoint> points =
        find_critical_points(grad, gs.free_names, obj.poly, opt);

    std::vector<std::string> warnings;
    const CriticalPoint* best = nullptr;
    int pd_count = 0;
    for (const auto& cp : points)
        if (cp.hessian_pd) {
            ++pd_count;
            if (!best || cp.objective_value < best->objective_value) best = &cp;
        }
    if (!best)
        throw NumericError("optimize_kernel: no positive-definite minimum found for " +
                           spec.name());
    if (pd_count != 1)
        warnings.push_back(spec.name() + ": expected a single PD minimum, found " +
                           std::to_string(pd_count));

    std::map<std::string, double> values = best->coords;
    DesignResult res{gs,     instantiate(gs, values), std::move(obj), std::move(points),
                     *best,  false,                   std::move(warnings)};
    return res;
}

}  // namespace kf
