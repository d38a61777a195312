// Acceptance suite: runs every acceptance criterion end to end and prints
// one PASS/FAIL line per criterion. Exit code is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "expected_values.hpp"
#include "kf/kernel_io.hpp"
#include "kf/metrics.hpp"
#include "kf/optimizer.hpp"
#include "kf/resample.hpp"
#include "kf/staircase.hpp"
#include "kf/zoo.hpp"

using namespace kf;
using Clock = std::chrono::steady_clock;

namespace {

struct Criterion {
    int id;
    std::string name;
    bool pass = true;
    bool skipped = false;
    std::vector<std::string> notes;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            notes.push_back("FAILED: " + what);
        }
    }
    void note(const std::string& what) { notes.push_back(what); }
};

struct Runner {
    std::vector<Criterion> done;

    void run(int id, const std::string& name, const std::function<void(Criterion&)>& body) {
        Criterion c{id, name};
        const auto t0 = Clock::now();
        try {
            body(c);
        } catch (const std::exception& e) {
            c.pass = false;
            c.notes.push_back(std::string("exception: ") + e.what());
        }
        const double dt = std::chrono::duration<double>(Clock::now() - t0).count();
        std::printf("[%2d] %s  %s (%.1fs)\n", id,
                    c.skipped ? "SKIP" : c.pass ? "PASS" : "FAIL", name.c_str(), dt);
        for (const auto& n : c.notes) std::printf("     - %s\n", n.c_str());
        done.push_back(std::move(c));
    }

    int failures() const {
        int n = 0;
        for (const auto& c : done) n += !c.pass && !c.skipped;
        return n;
    }
};

std::string dstr(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

// kernels shared across criteria; optimized families computed once
std::map<std::string, Kernel1D>& kernel_cache() {
    static std::map<std::string, Kernel1D> cache;
    return cache;
}

const Kernel1D& kernel(const std::string& selector) {
    auto& cache = kernel_cache();
    auto it = cache.find(selector);
    if (it == cache.end()) it = cache.emplace(selector, parse_kernel_selector(selector)).first;
    return it->second;
}

double round3(double v) { return std::round(v * 1000.0) / 1000.0; }

double eg_of(const Kernel1D& k, bool numeric) {
    if (!numeric) return std::sqrt(to_double(eg_squared(*k.poly, ratio(1, 2)).constant_value()));
    const Kernel1D& eff = k.prefilter_order > 0 ? bspline_interp_kernel(k.prefilter_order) : k;
    return std::sqrt(eg_squared_numeric(eff.fn(), 0.5));
}

Image zone_plate_resampled(const Kernel1D& k) {
    const int pad =
        static_cast<int>(std::ceil(k.radius)) + (k.prefilter_order > 0 ? 24 : 1);
    const int n = 31 + 2 * pad;
    Image src(n, n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            const double x = (i - pad) / 30.0, y = (j - pad) / 30.0;
            src.at(i, j) = (1.0 + std::cos(2.0 * M_PI * 6.0 * (x * x + y * y))) / 2.0;
        }
    ResamplePlan plan{k, Rat(12), Rat(pad), Boundary::replicate};
    return resample_2d(src, plan, 361, 361);
}

}  // namespace

int main() {
    Runner r;

    r.run(1, "free-variable grid, cell for cell, < 10 s", [](Criterion& c) {
        const auto t0 = Clock::now();
        int cells = 0;
        for (std::size_t ri = 0; ri < expected::grid_radii.size(); ++ri)
            for (int pi = 0; pi < 3; ++pi)
                for (bool smooth : {false, true}) {
                    const int want = smooth ? expected::free_vars_smooth[ri][pi]
                                            : expected::free_vars_plain[ri][pi];
                    const KernelSpec spec(expected::grid_radii[ri], expected::grid_degrees[pi],
                                          smooth);
                    const SolveResult sr = solve_kernel_family(spec);
                    ++cells;
                    if (want < 0)
                        c.require(sr.status == SolveStatus::overconstrained,
                                  spec.name() + ": expected overconstrained");
                    else
                        c.require(sr.status != SolveStatus::overconstrained &&
                                      sr.solution->free_count() == want,
                                  spec.name() + ": expected " + std::to_string(want) +
                                      " free variables");
                }
        const double dt = std::chrono::duration<double>(Clock::now() - t0).count();
        c.note(std::to_string(cells) + " grid cells checked");
        c.require(dt < 10.0, "runtime " + dstr(dt) + "s exceeds 10s");
    });

    r.run(2, "reference general solutions, exact rational equality", [](Criterion& c) {
        int matrices = 0;
        for (const auto& ps : expected::reference_solutions()) {
            const SolveResult sr = solve_kernel_family(ps.spec);
            if (sr.status == SolveStatus::overconstrained) {
                c.require(false, ps.spec.name() + ": unexpectedly overconstrained");
                continue;
            }
            const GeneralSolution& gs = *sr.solution;
            std::vector<std::string> want_frees;
            for (auto [i, j] : ps.frees) want_frees.push_back(coeff_name(i, j));
            c.require(gs.free_names == want_frees, ps.spec.name() + ": free-variable set");

            const auto expected_row = [&](std::size_t row) {
                std::vector<Rat> out;
                for (long v : ps.m[row]) out.push_back(ratio(v, ps.den));
                return out;
            };
            const auto computed_row = [&](std::size_t dep) {
                const std::string name =
                    coeff_name(ps.dependents[dep].first, ps.dependents[dep].second);
                for (std::size_t u = 0; u < gs.unknowns.size(); ++u)
                    if (gs.unknowns[u] == name) return gs.dependent_row(static_cast<int>(u));
                return std::vector<Rat>{};
            };
            if (!ps.row_dropped) {
                for (std::size_t row = 0; row < ps.m.size(); ++row)
                    c.require(computed_row(row) == expected_row(row),
                              ps.spec.name() + ": row " + std::to_string(row));
            } else {
                std::size_t dep = 0;
                for (std::size_t row = 0; row < ps.m.size(); ++row) {
                    bool matched = false;
                    while (dep < ps.dependents.size() && !matched)
                        matched = computed_row(dep++) == expected_row(row);
                    c.require(matched, ps.spec.name() + ": row " + std::to_string(row) +
                                           " (subsequence match)");
                }
            }
            ++matrices;
        }
        c.note(std::to_string(matrices) + " parameterizations checked (10 plain + 7 smooth)");
    });

    r.run(3, "exemplar objective polynomials and stationary cubics", [](Criterion& c) {
        for (const auto& ex : expected::exemplar_objectives()) {
            const SolveResult sr = solve_kernel_family(ex.spec);
            const std::string var = coeff_name(ex.free_coeff.first, ex.free_coeff.second);
            const PiecewiseKernel sym = symbolic_kernel(*sr.solution);
            const Objective obj = eg_squared(sym, ratio(1, 2));

            MultiPoly want;
            for (std::size_t d = 0; d < ex.num.size(); ++d)
                want += MultiPoly::constant(ratio(ex.num[d], ex.den)) *
                        MultiPoly::variable(var).pow(static_cast<unsigned>(d));
            c.require(obj.poly == want, ex.spec.name() + ": objective polynomial");

            MultiPoly cubic;
            for (std::size_t d = 0; d < ex.cubic.size(); ++d)
                cubic += MultiPoly::constant(Rat(ex.cubic[d])) *
                         MultiPoly::variable(var).pow(static_cast<unsigned>(d));
            const std::vector<MultiPoly> grad = gradient_system(obj);
            c.require(grad.size() == 1 &&
                          grad[0].primitive_part() == cubic.primitive_part(),
                      ex.spec.name() + ": stationary cubic up to a positive factor");
        }
    });

    r.run(4, "optimized coefficient tables, 5e-6 per entry, single PD minimum, < 5 min",
          [](Criterion& c) {
              const auto t0 = Clock::now();
              for (const auto& ok : expected::optimized_kernels()) {
                  const DesignResult res = optimize_kernel(ok.spec);
                  int pd = 0;
                  for (const auto& cp : res.critical_points) pd += cp.hessian_pd ? 1 : 0;
                  c.require(pd == 1, ok.spec.name() + ": expected exactly one PD minimum, got " +
                                         std::to_string(pd));
                  c.require(res.minimum && res.minimum->residual < 1e-10,
                            ok.spec.name() + ": gradient residual");
                  double worst = 0.0;
                  for (int i = 0; i < res.kernel.pieces(); ++i)
                      for (int j = 1; j <= res.kernel.degree(); ++j)
                          worst = std::max(
                              worst, std::fabs(to_double(res.kernel.coeff(i, j).constant_value()) -
                                               ok.matrix[i][j - 1]));
                  c.require(worst < 5e-6,
                            ok.spec.name() + ": max entry deviation " + dstr(worst) + " >= 5e-6");
                  if (ok.spec.name() == "K_3_4_S" && worst >= 5e-6) {
                      // the reference table is off the true optimum: its exact
                      // gradient is ~5e-7 in a near-flat direction, ours ~1e-14;
                      // both give E_g = 0.2231
                      std::map<std::string, Rat> pt;
                      for (const auto& [nm, v] : res.minimum->coords)
                          pt[nm] = rat_from_double(v);
                      double gmax = 0.0;
                      for (const auto& nm : res.solution.free_names)
                          gmax = std::max(gmax, std::fabs(to_double(
                                                    res.objective->poly.derivative(nm).eval(pt))));
                      c.note("K_3_4_S: exact gradient at our point " + dstr(gmax) +
                             "; reference entries carry limited numeric precision");
                  }
              }
              // the smooth (2,4) kernel vs its simple rational approximation
              const DesignResult k24s = optimize_kernel(KernelSpec(Rat(2), 4, true));
              std::vector<std::vector<Rat>> approx_rows;
              for (int i = 0; i < 2; ++i) {
                  std::vector<Rat> row{Rat(i == 0 ? 1 : 0)};
                  for (int j = 0; j < 4; ++j)
                      row.push_back(ratio(expected::k24s_approx_num[i][j], expected::k24s_approx_den));
                  approx_rows.push_back(std::move(row));
              }
              std::vector<std::vector<MultiPoly>> approx_coeffs;
              for (auto& row : approx_rows) {
                  std::vector<MultiPoly> prow;
                  for (auto& q : row) prow.push_back(MultiPoly::constant(q));
                  approx_coeffs.push_back(std::move(prow));
              }
              const PiecewiseKernel approx(KernelSpec(Rat(2), 4, true), std::move(approx_coeffs));
              const double dev = kernel_sup_distance(from_piecewise("k24s", k24s.kernel),
                                                     from_piecewise("approx", approx), 10000);
              c.require(dev < expected::k24s_approx_bound,
                        "K_2_4_S rational approximation deviation " + dstr(dev));
              c.note("K_2_4_S vs rational approximation: sup deviation " + dstr(dev));
              const double dt = std::chrono::duration<double>(Clock::now() - t0).count();
              c.require(dt < 300.0, "runtime " + dstr(dt) + "s exceeds 5 min");
          });

    r.run(5, "staircasing metric table, 28 entries", [](Criterion& c) {
        for (const auto& row : expected::metric_table()) {
            const Kernel1D& k = kernel(row.kernel);
            const double eg = eg_of(k, row.numeric_eg);
            if (row.numeric_eg)
                c.require(std::fabs(eg - row.eg) <= 2e-3,
                          row.kernel + ": E_g " + dstr(eg) + " vs " + dstr(row.eg) +
                              " (numeric, 2e-3)");
            else
                c.require(round3(eg) == row.eg, row.kernel + ": E_g rounds to " +
                                                    dstr(round3(eg)) + " vs " + dstr(row.eg));
        }
    });

    r.run(6, "near-duplicate sup bounds on a 10^4 grid", [](Criterion& c) {
        for (const auto& nd : expected::near_duplicates()) {
            const double dev = kernel_sup_distance(kernel(nd.a), kernel(nd.b), 10000);
            c.require(dev < nd.bound, nd.a + " vs " + nd.b + ": " + dstr(dev) +
                                          " !< " + dstr(nd.bound));
            c.note(nd.a + " vs " + nd.b + ": sup " + dstr(dev) + " < " + dstr(nd.bound));
        }
    });

    r.run(7, "zone-plate RMSE column, +-3% (5% windowed/spline), < 1 min", [](Criterion& c) {
        const auto t0 = Clock::now();
        const Image gt = zone_plate(361, 6.0, ratio(1, 360));
        for (const auto& row : expected::metric_table()) {
            const Kernel1D& k = kernel(row.kernel);
            const double value = rmse(gt, zone_plate_resampled(k));
            const bool wide_tol = row.kernel.rfind("lanczos", 0) == 0 ||
                                  row.kernel.rfind("bspline", 0) == 0;
            const double tol = wide_tol ? 0.05 : 0.03;
            c.require(std::fabs(value - row.rmse) <= tol * row.rmse,
                      row.kernel + ": RMSE " + dstr(value) + " vs " + dstr(row.rmse));
        }
        const double dt = std::chrono::duration<double>(Clock::now() - t0).count();
        c.require(dt < 60.0, "runtime " + dstr(dt) + "s exceeds 1 min");
    });

    r.run(8, "windowed-sinc partition-of-unity ripple", [](Criterion& c) {
        const double r2 = partition_unity_ripple(lanczos_kernel(2));
        const double r3 = partition_unity_ripple(lanczos_kernel(3));
        c.require(std::fabs(r2 - 0.019) <= 0.001, "lanczos:2 ripple " + dstr(r2));
        c.require(std::fabs(r3 - 0.0057) <= 0.0005, "lanczos:3 ripple " + dstr(r3));
        c.note("lanczos:2 " + dstr(r2) + ", lanczos:3 " + dstr(r3));
    });

    r.run(9, "property suite", [](Criterion& c) {
        // exact-zero constraint residuals at random rational instantiations
        std::mt19937 rng(2024);
        std::uniform_int_distribution<int> num(-8, 8), den(1, 5);
        for (const auto& ps : expected::reference_solutions()) {
            const SolveResult sr = solve_kernel_family(ps.spec);
            std::map<std::string, Rat> values;
            for (const auto& nm : sr.solution->free_names)
                values[nm] = ratio(num(rng), den(rng));
            c.require(constraint_residual(instantiate(*sr.solution, values)) == Rat(0),
                      ps.spec.name() + ": constraint residual not exactly zero");
        }

        // exact vs numeric staircasing metric on the piecewise zoo
        for (const char* sel :
             {"linear", "keys", "keys33", "lagrange:2", "lagrange:3", "schaum", "mitchell"}) {
            const Kernel1D& k = kernel(sel);
            const double exact = to_double(eg_squared(*k.poly, ratio(1, 2)).constant_value());
            const double numeric = eg_squared_numeric(k.fn(), 0.5);
            c.require(std::fabs(exact - numeric) < 1e-6,
                      std::string(sel) + ": exact vs numeric E_g^2 differ by " +
                          dstr(std::fabs(exact - numeric)));
        }

        // separable vs brute-force resampling on random images
        {
            std::uniform_real_distribution<double> u(0.0, 1.0);
            Image img(16, 16);
            for (auto& v : img.data) v = u(rng);
            for (const char* sel : {"keys", "bspline:3"}) {
                ResamplePlan plan{kernel(sel), ratio(7, 3), Rat(0), Boundary::reflect};
                const int out_n = default_output_size(16, plan.scale);
                const Image fast = resample_2d(img, plan, out_n, out_n);
                const Image direct = reference::resample_2d_direct(img, plan, out_n, out_n);
                double worst = 0.0;
                for (std::size_t i = 0; i < fast.data.size(); ++i)
                    worst = std::max(worst, std::fabs(fast.data[i] - direct.data[i]));
                c.require(worst < 1e-10,
                          std::string(sel) + ": separable vs direct " + dstr(worst));
            }
        }

        // prefilter round trip
        {
            std::uniform_real_distribution<double> u(0.0, 1.0);
            std::vector<double> s(64);
            for (auto& v : s) v = u(rng);
            for (int p : {2, 3}) {
                const Kernel1D& basis = kernel(p == 2 ? "bspline:2" : "bspline:3");
                const std::vector<double> coef = bspline_prefilter(s, p, Boundary::reflect);
                double worst = 0.0;
                for (long m = 0; m < 64; ++m) {
                    double acc = 0.0;
                    for (long k = m - 2; k <= m + 2; ++k) {
                        long idx = k;
                        if (idx < 0) idx = -idx;
                        if (idx > 63) idx = 126 - idx;
                        acc += coef[idx] * basis.f(static_cast<double>(m - k));
                    }
                    worst = std::max(worst, std::fabs(acc - s[m]));
                }
                c.require(worst < 1e-10, "order-" + std::to_string(p) +
                                             " prefilter round trip " + dstr(worst));
            }
        }

        // truncated-sinc staircasing decreases toward zero with the radius
        // (the truncation ripple makes the decay ~ radius^(-1/2))
        {
            std::vector<double> es;
            std::string series;
            for (int radius : {10, 20, 40}) {
                es.push_back(std::sqrt(eg_squared_numeric(sinc_kernel(radius).fn(), 0.5)));
                series += (series.empty() ? "" : ", ") + std::to_string(radius) + ": " +
                          dstr(es.back());
            }
            c.require(es[1] < es[0] && es[2] < es[1], "sinc E_g not strictly decreasing");
            c.require(es[2] < 0.75 * es[0],
                      "sinc E_g decays too slowly: " + dstr(es[2]) + " vs " + dstr(es[0]));
            c.note("sinc E_g by radius: " + series);
        }

        // affine images are reproduced exactly in the interior
        {
            Image affine(24, 24);
            for (int y = 0; y < 24; ++y)
                for (int x = 0; x < 24; ++x) affine.at(x, y) = 0.2 + 0.01 * x + 0.02 * y;
            for (const auto& ps : expected::reference_solutions()) {
                const Kernel1D k = kernel("opt:" + ps.spec.name());
                ResamplePlan plan{k, ratio(5, 2)};
                const int out_n = default_output_size(24, plan.scale);
                const Image out = resample_2d(affine, plan, out_n, out_n);
                double worst = 0.0;
                for (int y = 0; y < out_n; ++y)
                    for (int x = 0; x < out_n; ++x) {
                        const double xs = x / 2.5, ys = y / 2.5;
                        if (xs < k.radius || xs > 23 - k.radius || ys < k.radius ||
                            ys > 23 - k.radius)
                            continue;
                        worst = std::max(worst,
                                         std::fabs(out.at(x, y) - (0.2 + 0.01 * xs + 0.02 * ys)));
                    }
                c.require(worst < 1e-10,
                          ps.spec.name() + ": affine reproduction error " + dstr(worst));
            }
        }
    });

    r.run(10, "benchmark-image IQA study", [](Criterion& c) {
        c.skipped = true;
        c.note("excluded by scope: depends on 12 third-party IQA implementations and the "
               "2400x2400 benchmark image collection");
    });

    std::printf("\n%d criteria, %d failed\n", static_cast<int>(r.done.size()), r.failures());
    return r.failures();
}
