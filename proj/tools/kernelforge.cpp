// kernelforge: design anisotropy-optimized piecewise-polynomial interpolation
// kernels, evaluate staircasing metrics, resample images, and regenerate the
// reference tables.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "kf/kernel_io.hpp"
#include "kf/metrics.hpp"
#include "kf/optimizer.hpp"
#include "kf/quadrature.hpp"
#include "kf/resample.hpp"
#include "kf/staircase.hpp"
#include "kf/zoo.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace kf;

namespace {

struct Settings {
    int quad_order = 24;
    int quasi_starts = 200;
    int grid_per_dim = 3;
    double box = 4.0;
    std::string boundary = "replicate";
    std::string grid_mode = "endpoints";
    std::string source_extend = "function";  // function lattice | bounded image
    int bits = 8;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}
std::string fmt_coeff(double v) { return fmt("%.6f", v); }
std::string fmt_eg(double v) { return fmt("%.3f", v); }
std::string fmt_sci(double v) { return fmt("%.2e", v); }

Boundary parse_boundary(const std::string& s) {
    if (s == "replicate") return Boundary::replicate;
    if (s == "reflect") return Boundary::reflect;
    if (s == "zero") return Boundary::zero;
    throw CLI::ValidationError("boundary", "unknown boundary policy '" + s + "'");
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot write '" + path + "'");
    return out;
}

std::string settings_header(const Settings& s) {
    return "# kernelforge; quad_order=" + std::to_string(s.quad_order) +
           " starts=" + std::to_string(s.grid_per_dim) + "^d+" + std::to_string(s.quasi_starts) +
           " box=" + fmt("%g", s.box) + " boundary=" + s.boundary + " grid_mode=" + s.grid_mode +
           " source_extend=" + s.source_extend + " bstar_radius=16/22";
}

OptimizeOptions optimize_options(const Settings& s) {
    OptimizeOptions opt;
    opt.box_lo = -s.box;
    opt.box_hi = s.box;
    opt.grid_per_dim = s.grid_per_dim;
    opt.quasi_starts = s.quasi_starts;
    return opt;
}

// eigenvalue signs of a small symmetric matrix (Jacobi sweeps)
std::vector<std::string> eigen_signs(std::vector<std::vector<double>> a) {
    const int n = static_cast<int>(a.size());
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
        if (off < 1e-24) break;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                if (std::fabs(a[p][q]) < 1e-18) continue;
                const double theta = 0.5 * std::atan2(2.0 * a[p][q], a[q][q] - a[p][p]);
                const double c = std::cos(theta), s = std::sin(theta);
                for (int k = 0; k < n; ++k) {
                    const double akp = a[k][p], akq = a[k][q];
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = a[p][k], aqk = a[q][k];
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
    }
    std::vector<std::string> signs;
    for (int i = 0; i < n; ++i) signs.push_back(a[i][i] > 0 ? "+" : a[i][i] < 0 ? "-" : "0");
    return signs;
}

// E_g for any kernel: exact rational pipeline when a piecewise form exists,
// Gauss-Legendre quadrature otherwise
std::pair<double, bool> eg_value(const Kernel1D& k, const Rat& theta, const Settings& s) {
    if (k.poly && k.poly->instantiated() && k.prefilter_order == 0) {
        Objective obj = eg_squared(*k.poly, theta);
        return {std::sqrt(to_double(obj.constant_value())), true};
    }
    const Kernel1D& eff = k.prefilter_order > 0 ? bspline_interp_kernel(k.prefilter_order) : k;
    QuadratureConfig q;
    q.order = s.quad_order;
    return {std::sqrt(eg_squared_numeric(eff.fn(), to_double(theta), q)), false};
}

std::pair<double, bool> eg_avg_value(const Kernel1D& k, const Settings& s) {
    if (k.poly && k.poly->instantiated() && k.prefilter_order == 0) {
        Objective obj = eg_squared_avg(*k.poly);
        return {std::sqrt(to_double(obj.constant_value())), true};
    }
    // E_g^2(theta) is polynomial in theta of degree <= 4, so a 3-point rule
    // integrates it exactly
    const Kernel1D& eff = k.prefilter_order > 0 ? bspline_interp_kernel(k.prefilter_order) : k;
    QuadratureConfig q;
    q.order = s.quad_order;
    const GaussLegendre& gl = gauss_legendre(3);
    double acc = 0.0;
    for (int i = 0; i < 3; ++i)
        acc += 0.5 * gl.weights[i] * eg_squared_numeric(eff.fn(), 0.5 + 0.5 * gl.nodes[i], q);
    return {std::sqrt(acc), false};
}

json critical_point_json(const CriticalPoint& cp, const std::vector<MultiPoly>& grad,
                         const std::vector<std::string>& vars) {
    json j;
    j["coords"] = cp.coords;
    j["objective"] = cp.objective_value;
    j["residual"] = cp.residual;
    j["converged"] = cp.converged;
    j["hessian_pd"] = cp.hessian_pd;
    const int d = static_cast<int>(vars.size());
    std::vector<std::vector<double>> h(d, std::vector<double>(d));
    std::map<std::string, Rat> pt;
    for (const auto& [name, v] : cp.coords) pt[name] = rat_from_double(v);
    for (int i = 0; i < d; ++i)
        for (int j2 = 0; j2 < d; ++j2)
            h[i][j2] = to_double(grad[i].derivative(vars[j2]).eval(pt));
    j["hessian_eigenvalue_signs"] = eigen_signs(h);
    return j;
}

// ----------------------------------------------------------------------------
// zone-plate experiment

struct ZonePlateResult {
    double rmse_full = 0.0;
    double rmse_interior = 0.0;
    double gcs_value = 0.0;
    Image out;
};

ZonePlateResult run_zone_plate(const Kernel1D& kernel, const Settings& s) {
    const bool endpoints = s.grid_mode == "endpoints";
    const int src_n = endpoints ? 31 : 30;
    const int dst_n = endpoints ? 361 : 360;
    Image gt = zone_plate(dst_n, 6.0, ratio(1, 360));
    ZonePlateResult r;
    if (s.source_extend == "function") {
        // the test pattern is a function, not a bounded image: sample the
        // lattice wherever the kernel reaches, so no border proxy is needed
        const int pad = static_cast<int>(std::ceil(kernel.radius)) +
                        (kernel.prefilter_order > 0 ? 24 : 1);
        const int n = src_n + 2 * pad;
        Image src(n, n);
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                const double x = (i - pad) / 30.0, y = (j - pad) / 30.0;
                src.at(i, j) = (1.0 + std::cos(2.0 * M_PI * 6.0 * (x * x + y * y))) / 2.0;
            }
        ResamplePlan plan{kernel, Rat(12), Rat(pad), parse_boundary(s.boundary)};
        r.out = resample_2d(src, plan, dst_n, dst_n);
    } else {
        Image src = zone_plate(src_n, 6.0, ratio(1, 30));
        ResamplePlan plan{kernel, Rat(12), Rat(0), parse_boundary(s.boundary)};
        r.out = resample_2d(src, plan, dst_n, dst_n);
    }
    r.rmse_full = rmse(gt, r.out);
    const int crop = static_cast<int>(std::ceil(kernel.radius * 12));
    r.rmse_interior = 2 * crop < dst_n ? rmse(gt, r.out, crop) : r.rmse_full;
    r.gcs_value = gcs(gt, r.out);
    return r;
}

// kernels of the metric table, in presentation order
std::vector<std::string> table_kernels() {
    return {"linear",        "opt:K_3/2_2",   "opt:K_3/2_4", "opt:K_3/2_4_S", "opt:K_2_2",
            "opt:K_2_3",     "lagrange:2",    "schaum",      "opt:K_2_3_S",   "mitchell",
            "opt:K_2_4",     "opt:K_2_4_S",   "lanczos:2",   "opt:K_5/2_2",   "opt:K_5/2_3",
            "opt:K_5/2_3_S", "opt:K_5/2_4",   "opt:K_5/2_4_S", "opt:K_3_2",   "opt:K_3_3",
            "opt:K_3_3_S",   "keys33",        "opt:K_3_4",   "opt:K_3_4_S",   "lagrange:3",
            "lanczos:3",     "bspline:2",     "bspline:3"};
}

// ----------------------------------------------------------------------------
// subcommands

int cmd_design(const KernelSpec& spec, Metric metric, const std::string& out_path,
               const std::string& report_path, const Settings& s) {
    DesignResult res = [&] {
        try {
            return optimize_kernel(spec, metric, optimize_options(s));
        } catch (const std::invalid_argument& e) {
            throw NumericError(e.what());  // overconstrained family
        }
    }();
    save_kernel(res.kernel, out_path);

    json rep;
    rep["spec"] = {{"r", rat_to_string(spec.r)}, {"p", spec.degree}, {"smooth", spec.smooth}};
    rep["metric"] = metric == Metric::eg_sq_avg ? "eg-avg" : "eg-half";
    rep["unique_solution"] = res.unique_solution;
    rep["free_names"] = res.solution.free_names;
    rep["settings"] = {{"box", s.box},
                       {"grid_per_dim", s.grid_per_dim},
                       {"quasi_starts", s.quasi_starts},
                       {"start_sequence", "halton"}};
    if (!res.unique_solution) {
        std::vector<MultiPoly> grad = gradient_system(*res.objective);
        json pts = json::array();
        for (const auto& cp : res.critical_points)
            pts.push_back(critical_point_json(cp, grad, res.solution.free_names));
        rep["critical_points"] = pts;
        rep["minimum"] = critical_point_json(*res.minimum, grad, res.solution.free_names);
        rep["eg_at_minimum"] = std::sqrt(res.minimum->objective_value);
    }
    rep["warnings"] = res.warnings;
    if (!report_path.empty()) {
        auto out = open_out(report_path);
        out << rep.dump(2) << "\n";
    }
    for (const auto& w : res.warnings) std::cerr << "warning: " << w << "\n";
    std::cout << "wrote " << out_path << "\n";
    return 0;
}

int cmd_eval(const std::string& selector, const std::string& metric, const Rat& theta,
             const std::string& out_path, const Settings& s) {
    Kernel1D k = parse_kernel_selector(selector);
    json j;
    j["kernel"] = selector;
    j["metric"] = metric;
    if (metric == "eg-half") {
        auto [v, exact] = eg_value(k, theta, s);
        j["theta"] = rat_to_string(theta);
        j["value"] = v;
        j["exact"] = exact;
    } else if (metric == "eg-avg") {
        auto [v, exact] = eg_avg_value(k, s);
        j["theta"] = nullptr;
        j["value"] = v;
        j["exact"] = exact;
    } else if (metric == "ed") {
        if (!k.poly || !k.poly->instantiated() || k.prefilter_order > 0)
            throw NumericError("ed requires a piecewise-polynomial kernel");
        j["theta"] = rat_to_string(theta);
        j["value"] = to_double(ed_objective(*k.poly, theta).constant_value());
        j["exact"] = true;
    } else if (metric == "ripple") {
        j["theta"] = nullptr;
        j["value"] = partition_unity_ripple(k);
        j["exact"] = false;
    } else {
        throw CLI::ValidationError("metric", "unknown metric '" + metric + "'");
    }
    const std::string text = j.dump(2);
    if (!out_path.empty()) {
        auto out = open_out(out_path);
        out << text << "\n";
    }
    std::cout << text << "\n";
    return 0;
}

int cmd_resample(const std::string& in_path, const std::string& out_path,
                 const std::string& selector, const Rat& scale, const Rat& phase,
                 int out_w, int out_h, const Settings& s) {
    Image in = read_pgm(in_path);
    ResamplePlan plan{parse_kernel_selector(selector), scale, phase, parse_boundary(s.boundary)};
    const int w = out_w > 0 ? out_w : default_output_size(in.width, scale);
    const int h = out_h > 0 ? out_h : default_output_size(in.height, scale);
    Image out = resample_2d(in, plan, w, h);
    write_pgm(out, out_path, s.bits == 16 ? 65535 : 255);
    std::cout << "wrote " << out_path << " (" << w << "x" << h << ")\n";
    return 0;
}

int cmd_zoneplate(const std::string& selector, const std::string& image_path,
                  const std::string& csv_path, const Settings& s) {
    Kernel1D k = parse_kernel_selector(selector);
    ZonePlateResult r = run_zone_plate(k, s);
    auto [eg, exact] = eg_value(k, ratio(1, 2), s);
    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!csv_path.empty()) {
        file = open_out(csv_path);
        os = &file;
    }
    *os << settings_header(s) << "\n";
    *os << "kernel,eg_half,rmse,rmse_interior,gcs\n";
    *os << selector << "," << fmt_eg(eg) << "," << fmt_sci(r.rmse_full) << ","
        << fmt_sci(r.rmse_interior) << "," << fmt("%.4f", r.gcs_value) << "\n";
    if (!image_path.empty()) {
        write_pgm(r.out, image_path, s.bits == 16 ? 65535 : 255);
        std::cout << "wrote " << image_path << "\n";
    }
    return 0;
}

void dump_gradient_field(const Kernel1D& k, const fs::path& dir, const Settings& s) {
    // |grad u| of the edge interpolant over one period, plus iso-contours of u
    const double lo = -(k.radius + 1.5), hi = k.radius + 2.5;
    const int per_unit = 32;
    const int n = static_cast<int>((hi - lo) * per_unit) + 1;
    const double step = 1.0 / per_unit;
    const double theta = 0.5;
    const long reach = static_cast<long>(std::ceil(k.radius)) + 1;
    std::vector<double> u(static_cast<std::size_t>(n) * n), gm(u.size());
#pragma omp parallel for schedule(static)
    for (int jy = 0; jy < n; ++jy) {
        const double y = lo + jy * step;
        for (int ix = 0; ix < n; ++ix) {
            const double x = lo + ix * step;
            double uv = 0.0, gx = 0.0, gy = 0.0;
            for (long i = static_cast<long>(std::floor(x)) - reach;
                 i <= static_cast<long>(std::ceil(x)) + reach; ++i) {
                const double fx = k.f(x - i), dfx = k.df(x - i);
                if (fx == 0.0 && dfx == 0.0) continue;
                for (long j = static_cast<long>(std::floor(y)) - reach;
                     j <= static_cast<long>(std::ceil(y)) + reach; ++j) {
                    const long diff = i - j;
                    if (diff < -1) continue;
                    const double d = diff > 0    ? 1.0
                                     : diff == 0 ? 1.0 - (1.0 - theta) * (1.0 - theta) / 2.0
                                                 : theta * theta / 2.0;
                    if (d == 0.0) continue;
                    const double fy = k.f(y - j), dfy = k.df(y - j);
                    uv += d * fx * fy;
                    gx += d * dfx * fy;
                    gy += d * fx * dfy;
                }
            }
            u[static_cast<std::size_t>(jy) * n + ix] = uv;
            gm[static_cast<std::size_t>(jy) * n + ix] = std::hypot(gx, gy);
        }
    }
    double peak = 0.0;
    for (double v : gm) peak = std::max(peak, v);
    Image img(n, n);
    for (std::size_t i = 0; i < gm.size(); ++i) img.data[i] = peak > 0 ? gm[i] / peak : 0.0;
    std::string base = k.name;
    for (auto& c : base)
        if (c == ':' || c == '/') c = '_';
    write_pgm(img, (dir / (base + "_gradient.pgm")).string(), 255);

    auto csv = open_out((dir / (base + "_isolines.csv")).string());
    csv << settings_header(s) << "\n";
    csv << "level,x1,y1,x2,y2\n";
    for (double level : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        for (const auto& seg : contour_segments(u, n, n, lo, lo, step, level))
            csv << fmt("%.4f", level) << "," << fmt("%.6f", seg.x1) << "," << fmt("%.6f", seg.y1)
                << "," << fmt("%.6f", seg.x2) << "," << fmt("%.6f", seg.y2) << "\n";
    }
}

int cmd_compare(const std::vector<std::string>& selectors, const std::string& outdir,
                bool dump_images, bool dump_gradients, const Settings& s) {
    const fs::path dir = outdir.empty() ? fs::path(".") : fs::path(outdir);
    if (!outdir.empty()) fs::create_directories(dir);
    auto csv = open_out((dir / "compare.csv").string());
    csv << settings_header(s) << "\n";
    csv << "kernel,eg_half,rmse,rmse_interior,gcs\n";
    for (const auto& sel : selectors) {
        Kernel1D k = parse_kernel_selector(sel);
        ZonePlateResult r = run_zone_plate(k, s);
        auto [eg, exact] = eg_value(k, ratio(1, 2), s);
        csv << sel << "," << fmt_eg(eg) << "," << fmt_sci(r.rmse_full) << ","
            << fmt_sci(r.rmse_interior) << "," << fmt("%.4f", r.gcs_value) << "\n";
        std::string base = sel;
        for (auto& c : base)
            if (c == ':' || c == '/') c = '_';
        if (dump_images)
            write_pgm(r.out, (dir / (base + "_zoneplate.pgm")).string(),
                      s.bits == 16 ? 65535 : 255);
        if (dump_gradients) {
            const Kernel1D& eff =
                k.prefilter_order > 0 ? bspline_interp_kernel(k.prefilter_order) : k;
            dump_gradient_field(eff, dir, s);
        }
        std::cout << sel << " done\n";
    }
    std::cout << "wrote " << (dir / "compare.csv").string() << "\n";
    return 0;
}

int cmd_tables(const std::string& which, const std::string& outdir, const Settings& s) {
    const fs::path dir = outdir.empty() ? fs::path(".") : fs::path(outdir);
    if (!outdir.empty()) fs::create_directories(dir);

    if (which == "free-vars" || which == "all") {
        auto out = open_out((dir / "free_variables.csv").string());
        out << settings_header(s) << "\n";
        out << "r,p,plain,smooth\n";
        for (const Rat& r : {Rat(1), ratio(3, 2), Rat(2), ratio(5, 2), Rat(3)}) {
            for (int p : {2, 3, 4}) {
                std::string cells[2];
                for (bool smooth : {false, true}) {
                    SolveResult sr = solve_kernel_family(KernelSpec(r, p, smooth));
                    cells[smooth] = sr.status == SolveStatus::overconstrained
                                        ? "-"
                                        : std::to_string(sr.solution->free_count());
                }
                out << rat_to_string(r) << "," << p << "," << cells[0] << "," << cells[1] << "\n";
            }
        }
        std::cout << "wrote " << (dir / "free_variables.csv").string() << "\n";
    }

    if (which == "coeffs" || which == "all") {
        auto out = open_out((dir / "optimized_coefficients.txt").string());
        out << settings_header(s) << "\n";
        const std::vector<std::string> specs = {"opt:K_2_2",   "opt:K_2_4_S", "opt:K_5/2_3",
                                                "opt:K_3_3",   "opt:K_3_3_S", "opt:K_3_4_S"};
        for (const auto& sel : specs) {
            Kernel1D k = parse_kernel_selector(sel);
            out << sel << "\n";
            for (int i = 0; i < k.poly->pieces(); ++i) {
                for (int j = 1; j <= k.poly->degree(); ++j)
                    out << (j > 1 ? " " : "  ")
                        << fmt_coeff(to_double(k.poly->coeff(i, j).constant_value()));
                out << "\n";
            }
        }
        std::cout << "wrote " << (dir / "optimized_coefficients.txt").string() << "\n";
    }

    if (which == "metrics" || which == "all") {
        auto out = open_out((dir / "kernel_metrics.csv").string());
        out << settings_header(s) << "\n";
        out << "kernel,eg_half,rmse,rmse_interior,gcs,eg_exact\n";
        for (const auto& sel : table_kernels()) {
            Kernel1D k = parse_kernel_selector(sel);
            auto [eg, exact] = eg_value(k, ratio(1, 2), s);
            ZonePlateResult r = run_zone_plate(k, s);
            out << sel << "," << fmt_eg(eg) << "," << fmt_sci(r.rmse_full) << ","
                << fmt_sci(r.rmse_interior) << "," << fmt("%.4f", r.gcs_value) << ","
                << (exact ? "1" : "0") << "\n";
            std::cout << sel << " done\n";
        }
        std::cout << "wrote " << (dir / "kernel_metrics.csv").string() << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
#ifdef _OPENMP
    if (const char* env = std::getenv("KERNELFORGE_THREADS")) {
        const int t = std::atoi(env);
        if (t > 0) omp_set_num_threads(t);
    }
#endif
    CLI::App app{"anisotropy-optimized interpolation kernel toolkit"};
    app.require_subcommand(1);
    Settings settings;

    // design
    auto* design = app.add_subcommand("design", "derive a kernel by constraint solving + staircasing minimization");
    std::string d_r = "2";
    int d_p = 3;
    bool d_smooth = false;
    std::string d_metric = "eg-half";
    std::string d_out = "kernel.json", d_report;
    design->add_option("--r", d_r, "support radius (integer or half-integer, e.g. 5/2)");
    design->add_option("--p", d_p, "polynomial degree");
    design->add_flag("--smooth", d_smooth, "require C1 smoothness");
    design->add_option("--metric", d_metric, "eg-half | eg-avg")
        ->check(CLI::IsMember({"eg-half", "eg-avg"}));
    design->add_option("--out", d_out, "kernel JSON path");
    design->add_option("--report", d_report, "optimization report JSON path");

    // eval
    auto* eval = app.add_subcommand("eval", "evaluate a staircasing metric for a kernel");
    std::string e_kernel = "linear", e_metric = "eg-half", e_theta = "1/2", e_out;
    eval->add_option("--kernel", e_kernel, "kernel selector");
    eval->add_option("--metric", e_metric, "eg-half | eg-avg | ed | ripple");
    eval->add_option("--theta", e_theta, "edge offset, rational a/b");
    eval->add_option("--out", e_out, "also write the JSON here");

    // resample
    auto* resample = app.add_subcommand("resample", "resample a PGM image");
    std::string r_in, r_out, r_kernel = "keys", r_scale = "2", r_phase = "0";
    int r_w = 0, r_h = 0;
    resample->add_option("--input", r_in, "input PGM")->required();
    resample->add_option("--output", r_out, "output PGM")->required();
    resample->add_option("--kernel", r_kernel, "kernel selector");
    resample->add_option("--scale", r_scale, "output/input sampling ratio, rational a/b");
    resample->add_option("--phase", r_phase, "output origin in input index space");
    resample->add_option("--out-width", r_w, "override output width");
    resample->add_option("--out-height", r_h, "override output height");
    resample->add_option("--boundary", settings.boundary, "replicate | reflect | zero");
    resample->add_option("--bits", settings.bits, "8 or 16")->check(CLI::IsMember({8, 16}));

    // zoneplate
    auto* zone = app.add_subcommand("zoneplate", "run the zone-plate resampling experiment");
    std::string z_kernel = "linear", z_image, z_csv;
    zone->add_option("--kernel", z_kernel, "kernel selector");
    zone->add_option("--out-image", z_image, "write the interpolated zone plate PGM");
    zone->add_option("--csv", z_csv, "write the metrics CSV here (default: stdout)");
    zone->add_option("--grid-mode", settings.grid_mode, "endpoints (31->361) | cells (30->360)")
        ->check(CLI::IsMember({"endpoints", "cells"}));
    zone->add_option("--source-extend", settings.source_extend,
                     "function (sample the pattern wherever needed) | image (bounded image + boundary policy)")
        ->check(CLI::IsMember({"function", "image"}));
    zone->add_option("--boundary", settings.boundary, "replicate | reflect | zero");
    zone->add_option("--bits", settings.bits, "8 or 16")->check(CLI::IsMember({8, 16}));

    // compare
    auto* compare = app.add_subcommand("compare", "compare kernels on the zone-plate experiment");
    std::vector<std::string> c_kernels;
    std::string c_outdir;
    bool c_images = false, c_gradients = false;
    compare->add_option("--kernels", c_kernels, "comma-separated kernel selectors")
        ->delimiter(',')
        ->required();
    compare->add_option("--outdir", c_outdir, "output directory");
    compare->add_flag("--dump-images", c_images, "write interpolated zone plates");
    compare->add_flag("--dump-gradients", c_gradients,
                      "write edge-gradient magnitude PGMs and isoline CSVs");
    compare->add_option("--grid-mode", settings.grid_mode, "endpoints | cells")
        ->check(CLI::IsMember({"endpoints", "cells"}));
    compare->add_option("--source-extend", settings.source_extend, "function | image")
        ->check(CLI::IsMember({"function", "image"}));
    compare->add_option("--boundary", settings.boundary, "replicate | reflect | zero");

    // tables
    auto* tables = app.add_subcommand("tables", "regenerate the reference tables from scratch");
    std::string t_which = "all", t_outdir;
    tables->add_option("--which", t_which, "free-vars | coeffs | metrics | all")
        ->check(CLI::IsMember({"free-vars", "coeffs", "metrics", "all"}));
    tables->add_option("--outdir", t_outdir, "output directory");

    for (auto* sub : {design, eval, zone, compare, tables}) {
        sub->add_option("--quad-order", settings.quad_order, "Gauss-Legendre order");
        sub->add_option("--starts", settings.quasi_starts, "quasi-random starts");
    }

    try {
        app.parse(argc, argv);
        if (*design)
            return cmd_design(KernelSpec(parse_rational(d_r), d_p, d_smooth),
                              d_metric == "eg-avg" ? Metric::eg_sq_avg : Metric::eg_sq_at_theta,
                              d_out, d_report, settings);
        if (*eval) return cmd_eval(e_kernel, e_metric, parse_rational(e_theta), e_out, settings);
        if (*resample)
            return cmd_resample(r_in, r_out, r_kernel, parse_rational(r_scale),
                                parse_rational(r_phase), r_w, r_h, settings);
        if (*zone) return cmd_zoneplate(z_kernel, z_image, z_csv, settings);
        if (*compare) return cmd_compare(c_kernels, c_outdir, c_images, c_gradients, settings);
        if (*tables) return cmd_tables(t_which, t_outdir, settings);
        return 1;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const NumericError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
