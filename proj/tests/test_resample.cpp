#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <random>

#include "kf/kernel_io.hpp"
#include "kf/metrics.hpp"
#include "kf/resample.hpp"

using namespace kf;

namespace {

Image random_image(int w, int h, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Image img(w, h);
    for (auto& v : img.data) v = u(rng);
    return img;
}

std::vector<double> random_signal(int n, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> s(n);
    for (auto& v : s) v = u(rng);
    return s;
}

double max_abs_diff(const Image& a, const Image& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.data.size(); ++i)
        worst = std::max(worst, std::fabs(a.data[i] - b.data[i]));
    return worst;
}

PiecewiseKernel designed_k22() {
    return instantiate(*solve_kernel_family(KernelSpec(Rat(2), 2)).solution,
                       std::map<std::string, Rat>{{coeff_name(0, 1), ratio(-1, 2)}});
}

}  // namespace

TEST_CASE("output size convention") {
    CHECK(default_output_size(31, Rat(12)) == 361);
    CHECK(default_output_size(10, Rat(1)) == 10);
    CHECK(default_output_size(10, ratio(1, 3)) == 4);
}

TEST_CASE("constants are preserved by partition-of-unity kernels") {
    const std::vector<double> ones(17, 1.0);
    for (const char* sel : {"linear", "keys", "lagrange:2", "schaum", "keys33", "bspline:3"}) {
        for (Boundary b : {Boundary::replicate, Boundary::reflect, Boundary::zero}) {
            ResamplePlan plan{parse_kernel_selector(sel), ratio(7, 3), Rat(0), b};
            // under the zero boundary the effective reach of the spline
            // route is the prefilter horizon, not the kernel radius
            if (b == Boundary::zero && plan.kernel.prefilter_order > 0) continue;
            std::vector<double> out = resample_line(ones, plan, default_output_size(17, plan.scale));
            const double r = plan.kernel.radius;
            for (std::size_t i = 0; i < out.size(); ++i) {
                const double x = 3.0 * i / 7.0;
                // zeros bleed across the border by design
                if (b == Boundary::zero && (x < r || x > 16 - r)) continue;
                INFO("kernel ", std::string(sel), " sample ", i);
                CHECK(out[i] == doctest::Approx(1.0).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("linear ramps are reproduced exactly in the interior") {
    std::vector<double> ramp(21);
    for (int m = 0; m < 21; ++m) ramp[m] = m;
    for (const char* sel : {"linear", "keys", "lagrange:3", "schaum"}) {
        ResamplePlan plan{parse_kernel_selector(sel), ratio(5, 2)};
        std::vector<double> out = resample_line(ramp, plan, default_output_size(21, plan.scale));
        const double r = plan.kernel.radius;
        for (std::size_t i = 0; i < out.size(); ++i) {
            const double x = i / 2.5;
            if (x < r || x > 20 - r) continue;
            INFO("kernel ", sel, " x ", x);
            CHECK(out[i] == doctest::Approx(x).epsilon(1e-12));
        }
    }
    // a constraint-designed kernel reproduces ramps too
    ResamplePlan plan{from_piecewise("k22", designed_k22()), ratio(5, 2)};
    std::vector<double> out = resample_line(ramp, plan, default_output_size(21, plan.scale));
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double x = i / 2.5;
        if (x < 2 || x > 18) continue;
        CHECK(out[i] == doctest::Approx(x).epsilon(1e-12));
    }
}

TEST_CASE("identity at scale one for interpolating kernels") {
    const std::vector<double> s = random_signal(33, 77);
    for (const char* sel : {"linear", "keys", "keys33", "lagrange:2", "schaum", "bspline:3"}) {
        // the prefilter inverts exactly under the mirror extension, so the
        // spline route is checked with the reflect boundary
        const Boundary b =
            std::string(sel) == "bspline:3" ? Boundary::reflect : Boundary::replicate;
        ResamplePlan plan{parse_kernel_selector(sel), Rat(1), Rat(0), b};
        std::vector<double> out = resample_line(s, plan, 33);
        INFO("kernel ", sel);
        double worst = 0.0;
        for (int i = 0; i < 33; ++i) worst = std::max(worst, std::fabs(out[i] - s[i]));
        CHECK(worst < 1e-10);
    }
    // the non-interpolating kernel does not return the input
    ResamplePlan mn{mitchell_kernel()};
    std::vector<double> out = resample_line(s, mn, 33);
    double worst = 0.0;
    for (int i = 0; i < 33; ++i) worst = std::max(worst, std::fabs(out[i] - s[i]));
    CHECK(worst > 1e-3);
}

TEST_CASE("separable equals direct 2D") {
    const Image img = random_image(16, 16, 123);
    for (const char* sel : {"keys", "bspline:3"}) {
        for (Boundary b : {Boundary::replicate, Boundary::reflect, Boundary::zero}) {
            ResamplePlan plan{parse_kernel_selector(sel), ratio(7, 3), Rat(0), b};
            const int out_n = default_output_size(16, plan.scale);
            Image fast = resample_2d(img, plan, out_n, out_n);
            Image direct = reference::resample_2d_direct(img, plan, out_n, out_n);
            INFO("kernel ", sel);
            CHECK(max_abs_diff(fast, direct) < 1e-10);
        }
    }
}

TEST_CASE("one-hot upscale samples the kernel product") {
    Image img(9, 9);
    img.at(4, 4) = 1.0;
    Kernel1D keys = keys_kernel();
    ResamplePlan plan{keys, Rat(3)};
    Image out = resample_2d(img, plan, 25, 25);
    for (int y = 0; y < 25; ++y)
        for (int x = 0; x < 25; ++x) {
            const double expect = keys.f(x / 3.0 - 4.0) * keys.f(y / 3.0 - 4.0);
            CHECK(out.at(x, y) == doctest::Approx(expect).epsilon(1e-12));
        }
}

TEST_CASE("pass order commutes") {
    const Image img = random_image(14, 11, 321);
    ResamplePlan plan{keys_kernel(), ratio(8, 5)};
    const int out_w = default_output_size(14, plan.scale);
    const int out_h = default_output_size(11, plan.scale);
    Image rows_then_cols = resample_2d(img, plan, out_w, out_h);
    // transpose, resample, transpose back = columns first
    Image t(img.height, img.width);
    for (int y = 0; y < img.height; ++y)
        for (int x = 0; x < img.width; ++x) t.at(y, x) = img.at(x, y);
    Image tr = resample_2d(t, plan, out_h, out_w);
    Image cols_then_rows(out_w, out_h);
    for (int y = 0; y < out_h; ++y)
        for (int x = 0; x < out_w; ++x) cols_then_rows.at(x, y) = tr.at(y, x);
    CHECK(max_abs_diff(rows_then_cols, cols_then_rows) < 1e-12);
}

TEST_CASE("prefilter") {
    // constant in, constant out (unit DC gain)
    for (int p : {2, 3}) {
        std::vector<double> ones(25, 1.0);
        std::vector<double> c = bspline_prefilter(ones, p, Boundary::reflect);
        for (double v : c) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
    }

    // round trip against a direct convolution oracle
    const std::vector<double> s = random_signal(40, 55);
    for (int p : {2, 3}) {
        Kernel1D basis = bspline_basis(p);
        for (Boundary b : {Boundary::reflect, Boundary::replicate, Boundary::zero}) {
            std::vector<double> c = bspline_prefilter(s, p, b);
            const auto c_ext = [&](long m) -> double {
                const long n = static_cast<long>(c.size());
                if (m >= 0 && m < n) return c[m];
                switch (b) {
                    case Boundary::reflect: {
                        const long period = 2 * (n - 1);
                        long r = m % period;
                        if (r < 0) r += period;
                        return c[r >= n ? period - r : r];
                    }
                    default:
                        return 0.0;  // interior check only
                }
            };
            const bool full = b == Boundary::reflect;
            for (long m = full ? 0 : 2; m < (full ? 40 : 38); ++m) {
                double acc = 0.0;
                for (long k = m - 2; k <= m + 2; ++k) acc += c_ext(k) * basis.f(m - k);
                INFO("order ", p, " boundary ", static_cast<int>(b), " m ", m);
                CHECK(std::fabs(acc - s[m]) < 1e-10);
            }
        }
    }
    CHECK_THROWS_AS(bspline_prefilter({1.0, 2.0}, 4, Boundary::reflect), std::invalid_argument);
}

TEST_CASE("prefiltered interpolation matches the truncated explicit kernel") {
    const std::vector<double> s = random_signal(32, 99);
    ResamplePlan rec{bspline_basis(3), Rat(4), Rat(0), Boundary::reflect};
    ResamplePlan exp{bspline_interp_kernel(3), Rat(4), Rat(0), Boundary::reflect};
    const int out_n = default_output_size(32, Rat(4));
    std::vector<double> a = resample_line(s, rec, out_n);
    std::vector<double> b = resample_line(s, exp, out_n);
    for (int i = 0; i < out_n; ++i) {
        INFO("i ", i);
        CHECK(std::fabs(a[i] - b[i]) < 1e-8);
    }
}

TEST_CASE("pgm round trip is bit-exact") {
    const char* path8 = "kf_test_8.pgm";
    const char* path8b = "kf_test_8b.pgm";
    const char* path16 = "kf_test_16.pgm";

    std::mt19937 rng(7);
    std::uniform_int_distribution<int> byte(0, 255), word(0, 65535);
    Image img(13, 9);
    for (auto& v : img.data) v = byte(rng) / 255.0;
    write_pgm(img, path8, 255);
    Image back = read_pgm(path8);
    write_pgm(back, path8b, 255);
    std::ifstream f1(path8, std::ios::binary), f2(path8b, std::ios::binary);
    const std::string b1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
    const std::string b2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
    CHECK(b1 == b2);
    CHECK(back.width == 13);
    CHECK(max_abs_diff(img, back) < 1e-12);

    Image img16(7, 5);
    for (auto& v : img16.data) v = word(rng) / 65535.0;
    write_pgm(img16, path16, 65535);
    Image back16 = read_pgm(path16);
    CHECK(max_abs_diff(img16, back16) < 1e-12);

    CHECK_THROWS_AS(read_pgm("does_not_exist.pgm"), IoError);
    std::remove(path8);
    std::remove(path8b);
    std::remove(path16);
}

TEST_CASE("kernel json round trip") {
    PiecewiseKernel k = designed_k22();
    nlohmann::json j = kernel_to_json(k);
    CHECK(j["r"] == "2");
    CHECK(j["coeffs"][0][0] == "-1/2");
    PiecewiseKernel back = kernel_from_json(j);
    for (int i = 0; i < 2; ++i)
        for (int jj = 0; jj <= 2; ++jj)
            CHECK(back.coeff(i, jj).constant_value() == k.coeff(i, jj).constant_value());
    // full-precision decimal path survives a round trip too
    PiecewiseKernel opt =
        instantiate(*solve_kernel_family(KernelSpec(Rat(2), 2)).solution,
                    std::map<std::string, double>{{coeff_name(0, 1), -0.6219128554769}});
    PiecewiseKernel opt_back = kernel_from_json(kernel_to_json(opt));
    CHECK(opt_back(0.37) == doctest::Approx(opt(0.37)).epsilon(1e-15));
}
