#include "kf/resample.hpp"

#include <cmath>
#include <stdexcept>

namespace kf {

namespace {

long wrap_index(long m, long n, Boundary boundary) {
    if (m >= 0 && m < n) return m;
    switch (boundary) {
        case Boundary::replicate:
            return m < 0 ? 0 : n - 1;
        case Boundary::zero:
            return -1;
        case Boundary::reflect: {
            if (n == 1) return 0;
            const long period = 2 * (n - 1);  // whole-sample mirror
            long r = m % period;
            if (r < 0) r += period;
            return r >= n ? period - r : r;
        }
    }
    return 0;
}

double sample_ext(const std::vector<double>& s, long m, Boundary boundary) {
    const long idx = wrap_index(m, static_cast<long>(s.size()), boundary);
    return idx < 0 ? 0.0 : s[static_cast<std::size_t>(idx)];
}

}  // namespace

int default_output_size(int input_size, const Rat& scale) {
    if (input_size < 1) throw std::invalid_argument("default_output_size: empty input");
    const Rat last = Rat(input_size - 1) * scale;
    return static_cast<int>(rat_floor(last).get_si()) + 1;
}

std::vector<double> bspline_prefilter(const std::vector<double>& signal, int order,
                                      Boundary boundary) {
    if (order != 2 && order != 3) throw std::invalid_argument("bspline_prefilter: order must be 2 or 3");
    const std::size_t n = signal.size();
    if (n == 0) return {};
    const double z = order == 2 ? 2.0 * std::sqrt(2.0) - 3.0 : std::sqrt(3.0) - 2.0;
    const double lambda = 2.0 - (z + 1.0 / z);  // 8 for order 2, 6 for order 3
    std::vector<double> c(n);
    if (n == 1) {
        c[0] = signal[0];  // DC gain 1
        return c;
    }

    // causal init from the boundary-extended signal, horizon n or until the
    // pole power drops below 1e-14; the remaining geometric tail is summed
    // in closed form as if the extension stayed at its last value, which is
    // exact for replicate and for constant signals
    const int horizon = std::min<long>(
        static_cast<long>(n), static_cast<long>(std::ceil(std::log(1e-14) / std::log(std::fabs(z)))));
    double init = signal[0];
    double zk = z;
    for (int k = 1; k < horizon; ++k, zk *= z) init += zk * sample_ext(signal, -k, boundary);
    if (boundary != Boundary::zero) init += zk * sample_ext(signal, -horizon, boundary) / (1.0 - z);
    c[0] = init;
    for (std::size_t i = 1; i < n; ++i) c[i] = signal[i] + z * c[i - 1];

    // anticausal init: closed form of the recursion continued over the
    // boundary-extended tail
    switch (boundary) {
        case Boundary::reflect:
            c[n - 1] = z / (z * z - 1.0) * (c[n - 1] + z * c[n - 2]);
            break;
        case Boundary::replicate: {
            const double cn = c[n - 1], sn = signal[n - 1];
            c[n - 1] = -z * cn / (1.0 - z * z) - z * z * sn / ((1.0 - z) * (1.0 - z * z));
            break;
        }
        case Boundary::zero:
            c[n - 1] = -z * c[n - 1] / (1.0 - z * z);
            break;
    }
    for (std::size_t i = n - 1; i-- > 0;) c[i] = z * (c[i + 1] - c[i]);
    for (auto& v : c) v *= lambda;
    return c;
}

std::vector<double> resample_line(const std::vector<double>& in, const ResamplePlan& plan,
                                  int out_n) {
    const Kernel1D& k = plan.kernel;
    const std::vector<double>& src =
        k.prefilter_order > 0 ? bspline_prefilter(in, k.prefilter_order, plan.boundary) : in;
    std::vector<double> out(out_n);
    const double scale = to_double(plan.scale);
    const double phase = to_double(plan.phase);
    for (int nidx = 0; nidx < out_n; ++nidx) {
        const double x = nidx / scale + phase;
        const long lo = static_cast<long>(std::ceil(x - k.radius));
        const long hi = static_cast<long>(std::floor(x + k.radius));
        double acc = 0.0;
        for (long m = lo; m <= hi; ++m) {
            const double w = k.f(x - m);
            if (w != 0.0) acc += sample_ext(src, m, plan.boundary) * w;
        }
        if (!std::isfinite(acc)) throw NumericError("resample: non-finite output sample");
        out[nidx] = acc;
    }
    return out;
}

Image resample_2d(const Image& in, const ResamplePlan& plan, int out_w, int out_h) {
    if (in.width < 1 || in.height < 1) throw std::invalid_argument("resample_2d: empty image");
    // horizontal pass
    Image mid(out_w, in.height);
#pragma omp parallel for schedule(static)
    for (int y = 0; y < in.height; ++y) {
        std::vector<double> row(in.data.begin() + static_cast<std::size_t>(y) * in.width,
                                in.data.begin() + static_cast<std::size_t>(y + 1) * in.width);
        std::vector<double> res = resample_line(row, plan, out_w);
        for (int x = 0; x < out_w; ++x) mid.at(x, y) = res[x];
    }
    // vertical pass
    Image out(out_w, out_h);
#pragma omp parallel for schedule(static)
    for (int x = 0; x < out_w; ++x) {
        std::vector<double> col(mid.height);
        for (int y = 0; y < mid.height; ++y) col[y] = mid.at(x, y);
        std::vector<double> res = resample_line(col, plan, out_h);
        for (int y = 0; y < out_h; ++y) out.at(x, y) = res[y];
    }
    return out;
}

namespace reference {

Image resample_2d_direct(const Image& in, const ResamplePlan& plan, int out_w, int out_h) {
    const Kernel1D& k = plan.kernel;
    // per-axis prefiltering commutes with resampling along the other axis
    Image pre = in;
    if (k.prefilter_order > 0) {
        for (int y = 0; y < in.height; ++y) {
            std::vector<double> row(in.width);
            for (int x = 0; x < in.width; ++x) row[x] = pre.at(x, y);
            row = bspline_prefilter(row, k.prefilter_order, plan.boundary);
            for (int x = 0; x < in.width; ++x) pre.at(x, y) = row[x];
        }
        for (int x = 0; x < in.width; ++x) {
            std::vector<double> col(in.height);
            for (int y = 0; y < in.height; ++y) col[y] = pre.at(x, y);
            col = bspline_prefilter(col, k.prefilter_order, plan.boundary);
            for (int y = 0; y < in.height; ++y) pre.at(x, y) = col[y];
        }
    }
    const double scale = to_double(plan.scale);
    const double phase = to_double(plan.phase);
    Image out(out_w, out_h);
    for (int yo = 0; yo < out_h; ++yo) {
        const double ys = yo / scale + phase;
        for (int xo = 0; xo < out_w; ++xo) {
            const double xs = xo / scale + phase;
            double acc = 0.0;
            for (long m = static_cast<long>(std::ceil(ys - k.radius));
                 m <= static_cast<long>(std::floor(ys + k.radius)); ++m) {
                const double wy = k.f(ys - m);
                if (wy == 0.0) continue;
                const long my = wrap_index(m, in.height, plan.boundary);
                for (long l = static_cast<long>(std::ceil(xs - k.radius));
                     l <= static_cast<long>(std::floor(xs + k.radius)); ++l) {
                    const double wx = k.f(xs - l);
                    if (wx == 0.0) continue;
                    const long mx = wrap_index(l, in.width, plan.boundary);
                    if (my < 0 || mx < 0) continue;
                    acc += pre.at(static_cast<int>(mx), static_cast<int>(my)) * wx * wy;
                }
            }
            out.at(xo, yo) = acc;
        }
    }
    return out;
}

}  // namespace reference

}  // namespace kf
