#include "kf/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace kf {

Image zone_plate(int n, double F, const Rat& dx) {
    if (n < 1) throw std::invalid_argument("zone_plate: bad size");
    Image img(n, n);
    const double d = to_double(dx);
#pragma omp parallel for schedule(static)
    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const double x = i * d, y = j * d;
            img.at(i, j) = (1.0 + std::cos(2.0 * M_PI * F * (x * x + y * y))) / 2.0;
        }
    }
    return img;
}

double rmse(const Image& a, const Image& b, int crop) {
    if (a.width != b.width || a.height != b.height)
        throw std::invalid_argument("rmse: dimension mismatch");
    if (2 * crop >= a.width || 2 * crop >= a.height)
        throw std::invalid_argument("rmse: crop leaves no pixels");
    // pairwise accumulation per row keeps the reduction order fixed
    double total = 0.0;
    long count = 0;
    for (int y = crop; y < a.height - crop; ++y) {
        double row = 0.0;
        for (int x = crop; x < a.width - crop; ++x) {
            const double d = a.at(x, y) - b.at(x, y);
            row += d * d;
            ++count;
        }
        total += row;
    }
    return std::sqrt(total / count);
}

GradientField scharr_gradients(const Image& img) {
    if (img.width < 3 || img.height < 3)
        throw std::invalid_argument("scharr_gradients: image too small");
    const double s = std::sqrt(12.0);
    const double norm = 1.0 / (2.0 * (2.0 + s));
    const double wrow[3] = {1.0, s, 1.0};
    GradientField g;
    g.width = img.width;
    g.height = img.height;
    g.gx.assign(img.data.size(), 0.0);
    g.gy.assign(img.data.size(), 0.0);
    const auto clampi = [](int v, int n) { return v < 0 ? 0 : v >= n ? n - 1 : v; };
#pragma omp parallel for schedule(static)
    for (int y = 0; y < img.height; ++y) {
        for (int x = 0; x < img.width; ++x) {
            double gx = 0.0, gy = 0.0;
            for (int dy = -1; dy <= 1; ++dy) {
                for (int dx = -1; dx <= 1; ++dx) {
                    const double v =
                        img.at(clampi(x + dx, img.width), clampi(y + dy, img.height));
                    gx += dx * wrow[dy + 1] * v;
                    gy += dy * wrow[dx + 1] * v;
                }
            }
            g.gx[static_cast<std::size_t>(y) * img.width + x] = gx * norm;
            g.gy[static_cast<std::size_t>(y) * img.width + x] = gy * norm;
        }
    }
    return g;
}

double gcs(const Image& a, const Image& b) {
    if (a.width != b.width || a.height != b.height)
        throw std::invalid_argument("gcs: dimension mismatch");
    const GradientField ga = scharr_gradients(a), gb = scharr_gradients(b);
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < ga.gx.size(); ++i) {
        dot += ga.gx[i] * gb.gx[i] + ga.gy[i] * gb.gy[i];
        na += ga.gx[i] * ga.gx[i] + ga.gy[i] * ga.gy[i];
        nb += gb.gx[i] * gb.gx[i] + gb.gy[i] * gb.gy[i];
    }
    if (na == 0.0 || nb == 0.0) throw NumericError("gcs: zero-norm gradient field");
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

std::map<std::string, double> standardize_scores(const std::map<std::string, double>& raw,
                                                 bool higher_better, double ground_truth_value) {
    if (raw.size() < 2) throw std::invalid_argument("standardize_scores: need at least 2 kernels");
    double worst = raw.begin()->second;
    for (const auto& [name, v] : raw)
        worst = higher_better ? std::min(worst, v) : std::max(worst, v);
    const double span = ground_truth_value - worst;
    if (std::fabs(span) < 1e-300)
        throw std::invalid_argument("standardize_scores: degenerate score range");
    std::map<std::string, double> out;
    for (const auto& [name, v] : raw) out[name] = 100.0 * (v - worst) / span;
    return out;
}

std::vector<ContourSegment> contour_segments(const std::vector<double>& field, int w, int h,
                                             double x0, double y0, double step, double level) {
    std::vector<ContourSegment> segs;
    const auto f = [&](int i, int j) { return field[static_cast<std::size_t>(j) * w + i]; };
    const auto lerp = [&](double a, double b) { return (level - a) / (b - a); };
    for (int j = 0; j + 1 < h; ++j) {
        for (int i = 0; i + 1 < w; ++i) {
            const double v00 = f(i, j), v10 = f(i + 1, j), v01 = f(i, j + 1),
                         v11 = f(i + 1, j + 1);
            // crossing points on the four cell edges
            std::vector<std::pair<double, double>> pts;
            if ((v00 < level) != (v10 < level))
                pts.push_back({x0 + (i + lerp(v00, v10)) * step, y0 + j * step});
            if ((v01 < level) != (v11 < level))
                pts.push_back({x0 + (i + lerp(v01, v11)) * step, y0 + (j + 1) * step});
            if ((v00 < level) != (v01 < level))
                pts.push_back({x0 + i * step, y0 + (j + lerp(v00, v01)) * step});
            if ((v10 < level) != (v11 < level))
                pts.push_back({x0 + (i + 1) * step, y0 + (j + lerp(v10, v11)) * step});
            if (pts.size() == 2)
                segs.push_back({pts[0].first, pts[0].second, pts[1].first, pts[1].second});
            else if (pts.size() == 4) {  // saddle: pair by edge order
                segs.push_back({pts[0].first, pts[0].second, pts[2].first, pts[2].second});
                segs.push_back({pts[1].first, pts[1].second, pts[3].first, pts[3].second});
            }
        }
    }
    return segs;
}

}  // namespace kf
