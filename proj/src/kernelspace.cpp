#include "kf/kernelspace.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace kf {

KernelSpec::KernelSpec(Rat radius, int p, bool smooth_) : r(std::move(radius)), degree(p), smooth(smooth_) {
    if (r <= 0) throw std::invalid_argument("KernelSpec: radius must be positive");
    if (!is_integer(r * 2)) throw std::invalid_argument("KernelSpec: radius must be integer or half-integer");
    if (degree < 1) throw std::invalid_argument("KernelSpec: degree must be >= 1");
}

int KernelSpec::pieces() const {
    // even: pieces 0..r-1; odd: pieces 0..r-1/2
    return static_cast<int>(rat_floor(r).get_si()) + (odd() ? 1 : 0);
}

std::string KernelSpec::name() const {
    std::string s = "K_" + rat_to_string(r) + "_" + std::to_string(degree);
    if (smooth) s += "_S";
    return s;
}

std::string coeff_name(int piece, int power) {
    return "c_{" + std::to_string(piece) + "," + std::to_string(power) + "}";
}

// ---------------------------------------------------------------------------
// PiecewiseKernel

PiecewiseKernel::PiecewiseKernel(KernelSpec spec, std::vector<std::vector<MultiPoly>> coeffs)
    : spec_(std::move(spec)), coeffs_(std::move(coeffs)) {
    if (static_cast<int>(coeffs_.size()) != spec_.pieces())
        throw std::invalid_argument("PiecewiseKernel: wrong piece count");
    for (const auto& row : coeffs_)
        if (static_cast<int>(row.size()) != spec_.degree + 1)
            throw std::invalid_argument("PiecewiseKernel: wrong coefficient count");
    instantiated_ = true;
    for (const auto& row : coeffs_)
        for (const auto& c : row)
            if (!c.is_constant()) instantiated_ = false;
    if (instantiated_) {
        baked_.resize(coeffs_.size());
        for (std::size_t i = 0; i < coeffs_.size(); ++i)
            for (const auto& c : coeffs_[i]) baked_[i].push_back(to_double(c.constant_value()));
    }
}

std::vector<std::string> PiecewiseKernel::free_names() const {
    std::vector<std::string> out;
    for (const auto& row : coeffs_)
        for (const auto& c : row)
            for (const auto& v : c.vars())
                if (c.degree(v) > 0 && std::find(out.begin(), out.end(), v) == out.end())
                    out.push_back(v);
    std::sort(out.begin(), out.end());
    return out;
}

double PiecewiseKernel::operator()(double x) const {
    if (!instantiated_) throw std::logic_error("kernel_eval: kernel has symbolic coefficients");
    const double ax = std::fabs(x);
    const double delta = spec_.odd() ? 0.5 : 0.0;
    if (ax >= radius()) return 0.0;
    const int i = static_cast<int>(std::floor(ax + delta));
    if (i >= pieces()) return 0.0;
    const double t = ax - i;
    const auto& c = baked_[i];
    double v = c.back();
    for (std::size_t j = c.size() - 1; j-- > 0;) v = v * t + c[j];
    return v;
}

double PiecewiseKernel::deriv(double x) const {
    if (!instantiated_) throw std::logic_error("kernel deriv: kernel has symbolic coefficients");
    const double ax = std::fabs(x);
    const double delta = spec_.odd() ? 0.5 : 0.0;
    if (ax >= radius() || x == 0.0) return 0.0;
    const int i = static_cast<int>(std::floor(ax + delta));
    if (i >= pieces()) return 0.0;
    const double t = ax - i;
    const auto& c = baked_[i];
    double v = 0.0;
    for (std::size_t j = c.size() - 1; j >= 1; --j) v = v * t + c[j] * static_cast<double>(j);
    return x > 0 ? v : -v;
}

Rat PiecewiseKernel::eval_exact(const Rat& x) const {
    if (!instantiated_) throw std::logic_error("eval_exact: kernel has symbolic coefficients");
    Rat ax = x >= 0 ? x : Rat(-x);
    if (ax >= spec_.r) return Rat(0);
    const Int fi = rat_floor(ax + spec_.delta());
    const int i = static_cast<int>(fi.get_si());
    if (i >= pieces()) return Rat(0);
    const Rat t = ax - Rat(fi);
    Rat v(0);
    for (int j = spec_.degree; j >= 0; --j) v = v * t + coeffs_[i][j].constant_value();
    return v;
}

// ---------------------------------------------------------------------------
// Constraint assembly

namespace {

using CoeffProvider = std::function<MultiPoly(int piece, int power)>;

// sum_k weight(k) * psi(x - k) restricted to the fundamental interval
// ((0,1) even / (0,1/2) odd), as a polynomial in "x". The piece index of
// every shifted copy is constant there, so each copy contributes a plain
// polynomial.
MultiPoly fundamental_sum(const KernelSpec& spec, const CoeffProvider& coeff,
                          const std::function<Rat(int)>& weight) {
    const int n = spec.pieces();
    const MultiPoly x = MultiPoly::variable("x");
    const MultiPoly one = MultiPoly::constant(1);
    MultiPoly sum;
    const int k_lo = -(n - 1);
    const int k_hi = spec.odd() ? n - 1 : n;
    for (int k = k_lo; k <= k_hi; ++k) {
        const Rat w = weight(k);
        if (w == 0) continue;
        int piece;
        MultiPoly base;  // (|x-k| - piece) on the interval
        if (spec.odd()) {
            piece = k <= 0 ? -k : k;
            base = k <= 0 ? x : -x;
        } else {
            piece = k <= 0 ? -k : k - 1;
            base = k <= 0 ? x : one - x;
        }
        if (piece >= n) continue;
        MultiPoly copy;
        for (int j = 0; j <= spec.degree; ++j) copy += coeff(piece, j) * base.pow(j);
        sum += MultiPoly::constant(w) * copy;
    }
    return sum;
}

}  // namespace

ConstraintSystem build_constraints(const KernelSpec& spec) {
    const int n = spec.pieces();
    const int p = spec.degree;
    ConstraintSystem sys;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j <= p; ++j) sys.unknowns.push_back(coeff_name(i, j));
    const int nu = static_cast<int>(sys.unknowns.size());
    const auto col = [p](int i, int j) { return i * (p + 1) + j; };

    const auto add_row = [&](std::vector<Rat> row, Rat rhs) {
        sys.a.push_back(std::move(row));
        sys.rhs.push_back(std::move(rhs));
    };
    const auto zero_row = [nu] { return std::vector<Rat>(nu, Rat(0)); };

    // interpolation: psi(m) = [m == 0] at the integers inside the support
    for (int i = 0; i < n; ++i) {
        auto row = zero_row();
        row[col(i, 0)] = 1;
        add_row(std::move(row), Rat(i == 0 ? 1 : 0));
    }

    // C0 continuity at junctions and at the support edge
    const Rat half = ratio(1, 2);
    for (int i = 0; i < n; ++i) {
        auto row = zero_row();
        for (int j = 0; j <= p; ++j)
            row[col(i, j)] = spec.odd() ? rat_pow(half, j) : Rat(1);
        if (i + 1 < n) {
            for (int j = 0; j <= p; ++j)
                row[col(i + 1, j)] -= spec.odd() ? rat_pow(-half, j) : Rat(j == 0 ? 1 : 0);
        }
        add_row(std::move(row), Rat(0));
    }

    // partition of unity and linear-term reproduction, as polynomial
    // identities on the fundamental interval
    const CoeffProvider sym = [](int i, int j) { return MultiPoly::variable(coeff_name(i, j)); };
    const auto add_identity = [&](const MultiPoly& sum, int target_power) {
        auto cs = sum.coefficients_in("x");
        for (std::size_t d = 0; d < cs.size(); ++d) {
            auto row = zero_row();
            Rat cons(0);
            for (const auto& [e, c] : cs[d].terms()) {
                unsigned total = 0;
                int var = -1;
                for (std::size_t v = 0; v < e.size(); ++v) {
                    total += e[v];
                    if (e[v] > 0) var = static_cast<int>(v);
                }
                if (total == 0) {
                    cons += c;
                } else {
                    assert(total == 1);
                    auto it = std::find(sys.unknowns.begin(), sys.unknowns.end(),
                                        cs[d].vars()[var]);
                    assert(it != sys.unknowns.end());
                    row[it - sys.unknowns.begin()] += c;
                }
            }
            add_row(std::move(row), Rat(d == static_cast<std::size_t>(target_power) ? 1 : 0) - cons);
        }
    };
    add_identity(fundamental_sum(spec, sym, [](int) { return Rat(1); }), 0);
    add_identity(fundamental_sum(spec, sym, [](int k) { return Rat(k); }), 1);

    if (spec.smooth) {
        // psi is a function of |x|; C1 at the origin forces c_{0,1} = 0
        {
            auto row = zero_row();
            row[col(0, 1)] = 1;
            add_row(std::move(row), Rat(0));
        }
        // C1 at junctions and at the support edge
        for (int i = 0; i < n; ++i) {
            auto row = zero_row();
            for (int j = 1; j <= p; ++j)
                row[col(i, j)] = Rat(j) * (spec.odd() ? rat_pow(half, j - 1) : Rat(1));
            if (i + 1 < n) {
                for (int j = 1; j <= p; ++j)
                    row[col(i + 1, j)] -=
                        Rat(j) * (spec.odd() ? rat_pow(-half, j - 1) : Rat(j == 1 ? 1 : 0));
            }
            add_row(std::move(row), Rat(0));
        }
    }
    return sys;
}

// ---------------------------------------------------------------------------
// Exact solve

SolveResult solve_general(const KernelSpec& spec, const ConstraintSystem& system) {
    const int nu = static_cast<int>(system.unknowns.size());
    const int nr = static_cast<int>(system.a.size());
    std::vector<std::vector<Rat>> a = system.a;
    std::vector<Rat> b = system.rhs;

    // Gauss-Jordan, eliminating the highest-index coefficient first so the
    // low-index c_{i,j} survive as the free parameters.
    std::vector<int> pivot_col_of_row(nr, -1);
    std::vector<int> pivot_row_of_col(nu, -1);
    int next_row = 0;
    for (int c = nu - 1; c >= 0 && next_row < nr; --c) {
        int pr = -1;
        for (int r = next_row; r < nr; ++r)
            if (a[r][c] != 0) {
                pr = r;
                break;
            }
        if (pr < 0) continue;
        std::swap(a[pr], a[next_row]);
        std::swap(b[pr], b[next_row]);
        pr = next_row++;
        const Rat inv = a[pr][c];
        for (int cc = 0; cc < nu; ++cc) a[pr][cc] /= inv;
        b[pr] /= inv;
        for (int r = 0; r < nr; ++r) {
            if (r == pr || a[r][c] == 0) continue;
            const Rat f = a[r][c];
            for (int cc = 0; cc < nu; ++cc) a[r][cc] -= f * a[pr][cc];
            b[r] -= f * b[pr];
        }
        pivot_col_of_row[pr] = c;
        pivot_row_of_col[c] = pr;
    }
    for (int r = next_row; r < nr; ++r)
        if (b[r] != 0) return {SolveStatus::overconstrained, std::nullopt};

    GeneralSolution gs;
    gs.spec = spec;
    gs.unknowns = system.unknowns;
    for (int c = 0; c < nu; ++c)
        if (pivot_row_of_col[c] < 0) gs.free_names.push_back(system.unknowns[c]);
        else gs.dependent_indices.push_back(c);
    const int nf = static_cast<int>(gs.free_names.size());
    gs.offset.assign(nu, Rat(0));
    gs.coef.assign(nu, std::vector<Rat>(nf, Rat(0)));
    int fi = 0;
    std::vector<int> free_cols;
    for (int c = 0; c < nu; ++c)
        if (pivot_row_of_col[c] < 0) {
            gs.coef[c][fi++] = 1;
            free_cols.push_back(c);
        }
    for (int c = 0; c < nu; ++c) {
        const int r = pivot_row_of_col[c];
        if (r < 0) continue;
        gs.offset[c] = b[r];
        for (int f = 0; f < nf; ++f) gs.coef[c][f] = -a[r][free_cols[f]];
    }
    return {nf == 0 ? SolveStatus::unique : SolveStatus::general, std::move(gs)};
}

SolveResult solve_kernel_family(const KernelSpec& spec) {
    return solve_general(spec, build_constraints(spec));
}

std::vector<Rat> GeneralSolution::dependent_row(int unknown_index) const {
    std::vector<Rat> row;
    row.push_back(offset[unknown_index]);
    for (const auto& c : coef[unknown_index]) row.push_back(c);
    return row;
}

// ---------------------------------------------------------------------------
// Instantiation

PiecewiseKernel symbolic_kernel(const GeneralSolution& gs) {
    const int p = gs.spec.degree;
    std::vector<std::vector<MultiPoly>> coeffs(gs.spec.pieces(),
                                               std::vector<MultiPoly>(p + 1));
    for (std::size_t u = 0; u < gs.unknowns.size(); ++u) {
        MultiPoly v = MultiPoly::constant(gs.offset[u]);
        for (int f = 0; f < gs.free_count(); ++f)
            if (gs.coef[u][f] != 0)
                v += MultiPoly::constant(gs.coef[u][f]) * MultiPoly::variable(gs.free_names[f]);
        coeffs[u / (p + 1)][u % (p + 1)] = std::move(v);
    }
    return PiecewiseKernel(gs.spec, std::move(coeffs));
}

PiecewiseKernel instantiate(const GeneralSolution& gs, const std::map<std::string, Rat>& values) {
    for (const auto& name : gs.free_names)
        if (!values.count(name))
            throw std::invalid_argument("instantiate: missing value for " + name);
    const int p = gs.spec.degree;
    std::vector<std::vector<MultiPoly>> coeffs(gs.spec.pieces(),
                                               std::vector<MultiPoly>(p + 1));
    for (std::size_t u = 0; u < gs.unknowns.size(); ++u) {
        Rat v = gs.offset[u];
        for (int f = 0; f < gs.free_count(); ++f)
            v += gs.coef[u][f] * values.at(gs.free_names[f]);
        coeffs[u / (p + 1)][u % (p + 1)] = MultiPoly::constant(v);
    }
    return PiecewiseKernel(gs.spec, std::move(coeffs));
}

PiecewiseKernel instantiate(const GeneralSolution& gs, const std::map<std::string, double>& values) {
    std::map<std::string, Rat> exact;
    for (const auto& [k, v] : values) exact.emplace(k, rat_from_double(v));
    return instantiate(gs, exact);
}

// ---------------------------------------------------------------------------
// Residuals

Rat constraint_residual(const PiecewiseKernel& k) {
    const KernelSpec& spec = k.spec();
    const int n = k.pieces();
    const int p = k.degree();
    Rat worst(0);
    const auto note = [&worst](const Rat& v) {
        Rat a = v >= 0 ? v : Rat(-v);
        if (a > worst) worst = a;
    };

    for (int m = 0; Rat(m) < spec.r; ++m) note(k.eval_exact(Rat(m)) - Rat(m == 0 ? 1 : 0));

    const Rat half = ratio(1, 2);
    for (int i = 0; i < n; ++i) {
        Rat left(0), right(0), dleft(0), dright(0);
        for (int j = 0; j <= p; ++j) {
            const Rat w = spec.odd() ? rat_pow(half, j) : Rat(1);
            left += k.coeff(i, j).constant_value() * w;
            if (j >= 1)
                dleft += Rat(j) * k.coeff(i, j).constant_value() *
                         (spec.odd() ? rat_pow(half, j - 1) : Rat(1));
        }
        if (i + 1 < n) {
            for (int j = 0; j <= p; ++j) {
                const Rat w = spec.odd() ? rat_pow(-half, j) : Rat(j == 0 ? 1 : 0);
                right += k.coeff(i + 1, j).constant_value() * w;
                if (j >= 1)
                    dright += Rat(j) * k.coeff(i + 1, j).constant_value() *
                              (spec.odd() ? rat_pow(-half, j - 1) : Rat(j == 1 ? 1 : 0));
            }
        }
        note(left - right);
        if (spec.smooth) note(dleft - dright);
    }
    if (spec.smooth) note(k.coeff(0, 1).constant_value());

    const CoeffProvider inst = [&k](int i, int j) { return k.coeff(i, j); };
    const MultiPoly pou = fundamental_sum(spec, inst, [](int) { return Rat(1); }) -
                          MultiPoly::constant(1);
    const MultiPoly lin = fundamental_sum(spec, inst, [](int kk) { return Rat(kk); }) -
                          MultiPoly::variable("x");
    for (const auto& [e, c] : pou.terms()) note(c);
    for (const auto& [e, c] : lin.terms()) note(c);
    return worst;
}

}  // namespace kf
