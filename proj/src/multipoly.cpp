#include "kf/multipoly.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>

namespace kf {

MultiPoly MultiPoly::constant(const Rat& c) {
    MultiPoly p;
    if (c != 0) p.terms_.emplace(Exps{}, c);
    return p;
}

MultiPoly MultiPoly::variable(const std::string& name) {
    MultiPoly p;
    p.vars_ = {name};
    p.terms_.emplace(Exps{1}, Rat(1));
    return p;
}

bool MultiPoly::is_constant() const {
    if (terms_.empty()) return true;
    if (terms_.size() > 1) return false;
    const Exps& e = terms_.begin()->first;
    return std::all_of(e.begin(), e.end(), [](std::uint32_t x) { return x == 0; });
}

Rat MultiPoly::constant_value() const {
    if (is_zero()) return Rat(0);
    if (!is_constant()) throw std::invalid_argument("constant_value: polynomial is not constant");
    return terms_.begin()->second;
}

bool MultiPoly::has_var(const std::string& name) const { return var_index(name) >= 0; }

int MultiPoly::var_index(const std::string& name) const {
    auto it = std::lower_bound(vars_.begin(), vars_.end(), name);
    if (it == vars_.end() || *it != name) return -1;
    return static_cast<int>(it - vars_.begin());
}

unsigned MultiPoly::degree(const std::string& var) const {
    const int idx = var_index(var);
    if (idx < 0) return 0;
    unsigned d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, e[idx]);
    return d;
}

unsigned MultiPoly::total_degree() const {
    unsigned d = 0;
    for (const auto& [e, c] : terms_) {
        unsigned t = 0;
        for (auto x : e) t += x;
        d = std::max(d, t);
    }
    return d;
}

MultiPoly MultiPoly::remapped(const std::vector<std::string>& new_vars) const {
    // new_vars must be a sorted superset of vars_
    std::vector<int> pos(vars_.size());
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        auto it = std::lower_bound(new_vars.begin(), new_vars.end(), vars_[i]);
        assert(it != new_vars.end() && *it == vars_[i]);
        pos[i] = static_cast<int>(it - new_vars.begin());
    }
    MultiPoly r;
    r.vars_ = new_vars;
    for (const auto& [e, c] : terms_) {
        Exps ne(new_vars.size(), 0);
        for (std::size_t i = 0; i < e.size(); ++i) ne[pos[i]] = e[i];
        r.terms_.emplace(std::move(ne), c);
    }
    return r;
}

void align(const MultiPoly& a, const MultiPoly& b, MultiPoly& ra, MultiPoly& rb) {
    if (a.vars_ == b.vars_) {
        ra = a;
        rb = b;
        return;
    }
    std::vector<std::string> u;
    std::set_union(a.vars_.begin(), a.vars_.end(), b.vars_.begin(), b.vars_.end(),
                   std::back_inserter(u));
    ra = a.remapped(u);
    rb = b.remapped(u);
}

void MultiPoly::insert_term(const Exps& e, const Rat& c) {
    if (c == 0) return;
    auto [it, fresh] = terms_.emplace(e, c);
    if (!fresh) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

MultiPoly MultiPoly::operator-() const {
    MultiPoly r(*this);
    for (auto& [e, c] : r.terms_) c = -c;
    return r;
}

MultiPoly operator+(const MultiPoly& a, const MultiPoly& b) {
    MultiPoly ra, rb;
    align(a, b, ra, rb);
    for (const auto& [e, c] : rb.terms_) ra.insert_term(e, c);
    return ra;
}

MultiPoly operator-(const MultiPoly& a, const MultiPoly& b) {
    MultiPoly ra, rb;
    align(a, b, ra, rb);
    for (const auto& [e, c] : rb.terms_) ra.insert_term(e, -c);
    return ra;
}

MultiPoly operator*(const MultiPoly& a, const MultiPoly& b) {
    MultiPoly ra, rb;
    align(a, b, ra, rb);
    MultiPoly r;
    r.vars_ = ra.vars_;
    const std::size_t nv = r.vars_.size();
    MultiPoly::Exps e(nv);
    Rat prod;
    for (const auto& [ea, ca] : ra.terms_) {
        for (const auto& [eb, cb] : rb.terms_) {
            for (std::size_t i = 0; i < nv; ++i) e[i] = ea[i] + eb[i];
            prod = ca * cb;
            r.insert_term(e, prod);
        }
    }
    return r;
}

MultiPoly operator*(const Rat& c, const MultiPoly& p) {
    if (c == 0) {
        MultiPoly z;
        z = z.remapped(p.vars_);
        return z;
    }
    MultiPoly r(p);
    for (auto& [e, v] : r.terms_) v *= c;
    return r;
}

MultiPoly MultiPoly::pow(unsigned e) const {
    MultiPoly r = constant(1);
    for (unsigned i = 0; i < e; ++i) r = r * *this;
    return r;
}

MultiPoly MultiPoly::derivative(const std::string& var) const {
    const int idx = var_index(var);
    if (idx < 0) {
        if (vars_.empty() && terms_.empty()) return MultiPoly();  // d/dv 0 = 0
        throw std::invalid_argument("derivative: unknown variable '" + var + "'");
    }
    MultiPoly r;
    r.vars_ = vars_;
    for (const auto& [e, c] : terms_) {
        if (e[idx] == 0) continue;
        Exps ne = e;
        ne[idx] -= 1;
        r.insert_term(ne, c * Rat(e[idx]));
    }
    return r;
}

MultiPoly MultiPoly::integral(const std::string& var, const Rat& lo, const Rat& hi) const {
    const int idx = var_index(var);
    if (idx < 0) {
        if (vars_.empty()) return (hi - lo) * *this;
        throw std::invalid_argument("integral: unknown variable '" + var + "'");
    }
    std::vector<std::string> rest = vars_;
    rest.erase(rest.begin() + idx);
    MultiPoly r;
    r.vars_ = rest;
    for (const auto& [e, c] : terms_) {
        const unsigned long d = e[idx];
        const Rat weight = c / Rat(d + 1) * (rat_pow(hi, d + 1) - rat_pow(lo, d + 1));
        Exps ne;
        ne.reserve(e.size() - 1);
        for (std::size_t i = 0; i < e.size(); ++i)
            if (static_cast<int>(i) != idx) ne.push_back(e[i]);
        r.insert_term(ne, weight);
    }
    return r;
}

std::vector<MultiPoly> MultiPoly::coefficients_in(const std::string& var) const {
    const int idx = var_index(var);
    if (idx < 0) return {*this};
    std::vector<std::string> rest = vars_;
    rest.erase(rest.begin() + idx);
    std::vector<MultiPoly> out(degree(var) + 1);
    for (auto& p : out) p.vars_ = rest;
    for (const auto& [e, c] : terms_) {
        Exps ne;
        ne.reserve(e.size() - 1);
        for (std::size_t i = 0; i < e.size(); ++i)
            if (static_cast<int>(i) != idx) ne.push_back(e[i]);
        out[e[idx]].insert_term(ne, c);
    }
    return out;
}

MultiPoly MultiPoly::substitute(const std::string& var, const MultiPoly& value) const {
    const int idx = var_index(var);
    if (idx < 0) throw std::invalid_argument("substitute: unknown variable '" + var + "'");
    // Horner in var over coefficient polynomials.
    std::vector<MultiPoly> cs = coefficients_in(var);
    MultiPoly r = cs.back();
    for (std::size_t d = cs.size() - 1; d-- > 0;) r = r * value + cs[d];
    return r;
}

MultiPoly MultiPoly::substitute(const std::string& var, const Rat& value) const {
    return substitute(var, constant(value));
}

Rat MultiPoly::eval(const std::map<std::string, Rat>& point) const {
    MultiPoly p = *this;
    for (const auto& name : vars_) {
        auto it = point.find(name);
        if (it == point.end())
            throw std::invalid_argument("eval: unbound variable '" + name + "'");
        p = p.substitute(name, it->second);
    }
    return p.constant_value();
}

MultiPoly MultiPoly::primitive_part() const {
    if (is_zero()) return *this;
    Int num_gcd(0), den_lcm(1);
    for (const auto& [e, c] : terms_) {
        mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), c.get_num_mpz_t());
        mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den_mpz_t());
    }
    const Rat content = ratio(num_gcd, den_lcm);  // positive by construction
    MultiPoly r(*this);
    for (auto& [e, c] : r.terms_) c /= content;
    return r;
}

bool operator==(const MultiPoly& a, const MultiPoly& b) {
    MultiPoly ra, rb;
    align(a, b, ra, rb);
    return ra.terms_ == rb.terms_;
}

std::string MultiPoly::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
        if (!first) os << " + ";
        first = false;
        os << rat_to_string(c);
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] == 0) continue;
            os << "*" << vars_[i];
            if (e[i] > 1) os << "^" << e[i];
        }
    }
    return os.str();
}

}  // namespace kf
