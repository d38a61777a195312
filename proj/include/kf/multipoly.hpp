#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "kf/rational.hpp"

namespace kf {

/// Sparse multivariate polynomial with exact rational coefficients.
///
/// Variables are referred to by name and kept in lexicographic order, which
/// makes the term map canonical. A polynomial remembers every variable it was
/// declared over even if cancellation removes it from all terms, so
/// `derivative("c")` of a c-free polynomial is the zero polynomial rather
/// than an error. Values are immutable; all operations return new objects.
class MultiPoly {
  public:
    using Exps = std::vector<std::uint32_t>;  // one exponent per variable
    using TermMap = std::map<Exps, Rat>;

    MultiPoly() = default;  // zero polynomial over no variables

    static MultiPoly constant(const Rat& c);
    static MultiPoly constant(long c) { return constant(Rat(c)); }
    static MultiPoly variable(const std::string& name);

    const std::vector<std::string>& vars() const { return vars_; }
    const TermMap& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    /// Value of a constant polynomial (zero polynomial included).
    Rat constant_value() const;

    bool has_var(const std::string& name) const;
    unsigned degree(const std::string& var) const;
    unsigned total_degree() const;

    MultiPoly operator-() const;
    friend MultiPoly operator+(const MultiPoly& a, const MultiPoly& b);
    friend MultiPoly operator-(const MultiPoly& a, const MultiPoly& b);
    friend MultiPoly operator*(const MultiPoly& a, const MultiPoly& b);
    MultiPoly& operator+=(const MultiPoly& b) { return *this = *this + b; }
    MultiPoly& operator-=(const MultiPoly& b) { return *this = *this - b; }
    MultiPoly& operator*=(const MultiPoly& b) { return *this = *this * b; }
    friend MultiPoly operator*(const Rat& c, const MultiPoly& p);
    MultiPoly pow(unsigned e) const;

    /// Exact partial derivative. Unknown variable name -> invalid_argument.
    MultiPoly derivative(const std::string& var) const;

    /// Exact definite integral over var in [lo, hi]; var is removed from the
    /// variable list of the result. Unknown variable -> invalid_argument.
    MultiPoly integral(const std::string& var, const Rat& lo, const Rat& hi) const;

    /// Exact composition: substitute `value` for `var`.
    MultiPoly substitute(const std::string& var, const MultiPoly& value) const;
    MultiPoly substitute(const std::string& var, const Rat& value) const;

    /// Coefficients of powers of `var`, as polynomials over the remaining
    /// variables; index d holds the coefficient of var^d.
    std::vector<MultiPoly> coefficients_in(const std::string& var) const;

    /// Full evaluation; every variable of the polynomial must be bound.
    Rat eval(const std::map<std::string, Rat>& point) const;

    /// Divide by the positive content (gcd of numerators / lcm of
    /// denominators), yielding coprime integer coefficients. Sign is kept, so
    /// two polynomials equal up to a positive rational factor compare equal.
    MultiPoly primitive_part() const;

    /// Semantic equality: variable sets are aligned first, so declaring an
    /// unused variable does not break comparisons.
    friend bool operator==(const MultiPoly& a, const MultiPoly& b);
    friend bool operator!=(const MultiPoly& a, const MultiPoly& b) { return !(a == b); }

    std::string str() const;

  private:
    std::vector<std::string> vars_;  // sorted, unique
    TermMap terms_;                  // no zero coefficients stored

    int var_index(const std::string& name) const;  // -1 if absent
    MultiPoly remapped(const std::vector<std::string>& new_vars) const;
    void insert_term(const Exps& e, const Rat& c);

    friend void align(const MultiPoly& a, const MultiPoly& b, MultiPoly& ra, MultiPoly& rb);
};

}  // namespace kf
