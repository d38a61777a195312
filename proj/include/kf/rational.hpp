#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace kf {

using Int = mpz_class;
using Rat = mpq_class;

// Thrown when a computation cannot proceed for numerical reasons
// (divergent optimization, non-finite kernel values, ...).
struct NumericError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Thrown on malformed files / unwritable outputs.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// mpq_class arithmetic keeps values canonical, but two-argument
// construction does not; every Rat built from a fraction goes through here.
inline Rat ratio(const Int& num, const Int& den) {
    if (den == 0) throw std::invalid_argument("ratio: zero denominator");
    Rat q(num, den);
    q.canonicalize();
    return q;
}

inline Rat ratio(long num, long den) { return ratio(Int(num), Int(den)); }

inline Int rat_floor(const Rat& q) {
    Int r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

inline Int rat_ceil(const Rat& q) {
    Int r;
    mpz_cdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

inline bool is_integer(const Rat& q) { return q.get_den() == 1; }

inline Rat rat_pow(const Rat& q, unsigned long e) {
    Rat r;
    mpz_pow_ui(r.get_num_mpz_t(), q.get_num_mpz_t(), e);
    mpz_pow_ui(r.get_den_mpz_t(), q.get_den_mpz_t(), e);
    return r;  // powers of a canonical fraction stay canonical
}

inline double to_double(const Rat& q) { return q.get_d(); }

// Exact: every finite double is a dyadic rational.
inline Rat rat_from_double(double x) {
    Rat q(x);
    q.canonicalize();
    return q;
}

// "n", "n/d", or a decimal string such as "-1.581352" (parsed exactly).
Rat parse_rational(const std::string& text);

// "n" when integral, "n/d" otherwise.
std::string rat_to_string(const Rat& q);

}  // namespace kf
