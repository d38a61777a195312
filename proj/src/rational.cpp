#include "kf/rational.hpp"

#include <cctype>

namespace kf {

Rat parse_rational(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("parse_rational: empty string");
    const auto digits10 = [&](const std::string& s) {
        try {
            return Int(s, 10);  // explicit base; leading zeros must not mean octal
        } catch (const std::invalid_argument&) {
            throw std::invalid_argument("parse_rational: malformed number '" + text + "'");
        }
    };
    const auto slash = text.find('/');
    if (slash != std::string::npos) {
        const std::string num = text.substr(0, slash);
        const std::string den = text.substr(slash + 1);
        if (num.empty() || den.empty())
            throw std::invalid_argument("parse_rational: malformed fraction '" + text + "'");
        return ratio(digits10(num), digits10(den));
    }
    const auto dot = text.find('.');
    if (dot == std::string::npos) return Rat(digits10(text));
    // decimal: digits.digits -> digits_digits / 10^frac_len, exactly
    std::string digits = text.substr(0, dot) + text.substr(dot + 1);
    const std::size_t frac_len = text.size() - dot - 1;
    if (digits.empty() || digits == "-" || digits == "+")
        throw std::invalid_argument("parse_rational: malformed decimal '" + text + "'");
    Int den(1);
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_len);
    return ratio(digits10(digits), den);
}

std::string rat_to_string(const Rat& q) {
    if (is_integer(q)) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
}

}  // namespace kf
