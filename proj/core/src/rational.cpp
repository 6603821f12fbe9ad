#include "fraisse/rational.hpp"

#include <cctype>

namespace fraisse {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

}  // namespace

std::optional<Rational> parse_rational(std::string_view text) {
    bool negative = false;
    if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }
    std::string_view num = text;
    std::string_view den = "1";
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        num = text.substr(0, slash);
        den = text.substr(slash + 1);
    }
    if (!all_digits(num) || !all_digits(den)) return std::nullopt;
    Integer p{std::string(num)};
    Integer q{std::string(den)};
    if (q == 0) return std::nullopt;
    if (negative) p = -p;
    return Rational(p, q);
}

std::string to_string(const Rational& q) {
    std::string s = numerator(q).str();
    if (denominator(q) != 1) {
        s += '/';
        s += denominator(q).str();
    }
    return s;
}

Rational rational_abs(const Rational& q) { return q < 0 ? Rational(-q) : q; }

Integer rational_floor(const Rational& q) {
    Integer quot = numerator(q) / denominator(q);
    if (q < 0 && quot * denominator(q) != numerator(q)) --quot;
    return quot;
}

Integer rational_ceil(const Rational& q) { return -rational_floor(-q); }

}  // namespace fraisse
