#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace fraisse {

using Integer = boost::multiprecision::cpp_int;

// Exact rational carrier for all distances, predicate values and LP data.
// Always stored in lowest terms with positive denominator.
using Rational = boost::multiprecision::cpp_rational;

// Parses "p", "-p", "p/q" or "-p/q" with q > 0 after sign normalization.
// Reduction to lowest terms is automatic ("2/4" yields 1/2).
// Returns nullopt on malformed input or zero denominator.
std::optional<Rational> parse_rational(std::string_view text);

// "p" when the denominator is 1, "p/q" otherwise; lowest terms.
std::string to_string(const Rational& q);

Rational rational_abs(const Rational& q);

// Largest integer <= q and smallest integer >= q.
Integer rational_floor(const Rational& q);
Integer rational_ceil(const Rational& q);

}  // namespace fraisse
