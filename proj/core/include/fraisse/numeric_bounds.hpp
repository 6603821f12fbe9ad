#pragma once

#include "fraisse/rational.hpp"

namespace fraisse {

// Certified rational enclosure: lo <= value <= hi.
struct Enclosure {
    Rational lo;
    Rational hi;

    Rational width() const { return hi - lo; }
};

// Enclosure of ln(x) for rational x > 0 with width <= tol.
// Series: x is scaled into [1,2) by powers of two, then
// ln(m) = 2*atanh((m-1)/(m+1)) with an explicit tail bound.
Enclosure ln_enclosure(const Rational& x, const Rational& tol);

// Enclosure of exp(x) for rational x with width <= tol.
// Taylor series with an explicit geometric tail bound; negative arguments
// go through exp(x) = 1/exp(-x) with interval inversion.
Enclosure exp_enclosure(const Rational& x, const Rational& tol);

// Rational u with u >= sqrt(x) and u - sqrt(x) <= tol (x >= 0).
Rational sqrt_upper_bound(const Rational& x, const Rational& tol);

}  // namespace fraisse
