#include "fraisse/numeric_bounds.hpp"

#include <stdexcept>

namespace fraisse {

namespace {

// atanh(z) = sum_{j odd} z^j / j for 0 <= z < 1.
// Partial sums underestimate; the tail after the last included odd power J
// is bounded by z^(J+2) / ((J+2) * (1 - z^2)).
Enclosure atanh_enclosure(const Rational& z, const Rational& tol) {
    if (z < 0 || z >= 1) throw std::invalid_argument("atanh_enclosure: need 0 <= z < 1");
    if (z == 0) return {Rational(0), Rational(0)};
    const Rational z2 = z * z;
    const Rational one_minus_z2 = 1 - z2;
    Rational sum = 0;
    Rational power = z;  // z^j for the current odd j
    unsigned j = 1;
    while (true) {
        sum += power / j;
        power *= z2;
        j += 2;
        Rational tail = power / (Rational(j) * one_minus_z2);
        if (tail <= tol) return {sum, sum + tail};
    }
}

// Enclosure of exp(x) for x >= 0.
Enclosure exp_nonneg_enclosure(const Rational& x, const Rational& tol) {
    Rational sum = 1;
    Rational term = 1;  // x^j / j!
    unsigned j = 0;
    while (true) {
        ++j;
        term *= x / j;
        sum += term;
        // Remaining terms are term * x/(j+1) * (x/(j+1))^m ...; once x < j+1
        // they are dominated by a geometric series with ratio x/(j+1).
        if (x < Rational(j + 1)) {
            Rational ratio = x / (j + 1);
            Rational tail = term * ratio / (1 - ratio);
            if (tail <= tol) return {sum, sum + tail};
        }
    }
}

}  // namespace

Enclosure ln_enclosure(const Rational& x, const Rational& tol) {
    if (x <= 0) throw std::invalid_argument("ln_enclosure: need x > 0");
    if (tol <= 0) throw std::invalid_argument("ln_enclosure: need tol > 0");

    // Scale x into [1, 2): x = m * 2^s.
    Rational m = x;
    long s = 0;
    while (m >= 2) {
        m /= 2;
        ++s;
    }
    while (m < 1) {
        m *= 2;
        --s;
    }

    const Rational half_tol = tol / 2;
    Rational ln2_contrib_lo = 0, ln2_contrib_hi = 0;
    if (s != 0) {
        const Rational sub_tol = half_tol / (2 * (s > 0 ? s : -s));
        // ln 2 = 2*atanh(1/3)
        Enclosure ln2 = atanh_enclosure(Rational(1, 3), sub_tol);
        ln2.lo *= 2;
        ln2.hi *= 2;
        if (s > 0) {
            ln2_contrib_lo = s * ln2.lo;
            ln2_contrib_hi = s * ln2.hi;
        } else {
            ln2_contrib_lo = s * ln2.hi;
            ln2_contrib_hi = s * ln2.lo;
        }
    }

    // ln m = 2*atanh((m-1)/(m+1)), argument in [0, 1/3).
    Enclosure lnm = atanh_enclosure((m - 1) / (m + 1), half_tol / 4);
    lnm.lo *= 2;
    lnm.hi *= 2;

    return {ln2_contrib_lo + lnm.lo, ln2_contrib_hi + lnm.hi};
}

Enclosure exp_enclosure(const Rational& x, const Rational& tol) {
    if (tol <= 0) throw std::invalid_argument("exp_enclosure: need tol > 0");
    if (x >= 0) return exp_nonneg_enclosure(x, tol);
    // exp(x) = 1 / exp(-x); tighten the inner tolerance until the inverted
    // interval is narrow enough. exp(-x) >= 1 here, so width shrinks.
    Rational inner_tol = tol;
    while (true) {
        Enclosure e = exp_nonneg_enclosure(-x, inner_tol);
        Enclosure inv{1 / e.hi, 1 / e.lo};
        if (inv.width() <= tol) return inv;
        inner_tol /= 4;
    }
}

Rational sqrt_upper_bound(const Rational& x, const Rational& tol) {
    if (x < 0) throw std::invalid_argument("sqrt_upper_bound: need x >= 0");
    if (tol <= 0) throw std::invalid_argument("sqrt_upper_bound: need tol > 0");
    if (x == 0) return Rational(0);
    // sqrt(p/q) = sqrt(p*q)/q; scale so the integer-sqrt granularity 1/(q*S)
    // is below tol.
    const Integer p = numerator(x);
    const Integer q = denominator(x);
    Integer scale = 1;
    while (Rational(1, q * scale) > tol) scale *= 2;
    const Integer target = p * q * scale * scale;
    Integer root = sqrt(target);  // floor sqrt
    if (root * root < target) ++root;
    return Rational(root, q * scale);
}

}  // namespace fraisse
