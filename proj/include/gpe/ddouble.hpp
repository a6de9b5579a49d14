#pragma once

// Compensated double-double arithmetic used internally by the confluent
// hypergeometric evaluations. The connection formula sums two Kummer series
// whose individual magnitudes grow like e^z while the result decays like
// z^-alpha, so the working precision must carry roughly twice the digits of
// the final answer. A hi/lo pair gives ~31 significant digits, which keeps
// the cancellation loss below 1e-9 for every argument up to the asymptotic
// crossover.

#include <array>
#include <cmath>
#include <limits>

namespace gpe::dd {

struct ddreal {
    double hi = 0.0;
    double lo = 0.0;
    constexpr ddreal() = default;
    constexpr ddreal(double h) : hi(h) {}
    constexpr ddreal(double h, double l) : hi(h), lo(l) {}
};

inline double to_double(ddreal a) { return a.hi + a.lo; }

inline ddreal two_sum(double a, double b) {
    double s = a + b;
    double bb = s - a;
    return {s, (a - (s - bb)) + (b - bb)};
}

// Requires |a| >= |b| (or a == 0).
inline ddreal quick_two_sum(double a, double b) {
    double s = a + b;
    return {s, b - (s - a)};
}

inline ddreal two_prod(double a, double b) {
    double p = a * b;
    return {p, std::fma(a, b, -p)};
}

inline ddreal operator+(ddreal a, ddreal b) {
    ddreal s = two_sum(a.hi, b.hi);
    ddreal t = two_sum(a.lo, b.lo);
    s.lo += t.hi;
    s = quick_two_sum(s.hi, s.lo);
    s.lo += t.lo;
    return quick_two_sum(s.hi, s.lo);
}

inline ddreal operator-(ddreal a) { return {-a.hi, -a.lo}; }
inline ddreal operator-(ddreal a, ddreal b) { return a + (-b); }

inline ddreal operator*(ddreal a, ddreal b) {
    ddreal p = two_prod(a.hi, b.hi);
    p.lo += a.hi * b.lo + a.lo * b.hi;
    return quick_two_sum(p.hi, p.lo);
}

inline ddreal operator/(ddreal a, ddreal b) {
    double q1 = a.hi / b.hi;
    ddreal r = a - ddreal(q1) * b;
    double q2 = r.hi / b.hi;
    r = r - ddreal(q2) * b;
    double q3 = r.hi / b.hi;
    ddreal q = quick_two_sum(q1, q2);
    return q + ddreal(q3);
}

inline ddreal abs(ddreal a) { return a.hi < 0.0 ? -a : a; }
inline bool operator<(ddreal a, ddreal b) {
    return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo);
}

inline ddreal ldexp(ddreal a, int k) {
    return {std::ldexp(a.hi, k), std::ldexp(a.lo, k)};
}

inline constexpr ddreal pi_dd{3.141592653589793116e+00, 1.2246467991473531772e-16};
inline constexpr ddreal ln2_dd{6.9314718055994530942e-01, 2.3190468138462995584e-17};

inline ddreal exp(ddreal x) {
    if (x.hi > 709.0) return {std::numeric_limits<double>::infinity(), 0.0};
    if (x.hi < -745.0) return {0.0, 0.0};
    double k = std::round(x.hi / ln2_dd.hi);
    ddreal r = x - ddreal(k) * ln2_dd;
    ddreal sum{1.0};
    ddreal term{1.0};
    for (int i = 1; i < 48; ++i) {
        term = term * r / ddreal(double(i));
        sum = sum + term;
        if (std::fabs(term.hi) < 1e-36 * std::fabs(sum.hi)) break;
    }
    return ldexp(sum, int(k));
}

// Natural log for x > 0; a double seed refined by Newton steps in dd.
inline ddreal log(ddreal x) {
    ddreal y{std::log(x.hi)};
    for (int it = 0; it < 2; ++it) y = y + x * exp(-y) - ddreal(1.0);
    return y;
}

inline ddreal pow(ddreal base, ddreal e) { return exp(e * log(base)); }

inline ddreal sinpi(ddreal x) {
    double n = std::round(x.hi);
    ddreal f = x - ddreal(n);
    ddreal s = pi_dd * f;
    ddreal s2 = s * s;
    ddreal term = s;
    ddreal sum = s;
    for (int i = 1; i < 26; ++i) {
        term = -(term * s2) / ddreal(double(2 * i) * double(2 * i + 1));
        sum = sum + term;
        if (std::fabs(term.hi) < 1e-36 * std::fabs(sum.hi)) break;
    }
    return std::fmod(std::fabs(n), 2.0) > 0.5 ? -sum : sum;
}

namespace detail {

// B_{2k} / (2k (2k-1)) for the Stirling series of log Gamma.
inline const std::array<ddreal, 15>& lgamma_coeffs() {
    static const std::array<ddreal, 15> c = {
        ddreal(1.0) / ddreal(12.0),
        ddreal(-1.0) / ddreal(360.0),
        ddreal(1.0) / ddreal(1260.0),
        ddreal(-1.0) / ddreal(1680.0),
        ddreal(1.0) / ddreal(1188.0),
        ddreal(-691.0) / ddreal(360360.0),
        ddreal(1.0) / ddreal(156.0),
        ddreal(-3617.0) / ddreal(122400.0),
        ddreal(43867.0) / ddreal(244188.0),
        ddreal(-174611.0) / ddreal(125400.0),
        ddreal(854513.0) / ddreal(63756.0),
        ddreal(-236364091.0) / ddreal(1506960.0),
        ddreal(8553103.0) / ddreal(3900.0),
        ddreal(-23749461029.0) / ddreal(657720.0),
        ddreal(8615841276005.0) / ddreal(12460140.0),
    };
    return c;
}

// B_{2k} / (2k) for the asymptotic digamma series.
inline const std::array<ddreal, 15>& digamma_coeffs() {
    static const std::array<ddreal, 15> c = {
        ddreal(1.0) / ddreal(12.0),
        ddreal(-1.0) / ddreal(120.0),
        ddreal(1.0) / ddreal(252.0),
        ddreal(-1.0) / ddreal(240.0),
        ddreal(1.0) / ddreal(132.0),
        ddreal(-691.0) / ddreal(32760.0),
        ddreal(1.0) / ddreal(12.0),
        ddreal(-3617.0) / ddreal(8160.0),
        ddreal(43867.0) / ddreal(14364.0),
        ddreal(-174611.0) / ddreal(6600.0),
        ddreal(854513.0) / ddreal(3036.0),
        ddreal(-236364091.0) / ddreal(65520.0),
        ddreal(8553103.0) / ddreal(156.0),
        ddreal(-23749461029.0) / ddreal(24360.0),
        ddreal(8615841276005.0) / ddreal(429660.0),
    };
    return c;
}

inline ddreal half_log_two_pi() {
    static const ddreal v = log(ldexp(pi_dd, 1)) / ddreal(2.0);
    return v;
}

} // namespace detail

// log Gamma(x) for x > 0. Arguments below the Stirling threshold are lifted
// by the recurrence Gamma(x) = Gamma(x+m) / (x (x+1) ... (x+m-1)).
inline ddreal lgamma(ddreal x) {
    ddreal z = x;
    ddreal prod{1.0};
    bool shifted = false;
    while (z.hi < 40.0) {
        prod = prod * z;
        z = z + ddreal(1.0);
        shifted = true;
    }
    ddreal lz = log(z);
    ddreal res = (z - ddreal(0.5)) * lz - z + detail::half_log_two_pi();
    ddreal z2 = z * z;
    ddreal zp = ddreal(1.0) / z;
    for (const ddreal& c : detail::lgamma_coeffs()) {
        res = res + c * zp;
        zp = zp / z2;
    }
    if (shifted) res = res - log(prod);
    return res;
}

// Gamma(x) on the whole real line away from poles; negative arguments go
// through the reflection Gamma(x) Gamma(1-x) = pi / sin(pi x).
inline ddreal tgamma(ddreal x) {
    if (x.hi >= 0.5) return exp(lgamma(x));
    return pi_dd / (sinpi(x) * exp(lgamma(ddreal(1.0) - x)));
}

// 1 / Gamma(x); entire, zero at non-positive integers.
inline ddreal rgamma(ddreal x) {
    if (x.hi >= 0.5) return exp(-lgamma(x));
    return sinpi(x) * exp(lgamma(ddreal(1.0) - x)) / pi_dd;
}

// digamma(x) for x > 0 via recurrence plus the asymptotic series.
inline ddreal digamma(ddreal x) {
    ddreal z = x;
    ddreal shift{0.0};
    while (z.hi < 40.0) {
        shift = shift + ddreal(1.0) / z;
        z = z + ddreal(1.0);
    }
    ddreal res = log(z) - ddreal(0.5) / z;
    ddreal z2 = z * z;
    ddreal zp = ddreal(1.0) / z2;
    for (const ddreal& c : detail::digamma_coeffs()) {
        res = res - c * zp;
        zp = zp / z2;
    }
    return res - shift;
}

} // namespace gpe::dd
