#pragma once

// Real-argument special functions needed by the far-field solution family:
// Gamma, digamma, the Pochhammer symbol, the Kummer function M(z;a,b) and the
// Tricomi function U(z;a,b). Everything is self-contained; the Tricomi
// evaluation follows the classical three-way split (DLMF 13.2.42 connection
// formula, the logarithmic series 13.2.9 for integer second parameter, and
// the 13.7.3 inverse-power expansion at large z).

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include "gpe/critical.hpp"
#include "gpe/ddouble.hpp"
#include "gpe/errors.hpp"

namespace gpe::specfun {

/// Parameter pair (alpha, beta) of the confluent hypergeometric equation
/// z u'' + (beta - z) u' - alpha u = 0.
struct KummerParams {
    double alpha;
    double beta;

    KummerParams(double a, double b) : alpha(a), beta(b) {}

    /// Parameters attached to the eigenvalue problem: beta = 1 + 1/p and
    /// alpha = (p+1)/(2p) - lambda/4, positive for every lambda < d.
    static KummerParams for_eigenvalue(const CriticalParams& cp, double lambda) {
        double p = cp.p();
        double alpha = (p + 1.0) / (2.0 * p) - lambda / 4.0;
        double beta;
        if (cp.inverse_is_integer()) {
            beta = std::round(1.0 + 1.0 / p); // exact integer by construction
        } else {
            beta = 1.0 + 1.0 / p;
        }
        if (!(alpha > 0.0))
            throw DomainError("alpha = (p+1)/(2p) - lambda/4 must be positive; requires lambda < d");
        return {alpha, beta};
    }
};

namespace detail {

inline bool is_nonpositive_integer(double x, double tol = 0.0) {
    return x <= tol && std::fabs(x - std::round(x)) <= tol;
}

// sin(pi x) with argument reduction done on x itself, so the result stays
// fully accurate for large |x|.
inline double sinpi(double x) {
    double n = std::round(x);
    double f = x - n;
    double s = std::sin(M_PI * f);
    return std::fmod(std::fabs(n), 2.0) > 0.5 ? -s : s;
}

inline double cospi(double x) {
    double n = std::round(x);
    double f = x - n;
    double c = std::cos(M_PI * f);
    return std::fmod(std::fabs(n), 2.0) > 0.5 ? -c : c;
}

// Lanczos approximation, g = 7, 9 terms.
inline double lanczos_gamma_positive(double x) {
    static const double coeff[9] = {
        0.99999999999980993,
        676.5203681218851,
        -1259.1392167224028,
        771.32342877765313,
        -176.61502916214059,
        12.507343278686905,
        -0.13857109526572012,
        9.9843695780195716e-6,
        1.5056327351493116e-7,
    };
    double z = x - 1.0;
    double acc = coeff[0];
    for (int k = 1; k < 9; ++k) acc += coeff[k] / (z + k);
    double t = z + 7.5;
    return std::sqrt(2.0 * M_PI) * std::pow(t, z + 0.5) * std::exp(-t) * acc;
}

} // namespace detail

/// Gamma(x) for real x away from the poles at 0, -1, -2, ...
inline double gamma(double x) {
    if (detail::is_nonpositive_integer(x))
        throw PoleError("gamma pole at x = " + std::to_string(x));
    if (x >= 0.5) return detail::lanczos_gamma_positive(x);
    // reflection Gamma(x) Gamma(1-x) = pi / sin(pi x)
    return M_PI / (detail::sinpi(x) * detail::lanczos_gamma_positive(1.0 - x));
}

/// digamma(x) = Gamma'(x)/Gamma(x) away from the non-positive integers.
inline double digamma(double x) {
    if (detail::is_nonpositive_integer(x))
        throw PoleError("digamma pole at x = " + std::to_string(x));
    if (x < 0.5) {
        // psi(1-x) - psi(x) = pi cot(pi x)
        return digamma(1.0 - x) - M_PI * detail::cospi(x) / detail::sinpi(x);
    }
    double shift = 0.0;
    while (x < 12.0) {
        shift += 1.0 / x;
        x += 1.0;
    }
    // asymptotic series with Bernoulli coefficients B_{2k}/(2k)
    static const double d[7] = {
        1.0 / 12.0,   -1.0 / 120.0,        1.0 / 252.0,       -1.0 / 240.0,
        1.0 / 132.0,  -691.0 / 32760.0,    1.0 / 12.0,
    };
    double z2 = x * x;
    double zp = 1.0 / z2;
    double res = std::log(x) - 0.5 / x;
    for (double ck : d) {
        res -= ck * zp;
        zp /= z2;
    }
    return res - shift;
}

/// Rising factorial (x)_k = x (x+1) ... (x+k-1); (x)_0 = 1.
inline double pochhammer(double x, int k) {
    if (k < 0) throw DomainError("pochhammer requires k >= 0");
    double acc = 1.0;
    for (int i = 0; i < k; ++i) acc *= x + i;
    return acc;
}

/// Kummer function M(z; alpha, beta) by direct series summation. Terms are
/// accumulated until |term| < 1e-17 |partial sum| with a hard cap of 1e4
/// terms; hitting the cap while terms still grow is a convergence failure.
inline double kummer_m(double z, const KummerParams& params) {
    if (detail::is_nonpositive_integer(params.beta))
        throw DomainError("kummer_m undefined for non-positive integer beta");
    if (!std::isfinite(z)) throw DomainError("kummer_m requires finite z");
    constexpr int cap = 10000;
    double term = 1.0;
    double sum = 1.0;
    double prev_mag = 1.0;
    for (int k = 0; k < cap; ++k) {
        term *= (params.alpha + k) / (params.beta + k) * z / (k + 1.0);
        sum += term;
        double mag = std::fabs(term);
        if (!std::isfinite(mag))
            throw ConvergenceError("kummer_m series overflowed before converging");
        if (mag < 1e-17 * std::fabs(sum)) return sum;
        if (k == cap - 1 && mag > prev_mag)
            throw ConvergenceError("kummer_m series cap hit with growing terms");
        prev_mag = mag;
    }
    return sum;
}

namespace detail {

using dd::ddreal;

// Kummer series with double-double accumulation. Parameters arrive as dd so
// that shifts like 1 + alpha - beta keep their full residual.
inline ddreal kummer_series_dd(double z, ddreal a, ddreal b, int cap = 10000) {
    ddreal term{1.0};
    ddreal sum{1.0};
    ddreal zz{z};
    double prev_mag = 1.0;
    for (int k = 0; k < cap; ++k) {
        ddreal kk{double(k)};
        term = term * ((a + kk) / (b + kk)) * (zz / ddreal(k + 1.0));
        sum = sum + term;
        double mag = std::fabs(term.hi);
        if (mag < 1e-36 * std::fabs(sum.hi)) return sum;
        if (k == cap - 1 && mag > prev_mag)
            throw ConvergenceError("kummer series cap hit with growing terms");
        prev_mag = mag;
    }
    return sum;
}

inline ddreal pochhammer_dd(ddreal x, int k) {
    ddreal acc{1.0};
    for (int i = 0; i < k; ++i) acc = acc * (x + ddreal(double(i)));
    return acc;
}

// Connection formula for beta not an integer:
//   U = Gamma(1-b)/Gamma(1+a-b) M(z;a,b) + z^{1-b} Gamma(b-1)/Gamma(a) M(z;1+a-b,2-b).
// The two halves grow like e^z while U decays like z^-a, hence the dd
// accumulation. cancellation reports (|T1|+|T2|)/|T1+T2|.
inline double tricomi_connection(double z, double alpha, double beta, double* cancellation = nullptr) {
    ddreal a{alpha}, b{beta};
    ddreal one{1.0}, two{2.0};
    ddreal t1 = dd::tgamma(one - b) * dd::rgamma(one + a - b) * kummer_series_dd(z, a, b);
    ddreal t2 = dd::tgamma(b - one) * dd::rgamma(a) * dd::pow(ddreal(z), one - b) *
                kummer_series_dd(z, one + a - b, two - b);
    ddreal sum = t1 + t2;
    if (cancellation) {
        double big = std::fabs(t1.hi) + std::fabs(t2.hi);
        *cancellation = big / std::max(std::fabs(sum.hi), std::numeric_limits<double>::min());
    }
    return dd::to_double(sum);
}

// Logarithmic series for beta = n + 1 (DLMF 13.2.9):
//   U(z;a,n+1) = (-1)^{n+1}/(n! Gamma(a-n)) [ M(z;a,n+1) log z
//       + sum_k (a)_k/((n+1)_k k!) z^k (psi(a+k) - psi(1+k) - psi(1+n+k)) ]
//       + 1/Gamma(a) sum_{k=1}^{n} (k-1)! (1-a+k)_{n-k}/(n-k)! z^{-k}.
inline double tricomi_integer(double z, double alpha, int n) {
    ddreal a{alpha};
    ddreal zz{z};
    double nfact = 1.0;
    for (int i = 2; i <= n; ++i) nfact *= i;
    double sign = (n % 2 == 0) ? -1.0 : 1.0; // (-1)^{n+1}
    ddreal prefactor = dd::rgamma(a - ddreal(double(n))) * ddreal(sign / nfact);

    ddreal log_part = kummer_series_dd(z, a, ddreal(double(n + 1))) * dd::log(zz);

    // psi recurrences: psi(x+1) = psi(x) + 1/x
    ddreal psi_a = dd::digamma(a);
    ddreal psi_1 = dd::digamma(ddreal(1.0));
    ddreal psi_n1 = dd::digamma(ddreal(double(n + 1)));
    ddreal term{1.0};
    ddreal series{0.0};
    constexpr int cap = 10000;
    for (int k = 0; k < cap; ++k) {
        ddreal weight = psi_a - psi_1 - psi_n1;
        series = series + term * weight;
        double mag = std::fabs(term.hi) * (std::fabs(weight.hi) + 1.0);
        if (k > z && mag < 1e-36 * (std::fabs(series.hi) + 1.0)) break;
        ddreal kk{double(k)};
        term = term * ((a + kk) / ddreal(double(n + 1 + k))) * (zz / ddreal(k + 1.0));
        psi_a = psi_a + ddreal(1.0) / (a + kk);
        psi_1 = psi_1 + ddreal(1.0) / ddreal(k + 1.0);
        psi_n1 = psi_n1 + ddreal(1.0) / ddreal(double(n + 1 + k));
    }

    ddreal tail{0.0};
    double kfact = 1.0; // (k-1)! running
    for (int k = 1; k <= n; ++k) {
        if (k > 1) kfact *= (k - 1);
        double nkfact = 1.0;
        for (int i = 2; i <= n - k; ++i) nkfact *= i;
        ddreal poch = pochhammer_dd(ddreal(1.0) - a + ddreal(double(k)), n - k);
        tail = tail + ddreal(kfact / nkfact) * poch * dd::pow(zz, ddreal(double(-k)));
    }
    tail = tail * dd::rgamma(a);

    return dd::to_double(prefactor * (log_part + series) + tail);
}

// Large-z expansion U ~ z^-a sum_k (a)_k (a-b+1)_k / (k! (-z)^k), truncated
// at the smallest term; *err_rel reports the relative size of that term.
inline double tricomi_asymptotic(double z, double alpha, double beta, double* err_rel = nullptr) {
    double term = 1.0;
    double sum = 1.0;
    double smallest = 1.0;
    for (int k = 1; k < 400; ++k) {
        double next = term * (alpha + k - 1.0) * (alpha - beta + k) / (-z * k);
        if (std::fabs(next) >= std::fabs(term)) {
            smallest = std::fabs(next);
            break;
        }
        term = next;
        sum += term;
        smallest = std::fabs(term);
        if (smallest < 1e-18 * std::fabs(sum)) break;
    }
    if (err_rel) *err_rel = smallest / std::fabs(sum);
    return std::exp(-alpha * std::log(z)) * sum;
}

inline double tricomi_crossover(double alpha, double beta) {
    return std::max(30.0, 4.0 * std::fabs(alpha * (alpha - beta + 1.0)));
}

} // namespace detail

/// Tricomi function U(z; alpha, beta) for z > 0, alpha > 0, beta > 0.
/// Dispatch: connection formula for beta away from the integers, the
/// logarithmic series when beta is within 1e-6 of an integer, and the
/// inverse-power expansion above the crossover z >= max(30, 4|a(a-b+1)|).
/// Past z = 25 a connection result that cancels more than 1e6-fold is
/// rejected in favour of the asymptotic branch.
inline double tricomi_u(double z, const KummerParams& params) {
    double alpha = params.alpha;
    double beta = params.beta;
    if (!(z > 0.0)) throw DomainError("tricomi_u requires z > 0");
    if (!(alpha > 0.0)) throw DomainError("tricomi_u requires alpha > 0");
    if (!(beta > 0.0)) throw DomainError("tricomi_u supports beta > 0 only");

    double nb = std::round(beta);
    bool integer_beta = std::fabs(beta - nb) <= 1e-6 && nb >= 1.0;

    double asym_err = std::numeric_limits<double>::infinity();
    if (z >= detail::tricomi_crossover(alpha, beta)) {
        double u = detail::tricomi_asymptotic(z, alpha, beta, &asym_err);
        if (asym_err <= 1e-9) return u;
        // parameters too large for the expansion at this z; fall through
    }

    if (integer_beta) return detail::tricomi_integer(z, alpha, int(nb) - 1);

    double cancellation = 0.0;
    double u = detail::tricomi_connection(z, alpha, beta, &cancellation);
    if (z > 25.0 && cancellation > 1e6) {
        double ua = detail::tricomi_asymptotic(z, alpha, beta, &asym_err);
        if (asym_err <= 1e-9) return ua;
        // The compensated sum still carries ~1e-32 * cancellation of error;
        // usable until the ratio eats through the extended precision.
        if (cancellation > 1e20)
            throw AccuracyError("tricomi_u: no branch reaches tolerance at z = " + std::to_string(z));
    }
    return u;
}

} // namespace gpe::specfun
