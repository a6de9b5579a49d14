#pragma once

// Closed forms for the large-b behaviour of the eigenvalue curve: the
// three-branch constant C_p and law lambda(b) ~ C_p {b^{-2(1-p)}, b^{-1}log b,
// b^{-2p}}, the far-field prefactor A_p, and the exponential moments of the
// homoclinic orbit that the sub-half branch is built from.

#include <cmath>
#include <string>

#include "gpe/critical.hpp"
#include "gpe/errors.hpp"
#include "gpe/specfun.hpp"

namespace gpe::asymptotics {

enum class Branch { SubHalf, Half, SuperHalf };

inline const char* branch_name(Branch b) {
    switch (b) {
        case Branch::SubHalf: return "subhalf";
        case Branch::Half: return "half";
        default: return "superhalf";
    }
}

inline Branch branch_of(const CriticalParams& params) {
    if (!(params.p() < 1.0))
        throw DomainError("asymptotic laws cover p in (0, 1) only");
    if (params.is_half()) return Branch::Half;
    return params.p() < 0.5 ? Branch::SubHalf : Branch::SuperHalf;
}

/// Branch constant C_p:
///   p < 1/2 : 8 (1+p)^2 / (p^2 (1-2p))
///   p = 1/2 : 144
///   p > 1/2 : Gamma-ratio with prefactor [4(1+p)/p^2]^{1/p}
inline double constant_C(const CriticalParams& params) {
    double p = params.p();
    switch (branch_of(params)) {
        case Branch::SubHalf:
            return 8.0 * (1.0 + p) * (1.0 + p) / (p * p * (1.0 - 2.0 * p));
        case Branch::Half:
            return 144.0;
        default: {
            using specfun::gamma;
            double num = gamma((p + 1.0) / (2.0 * p)) * gamma(-1.0 / p) * gamma(2.0 / p);
            double den = (1.0 + p) * gamma((p - 1.0) / (2.0 * p)) * gamma(1.0 / p) *
                         gamma(1.0 / p - 1.0) * gamma(1.0 / p + 1.0);
            return -num / den * std::pow(4.0 * (1.0 + p) / (p * p), 1.0 / p);
        }
    }
}

/// The asymptotic law itself, evaluated at finite b (no accuracy claim at
/// small b).
inline double asym_lambda(double b, const CriticalParams& params) {
    if (!(b > 1.0)) throw DomainError("asym_lambda requires b > 1");
    double p = params.p();
    double C = constant_C(params);
    switch (branch_of(params)) {
        case Branch::SubHalf: return C * std::pow(b, -2.0 * p);
        case Branch::Half: return C * std::log(b) / b;
        default: return C * std::pow(b, -2.0 * (1.0 - p));
    }
}

/// Far-field prefactor A_p = alpha_p^{-1/p} Gamma((p+1)/(2p)) / Gamma(1/p),
/// the lambda -> 0 limit of the matched amplitude c(lambda, b) b.
inline double constant_A(const CriticalParams& params) {
    double p = params.p();
    if (!(p < 1.0)) throw DomainError("constant_A covers p in (0, 1) only");
    return std::pow(params.alpha_p(), -1.0 / p) * specfun::gamma((p + 1.0) / (2.0 * p)) /
           specfun::gamma(1.0 / p);
}

/// Exponential moments of the homoclinic orbit,
///   M_k = int e^{kt} Theta_h(t)^2 dt, k in {2, 4},
/// in Beta-integral closed form. M_2 needs p < 1, M_4 needs p < 1/2;
/// otherwise the integral diverges exponentially.
inline double homoclinic_moment(int k, const CriticalParams& params) {
    double p = params.p();
    double ip = 1.0 / p;
    double ap = params.alpha_p();
    using specfun::gamma;
    if (k == 2) {
        if (!(p < 1.0)) throw DivergenceError("e^{2t} moment diverges for p >= 1");
        return gamma(ip - 1.0) * gamma(ip + 1.0) / (2.0 * std::pow(ap, 1.0 + ip) * gamma(2.0 * ip));
    }
    if (k == 4) {
        if (!(p < 0.5)) throw DivergenceError("e^{4t} moment diverges for p >= 1/2");
        return gamma(ip - 2.0) * gamma(ip + 2.0) / (2.0 * std::pow(ap, 2.0 + ip) * gamma(2.0 * ip));
    }
    throw DomainError("homoclinic_moment supports k in {2, 4}");
}

/// Leading sub-half term 2(1+p) / (alpha_p (1-2p)) b^{-2p}; algebraically
/// equal to 2 M_4 / M_2 b^{-2p}.
inline double lambda_leading_subhalf(double b, const CriticalParams& params) {
    double p = params.p();
    if (!(p < 0.5)) throw DomainError("lambda_leading_subhalf requires p < 1/2");
    if (!(b > 1.0)) throw DomainError("lambda_leading_subhalf requires b > 1");
    return 2.0 * (1.0 + p) / (params.alpha_p() * (1.0 - 2.0 * p)) * std::pow(b, -2.0 * p);
}

struct AsymptoticLaw {
    double p;
    Branch branch;
    double C_p;
    double A_p;
    double b_power;    // exponent of b in the law
    bool log_factor;   // true only on the half branch

    static AsymptoticLaw for_params(const CriticalParams& params) {
        Branch br = branch_of(params);
        double p = params.p();
        double power = br == Branch::SubHalf ? -2.0 * p
                     : br == Branch::Half    ? -1.0
                                             : -2.0 * (1.0 - p);
        return {p, br, constant_C(params), constant_A(params), power, br == Branch::Half};
    }

    std::string formula() const {
        switch (branch) {
            case Branch::SubHalf: return "C_p * b^(-2p)";
            case Branch::Half: return "C_p * log(b) / b";
            default: return "C_p * b^(-2(1-p))";
        }
    }
};

} // namespace gpe::asymptotics
