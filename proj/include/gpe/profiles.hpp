#pragma once

// Closed-form reference profiles and the coordinate map between the radial
// and autonomous pictures: the algebraic (Aubin-Talenti) soliton, the
// homoclinic orbit of the truncated equation together with its first
// integral, the linear far-field solution, and the log-radius transform.

#include <cmath>

#include "gpe/critical.hpp"
#include "gpe/errors.hpp"
#include "gpe/specfun.hpp"

namespace gpe::profiles {

struct HomoclinicPoint {
    double theta;
    double theta_prime;
};

struct EmdenFowlerState {
    double t;
    double psi;
    double psi_prime;
};

struct RadialState {
    double r;
    double f;
    double f_prime;
};

namespace detail {

inline double logistic(double y) {
    if (y >= 0.0) return 1.0 / (1.0 + std::exp(-y));
    double e = std::exp(y);
    return e / (1.0 + e);
}

// log(1 + alpha_p e^{2t}) without overflowing e^{2t}.
inline double log1p_alpha_exp(double two_t, double alpha_p) {
    if (two_t > 36.0) return std::log(alpha_p) + two_t + std::log1p(std::exp(-two_t) / alpha_p);
    return std::log1p(alpha_p * std::exp(two_t));
}

} // namespace detail

/// Algebraic soliton U_b(r) = b (1 + alpha_p b^{2p} r^2)^{-1/p}, the exact
/// solution of -Delta U = U^{2p+1} normalised by U_b(0) = b. Evaluated in
/// log form so sweeps with b up to 1e4 stay finite at every radius.
inline double algebraic_soliton(double r, double b, const CriticalParams& params) {
    double p = params.p();
    double w = params.alpha_p() * std::pow(b, 2.0 * p) * r * r;
    return b * std::exp(-std::log1p(w) / p);
}

/// Finite-difference residual of -(U'' + (d-1)/r U') = U^{2p+1} at radius r,
/// central differences with step h. Requires r > 2h.
inline double soliton_pde_residual(double r, double b, const CriticalParams& params, double h) {
    if (!(h > 0.0) || !(r > 2.0 * h)) throw DomainError("soliton_pde_residual requires 0 < 2h < r");
    double p = params.p();
    double um = algebraic_soliton(r - h, b, params);
    double u0 = algebraic_soliton(r, b, params);
    double up = algebraic_soliton(r + h, b, params);
    double upp = (up - 2.0 * u0 + um) / (h * h);
    double upr = (up - um) / (2.0 * h);
    return -(upp + (params.d() - 1.0) / r * upr) - std::pow(u0, 2.0 * p + 1.0);
}

/// Homoclinic orbit of Theta'' - Theta/p^2 + Theta^{2p+1} = 0 at energy zero,
/// anchored at t0 = 0: Theta_h(t) = e^{t/p} (1 + alpha_p e^{2t})^{-1/p},
/// together with its exact derivative.
inline HomoclinicPoint homoclinic(double t, const CriticalParams& params) {
    double p = params.p();
    double ap = params.alpha_p();
    double L = detail::log1p_alpha_exp(2.0 * t, ap);
    double theta = std::exp(t / p - L / p);
    // sigma = alpha_p e^{2t} / (1 + alpha_p e^{2t})
    double sigma = detail::logistic(2.0 * t + std::log(ap));
    double theta_prime = theta * (1.0 - 2.0 * sigma) / p;
    return {theta, theta_prime};
}

/// First integral E = theta'^2/2 - theta^2/(2p^2) + theta^{2(p+1)}/(2(p+1));
/// zero along the homoclinic orbit.
inline double homoclinic_energy(double theta, double theta_prime, const CriticalParams& params) {
    double p = params.p();
    return 0.5 * theta_prime * theta_prime - theta * theta / (2.0 * p * p) +
           std::pow(theta * theta, p + 1.0) / (2.0 * (p + 1.0));
}

/// log of the decaying far-field solution Upsilon_h(t) =
/// e^{t/p} e^{-e^{2t}/2} U(e^{2t}; alpha, beta). The plain value underflows
/// past t ~ 1.9, and far-field matching needs magnitudes down to ~e^{-18},
/// so the log form is the workhorse.
inline double log_upsilon_h(double t, double lambda, const CriticalParams& params) {
    auto kp = specfun::KummerParams::for_eigenvalue(params, lambda);
    double z = std::exp(2.0 * t);
    return t / params.p() - 0.5 * z + std::log(specfun::tricomi_u(z, kp));
}

inline double upsilon_h(double t, double lambda, const CriticalParams& params) {
    return std::exp(log_upsilon_h(t, lambda, params));
}

/// Log-radius substitution t = log r, Psi = r^{1/p} f.
inline EmdenFowlerState emden_fowler_forward(double r, double f, double f_prime,
                                             const CriticalParams& params) {
    if (!(r > 0.0)) throw DomainError("emden_fowler_forward requires r > 0");
    double p = params.p();
    double scale = std::pow(r, 1.0 / p);
    return {std::log(r), scale * f, scale * (f / p + r * f_prime)};
}

inline RadialState emden_fowler_inverse(double t, double psi, double psi_prime,
                                        const CriticalParams& params) {
    double p = params.p();
    double r = std::exp(t);
    double inv_scale = std::pow(r, -1.0 / p);
    double f = psi * inv_scale;
    double f_prime = (psi_prime - psi / p) * inv_scale / r;
    return {r, f, f_prime};
}

} // namespace gpe::profiles
