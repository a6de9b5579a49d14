#pragma once

// Reference implementations used only by the verification harness. Both are
// kept deliberately independent of the production solver: the eigenvalue
// oracle integrates with a Bogacki-Shampine 3(2) pair (different order,
// different code) directly in the radial variable, and the quadrature oracle
// is a plain adaptive Simpson rule.

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "gpe/critical.hpp"
#include "gpe/errors.hpp"

namespace gpe::verify_oracle {

namespace detail {

template <class RHS>
std::array<double, 2> bs32_integrate(RHS&& rhs, double x, std::array<double, 2> y, double x_end,
                                     double abs_tol, double rel_tol, double& x_reached,
                                     int& stop_reason, double stop_floor, double b) {
    // stop_reason: 0 none, 1 zero crossing, 2 turning point
    std::array<double, 2> k1 = rhs(x, y);
    double h = std::min(1e-3, 1e-2 * std::max(x, 1e-4));
    long guard = 0;
    while (x < x_end) {
        if (++guard > 200000000L) throw ConvergenceError("oracle integrator step cap");
        if (h < 1e-15 * std::max(x, 1.0)) throw StiffnessError("oracle step underflow");
        if (x + h > x_end) h = x_end - x;

        auto at = [&](double fx, double w1, double w2, double w3, const std::array<double, 2>& kk2,
                      const std::array<double, 2>& kk3) {
            std::array<double, 2> yy;
            for (int i = 0; i < 2; ++i) yy[i] = y[i] + h * (w1 * k1[i] + w2 * kk2[i] + w3 * kk3[i]);
            return rhs(x + fx * h, yy);
        };
        std::array<double, 2> zero{0.0, 0.0};
        std::array<double, 2> k2 = at(0.5, 0.5, 0.0, 0.0, zero, zero);
        std::array<double, 2> k3 = at(0.75, 0.0, 0.75, 0.0, k2, zero);
        std::array<double, 2> y_new;
        for (int i = 0; i < 2; ++i)
            y_new[i] = y[i] + h * (2.0 / 9 * k1[i] + 1.0 / 3 * k2[i] + 4.0 / 9 * k3[i]);
        std::array<double, 2> k4 = rhs(x + h, y_new);

        double err = 0.0;
        for (int i = 0; i < 2; ++i) {
            double zi = y[i] + h * (7.0 / 24 * k1[i] + 0.25 * k2[i] + 1.0 / 3 * k3[i] + 0.125 * k4[i]);
            double sc = abs_tol + rel_tol * std::max(std::fabs(y[i]), std::fabs(y_new[i]));
            double e = (y_new[i] - zi) / sc;
            err += e * e;
        }
        err = std::sqrt(0.5 * err);

        if (err <= 1.0) {
            x += h;
            y = y_new;
            k1 = k4;
            if (y[0] <= -stop_floor * b) { stop_reason = 1; break; }
            if (x >= 0.25 && y[1] > 0.0 && y[0] > stop_floor * b) { stop_reason = 2; break; }
            h *= std::clamp(0.9 * std::pow(std::max(err, 1e-30), -1.0 / 3.0), 0.2, 4.0);
        } else {
            h *= std::clamp(0.9 * std::pow(err, -1.0 / 3.0), 0.1, 0.5);
        }
    }
    x_reached = x;
    return y;
}

} // namespace detail

/// Reference lambda(b): own bootstrap, own integrator, own bisection.
inline double reference_lambda(double b, const CriticalParams& params, double tol_lambda = 1e-12,
                               double abs_tol = 1e-14, double rel_tol = 1e-13) {
    double p = params.p();
    double d = params.d();
    double r_stop = std::max(6.0, std::sqrt(2.0 * (d + 5.0)));
    double r0 = std::min(1e-3, 1e-3 * std::pow(b, -p));

    auto classify = [&](double lambda) {
        auto rhs = [&](double r, const std::array<double, 2>& y) -> std::array<double, 2> {
            double f = y[0], fp = y[1];
            return {fp, -(d - 1.0) / r * fp + r * r * f - lambda * f -
                            std::pow(std::fabs(f), 2.0 * p) * f};
        };
        double kap = p * (lambda + std::pow(b, 2.0 * p)) / (4.0 * (p + 1.0));
        std::array<double, 2> y0 = {b * (1.0 - kap * r0 * r0), -2.0 * b * kap * r0};
        double x_reached = r0;
        int reason = 0;
        detail::bs32_integrate(rhs, r0, y0, r_stop, abs_tol, rel_tol, x_reached, reason, 1e-12, b);
        return reason; // 1 over, 2 under, 0 ran out
    };

    double lo = 1e-14, hi = d - 1e-14;
    if (classify(lo) != 2 || classify(hi) != 1)
        throw BracketError("oracle bracket orientation failed");
    while (hi - lo > tol_lambda) {
        double mid = 0.5 * (lo + hi);
        int r = classify(mid);
        if (r == 2) lo = mid;
        else if (r == 1) hi = mid;
        else break;
    }
    return 0.5 * (lo + hi);
}

/// Adaptive Simpson quadrature.
template <class F>
double adaptive_simpson(F&& f, double a, double b, double tol, int depth = 40) {
    auto simpson = [&f](double x0, double x2) {
        double x1 = 0.5 * (x0 + x2);
        return std::array<double, 2>{x1, (x2 - x0) / 6.0 * (f(x0) + 4.0 * f(x1) + f(x2))};
    };
    struct Rec {
        double a, b, whole;
        int depth;
    };
    auto [m0, whole] = simpson(a, b);
    double total = 0.0;
    std::vector<Rec> stack{{a, b, whole, depth}};
    while (!stack.empty()) {
        Rec r = stack.back();
        stack.pop_back();
        double mid = 0.5 * (r.a + r.b);
        auto [ml, left] = simpson(r.a, mid);
        auto [mr, right] = simpson(mid, r.b);
        double delta = left + right - r.whole;
        if (r.depth <= 0 || std::fabs(delta) <= 15.0 * tol * (r.b - r.a) / (b - a)) {
            total += left + right + delta / 15.0;
        } else {
            stack.push_back({r.a, mid, left, r.depth - 1});
            stack.push_back({mid, r.b, right, r.depth - 1});
        }
    }
    return total;
}

/// Quadrature route to the homoclinic exponential moments, with its own
/// inline orbit formula. Integration bounds follow the tail decay rates.
inline double homoclinic_moment_quadrature(int k, double p, double tol = 1e-11) {
    double ap = p * p / (4.0 * (1.0 + p));
    if (2.0 / p - k <= 0.0) throw DivergenceError("moment integral diverges");
    auto integrand = [&](double t) {
        double theta = std::exp(t / p) * std::pow(1.0 + ap * std::exp(2.0 * t), -1.0 / p);
        return std::exp(k * t) * theta * theta;
    };
    double t_hi = 45.0 / (2.0 / p - k);
    double t_lo = -45.0 / (2.0 / p + k);
    return adaptive_simpson(integrand, t_lo, t_hi, tol);
}

} // namespace gpe::verify_oracle
