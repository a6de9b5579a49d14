#pragma once

// Shooting solver for the radial eigenvalue problem
//   f'' + (d-1)/r f' - r^2 f + lambda f + |f|^{2p} f = 0,  f(0)=b, f'(0)=0.
// Trajectories are integrated with an embedded Dormand-Prince 5(4) pair and
// classified by the standard dichotomy (zero crossing vs turning point);
// bisection on lambda isolates the nodeless decaying connection and the
// far-field amplitude c is read off by dividing out the Gaussian-Tricomi
// envelope.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "gpe/critical.hpp"
#include "gpe/errors.hpp"
#include "gpe/profiles.hpp"
#include "gpe/specfun.hpp"

namespace gpe::shooting {

struct IntegratorSettings {
    double abs_tol = 1e-12;
    double rel_tol = 1e-11;
    double h_max = 0.05;      // radial step cap; also the time-step cap in log radius
    double uniform_dr = 0.0;  // > 0 forces step endpoints onto this spacing
    long max_steps = 4000000;
};

struct Trajectory {
    std::vector<double> r_grid;
    std::vector<double> f;
    std::vector<double> f_prime;
    double r_end = 0.0;
    long steps = 0;
    struct {
        double abs = 0.0;
        double rel = 0.0;
    } tol_used;

    std::size_t size() const { return r_grid.size(); }
};

enum class ShotTag { Overshoot, Undershoot, Converged };

struct ShotClass {
    ShotTag tag;
    double witness_r;
};

struct GroundState {
    double b = 0.0;
    double lambda = 0.0;
    double c = 0.0;
    Trajectory profile;
    double lambda_bracket_width = 0.0;
    double c_spread = 0.0;
};

/// Stop radius: beyond it the Gaussian factor dominates and double precision
/// underflows, so the far field is handled analytically instead.
inline double stop_radius(const CriticalParams& params) {
    return std::max(6.0, std::sqrt(2.0 * (params.d() + 5.0)));
}

/// Series bootstrap radius; the inner scale shrinks like b^{-p}.
inline double start_radius(double b, const CriticalParams& params) {
    return std::min(1e-3, 1e-3 * std::pow(b, -params.p()));
}

inline double decay_floor(double b) { return 1e-12 * b; }

/// Right-hand side of the first-order system in the radial variable:
/// returns (f', f'') with f'' = -(d-1)/r f' + r^2 f - lambda f - |f|^{2p} f.
inline std::array<double, 2> rhs_radial(double r, double f, double f_prime, double lambda,
                                        const CriticalParams& params) {
    if (!(r > 0.0)) throw DomainError("rhs_radial requires r > 0 (use the series bootstrap at r = 0)");
    double nl = std::pow(std::fabs(f), 2.0 * params.p());
    double dfp = -(params.d() - 1.0) / r * f_prime + r * r * f - lambda * f - nl * f;
    return {f_prime, dfp};
}

/// Second-order Taylor bootstrap of the regular solution at small r0:
/// f = b (1 - p (lambda + b^{2p}) / (4(p+1)) r0^2), truncation O(r0^4).
inline std::array<double, 2> series_start(double b, double lambda, double r0,
                                          const CriticalParams& params) {
    double p = params.p();
    double kappa = p * (lambda + std::pow(b, 2.0 * p)) / (4.0 * (p + 1.0));
    return {b * (1.0 - kappa * r0 * r0), -2.0 * b * kappa * r0};
}

namespace detail {

// |f|^{2p} with fast paths for the integer powers hit by p = 1/2 and p = 1.
struct NonlinearPower {
    double two_p;
    int mode; // 1: |f|, 2: f^2, 0: generic
    explicit NonlinearPower(double p) : two_p(2.0 * p) {
        if (std::fabs(two_p - 1.0) < 1e-14) mode = 1;
        else if (std::fabs(two_p - 2.0) < 1e-14) mode = 2;
        else mode = 0;
    }
    double operator()(double f) const {
        switch (mode) {
            case 1: return std::fabs(f);
            case 2: return f * f;
            default: return std::pow(std::fabs(f), two_p);
        }
    }
};

enum class StepOutcome { Ran, MonitorStop };

// Embedded Dormand-Prince 5(4) with PI step control. The monitor sees every
// accepted step and may stop the run.
template <class RHS, class HMax, class Monitor>
StepOutcome dopri5(RHS&& rhs, double x, std::array<double, 2> y, double x_end,
                   const IntegratorSettings& ctrl, HMax&& hmax_at, Monitor&& monitor,
                   long& step_count) {
    static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static constexpr double a21 = 1.0 / 5;
    static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                            a54 = -212.0 / 729;
    static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                            a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                            b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                            e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    auto eval = [&rhs](double xx, const std::array<double, 2>& yy) { return rhs(xx, yy); };

    std::array<double, 2> k1 = eval(x, y);
    double h = std::min({hmax_at(x), 1e-3 * (x_end - x) + 1e-12, 1e-2 * std::max(std::fabs(x), 1e-3)});
    h = std::max(h, 1e-12);
    double err_old = 1e-4;
    bool rejected = false;

    while (x < x_end) {
        if (step_count++ > ctrl.max_steps) throw ConvergenceError("integrator exceeded the step cap");
        if (h < 1e-14 * std::max(std::fabs(x), 1.0))
            throw StiffnessError("step underflow at x = " + std::to_string(x));
        h = std::min(h, hmax_at(x));
        if (ctrl.uniform_dr > 0.0) {
            double next = (std::floor(x / ctrl.uniform_dr + 1e-9) + 1.0) * ctrl.uniform_dr;
            if (next > x && next - x < h) h = next - x;
        }
        if (x + h > x_end) h = x_end - x;

        auto stage = [&](double frac, std::initializer_list<std::pair<double, const std::array<double, 2>*>> terms) {
            std::array<double, 2> yy = y;
            for (auto& [w, k] : terms) {
                yy[0] += h * w * (*k)[0];
                yy[1] += h * w * (*k)[1];
            }
            return eval(x + frac * h, yy);
        };

        std::array<double, 2> k2 = stage(c2, {{a21, &k1}});
        std::array<double, 2> k3 = stage(c3, {{a31, &k1}, {a32, &k2}});
        std::array<double, 2> k4 = stage(c4, {{a41, &k1}, {a42, &k2}, {a43, &k3}});
        std::array<double, 2> k5 = stage(c5, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}});
        std::array<double, 2> k6 = stage(1.0, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}});

        std::array<double, 2> y_new;
        for (int i = 0; i < 2; ++i)
            y_new[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        std::array<double, 2> k7 = eval(x + h, y_new);

        double err = 0.0;
        for (int i = 0; i < 2; ++i) {
            double ei = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
            double sc = ctrl.abs_tol + ctrl.rel_tol * std::max(std::fabs(y[i]), std::fabs(y_new[i]));
            err += (ei / sc) * (ei / sc);
        }
        err = std::sqrt(0.5 * err);

        if (err <= 1.0) {
            double x_new = x + h;
            bool stop = monitor(x, y, x_new, y_new);
            x = x_new;
            y = y_new;
            k1 = k7; // FSAL
            double fac = 0.9 * std::pow(std::max(err, 1e-30), -0.17) * std::pow(err_old, 0.04);
            fac = std::clamp(fac, 0.2, rejected ? 1.0 : 5.0);
            h *= fac;
            err_old = std::max(err, 1e-4);
            rejected = false;
            if (stop) return StepOutcome::MonitorStop;
        } else {
            h *= std::clamp(0.9 * std::pow(err, -0.2), 0.1, 0.5);
            rejected = true;
        }
    }
    return StepOutcome::Ran;
}

} // namespace detail

/// Integrate the initial-value problem for one (b, lambda) pair from the
/// bootstrap radius to the first classification event or the stop radius.
/// For b > 1e3 the inner region is integrated in log-radius variables, which
/// equidistributes resolution across the shrinking inner layer, and the run
/// switches to the radial form at r = 1.
inline Trajectory integrate_ivp(double b, double lambda, const CriticalParams& params,
                                const IntegratorSettings& ctrl = {}) {
    if (!(b > 0.0)) throw DomainError("integrate_ivp requires b > 0");
    double p = params.p();
    double d = params.d();
    double r_stop = stop_radius(params);
    double r0 = start_radius(b, params);
    double floor = decay_floor(b);
    detail::NonlinearPower nl(p);

    Trajectory traj;
    traj.tol_used = {ctrl.abs_tol, ctrl.rel_tol};
    auto record = [&traj](double r, double f, double fp) {
        traj.r_grid.push_back(r);
        traj.f.push_back(f);
        traj.f_prime.push_back(fp);
    };

    auto [f0, fp0] = series_start(b, lambda, r0, params);
    record(r0, f0, fp0);

    long steps = 0;
    bool event_fired = false;

    auto radial_rhs = [&](double r, const std::array<double, 2>& y) -> std::array<double, 2> {
        double f = y[0], fp = y[1];
        return {fp, -(d - 1.0) / r * fp + r * r * f - lambda * f - nl(f) * f};
    };
    auto radial_hmax = [&](double r) { return ctrl.h_max * std::clamp(r, 0.02, 1.0); };
    auto radial_monitor = [&](double, const std::array<double, 2>&, double r,
                              const std::array<double, 2>& y) {
        record(r, y[0], y[1]);
        if (y[0] <= -floor) { event_fired = true; return true; }
        if (r >= 0.25 && y[1] > 0.0 && y[0] > floor) { event_fired = true; return true; }
        return false;
    };

    double r_begin = r0;
    std::array<double, 2> y_begin = {f0, fp0};

    if (b > 1e3) {
        auto ef0 = profiles::emden_fowler_forward(r0, f0, fp0, params);
        double psi_scale = std::max(std::fabs(ef0.psi), 1e-300);
        auto ef_rhs = [&](double t, const std::array<double, 2>& y) -> std::array<double, 2> {
            double psi = y[0];
            double e2t = std::exp(2.0 * t);
            return {y[1], psi / (p * p) - nl(psi) * psi - lambda * e2t * psi + e2t * e2t * psi};
        };
        auto ef_hmax = [&](double) { return ctrl.h_max; };
        auto ef_monitor = [&](double, const std::array<double, 2>&, double t,
                              const std::array<double, 2>& y) {
            auto st = profiles::emden_fowler_inverse(t, y[0], y[1], params);
            record(st.r, st.f, st.f_prime);
            psi_scale = std::max(psi_scale, std::fabs(y[0]));
            if (y[0] <= -1e-6 * psi_scale) { event_fired = true; return true; }
            return false;
        };
        std::array<double, 2> ef_y = {ef0.psi, ef0.psi_prime};
        detail::dopri5(ef_rhs, ef0.t, ef_y, 0.0, ctrl, ef_hmax, ef_monitor, steps);
        traj.steps = steps;
        if (event_fired || traj.r_grid.empty()) {
            traj.r_end = traj.r_grid.back();
            return traj;
        }
        r_begin = traj.r_grid.back();
        y_begin = {traj.f.back(), traj.f_prime.back()};
    }

    if (!event_fired) {
        detail::dopri5(radial_rhs, r_begin, y_begin, r_stop, ctrl, radial_hmax, radial_monitor, steps);
    }
    traj.steps = steps;
    traj.r_end = traj.r_grid.back();
    return traj;
}

/// Classify a trajectory produced by integrate_ivp.
inline ShotClass classify(const Trajectory& traj, const CriticalParams& params) {
    if (traj.size() < 2) throw AmbiguousTrajectoryError("trajectory too short to classify");
    double b_proxy = traj.f.front();
    double floor = decay_floor(b_proxy);
    double f_end = traj.f.back();
    double fp_end = traj.f_prime.back();
    double r_end = traj.r_end;
    if (f_end <= -floor) return {ShotTag::Overshoot, r_end};
    if (fp_end > 0.0 && f_end > floor) return {ShotTag::Undershoot, r_end};
    if (r_end >= stop_radius(params) - 1e-9 && std::fabs(f_end) <= floor)
        return {ShotTag::Converged, r_end};
    throw AmbiguousTrajectoryError("trajectory ended at r = " + std::to_string(r_end) +
                                   " without firing a classification criterion");
}

struct ExtractOptions {
    double eps_nonlinear = 3e-4; // |f|^{2p} <= eps (r^2 + |lambda|) marks the linear zone
    double r_min = 2.0;
    double r_max = std::numeric_limits<double>::infinity();
    int min_samples = 8;
};

struct CAmplitude {
    double c = 0.0;
    double spread = 0.0;
    int samples = 0;
};

/// Far-field amplitude: c_i = f(r_i) e^{r_i^2/2} / U(r_i^2; alpha, beta) over
/// the window where the nonlinear term is negligible, evaluated in log space.
/// Returns the mean and the max-min dispersion over the window.
inline CAmplitude extract_c(const Trajectory& profile, double lambda, const CriticalParams& params,
                            const ExtractOptions& opts = {}) {
    auto kp = specfun::KummerParams::for_eigenvalue(params, lambda);
    double two_p = 2.0 * params.p();
    std::vector<double> log_c;
    for (std::size_t i = 0; i < profile.size(); ++i) {
        double r = profile.r_grid[i];
        double f = profile.f[i];
        if (r < opts.r_min || r > opts.r_max || !(f > 0.0)) continue;
        if (std::pow(f, two_p) > opts.eps_nonlinear * (r * r + std::fabs(lambda))) continue;
        double z = r * r;
        log_c.push_back(std::log(f) + 0.5 * z - std::log(specfun::tricomi_u(z, kp)));
    }
    if (int(log_c.size()) < opts.min_samples)
        throw WindowError("far-field window has " + std::to_string(log_c.size()) + " samples, need " +
                          std::to_string(opts.min_samples));
    double cmin = std::numeric_limits<double>::infinity();
    double cmax = -cmin;
    double mean = 0.0;
    for (double lc : log_c) {
        double ci = std::exp(lc);
        mean += ci;
        cmin = std::min(cmin, ci);
        cmax = std::max(cmax, ci);
    }
    mean /= double(log_c.size());
    double spread = cmax - cmin;
    if (spread > 0.05 * std::fabs(mean))
        throw InstabilityError("far-field amplitude estimates spread by " + std::to_string(spread) +
                               " around c = " + std::to_string(mean));
    return {mean, spread, int(log_c.size())};
}

namespace detail {

// Keep the strictly-positive, strictly-decreasing prefix of a profile.
inline Trajectory positive_decreasing_prefix(const Trajectory& traj) {
    Trajectory out;
    out.r_end = traj.r_end;
    out.steps = traj.steps;
    out.tol_used = traj.tol_used;
    for (std::size_t i = 0; i < traj.size(); ++i) {
        if (!(traj.f[i] > 0.0) || !(traj.f_prime[i] < 0.0)) break;
        out.r_grid.push_back(traj.r_grid[i]);
        out.f.push_back(traj.f[i]);
        out.f_prime.push_back(traj.f_prime[i]);
    }
    if (!out.r_grid.empty()) out.r_end = out.r_grid.back();
    return out;
}

} // namespace detail

/// Bisection on lambda over (0, d). The Overshoot/Undershoot orientation is
/// asserted on the initial bracket rather than assumed.
inline GroundState solve_lambda(double b, const CriticalParams& params, double tol_lambda = 1e-10,
                                const IntegratorSettings& ctrl = {}) {
    if (!(b > 0.0)) throw DomainError("solve_lambda requires b > 0");
    if (!(tol_lambda > 0.0)) throw DomainError("solve_lambda requires tol_lambda > 0");
    double d = params.d();
    double lo = 1e-14;
    double hi = d - 1e-14;

    auto shoot = [&](double lambda) { return classify(integrate_ivp(b, lambda, params, ctrl), params); };

    ShotClass cls_lo = shoot(lo);
    ShotClass cls_hi = shoot(hi);
    if (cls_lo.tag != ShotTag::Undershoot || cls_hi.tag != ShotTag::Overshoot)
        throw BracketError("initial bracket (0, d) does not classify as {Undershoot, Overshoot} for b = " +
                           std::to_string(b));

    double lambda = 0.5 * (lo + hi);
    bool converged_mid = false;
    int iter = 0;
    while (hi - lo > tol_lambda) {
        if (++iter > 200)
            throw ConvergenceError("lambda bisection exceeded 200 steps at b = " + std::to_string(b));
        double mid = 0.5 * (lo + hi);
        ShotClass cls = shoot(mid);
        if (cls.tag == ShotTag::Converged) {
            lambda = mid;
            converged_mid = true;
            break;
        }
        if (cls.tag == ShotTag::Undershoot) lo = mid;
        else hi = mid;
    }
    if (!converged_mid) lambda = 0.5 * (lo + hi);

    Trajectory full = integrate_ivp(b, lambda, params, ctrl);
    GroundState gs;
    gs.b = b;
    gs.lambda = lambda;
    gs.lambda_bracket_width = hi - lo;
    gs.profile = detail::positive_decreasing_prefix(full);

    ExtractOptions opts;
    opts.r_max = std::sqrt(std::max(4.0, 0.85 * -std::log(std::max(10.0 * tol_lambda, 1e-300))));
    // The bracket residual delta-lambda contaminates the tail like
    // e^{r^2} delta-lambda, so on instability retry with a shorter window.
    for (int attempt = 0;; ++attempt) {
        try {
            auto amp = extract_c(gs.profile, lambda, params, opts);
            gs.c = amp.c;
            gs.c_spread = amp.spread;
            break;
        } catch (const InstabilityError&) {
            if (attempt >= 6 || opts.r_max - 0.3 < opts.r_min + 0.3) throw;
            opts.r_max -= 0.3;
        }
    }
    return gs;
}

/// Profile export: header `r,f,fp`, one row per grid point, 17 significant digits.
inline void write_profile_csv(std::ostream& os, const Trajectory& traj) {
    os << "r,f,fp\n";
    char line[128];
    for (std::size_t i = 0; i < traj.size(); ++i) {
        std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g\n", traj.r_grid[i], traj.f[i],
                      traj.f_prime[i]);
        os << line;
    }
}

} // namespace gpe::shooting
