#pragma once

// Batch machinery around the solver: b-sweeps with a worker pool, log-log
// power-law fits against the eigenvalue laws, pointwise-bound audits of a
// converged state, and CSV/JSON persistence.

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "gpe/asymptotics.hpp"
#include "gpe/critical.hpp"
#include "gpe/errors.hpp"
#include "gpe/profiles.hpp"
#include "gpe/shooting.hpp"

namespace gpe::harness {

struct SweepRecord {
    double b = 0.0;
    double lambda = std::numeric_limits<double>::quiet_NaN();
    double c = std::numeric_limits<double>::quiet_NaN();
    double lambda_bracket_width = std::numeric_limits<double>::quiet_NaN();
    double c_spread = std::numeric_limits<double>::quiet_NaN();
    double wall_time_ms = 0.0;
    std::string status = "ok";

    bool ok() const { return status == "ok"; }
};

inline int resolve_jobs(int requested) {
    if (const char* env = std::getenv("GPE_JOBS")) {
        int n = std::atoi(env);
        if (n > 0) return n;
    }
    if (requested > 0) return requested;
    unsigned hc = std::thread::hardware_concurrency();
    return hc > 0 ? int(hc) : 1;
}

struct SweepOptions {
    double tol_lambda = 1e-10;
    int jobs = 0; // 0: GPE_JOBS env or hardware concurrency
    shooting::IntegratorSettings integrator;
};

/// Geometric grid with `per_decade` points per decade, endpoints included.
inline std::vector<double> geometric_grid(double b_min, double b_max, int per_decade) {
    if (!(b_min > 0.0) || !(b_max >= b_min) || per_decade < 1)
        throw DomainError("geometric_grid requires 0 < b_min <= b_max and per_decade >= 1");
    std::vector<double> grid;
    double lo = std::log10(b_min);
    double hi = std::log10(b_max);
    int n = int(std::ceil((hi - lo) * per_decade - 1e-9));
    for (int k = 0; k <= n; ++k) grid.push_back(std::pow(10.0, lo + double(k) / per_decade));
    if (grid.back() < b_max * (1.0 - 1e-12)) grid.push_back(b_max);
    else grid.back() = b_max;
    return grid;
}

/// One record per requested b, in input order. Solves run on a worker pool;
/// failures are tagged, never dropped.
inline std::vector<SweepRecord> sweep(const CriticalParams& params, const std::vector<double>& b_values,
                                      const SweepOptions& opts = {}) {
    for (std::size_t i = 0; i < b_values.size(); ++i) {
        if (!(b_values[i] > 0.0)) throw DomainError("sweep requires positive b values");
        if (i > 0 && b_values[i] < b_values[i - 1]) throw DomainError("sweep requires ascending b values");
    }
    std::vector<SweepRecord> records(b_values.size());
    std::atomic<std::size_t> next{0};
    int jobs = std::min<std::size_t>(resolve_jobs(opts.jobs), std::max<std::size_t>(b_values.size(), 1));

    auto worker = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= b_values.size()) return;
            SweepRecord& rec = records[i];
            rec.b = b_values[i];
            auto t0 = std::chrono::steady_clock::now();
            try {
                auto gs = shooting::solve_lambda(rec.b, params, opts.tol_lambda, opts.integrator);
                rec.lambda = gs.lambda;
                rec.c = gs.c;
                rec.lambda_bracket_width = gs.lambda_bracket_width;
                rec.c_spread = gs.c_spread;
            } catch (const std::exception& e) {
                std::string reason = e.what();
                for (char& ch : reason)
                    if (ch == ',' || ch == '\n') ch = ';';
                rec.status = "failed(" + reason + ")";
            }
            rec.wall_time_ms =
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        }
    };
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    return records;
}

inline std::vector<SweepRecord> sweep(const CriticalParams& params, const std::vector<double>& b_values,
                                      double tol_lambda) {
    SweepOptions opts;
    opts.tol_lambda = tol_lambda;
    return sweep(params, b_values, opts);
}

// ---------------------------------------------------------------------------
// power-law fitting

enum class FitModel { PurePower, PowerTimesLog };

struct FitResult {
    double slope = 0.0;
    double log_prefactor = 0.0; // natural log of the prefactor
    double r_squared = 0.0;
    std::pair<double, double> b_range{0.0, 0.0};
    FitModel model = FitModel::PurePower;

    double prefactor() const { return std::exp(log_prefactor); }
};

/// Least squares of log(lambda) on log(b) (pure power), or the constant fit
/// of lambda b / log b for the logarithmic branch. Needs >= 5 usable records
/// spanning at least one decade.
inline FitResult fit_power_law(const std::vector<SweepRecord>& records, FitModel model,
                               double b_min = 0.0,
                               double b_max = std::numeric_limits<double>::infinity()) {
    std::vector<std::pair<double, double>> pts; // (b, lambda)
    for (const auto& r : records) {
        if (!r.ok() || !(r.b >= b_min) || !(r.b <= b_max)) continue;
        if (!(r.lambda > 0.0)) throw FitError("fit_power_law requires lambda > 0 in every record");
        pts.push_back({r.b, r.lambda});
    }
    if (pts.size() < 5) throw FitError("fit_power_law needs at least 5 records, got " +
                                       std::to_string(pts.size()));
    double lo = pts.front().first, hi = pts.front().first;
    for (auto& [b, l] : pts) {
        lo = std::min(lo, b);
        hi = std::max(hi, b);
    }
    if (hi < 10.0 * lo * (1.0 - 1e-12))
        throw FitError("fit_power_law needs at least a decade of b, got [" + std::to_string(lo) +
                       ", " + std::to_string(hi) + "]");

    FitResult out;
    out.model = model;
    out.b_range = {lo, hi};

    auto r_squared_log = [&](auto&& predict_logl) {
        double mean = 0.0;
        for (auto& [b, l] : pts) mean += std::log(l);
        mean /= double(pts.size());
        double ss_res = 0.0, ss_tot = 0.0;
        for (auto& [b, l] : pts) {
            double y = std::log(l);
            ss_res += (y - predict_logl(b)) * (y - predict_logl(b));
            ss_tot += (y - mean) * (y - mean);
        }
        return ss_tot > 0.0 ? std::max(0.0, 1.0 - ss_res / ss_tot) : 1.0;
    };

    if (model == FitModel::PurePower) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        double n = double(pts.size());
        for (auto& [b, l] : pts) {
            double x = std::log(b), y = std::log(l);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        out.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        out.log_prefactor = (sy - out.slope * sx) / n;
        out.r_squared = r_squared_log([&](double b) { return out.log_prefactor + out.slope * std::log(b); });
    } else {
        double mean = 0.0;
        for (auto& [b, l] : pts) mean += l * b / std::log(b);
        mean /= double(pts.size());
        out.slope = -1.0;
        out.log_prefactor = std::log(mean);
        out.r_squared =
            r_squared_log([&](double b) { return out.log_prefactor + std::log(std::log(b)) - std::log(b); });
    }
    return out;
}

// ---------------------------------------------------------------------------
// pointwise-bound audits

struct BoundReport {
    double a = 0.0;
    double b = 0.0;
    double near_sup = 0.0; // sup b^{-1}|f - U_b| / b^{-2p(1-a)} on r <= b^{-p(1-a)}
    double mid_sup = 0.0;  // sup r^{2/p}|f - c e^{-r^2/2} U(r^2)| / (c^{2p+1} b^{2p(1-a)})
    double far_sup = 0.0;  // sup |e^{r^2/2} r^{(d-l)/2} f - c r^{(d-l)/2} U(r^2)| / c^{2p+1}
    int near_pts = 0;
    int mid_pts = 0;
    int far_pts = 0;
    bool pre_asymptotic = false; // b below the regime the bounds are claimed in
};

/// Normalized suprema of the three pointwise bounds on the stored grid, with
/// the bound constant taken as 1. a must lie in the admissible (0, p/(1+p)).
inline BoundReport audit_bounds(const shooting::GroundState& state, double a,
                                const CriticalParams& params) {
    double p = params.p();
    if (!(a > 0.0) || !(a < p / (1.0 + p)))
        throw DomainError("audit_bounds requires a in (0, p/(1+p))");
    const auto& prof = state.profile;
    if (prof.size() < 8) throw CoverageError("profile too short to audit");

    double b = state.b;
    double lambda = state.lambda;
    double c = state.c;
    double r1 = std::pow(b, -p * (1.0 - a));
    auto kp = specfun::KummerParams::for_eigenvalue(params, lambda);
    // Past r_trust the eigenvalue-bracket residual, amplified like e^{r^2},
    // swamps the true far-field deviation; audit the clean portion only.
    double bracket = std::max(state.lambda_bracket_width, 1e-300);
    double r_trust = std::sqrt(std::max(4.0, 0.7 * -std::log(10.0 * bracket)));

    BoundReport rep;
    rep.a = a;
    rep.b = b;
    rep.pre_asymptotic = b < 50.0;

    double exp_near = std::pow(b, 2.0 * p * (1.0 - a)) / b;
    double c_pow = std::pow(std::fabs(c), 2.0 * p + 1.0);
    double mid_norm = c_pow * std::pow(b, 2.0 * p * (1.0 - a));

    for (std::size_t i = 0; i < prof.size(); ++i) {
        double r = prof.r_grid[i];
        double f = prof.f[i];
        if (r <= r1) {
            double dev = std::fabs(f - profiles::algebraic_soliton(r, b, params));
            rep.near_sup = std::max(rep.near_sup, exp_near * dev);
            ++rep.near_pts;
        }
        if (r >= r1 && r <= 1.0) {
            double model = c * std::exp(-0.5 * r * r) * specfun::tricomi_u(r * r, kp);
            double dev = std::pow(r, 2.0 / p) * std::fabs(f - model);
            rep.mid_sup = std::max(rep.mid_sup, dev / mid_norm);
            ++rep.mid_pts;
        }
        if (r >= 1.0 && r <= r_trust) {
            double rpow = std::pow(r, 0.5 * (params.d() - lambda));
            double dev = std::fabs(std::exp(0.5 * r * r) * rpow * f - c * rpow * specfun::tricomi_u(r * r, kp));
            rep.far_sup = std::max(rep.far_sup, dev / c_pow);
            ++rep.far_pts;
        }
    }
    if (rep.near_pts < 3 || rep.mid_pts < 3 || rep.far_pts < 3)
        throw CoverageError("profile grid misses one of the three audit regions");
    return rep;
}

// ---------------------------------------------------------------------------
// persistence

inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRecord>& records) {
    os << "b,lambda,c,bracket,c_spread,status,wall_ms\n";
    char buf[256];
    for (const auto& r : records) {
        std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g,", r.b, r.lambda, r.c,
                      r.lambda_bracket_width, r.c_spread);
        os << buf << r.status;
        std::snprintf(buf, sizeof(buf), ",%.17g\n", r.wall_time_ms);
        os << buf;
    }
}

inline std::vector<SweepRecord> read_sweep_csv(std::istream& is) {
    std::vector<SweepRecord> records;
    std::string line;
    if (!std::getline(is, line) || line != "b,lambda,c,bracket,c_spread,status,wall_ms")
        throw std::runtime_error("unrecognized sweep CSV header");
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() != 7) throw std::runtime_error("malformed sweep CSV row: " + line);
        SweepRecord r;
        r.b = std::stod(cells[0]);
        r.lambda = std::stod(cells[1]);
        r.c = std::stod(cells[2]);
        r.lambda_bracket_width = std::stod(cells[3]);
        r.c_spread = std::stod(cells[4]);
        r.status = cells[5];
        r.wall_time_ms = std::stod(cells[6]);
        records.push_back(std::move(r));
    }
    return records;
}

inline std::string git_describe() {
    std::string out = "unknown";
#if defined(__unix__) || defined(__APPLE__)
    if (FILE* pipe = ::popen("git describe --always --dirty 2>/dev/null", "r")) {
        char buf[128];
        if (std::fgets(buf, sizeof(buf), pipe)) {
            out = buf;
            while (!out.empty() && (out.back() == '\n' || out.back() == '\r')) out.pop_back();
        }
        ::pclose(pipe);
        if (out.empty()) out = "unknown";
    }
#endif
    return out;
}

/// Run manifest: exponent (exact form when available), tolerances, source
/// revision and timestamp.
inline nlohmann::json make_manifest(const CriticalParams& params, const SweepOptions& opts) {
    std::time_t now = std::time(nullptr);
    char stamp[64];
    std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    return nlohmann::json{{"p", params.describe()},
                          {"tol_lambda", opts.tol_lambda},
                          {"abs_tol", opts.integrator.abs_tol},
                          {"rel_tol", opts.integrator.rel_tol},
                          {"git", git_describe()},
                          {"timestamp", stamp}};
}

} // namespace gpe::harness
