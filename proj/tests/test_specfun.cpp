#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "gpe/ddouble.hpp"
#include "gpe/specfun.hpp"

using namespace gpe;
using specfun::KummerParams;

namespace {

// Reflection + recurrence route to Gamma at negative half-integers, kept
// independent of the Lanczos path under test.
double gamma_neg_oracle_m15() {
    // Gamma(-3/2) = Gamma(1/2) / ((-3/2)(-1/2)) = 4 sqrt(pi) / 3
    return 4.0 * std::sqrt(M_PI) / 3.0;
}

// Maclaurin series for erf(1), summed in long double.
double erf1_series() {
    long double sum = 0.0L;
    long double fact = 1.0L;
    for (int n = 0; n < 40; ++n) {
        if (n > 0) fact *= n;
        long double term = (n % 2 ? -1.0L : 1.0L) / (fact * (2 * n + 1));
        sum += term;
    }
    return double(sum * 2.0L / std::sqrt((long double)M_PI));
}

double rel_err(double got, double want) {
    return std::fabs(got - want) / std::max(std::fabs(want), 1e-300);
}

} // namespace

TEST_CASE("gamma at classical points") {
    CHECK(rel_err(specfun::gamma(0.5), std::sqrt(M_PI)) < 1e-13);
    CHECK(rel_err(specfun::gamma(5.0), 24.0) < 1e-13);
    CHECK(rel_err(specfun::gamma(1.0), 1.0) < 1e-13);
    CHECK(rel_err(specfun::gamma(-1.5), gamma_neg_oracle_m15()) < 1e-13);
}

TEST_CASE("gamma poles throw") {
    CHECK_THROWS_AS(specfun::gamma(0.0), PoleError);
    CHECK_THROWS_AS(specfun::gamma(-3.0), PoleError);
}

TEST_CASE("gamma reflection identity on random arguments") {
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> dist(-10.0, 10.0);
    int tested = 0;
    while (tested < 200) {
        double x = dist(rng);
        if (std::fabs(x - std::round(x)) < 1e-3) continue;
        double lhs = specfun::gamma(x) * specfun::gamma(1.0 - x) * std::sin(M_PI * x) / M_PI;
        CHECK(std::fabs(lhs - 1.0) < 1e-12);
        ++tested;
    }
}

TEST_CASE("gamma recurrence on (0, 30)") {
    std::mt19937 rng(777);
    std::uniform_real_distribution<double> dist(1e-2, 30.0);
    for (int i = 0; i < 200; ++i) {
        double x = dist(rng);
        CHECK(rel_err(specfun::gamma(x + 1.0), x * specfun::gamma(x)) < 1e-13);
    }
}

TEST_CASE("gamma agrees with the extended-precision route") {
    for (double x : {0.1, 0.75, 1.5, 3.25, 10.0, 25.5, 49.5, -0.5, -4.3, -9.7}) {
        double ref = dd::to_double(dd::tgamma(dd::ddreal(x)));
        CHECK(rel_err(specfun::gamma(x), ref) < 1e-13);
    }
}

TEST_CASE("digamma values") {
    double euler = 0.5772156649015329;
    CHECK(std::fabs(specfun::digamma(1.0) + euler) < 1e-12);
    CHECK(std::fabs(specfun::digamma(2.0) - (1.0 - euler)) < 1e-12);

    // central finite difference of log-gamma with one Richardson pass
    auto fd = [](double x, double h) { return (std::lgamma(x + h) - std::lgamma(x - h)) / (2.0 * h); };
    double d1 = fd(0.5, 1e-4);
    double d2 = fd(0.5, 5e-5);
    double oracle = (4.0 * d2 - d1) / 3.0;
    CHECK(std::fabs(specfun::digamma(0.5) - oracle) < 1e-9);
    CHECK(std::fabs(specfun::digamma(0.5) - (-1.9635100260214235)) < 1e-12);
}

TEST_CASE("digamma recurrence and poles") {
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> dist(0.05, 49.0);
    for (int i = 0; i < 100; ++i) {
        double x = dist(rng);
        CHECK(std::fabs(specfun::digamma(x + 1.0) - specfun::digamma(x) - 1.0 / x) < 1e-11);
    }
    CHECK_THROWS_AS(specfun::digamma(0.0), PoleError);
    CHECK_THROWS_AS(specfun::digamma(-7.0), PoleError);
}

TEST_CASE("pochhammer") {
    CHECK(specfun::pochhammer(2.7, 0) == 1.0);
    CHECK(specfun::pochhammer(3.0, 4) == 360.0);
    double prod = 1.0;
    for (int i = 0; i < 3; ++i) prod *= 0.5 + i;
    CHECK(specfun::pochhammer(0.5, 3) == prod);
    CHECK(prod == 1.875);
    CHECK_THROWS_AS(specfun::pochhammer(1.0, -1), DomainError);
}

TEST_CASE("kummer_m examples") {
    CHECK(specfun::kummer_m(0.0, {0.3, 1.7}) == 1.0);
    CHECK(rel_err(specfun::kummer_m(1.0, {1.0, 1.0}), std::exp(1.0)) < 1e-14);

    double expected = std::sqrt(M_PI) / 2.0 * erf1_series();
    CHECK(rel_err(specfun::kummer_m(-1.0, {0.5, 1.5}), expected) < 1e-13);
    CHECK(rel_err(expected, 0.7468241328124270) < 1e-15);
}

TEST_CASE("kummer_m error paths") {
    CHECK_THROWS_AS(specfun::kummer_m(1.0, {0.5, -2.0}), DomainError);
    CHECK_THROWS_AS(specfun::kummer_m(2.5e4, {1.0, 1.5}), ConvergenceError);
}

TEST_CASE("tricomi_u collapses to a pure power when beta = alpha + 1") {
    CHECK(rel_err(specfun::tricomi_u(4.0, {1.5, 2.5}), 0.125) < 1e-12);
    // same identity in the asymptotic region
    CHECK(rel_err(specfun::tricomi_u(40.0, {1.5, 2.5}), std::pow(40.0, -1.5)) < 1e-10);
    CHECK(rel_err(specfun::tricomi_u(20.0, {2.0, 3.0}), 0.0025) < 1e-10);
}

TEST_CASE("tricomi_u large-argument decay") {
    double u = specfun::tricomi_u(100.0, {1.25, 2.5});
    CHECK(std::fabs(u - std::pow(100.0, -1.25)) < 0.02 * std::pow(100.0, -1.25));
}

TEST_CASE("tricomi_u integer beta matches the beta -> 3 limit of the connection formula") {
    double z = 1.0;
    double lo = specfun::detail::tricomi_connection(z, 1.5, 3.0 - 1e-8);
    double hi = specfun::detail::tricomi_connection(z, 1.5, 3.0 + 1e-8);
    double limit = 0.5 * (lo + hi);
    double got = specfun::tricomi_u(z, {1.5, 3.0});
    CHECK(rel_err(got, limit) < 1e-6);
}

TEST_CASE("tricomi_u domain errors") {
    CHECK_THROWS_AS(specfun::tricomi_u(-1.0, {1.0, 2.5}), DomainError);
    CHECK_THROWS_AS(specfun::tricomi_u(1.0, {-0.5, 2.5}), DomainError);
    CHECK_THROWS_AS(specfun::tricomi_u(1.0, {1.0, -2.5}), DomainError);
}

TEST_CASE("kummer equation residual for both solutions") {
    std::mt19937 rng(2024);
    std::uniform_real_distribution<double> zdist(0.1, 20.0);
    std::uniform_real_distribution<double> adist(0.3, 2.5);
    std::uniform_real_distribution<double> bdist(1.3, 3.8);
    for (int trial = 0; trial < 50; ++trial) {
        double z = zdist(rng);
        double a = adist(rng);
        double b = bdist(rng);
        KummerParams kp{a, b};
        double h = std::min(1e-3 * std::max(1.0, z), 0.02 * z);
        auto residual = [&](auto&& fn) {
            double um2 = fn(z - 2 * h), um1 = fn(z - h), u0 = fn(z), up1 = fn(z + h), up2 = fn(z + 2 * h);
            double d2 = (-up2 + 16 * up1 - 30 * u0 + 16 * um1 - um2) / (12 * h * h);
            double d1 = (-up2 + 8 * up1 - 8 * um1 + um2) / (12 * h);
            double res = z * d2 + (b - z) * d1 - a * u0;
            double scale = std::max({std::fabs(z * d2), std::fabs((b - z) * d1), std::fabs(a * u0)});
            return std::fabs(res) / scale;
        };
        CHECK(residual([&](double zz) { return specfun::kummer_m(zz, kp); }) < 1e-6);
        CHECK(residual([&](double zz) { return specfun::tricomi_u(zz, kp); }) < 1e-6);
    }
}

TEST_CASE("tricomi_u branch overlap window") {
    for (auto [a, b] : {std::pair{1.75, 3.5}, {0.9, 2.5}, {2.2, 1.7}}) {
        double zc = specfun::detail::tricomi_crossover(a, b);
        for (int i = 0; i < 5; ++i) {
            double z = zc + 2.0 * i;
            double conn = specfun::detail::tricomi_connection(z, a, b);
            double asym = specfun::detail::tricomi_asymptotic(z, a, b);
            CHECK(rel_err(asym, conn) < 1e-8);
        }
    }
}

TEST_CASE("tricomi_u decreases monotonically in z") {
    for (auto [a, b] : {std::pair{0.5, 2.5}, {1.75, 3.5}, {1.5, 3.0}}) {
        double prev = specfun::tricomi_u(1.0, {a, b});
        for (double z = 1.1; z <= 100.0; z *= 1.1) {
            double u = specfun::tricomi_u(z, {a, b});
            CHECK(u < prev);
            prev = u;
        }
    }
}

TEST_CASE("KummerParams from critical parameters") {
    auto cp = CriticalParams::parse("2/5");
    auto kp = KummerParams::for_eigenvalue(cp, 1.0);
    CHECK(kp.beta == 3.5);
    CHECK(kp.alpha == Catch::Approx(1.75 - 0.25).epsilon(1e-15));

    auto half = CriticalParams::parse("1/2");
    CHECK(KummerParams::for_eigenvalue(half, 2.0).beta == 3.0);

    // alpha > 0 iff lambda < d
    CHECK_THROWS_AS(KummerParams::for_eigenvalue(cp, cp.d() + 0.1), DomainError);
    CHECK(KummerParams::for_eigenvalue(cp, cp.d() - 1e-6).alpha > 0.0);
}

TEST_CASE("double-double layer sanity") {
    using namespace gpe::dd;
    for (double x : {0.3, 1.0, 7.5, 42.0, 300.0}) {
        ddreal l = log(ddreal(x));
        ddreal back = exp(l);
        CHECK(std::fabs(to_double(back) - x) < 1e-14 * x);
    }
    // lgamma against the libm value at moderate arguments
    for (double x : {1.5, 4.0, 12.3, 41.0}) {
        CHECK(std::fabs(to_double(lgamma(ddreal(x))) - std::lgamma(x)) < 1e-13 * std::max(1.0, std::fabs(std::lgamma(x))));
    }
    CHECK(std::fabs(to_double(sinpi(ddreal(0.5))) - 1.0) < 1e-30);
    CHECK(std::fabs(to_double(digamma(ddreal(1.0))) + 0.5772156649015329) < 1e-14);
}
