#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>

#include "gpe/errors.hpp"

namespace gpe {

/// Exact rational exponent as supplied on the command line ("2/5").
/// Branch selection in the eigenvalue laws is razor-edged at p = 1/2 and at
/// p = 1/n, so the harness keeps the exact form whenever it has one.
struct Rational {
    long long num = 0;
    long long den = 1;

    Rational() = default;
    Rational(long long n, long long d) : num(n), den(d) {
        if (den == 0) throw DomainError("rational exponent with zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        long long g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }

    double value() const { return double(num) / double(den); }
    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
};

/// Critical-exponent bundle: p in (0, 1], the matching dimension
/// d = 2 + 2/p, and alpha_p = p^2 / (4 (1+p)).
/// d and alpha_p are always derived from p, never stored independently.
class CriticalParams {
  public:
    static CriticalParams from_p(double p) { return CriticalParams(p, std::nullopt); }

    static CriticalParams from_rational(long long num, long long den) {
        Rational r(num, den);
        return CriticalParams(r.value(), r);
    }

    /// Accepts "num/den" or a plain floating literal.
    static CriticalParams parse(const std::string& text) {
        auto slash = text.find('/');
        if (slash == std::string::npos) return from_p(std::stod(text));
        long long num = std::stoll(text.substr(0, slash));
        long long den = std::stoll(text.substr(slash + 1));
        return from_rational(num, den);
    }

    double p() const { return p_; }
    double d() const { return 2.0 + 2.0 / p_; }
    double alpha_p() const { return p_ * p_ / (4.0 * (1.0 + p_)); }
    const std::optional<Rational>& rational() const { return rational_; }

    /// Exact test p == 1/2 (rational compare when available, 1e-12 band otherwise).
    bool is_half() const {
        if (rational_) return rational_->num * 2 == rational_->den;
        return std::fabs(p_ - 0.5) <= 1e-12;
    }

    /// True when 1/p is a positive integer (so beta = 1 + 1/p is an integer).
    bool inverse_is_integer() const {
        if (rational_) return rational_->num == 1;
        double inv = 1.0 / p_;
        return std::fabs(inv - std::round(inv)) <= 1e-12;
    }

    std::string describe() const {
        if (rational_) return std::to_string(rational_->num) + "/" + std::to_string(rational_->den);
        return std::to_string(p_);
    }

  private:
    CriticalParams(double p, std::optional<Rational> r) : p_(p), rational_(std::move(r)) {
        if (!(p_ > 0.0) || p_ > 1.0)
            throw DomainError("critical exponent p must lie in (0, 1], got " + std::to_string(p_));
    }

    double p_;
    std::optional<Rational> rational_;
};

} // namespace gpe
