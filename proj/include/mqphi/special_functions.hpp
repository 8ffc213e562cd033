#pragma once

#include <cmath>
#include <limits>
#include <numbers>

#include "eval_config.hpp"
#include "signed_log.hpp"

namespace mqphi {

inline double log_gamma(double x) {
    require_domain(std::isfinite(x) && x > 0.0, "log_gamma: requires x > 0");
    return std::lgamma(x);
}

namespace detail {

// sin(pi*x) with the integer part of the argument reduced exactly.
inline double sin_pi(double x) {
    double n = std::floor(x);
    double f = x - n;
    double s = (f <= 0.5) ? std::sin(std::numbers::pi * f)
                          : std::sin(std::numbers::pi * (1.0 - f));
    return std::fmod(n, 2.0) != 0.0 ? -s : s;
}

// 1/Gamma(x) for any real x; exactly zero at the poles x = 0, -1, -2, ...
// Negative arguments go through the reflection formula.
inline SignedLog reciprocal_gamma(double x) {
    if (x > 0.0) return SignedLog::from_log(1, -std::lgamma(x));
    if (x == std::floor(x)) return SignedLog::zero();
    double sp = sin_pi(x);
    return SignedLog::from_log(
        sp > 0.0 ? 1 : -1,
        std::log(std::fabs(sp)) + std::lgamma(1.0 - x) - std::log(std::numbers::pi));
}

// Gamma(x) as a signed log value; pole arguments are rejected.
inline SignedLog gamma_signed(double x) {
    if (x > 0.0) return SignedLog::from_log(1, std::lgamma(x));
    require_domain(x != std::floor(x), "gamma_signed: pole at nonpositive integer");
    SignedLog r = reciprocal_gamma(x);
    return SignedLog::from_log(r.sign, -r.log_abs);
}

// exp(s ln x - x - lgamma(t)) with the exponent assembled in long double.
// The three pieces can each reach thousands while the result stays O(1), so
// double-width assembly would surrender ~|piece| * eps of relative accuracy.
inline double gamma_lead(double s, double x, double t) {
    long double e = static_cast<long double>(s) * std::log(static_cast<long double>(x)) -
                    static_cast<long double>(x) - std::lgamma(static_cast<long double>(t));
    return static_cast<double>(std::exp(e));
}

// P(s, x) by the ascending power series; intended for x < s + 1 where the
// term ratio x/(s+n) stays below 1.
inline double lower_gamma_series(double s, double x, const EvalConfig& cfg) {
    double lead = gamma_lead(s, x, s + 1.0);
    if (lead == 0.0) return 0.0;
    double term = 1.0;
    double sum = 1.0;
    for (int n = 1; n <= cfg.max_terms; ++n) {
        term *= x / (s + n);
        sum += term;
        if (term <= sum * kSeriesEps) return lead * sum;
    }
    throw convergence_error("regularized_lower_gamma: series did not converge");
}

// Q(s, x) by the Legendre continued fraction, modified Lentz scheme;
// intended for x >= s + 1.
inline double upper_gamma_cf(double s, double x, const EvalConfig& cfg) {
    constexpr double tiny = 1e-300;
    double lead = gamma_lead(s, x, s);
    if (lead == 0.0) return 0.0;
    double b = x + 1.0 - s;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= cfg.max_terms; ++i) {
        double an = -static_cast<double>(i) * (i - s);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) <= kSeriesEps) return lead * h;
    }
    throw convergence_error("regularized_upper_gamma: continued fraction did not converge");
}

}  // namespace detail

inline double regularized_lower_gamma(double s, double x, const EvalConfig& cfg = {}) {
    require_domain(std::isfinite(s) && s > 0.0, "regularized_lower_gamma: requires s > 0");
    require_domain(std::isfinite(x) && x >= 0.0, "regularized_lower_gamma: requires x >= 0");
    if (x == 0.0) return 0.0;
    if (x < s + 1.0) return detail::lower_gamma_series(s, x, cfg);
    return 1.0 - detail::upper_gamma_cf(s, x, cfg);
}

inline double regularized_upper_gamma(double s, double x, const EvalConfig& cfg = {}) {
    require_domain(std::isfinite(s) && s > 0.0, "regularized_upper_gamma: requires s > 0");
    require_domain(std::isfinite(x) && x >= 0.0, "regularized_upper_gamma: requires x >= 0");
    if (x == 0.0) return 1.0;
    if (x < s + 1.0) return 1.0 - detail::lower_gamma_series(s, x, cfg);
    return detail::upper_gamma_cf(s, x, cfg);
}

namespace detail {

// exp(-x) I_nu(x) by the ascending series, accumulated outward from the
// largest term so the running sum never over- or underflows.
inline double bessel_i_scaled_series(double nu, double x, const EvalConfig& cfg) {
    long double lx = std::log(0.5L * static_cast<long double>(x));
    double q = 0.25 * x * x;
    int k0 = static_cast<int>(std::max(0.0, 0.5 * (std::hypot(nu, x) - nu)));
    long double lt0 = (2.0L * k0 + nu) * lx - static_cast<long double>(x) -
                      std::lgamma(static_cast<long double>(k0) + 1.0L) -
                      std::lgamma(static_cast<long double>(nu) + k0 + 1.0L);
    if (lt0 < -745.0L) return 0.0;
    double sum = 1.0;  // in units of exp(lt0)
    double term = 1.0;
    for (int k = k0 - 1; k >= 0; --k) {
        term *= (k + 1.0) * (nu + k + 1.0) / q;
        sum += term;
        if (term <= sum * kSeriesEps) break;
    }
    term = 1.0;
    for (int k = k0 + 1;; ++k) {
        if (k - k0 > cfg.max_terms)
            throw convergence_error("bessel_i_scaled: series did not converge");
        term *= q / (static_cast<double>(k) * (nu + k));
        sum += term;
        if (term <= sum * kSeriesEps) break;
    }
    return static_cast<double>(std::exp(lt0 + std::log(static_cast<long double>(sum))));
}

// Scaled Hankel expansion, truncated at the smallest term. The smallest
// term drops below machine epsilon once x >= max(30, nu^2 / 2).
inline double bessel_i_scaled_asymptotic(double nu, double x) {
    double mu = 4.0 * nu * nu;
    double term = 1.0;
    double sum = 1.0;
    double prev = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= 120; ++k) {
        term *= -(mu - (2.0 * k - 1.0) * (2.0 * k - 1.0)) / (8.0 * x * k);
        if (std::fabs(term) >= prev) break;  // divergent tail reached
        sum += term;
        prev = std::fabs(term);
        if (std::fabs(term) <= kSeriesEps * std::fabs(sum)) break;
    }
    return sum / std::sqrt(2.0 * std::numbers::pi * x);
}

}  // namespace detail

inline double bessel_i_scaled(double nu, double x, const EvalConfig& cfg = {}) {
    require_domain(std::isfinite(nu) && nu >= 0.0, "bessel_i_scaled: requires nu >= 0");
    require_domain(std::isfinite(x) && x >= 0.0, "bessel_i_scaled: requires x >= 0");
    if (x == 0.0) return nu == 0.0 ? 1.0 : 0.0;
    if (x < std::max(30.0, 0.5 * nu * nu)) return detail::bessel_i_scaled_series(nu, x, cfg);
    return detail::bessel_i_scaled_asymptotic(nu, x);
}

// Rising factorial (t)_r as a signed log value; sign 0 when a factor is zero.
inline SignedLog pochhammer_log(double t, int r) {
    require_domain(r >= 0, "pochhammer_log: requires r >= 0");
    if (r == 0) return SignedLog::one();
    if (t > 0.0) return SignedLog::from_log(1, std::lgamma(t + r) - std::lgamma(t));
    int sign = 1;
    double la = 0.0;
    for (int k = 0; k < r; ++k) {
        double f = t + k;
        if (f == 0.0) return SignedLog::zero();
        if (f < 0.0) sign = -sign;
        la += std::log(std::fabs(f));
    }
    return SignedLog::from_log(sign, la);
}

namespace detail {

// 1F1(b; c; w) / Gamma(c) as a signed log value. The series is walked with
// the exact term ratio (b+k) w / ((k+1)(c+k)); no per-term Gamma, and sign
// flips from negative c + k fall out of the division. A nonpositive integer
// c kills every term through k = -c, so the walk starts past them.
inline SignedLog reg_confluent_1f1_log(double b, double c, double w, const EvalConfig& cfg) {
    require_domain(std::isfinite(b) && std::isfinite(c) && std::isfinite(w),
                   "reg_confluent_1f1: arguments must be finite");
    int k0 = 0;
    SignedLog lead;
    if (c <= 0.0 && c == std::floor(c)) {
        // first live term sits at c + k0 = 1 where Gamma(c + k0) = 1
        require_domain(1.0 - c <= cfg.max_terms, "reg_confluent_1f1: c too negative");
        k0 = static_cast<int>(1.0 - c);
        lead = pochhammer_log(b, k0) * SignedLog::from_value(w).pow_int(k0) *
               SignedLog::from_log(1, -std::lgamma(k0 + 1.0));
    } else {
        lead = reciprocal_gamma(c);
    }
    if (lead.sign == 0) return SignedLog::zero();

    double t = lead.sign;  // running term, in units of exp(shift)
    double shift = lead.log_abs;
    double sum = 0.0;
    int quiet = 0;
    for (int k = k0; k <= k0 + cfg.max_terms; ++k) {
        sum += t;
        if (t == 0.0) break;  // (b)_k hit zero: the series terminated
        if (std::fabs(t) <= kSeriesEps * std::fabs(sum) && k > std::fabs(w)) {
            if (++quiet >= 3) break;
        } else {
            quiet = 0;
        }
        if (k == k0 + cfg.max_terms)
            throw convergence_error("reg_confluent_1f1: series did not converge");
        t *= (b + k) * w / ((k + 1.0) * (c + k));
        double at = std::fabs(t);
        if (at > 1e250) {
            t *= 1e-250;
            sum *= 1e-250;
            shift += std::log(1e250);
        } else if (at < 1e-250 && at > 0.0 && std::fabs(sum) < 1e50) {
            t *= 1e250;
            sum *= 1e250;
            shift -= std::log(1e250);
        }
    }
    if (sum == 0.0) return SignedLog::zero();
    return SignedLog::from_log(sum > 0.0 ? 1 : -1, shift + std::log(std::fabs(sum)));
}

}  // namespace detail

// Confluent hypergeometric 1F1(b; c; w) divided by Gamma(c); entire in c.
inline double reg_confluent_1f1(double b, double c, double w, const EvalConfig& cfg = {}) {
    return detail::reg_confluent_1f1_log(b, c, w, cfg).value();
}

}  // namespace mqphi
