#pragma once

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <vector>

#include "eval_config.hpp"
#include "humbert_series.hpp"
#include "marcum.hpp"
#include "signed_log.hpp"
#include "special_functions.hpp"

namespace mqphi {

// One coefficient polynomial of the order-reduction expansion that maps the
// first series parameter b > 1 down to 1. Coefficients ascend in powers of
// the z argument; the degree is floor(i/2).
struct CoeffPolynomial {
    int b = 1;
    double c = 0.0;
    int i = 0;
    std::vector<SignedLog> coeffs;

    SignedLog evaluate_log(double z) const {
        std::vector<SignedLog> parts;
        parts.reserve(coeffs.size());
        SignedLog zp = SignedLog::one();
        SignedLog zv = SignedLog::from_value(z);
        for (const auto& cf : coeffs) {
            parts.push_back(cf * zp);
            zp *= zv;
        }
        return signed_log_sum(parts);
    }

    double evaluate(double z) const { return evaluate_log(z).value(); }
};

namespace detail {

// Exact small-integer helpers; every product is checked against the 2^53
// window so the double conversion at the end is lossless.
inline bool mul_exact(std::int64_t x, std::int64_t y, std::int64_t& out) {
    if (__builtin_mul_overflow(x, y, &out)) return false;
    return std::llabs(out) <= (std::int64_t{1} << 53);
}

inline bool rising_exact(std::int64_t t, int r, std::int64_t& out) {
    out = 1;
    for (int k = 0; k < r; ++k)
        if (!mul_exact(out, t + k, out)) return false;
    return true;
}

inline bool factorial_exact(int n, std::int64_t& out) {
    return rising_exact(1, n, out);
}

inline CoeffPolynomial coeff_polynomial_real(int b, double c, int i) {
    require_domain(b >= 1, "coeff_polynomial: requires b >= 1");
    require_domain(i >= 0 && i <= 2 * (b - 1), "coeff_polynomial: index out of range");
    CoeffPolynomial out{b, c, i, {}};
    int deg = i / 2;
    out.coeffs.resize(deg + 1);
    bool c_int = (c == std::floor(c)) && std::fabs(c) < (1ll << 40);
    for (int k = 0; k <= deg; ++k) {
        int sgn = ((b - 1 + k) % 2 == 0) ? 1 : -1;
        if (c_int) {
            std::int64_t p1, p2, f1, f2, f3, num, den, tmp;
            bool ok = rising_exact(b - i + k, i - k, p1) &&
                      rising_exact(static_cast<std::int64_t>(c) - i - 1 + k, i - 2 * k, p2) &&
                      factorial_exact(b - 1, f1) && factorial_exact(i - 2 * k, f2) &&
                      factorial_exact(k, f3) && mul_exact(p1, p2, num) &&
                      mul_exact(f1, f2, tmp) && mul_exact(tmp, f3, den);
            if (ok) {
                out.coeffs[k] = SignedLog::from_value(
                    sgn * static_cast<double>(num) / static_cast<double>(den));
                continue;
            }
        }
        SignedLog v = pochhammer_log(b - i + k, i - k) *
                      pochhammer_log(c - i - 1 + k, i - 2 * k);
        v *= SignedLog::from_log(
            1, -(std::lgamma(b) + std::lgamma(i - 2 * k + 1.0) + std::lgamma(k + 1.0)));
        if (sgn < 0) v.sign = -v.sign;
        out.coeffs[k] = v;
    }
    return out;
}

}  // namespace detail

inline CoeffPolynomial coeff_polynomial(int b, int c, int i) {
    return detail::coeff_polynomial_real(b, static_cast<double>(c), i);
}

// Order reduction: the b > 1 series expressed as a combination of b = 1
// series with shifted c parameter, weighted by the coefficient polynomials.
inline double phi3_tilde_recursive(const Phi3Args& args, const EvalConfig& cfg = {}) {
    detail::validate(args);
    require_domain(args.b >= 1.0 && args.b == std::floor(args.b) && args.b <= 1e4,
                   "phi3_tilde_recursive: b must be a positive integer");
    int b = static_cast<int>(args.b);
    if (b == 1 || args.z == 0.0) return phi3_tilde_series(args, cfg);
    require_domain(args.w != 0.0, "phi3_tilde_recursive: requires w != 0 when b > 1");

    SignedLog zlog = SignedLog::from_value(args.z);
    std::vector<SignedLog> terms;
    terms.reserve(2 * b - 1);
    for (int i = 0; i <= 2 * (b - 1); ++i) {
        SignedLog ai = detail::coeff_polynomial_real(b, args.c, i).evaluate_log(args.z);
        if (ai.sign == 0) continue;
        SignedLog base =
            detail::phi3_tilde_series_log({1.0, args.c - i, args.w, args.z}, cfg);
        terms.push_back(ai * zlog.pow_int(-i) * base);
    }
    SignedLog pref = (zlog * SignedLog::from_value(args.w).pow_int(-1)).pow_int(b - 1);
    return (pref * signed_log_sum(terms)).value();
}

namespace detail {

// Finite combination of Marcum tail functions; requires integer b > 0,
// integer c, and strictly positive w, z. Each term carries the factor
// exp(w + z/w) against a tail value assembled entirely in log space.
inline SignedLog phi3_tilde_via_marcum_log(const Phi3Args& args, const EvalConfig& cfg) {
    detail::validate(args);
    require_domain(args.b >= 1.0 && args.b == std::floor(args.b) && args.b <= 1e4,
                   "phi3_tilde_via_marcum: b must be a positive integer");
    require_domain(args.c == std::floor(args.c) && std::fabs(args.c) <= 1e4,
                   "phi3_tilde_via_marcum: c must be an integer");
    require_domain(args.w > 0.0, "phi3_tilde_via_marcum: requires w > 0");
    require_domain(args.z > 0.0, "phi3_tilde_via_marcum: requires z > 0");
    int b = static_cast<int>(args.b);
    int c = static_cast<int>(args.c);
    double w = args.w;
    double z = args.z;

    double lw = std::log(w);
    double lz = std::log(z);
    double expo = w + z / w;
    double sa = std::sqrt(2.0 * w);
    double sb = std::sqrt(2.0 * z / w);

    std::vector<SignedLog> terms;
    terms.reserve(2 * b - 1);
    for (int i = 0; i <= 2 * (b - 1); ++i) {
        SignedLog ai = detail::coeff_polynomial_real(b, args.c, i).evaluate_log(z);
        if (ai.sign == 0) continue;
        double q = marcum_q(2 - c + i, sa, sb, cfg);
        if (q <= 0.0) continue;
        double la = ai.log_abs - i * lz + expo + std::log(q);
        int ex = c - i - 1;
        if (ex != 0) la -= ex * lw;  // w^{c-i-1} divisor; zero exponent is exactly 1
        terms.push_back(SignedLog::from_log(ai.sign, la));
    }
    SignedLog pref = SignedLog::from_value(z / w).pow_int(b - 1);
    return pref * signed_log_sum(terms);
}

}  // namespace detail

inline double phi3_tilde_via_marcum(const Phi3Args& args, const EvalConfig& cfg = {}) {
    return detail::phi3_tilde_via_marcum_log(args, cfg).value();
}

}  // namespace mqphi
