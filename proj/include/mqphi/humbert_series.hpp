#pragma once

#include <cmath>
#include <vector>

#include "eval_config.hpp"
#include "signed_log.hpp"
#include "special_functions.hpp"

namespace mqphi {

// Arguments of the two-variable confluent series: parameters b, c and
// variables w (the ratio-type variable) and z (the product-type variable).
struct Phi3Args {
    double b = 1.0;
    double c = 1.0;
    double w = 0.0;
    double z = 0.0;
};

namespace detail {

inline void validate(const Phi3Args& args) {
    require_domain(std::isfinite(args.b) && std::isfinite(args.c) &&
                       std::isfinite(args.w) && std::isfinite(args.z),
                   "phi3: arguments must be finite");
}

// sum_n z^n / (Gamma(c + n) n!), the w = 0 slice of the double series,
// walked with the exact term ratio z / ((n+1)(c+n)). A nonpositive integer
// c kills every term through n = -c, so the walk starts past them.
inline SignedLog humbert_z_series_log(double c, double z, const EvalConfig& cfg) {
    int n0 = 0;
    SignedLog lead;
    if (c <= 0.0 && c == std::floor(c)) {
        // first live term sits at c + n0 = 1 where Gamma(c + n0) = 1
        require_domain(1.0 - c <= cfg.max_terms, "phi3_tilde_series: c too negative");
        n0 = static_cast<int>(1.0 - c);
        lead = SignedLog::from_value(z).pow_int(n0) *
               SignedLog::from_log(1, -std::lgamma(n0 + 1.0));
    } else {
        lead = reciprocal_gamma(c);
    }
    if (lead.sign == 0) return SignedLog::zero();

    double t = lead.sign;  // running term, in units of exp(shift)
    double shift = lead.log_abs;
    double sum = 0.0;
    int quiet = 0;
    double guard = 2.0 * std::sqrt(std::fabs(z));
    for (int n = n0; n <= n0 + cfg.max_terms; ++n) {
        sum += t;
        if (t == 0.0) break;  // z == 0
        if (std::fabs(t) <= kSeriesEps * std::fabs(sum) && n > guard) {
            if (++quiet >= 3) break;
        } else {
            quiet = 0;
        }
        if (n == n0 + cfg.max_terms)
            throw convergence_error("phi3_tilde_series: series did not converge");
        t *= z / ((n + 1.0) * (c + n));
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

// Full double series, accumulated along anti-diagonals k + j = n. The two
// coefficient arrays are rescaled in lockstep with log-space carries, and
// the running sum follows the same carries, so arguments large enough to
// overflow raw terms stay representable end to end.
inline SignedLog humbert_full_series_log(double b, double c, double w, double z,
                                         const EvalConfig& cfg) {
    std::vector<double> aw{1.0};  // (b)_k w^k / k!, times exp(shift_w)
    std::vector<double> cz{1.0};  // z^j / j!,       times exp(shift_z)
    double shift_w = 0.0;
    double shift_z = 0.0;
    double sum = 0.0;
    double ref = 0.0;  // log scale of the first contributing term
    bool have_ref = false;
    int quiet = 0;
    double guard = 2.0 * (std::sqrt(std::fabs(w)) + std::sqrt(std::fabs(z)));
    for (int n = 0; n <= cfg.max_terms; ++n) {
        if (n > 0) {
            aw.push_back(aw[n - 1] * (b + n - 1.0) * w / n);
            cz.push_back(cz[n - 1] * z / n);
            if (std::fabs(aw[n]) > 1e140) {
                for (double& v : aw) v *= 1e-140;
                shift_w += std::log(1e140);
                sum *= 1e-140;
            }
            if (std::fabs(cz[n]) > 1e140) {
                for (double& v : cz) v *= 1e-140;
                shift_z += std::log(1e140);
                sum *= 1e-140;
            }
        }
        double row = 0.0;
        for (int k = n; k >= 0; --k) row += aw[k] * cz[n - k];
        SignedLog g = reciprocal_gamma(c + n);
        if (g.sign != 0 && row != 0.0) {
            double lt = std::log(std::fabs(row)) + g.log_abs;
            if (!have_ref) {
                ref = lt;
                have_ref = true;
            }
            double term = ((row > 0.0) == (g.sign > 0) ? 1.0 : -1.0) * std::exp(lt - ref);
            sum += term;
            if (std::fabs(term) <= kSeriesEps * std::fabs(sum) && n > guard) {
                if (++quiet >= 3) break;
            } else {
                quiet = 0;
            }
        } else if (n > guard && g.sign != 0) {
            if (++quiet >= 3) break;
        }
        if (n == cfg.max_terms)
            throw convergence_error("phi3_tilde_series: series did not converge");
    }
    if (sum == 0.0 || !have_ref) return SignedLog::zero();
    return SignedLog::from_log(sum > 0.0 ? 1 : -1,
                               ref + shift_w + shift_z + std::log(std::fabs(sum)));
}

// Dispatch across the degenerate slices; value() of the result is the
// regularized series itself.
inline SignedLog phi3_tilde_series_log(const Phi3Args& args, const EvalConfig& cfg) {
    validate(args);
    if (args.w == 0.0 && args.z == 0.0) return reciprocal_gamma(args.c);
    if (args.z == 0.0) return reg_confluent_1f1_log(args.b, args.c, args.w, cfg);
    if (args.w == 0.0) return humbert_z_series_log(args.c, args.z, cfg);
    return humbert_full_series_log(args.b, args.c, args.w, args.z, cfg);
}

}  // namespace detail

// Regularized series: the unregularized function divided by Gamma(c).
// Entire in b, c, w, z; this is the reference evaluation path.
inline double phi3_tilde_series(const Phi3Args& args, const EvalConfig& cfg = {}) {
    return detail::phi3_tilde_series_log(args, cfg).value();
}

// Unregularized series; c on a nonpositive integer is a pole and rejected.
inline double phi3_series(const Phi3Args& args, const EvalConfig& cfg = {}) {
    detail::validate(args);
    require_domain(!(args.c <= 0.0 && args.c == std::floor(args.c)),
                   "phi3_series: c must not be a nonpositive integer");
    SignedLog g = detail::gamma_signed(args.c);
    SignedLog t = detail::phi3_tilde_series_log(args, cfg);
    return (g * t).value();
}

}  // namespace mqphi
