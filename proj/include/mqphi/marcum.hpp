#pragma once

#include <cmath>

#include "eval_config.hpp"
#include "humbert_series.hpp"
#include "special_functions.hpp"

namespace mqphi {

// Arguments of the generalized Marcum function Q_m(a, b): integer order m
// of either sign, noncentrality parameter a > 0, threshold b >= 0.
struct MarcumArgs {
    int m = 1;
    double a = 1.0;
    double b = 0.0;
};

namespace detail {

inline void validate(const MarcumArgs& args) {
    require_domain(std::isfinite(args.a) && args.a > 0.0, "marcum: requires a > 0");
    require_domain(std::isfinite(args.b) && args.b >= 0.0, "marcum: requires b >= 0");
}

// D(s) = y^s e^{-y} / Gamma(s+1): the step between consecutive upper tails,
// Qbar(s+1) = Qbar(s) + D(s).
inline double gamma_increment(double s, double y) {
    return gamma_lead(s, y, s + 1.0);
}

// Poisson weight exp(-h) h^k / k! with the exponent assembled in long
// double; at the mode of a large h the pieces reach thousands.
inline double poisson_weight(int k, double h) {
    long double e = -static_cast<long double>(h) +
                    k * std::log(static_cast<long double>(h)) -
                    std::lgamma(static_cast<long double>(k) + 1.0L);
    return static_cast<double>(std::exp(e));
}

// Q_m(a, b) for m >= 1 as a Poisson mixture of regularized upper gamma
// tails. All terms are positive; the tail recurrences only ever add.
inline double marcum_positive(int m, double a, double b, const EvalConfig& cfg) {
    if (b == 0.0) return 1.0;
    double h = 0.5 * a * a;
    double y = 0.5 * b * b;

    if (h <= 650.0) {  // exp(-h) representable: sweep forward from k = 0
        double pois = std::exp(-h);
        double qbar = regularized_upper_gamma(m, y, cfg);
        double d = gamma_increment(m, y);
        double sum = 0.0;
        int quiet = 0;
        for (int k = 0; k <= cfg.max_terms; ++k) {
            sum += pois * qbar;
            if (pois * qbar <= kSeriesEps * sum + cfg.abs_tol && k > h) {
                if (++quiet >= 3) return sum;
            } else {
                quiet = 0;
            }
            pois *= h / (k + 1.0);
            qbar += d;
            d *= y / (m + k + 1.0);
        }
        throw convergence_error("marcum_q: series did not converge");
    }

    // Large noncentrality: start both sweeps at the Poisson mode so the
    // weights are representable without an overall exp(-h) factor.
    int k0 = static_cast<int>(h);
    if (k0 > 100 * cfg.max_terms)
        throw convergence_error("marcum_q: noncentrality outside supported range");
    double p0 = poisson_weight(k0, h);
    double qbar0 = regularized_upper_gamma(m + static_cast<double>(k0), y, cfg);
    double d0 = gamma_increment(m + static_cast<double>(k0), y);

    double sum = 0.0;
    double pois = p0;
    double qbar = qbar0;
    double d = d0;
    int quiet = 0;
    bool converged = false;
    for (int k = k0; k <= k0 + cfg.max_terms; ++k) {
        sum += pois * qbar;
        if (pois * qbar <= kSeriesEps * sum + cfg.abs_tol) {
            if (++quiet >= 3) {
                converged = true;
                break;
            }
        } else {
            quiet = 0;
        }
        pois *= h / (k + 1.0);
        qbar += d;
        d *= y / (m + k + 1.0);
    }
    if (!converged) throw convergence_error("marcum_q: series did not converge");

    pois = p0;
    qbar = qbar0;
    d = d0 * (m + k0) / y;  // D(m + k0 - 1)
    quiet = 0;
    for (int k = k0 - 1; k >= 0; --k) {
        pois *= (k + 1.0) / h;
        qbar = std::max(0.0, qbar - d);
        sum += pois * qbar;
        if (pois * qbar <= kSeriesEps * sum + cfg.abs_tol) {
            if (++quiet >= 3) break;
        } else {
            quiet = 0;
        }
        d *= (m + k) / y;  // D(m + k - 1)
    }
    return sum;
}

// Q_m(a, b) for m <= 0 through the complementary lower tail at swapped
// arguments. Every term is positive and each lower tail is evaluated
// fresh, so tiny results keep full relative accuracy instead of dying in
// a 1 - (1 - eps) cancellation.
inline double marcum_negative(int m, double a, double b, const EvalConfig& cfg) {
    int n = 1 - m;             // >= 1
    double hp = 0.5 * b * b;   // Poisson parameter of the swapped mixture
    double y = 0.5 * a * a;    // lower-tail argument
    int j0 = static_cast<int>(hp);
    if (j0 > 100 * cfg.max_terms)
        throw convergence_error("marcum_q: threshold outside supported range");
    double p0 = (j0 == 0) ? std::exp(-hp) : poisson_weight(j0, hp);

    double sum = 0.0;
    double pois = p0;
    int quiet = 0;
    bool converged = false;
    for (int j = j0; j <= j0 + cfg.max_terms; ++j) {
        double term = pois * regularized_lower_gamma(n + static_cast<double>(j), y, cfg);
        sum += term;
        if (term <= kSeriesEps * sum + cfg.abs_tol) {
            if (++quiet >= 3) {
                converged = true;
                break;
            }
        } else {
            quiet = 0;
        }
        pois *= hp / (j + 1.0);
    }
    if (!converged) throw convergence_error("marcum_q: series did not converge");

    pois = p0;
    quiet = 0;
    for (int j = j0 - 1; j >= 0; --j) {
        pois *= (j + 1.0) / hp;
        double term = pois * regularized_lower_gamma(n + static_cast<double>(j), y, cfg);
        sum += term;
        if (term <= kSeriesEps * sum + cfg.abs_tol) {
            if (++quiet >= 3) break;
        } else {
            quiet = 0;
        }
    }
    return sum;
}

}  // namespace detail

// Direct stable evaluation of the nonpositive-order case; the complement
// identity against the swapped positive-order function holds by
// construction of the mixture, term by term.
inline double marcum_q_negative_order(const MarcumArgs& args, const EvalConfig& cfg = {}) {
    detail::validate(args);
    require_domain(args.m <= 0, "marcum_q_negative_order: requires m <= 0");
    require_domain(args.b > 0.0, "marcum_q_negative_order: requires b > 0 when m <= 0");
    return detail::marcum_negative(args.m, args.a, args.b, cfg);
}

inline double marcum_q(const MarcumArgs& args, const EvalConfig& cfg = {}) {
    detail::validate(args);
    if (args.m >= 1) return detail::marcum_positive(args.m, args.a, args.b, cfg);
    return marcum_q_negative_order(args, cfg);
}

inline double marcum_q(int m, double a, double b, const EvalConfig& cfg = {}) {
    return marcum_q({m, a, b}, cfg);
}

// Complement form through the regularized two-variable series; valid for
// every integer order. The complement is assembled in log space and
// recovered with expm1, so values near 1 stay exact.
inline double marcum_q_via_phi3(const MarcumArgs& args, const EvalConfig& cfg = {}) {
    detail::validate(args);
    if (args.b == 0.0) {
        require_domain(args.m >= 1, "marcum_q_via_phi3: requires b > 0 when m <= 0");
        return 1.0;
    }
    double w = 0.5 * args.b * args.b;
    double z = 0.25 * args.a * args.a * args.b * args.b;
    SignedLog tilde =
        detail::phi3_tilde_series_log({1.0, static_cast<double>(args.m) + 1.0, w, z}, cfg);
    if (tilde.sign <= 0) throw convergence_error("marcum_q_via_phi3: series collapsed");
    double L = args.m * std::log(w) - 0.5 * (args.a * args.a + args.b * args.b) +
               tilde.log_abs;
    return -std::expm1(L);
}

inline double marcum_q_via_phi3(int m, double a, double b, const EvalConfig& cfg = {}) {
    return marcum_q_via_phi3({m, a, b}, cfg);
}

}  // namespace mqphi
