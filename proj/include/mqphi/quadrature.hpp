#pragma once

#include <algorithm>
#include <cmath>
#include <queue>
#include <vector>

#include "eval_config.hpp"
#include "humbert_series.hpp"
#include "marcum.hpp"
#include "special_functions.hpp"

namespace mqphi {

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int panels = 0;
};

namespace detail {

// 7-15 Gauss-Kronrod pair. Positive abscissae; even indices are
// Kronrod-only points, odd indices plus the midpoint carry the embedded
// Gauss rule.
constexpr double kGkNodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};

constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};

constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
inline void gk15(const F& f, double a, double b, double& value, double& error) {
    double hc = 0.5 * (b - a);
    double mid = 0.5 * (a + b);
    double fc = f(mid);
    double resk = fc * kKronrodWeights[7];
    double resg = fc * kGaussWeights[3];
    for (int j = 0; j < 7; ++j) {
        double dx = hc * kGkNodes[j];
        double f1 = f(mid - dx);
        double f2 = f(mid + dx);
        resk += kKronrodWeights[j] * (f1 + f2);
        if (j % 2 == 1) resg += kGaussWeights[j / 2] * (f1 + f2);
    }
    value = resk * hc;
    error = std::fabs((resk - resg) * hc);
}

struct Panel {
    double error, a, b, value;
    bool operator<(const Panel& o) const {
        if (error != o.error) return error < o.error;
        return a > o.a;  // deterministic tie-break
    }
};

// Globally adaptive bisection: always split the panel with the largest
// error estimate until the combined estimate meets the target or the
// panel budget runs out.
template <class F>
inline QuadratureResult adaptive_gauss_kronrod(const F& f, double a, double b,
                                               double abs_tol, double rel_tol,
                                               int max_panels) {
    QuadratureResult res;
    if (a >= b) return res;
    double min_width = (b - a) * 1e-14;
    double v, e;
    gk15(f, a, b, v, e);
    std::priority_queue<Panel> heap;
    heap.push({e, a, b, v});
    double total_v = v;
    double total_e = e;
    int panels = 1;
    while (total_e > std::max(abs_tol, rel_tol * std::fabs(total_v)) &&
           panels < max_panels) {
        Panel worst = heap.top();
        if (worst.error <= 0.0 || worst.b - worst.a <= min_width) break;
        heap.pop();
        double mid = 0.5 * (worst.a + worst.b);
        double v1, e1, v2, e2;
        gk15(f, worst.a, mid, v1, e1);
        gk15(f, mid, worst.b, v2, e2);
        total_v += v1 + v2 - worst.value;
        total_e += e1 + e2 - worst.error;
        heap.push({e1, worst.a, mid, v1});
        heap.push({e2, mid, worst.b, v2});
        ++panels;
    }
    res.value = total_v;
    res.error_estimate = total_e;
    res.panels = panels;
    return res;
}

}  // namespace detail

// Q_m(a, b) for m >= 1 by direct adaptive integration of the defining
// density. The integrand is assembled in log space against the scaled
// Bessel function, so large arguments cannot overflow; beyond a + 40 the
// Gaussian factor is below 1e-300 and the tail is dropped.
inline double marcum_quadrature(const MarcumArgs& args, const EvalConfig& cfg = {}) {
    detail::validate(args);
    require_domain(args.m >= 1, "marcum_quadrature: requires m >= 1");
    int m = args.m;
    double a = args.a;
    double b = args.b;
    double upper = a + 40.0;
    if (b >= upper) return 0.0;
    auto f = [&](double x) {
        if (x <= 0.0) return 0.0;
        double s = bessel_i_scaled(m - 1.0, a * x, cfg);
        if (s <= 0.0) return 0.0;
        double lg = m * std::log(x) - (m - 1.0) * std::log(a) -
                    0.5 * (x - a) * (x - a) + std::log(s);
        return std::exp(lg);
    };
    int budget = std::min(cfg.quad_points, 32768);
    auto res = detail::adaptive_gauss_kronrod(f, b, upper, 1e-12, 1e-10, budget);
    if (res.error_estimate > std::max(1e-12, 1e-10 * std::fabs(res.value)))
        throw convergence_error("marcum_quadrature: error target not reached");
    return std::min(1.0, res.value);
}

inline double marcum_quadrature(int m, double a, double b, const EvalConfig& cfg = {}) {
    return marcum_quadrature({m, a, b}, cfg);
}

struct LaplaceCheck {
    double numeric = 0.0;
    double closed_form = 0.0;
};

// Numerical transform of t^{c-1} PhiTilde(b, c; x t, y t) at abscissa s
// against its closed form s^{-c} (1 - x/s)^{-b} exp(y/s). The truncation
// point T is grown until the integrand's log magnitude falls below the
// underflow guard.
inline LaplaceCheck laplace_transform_check(double b, double c, double x, double y,
                                            double s, const EvalConfig& cfg = {}) {
    require_domain(std::isfinite(b) && std::isfinite(c) && std::isfinite(x) &&
                       std::isfinite(y) && std::isfinite(s),
                   "laplace_transform_check: arguments must be finite");
    require_domain(c > 0.0, "laplace_transform_check: requires c > 0");
    require_domain(x >= 0.0 && y >= 0.0, "laplace_transform_check: requires x, y >= 0");
    require_domain(s > x, "laplace_transform_check: requires s > x");

    double T = 700.0 / (s - x);
    for (int it = 0; it < 4; ++it)
        T = (700.0 + 2.0 * std::sqrt(y * T) +
             std::max(0.0, c - 1.0) * std::log1p(T)) / (s - x);

    auto f = [&](double t) {
        if (t <= 0.0) return 0.0;
        double ph = phi3_tilde_series({b, c, x * t, y * t}, cfg);
        if (ph <= 0.0) return 0.0;
        double lg = (c - 1.0) * std::log(t) + std::log(ph) - s * t;
        return std::exp(lg);
    };
    int budget = std::min(cfg.quad_points, 32768);
    auto res = detail::adaptive_gauss_kronrod(f, 0.0, T, 1e-13, 1e-9, budget);
    if (res.error_estimate > std::max(1e-13, 1e-9 * std::fabs(res.value)))
        throw convergence_error("laplace_transform_check: error target not reached");

    double closed = std::pow(s, -c) * std::pow(1.0 - x / s, -b) * std::exp(y / s);
    return {res.value, closed};
}

}  // namespace mqphi
