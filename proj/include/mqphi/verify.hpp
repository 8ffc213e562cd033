#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "distributions.hpp"
#include "eval_config.hpp"
#include "marcum.hpp"
#include "phi3.hpp"
#include "quadrature.hpp"
#include "report.hpp"
#include "sampling.hpp"

namespace mqphi {

struct VerifyOptions {
    std::optional<double> tol;  // overrides each suite's equality tolerance
    std::uint64_t seed = 42;
    std::int64_t samples = 1000000;
    int grid = 0;  // points per axis where a suite has a scalable grid; 0 = default
    int max_terms = 10000;
};

namespace detail {

inline EvalConfig verify_config(const VerifyOptions& opt) {
    EvalConfig cfg;
    cfg.max_terms = opt.max_terms;
    cfg.mc_samples = opt.samples;
    cfg.seed = opt.seed;
    return cfg;
}

inline nlohmann::json config_echo(const VerifyOptions& opt) {
    nlohmann::json j{{"seed", opt.seed},
                     {"samples", opt.samples},
                     {"grid", opt.grid},
                     {"max_terms", opt.max_terms}};
    if (opt.tol)
        j["tol"] = *opt.tol;
    else
        j["tol"] = nullptr;
    return j;
}

inline std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> out;
    out.reserve(n);
    double llo = std::log(lo);
    double lhi = std::log(hi);
    for (int i = 0; i < n; ++i)
        out.push_back(n == 1 ? lo : std::exp(llo + (lhi - llo) * i / (n - 1)));
    return out;
}

inline std::vector<double> lin_grid(double lo, double hi, int n) {
    std::vector<double> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i)
        out.push_back(n == 1 ? lo : lo + (hi - lo) * i / (n - 1));
    return out;
}

}  // namespace detail

// Cross-validation of the Marcum tail paths: series mixture vs adaptive
// quadrature vs the complement form, plus the order-reflection residual.
// The 1e-12 absolute floor covers corners where the complement form loses
// a deep tail inside 1 - exp of an O(100) log sum, which no relative
// tolerance can see.
inline Report verify_marcum_cross(const VerifyOptions& opt = {}) {
    EvalConfig cfg = detail::verify_config(opt);
    double tol = opt.tol.value_or(1e-8);
    Report rep;
    rep.suite = "marcum-cross";
    rep.config = detail::config_echo(opt);

    int n = opt.grid > 0 ? opt.grid : 5;
    auto axis = detail::log_grid(0.1, 10.0, n);
    for (int m = -3; m <= 6; ++m) {
        for (double a : axis) {
            for (double b : axis) {
                nlohmann::json in{{"m", m}, {"a", a}, {"b", b}};
                double qs = marcum_q(m, a, b, cfg);
                double qp = marcum_q_via_phi3(m, a, b, cfg);
                rep.checks.push_back(
                    make_check("series_vs_phi3", in, qs, qp, tol, 1e-12));
                if (m >= 1) {
                    double qq = marcum_quadrature(m, a, b, cfg);
                    rep.checks.push_back(
                        make_check("series_vs_quadrature", in, qs, qq, tol, 1e-12));
                    rep.checks.push_back(
                        make_check("phi3_vs_quadrature", in, qp, qq, tol, 1e-12));
                }
                double reflected = 1.0 - marcum_q(1 - m, b, a, cfg);
                rep.checks.push_back(
                    make_check("order_reflection", in, qs, reflected, 0.0, 1e-12));
            }
        }
    }
    return rep;
}

namespace detail {

inline std::vector<double> phi3_wz_axis(int grid) {
    if (grid <= 0) return {0.1, 0.5, 1.0, 2.0, 5.0};
    return log_grid(0.1, 5.0, grid);
}

}  // namespace detail

// Equivalence of the finite Marcum-combination path with the reference
// series over integer parameters and strictly positive arguments.
inline Report verify_phi3_paths(const VerifyOptions& opt = {}) {
    EvalConfig cfg = detail::verify_config(opt);
    double tol = opt.tol.value_or(1e-8);
    Report rep;
    rep.suite = "phi3-paths";
    rep.config = detail::config_echo(opt);

    auto axis = detail::phi3_wz_axis(opt.grid);
    for (int b = 1; b <= 4; ++b) {
        for (int c = -2; c <= 4; ++c) {
            for (double w : axis) {
                for (double z : axis) {
                    nlohmann::json in{{"b", b}, {"c", c}, {"w", w}, {"z", z}};
                    double ref = phi3_tilde_series(
                        {static_cast<double>(b), static_cast<double>(c), w, z}, cfg);
                    double via = phi3_tilde_via_marcum(
                        {static_cast<double>(b), static_cast<double>(c), w, z}, cfg);
                    rep.checks.push_back(
                        make_check("marcum_path_vs_series", in, via, ref, tol, 1e-300));
                }
            }
        }
    }
    return rep;
}

// Order-reduction path against the reference series, plus the one-step
// first-parameter recursion evaluated entirely through the series path.
inline Report verify_recursion(const VerifyOptions& opt = {}) {
    EvalConfig cfg = detail::verify_config(opt);
    double tol = opt.tol.value_or(1e-8);
    double step_tol = opt.tol.value_or(1e-9);
    Report rep;
    rep.suite = "recursion";
    rep.config = detail::config_echo(opt);

    auto axis = detail::phi3_wz_axis(opt.grid);
    for (int b = 1; b <= 4; ++b) {
        for (int c = -2; c <= 4; ++c) {
            for (double w : axis) {
                for (double z : axis) {
                    nlohmann::json in{{"b", b}, {"c", c}, {"w", w}, {"z", z}};
                    double ref = phi3_tilde_series(
                        {static_cast<double>(b), static_cast<double>(c), w, z}, cfg);
                    double rec = phi3_tilde_recursive(
                        {static_cast<double>(b), static_cast<double>(c), w, z}, cfg);
                    rep.checks.push_back(
                        make_check("reduction_vs_series", in, rec, ref, tol, 1e-300));
                    if (b >= 2) {
                        double f0 = phi3_tilde_series(
                            {b - 1.0, static_cast<double>(c) - 2.0, w, z}, cfg);
                        double f1 = phi3_tilde_series(
                            {b - 1.0, static_cast<double>(c) - 1.0, w, z}, cfg);
                        double f2 = phi3_tilde_series(
                            {b - 1.0, static_cast<double>(c), w, z}, cfg);
                        double step = (f0 - (c - 2.0) * f1 - z * f2) / ((b - 1.0) * w);
                        rep.checks.push_back(make_check("one_step_recursion", in, step,
                                                        ref, step_tol, 1e-300));
                    }
                }
            }
        }
    }
    return rep;
}

// Numerical transform of the series against its closed form on a fixed
// 12-point parameter grid.
inline Report verify_laplace(const VerifyOptions& opt = {}) {
    EvalConfig cfg = detail::verify_config(opt);
    double tol = opt.tol.value_or(1e-6);
    Report rep;
    rep.suite = "laplace";
    rep.config = detail::config_echo(opt);

    const std::pair<double, double> xy[2] = {{0.25, 0.5}, {0.5, 1.0}};
    for (int b = 1; b <= 3; ++b) {
        for (int c = 1; c <= 2; ++c) {
            for (const auto& [x, y] : xy) {
                double s = 2.0 * (x + 1.0);
                nlohmann::json in{{"b", b}, {"c", c}, {"x", x}, {"y", y}, {"s", s}};
                auto chk = laplace_transform_check(b, c, x, y, s, cfg);
                rep.checks.push_back(make_check("transform_vs_closed_form", in,
                                                chk.numeric, chk.closed_form, tol,
                                                1e-300));
            }
        }
    }
    return rep;
}

namespace detail {

inline void push_axiom_checks(Report& rep, const std::string& prefix,
                              const nlohmann::json& base,
                              const std::vector<double>& r1s,
                              const std::vector<double>& r2s,
                              const std::vector<std::vector<double>>& f) {
    for (std::size_t i = 0; i < r1s.size(); ++i)
        for (std::size_t j = 0; j + 1 < r2s.size(); ++j) {
            nlohmann::json in = base;
            in["r1"] = r1s[i];
            in["r2_lo"] = r2s[j];
            in["r2_hi"] = r2s[j + 1];
            rep.checks.push_back(make_bound_check(prefix + "_monotone_r2", in,
                                                  f[i][j + 1] - f[i][j], 0.0, 1e-9));
        }
    for (std::size_t j = 0; j < r2s.size(); ++j)
        for (std::size_t i = 0; i + 1 < r1s.size(); ++i) {
            nlohmann::json in = base;
            in["r1_lo"] = r1s[i];
            in["r1_hi"] = r1s[i + 1];
            in["r2"] = r2s[j];
            rep.checks.push_back(make_bound_check(prefix + "_monotone_r1", in,
                                                  f[i + 1][j] - f[i][j], 0.0, 1e-9));
        }
    for (std::size_t i = 0; i + 1 < r1s.size(); ++i)
        for (std::size_t j = 0; j + 1 < r2s.size(); ++j) {
            nlohmann::json in = base;
            in["r1_lo"] = r1s[i];
            in["r1_hi"] = r1s[i + 1];
            in["r2_lo"] = r2s[j];
            in["r2_hi"] = r2s[j + 1];
            double mass = f[i + 1][j + 1] - f[i][j + 1] - f[i + 1][j] + f[i][j];
            rep.checks.push_back(
                make_bound_check(prefix + "_rectangle_mass", in, mass, 0.0, 1e-9));
        }
}

}  // namespace detail

// Envelope-pair distribution: exact special-case reduction, CDF axioms on
// a grid, and seeded Monte Carlo agreement at three standard errors.
inline Report verify_nakagami_mc(const VerifyOptions& opt = {}) {
    EvalConfig cfg = detail::verify_config(opt);
    double red_tol = opt.tol.value_or(1e-10);
    Report rep;
    rep.suite = "nakagami-mc";
    rep.config = detail::config_echo(opt);

    const double rhos[3] = {0.1, 0.5, 0.9};

    // Unit-index reduction against the direct two-tail form.
    int n = opt.grid > 0 ? opt.grid : 10;
    auto raxis = detail::lin_grid(0.2, 2.0, n);
    for (double rho : rhos) {
        NakagamiBivariate model(1, 1.0, 1.0, rho);
        for (double r1 : raxis) {
            for (double r2 : raxis) {
                nlohmann::json in{{"rho", rho}, {"r1", r1}, {"r2", r2}};
                double general = bivariate_nakagami_cdf_normalized(model, r1, r2, cfg);
                double special = bivariate_rayleigh_cdf(rho, r1, r2, cfg);
                rep.checks.push_back(
                    make_check("unit_index_reduction", in, general, special, red_tol,
                               1e-14));
            }
        }
    }

    // CDF axioms over every model in the Monte Carlo set.
    const int ms[3] = {1, 2, 4};
    auto axiom_axis = detail::lin_grid(0.4, 2.0, 5);
    for (int m : ms) {
        for (double rho : rhos) {
            NakagamiBivariate model(m, 1.0, 1.0, rho);
            std::vector<std::vector<double>> f(axiom_axis.size(),
                                               std::vector<double>(axiom_axis.size()));
            for (std::size_t i = 0; i < axiom_axis.size(); ++i)
                for (std::size_t j = 0; j < axiom_axis.size(); ++j)
                    f[i][j] = bivariate_nakagami_cdf_normalized(model, axiom_axis[i],
                                                                axiom_axis[j], cfg);
            nlohmann::json base{{"m", m}, {"rho", rho}};
            detail::push_axiom_checks(rep, "cdf", base, axiom_axis, axiom_axis, f);
        }
    }

    // Seeded Monte Carlo at three binomial standard errors.
    const double rpts[3] = {0.7, 1.0, 1.4};
    int model_idx = 0;
    for (int m : ms) {
        for (double rho : rhos) {
            NakagamiBivariate model(m, 1.0, 1.0, rho);
            std::vector<std::pair<double, double>> thresholds;
            for (double r1 : rpts)
                for (double r2 : rpts) thresholds.emplace_back(r1, r2);
            auto mc = empirical_bivariate_cdf(model, thresholds, opt.samples,
                                              substream_seed(opt.seed, 1000 + model_idx));
            for (std::size_t t = 0; t < thresholds.size(); ++t) {
                nlohmann::json in{{"m", m},
                                  {"rho", rho},
                                  {"r1", thresholds[t].first},
                                  {"r2", thresholds[t].second},
                                  {"samples", mc[t].samples}};
                double analytic = bivariate_nakagami_cdf_normalized(
                    model, thresholds[t].first, thresholds[t].second, cfg);
                rep.checks.push_back(make_check("monte_carlo_3se", in, analytic,
                                                mc[t].estimate, 0.0,
                                                3.0 * mc[t].std_error));
            }
            ++model_idx;
        }
    }
    return rep;
}

namespace detail {

inline WishartModel wishart_mc_model_a() {
    Eigen::MatrixXcd sigma(2, 2), upsilon(2, 2);
    using C = std::complex<double>;
    sigma << C(1.0, 0.0), C(0.3, 0.2), C(0.3, -0.2), C(1.2, 0.0);
    Eigen::VectorXcd u(2), v(2);
    u << C(0.9, 0.0), C(0.4, 0.3);
    v << C(1.0, 0.0), C(0.6, -0.2);
    upsilon = 0.8 * u * v.adjoint();
    return WishartModel(sigma, upsilon);
}

inline WishartModel wishart_mc_model_b() {
    Eigen::MatrixXcd sigma(3, 3), upsilon(3, 3);
    using C = std::complex<double>;
    sigma << C(1.0, 0.0), C(0.0, 0.2), C(0.0, 0.0),
             C(0.0, -0.2), C(0.9, 0.0), C(0.1, 0.0),
             C(0.0, 0.0), C(0.1, 0.0), C(1.1, 0.0);
    Eigen::VectorXcd u(3), v(3);
    u << C(1.0, 0.0), C(0.3, 0.1), C(-0.2, 0.0);
    v << C(0.8, 0.0), C(0.1, 0.0), C(0.0, 0.4);
    upsilon = 0.7 * u * v.adjoint();
    return WishartModel(sigma, upsilon);
}

}  // namespace detail

// Smallest-eigenvalue distribution: the two analytic paths against each
// other, the exact central case, seeded Monte Carlo on matrix-built
// models, and monotonicity along the threshold axis.
inline Report verify_wishart_mc(const VerifyOptions& opt = {}) {
    EvalConfig cfg = detail::verify_config(opt);
    double cross_tol = opt.tol.value_or(1e-8);
    Report rep;
    rep.suite = "wishart-mc";
    rep.config = detail::config_echo(opt);

    const double lambdas[4] = {0.1, 0.5, 1.0, 2.0};

    // Path agreement on scalar-specified models.
    struct Inv {
        int m;
        double eta, mu, tsi;
    };
    const Inv invs[] = {{2, 1.5, 2.0, 2.5}, {3, 2.0, 3.0, 3.5}, {4, 0.8, 1.1, 4.6}};
    for (const auto& iv : invs) {
        auto model = WishartModel::from_invariants(iv.m, iv.eta, iv.mu, iv.tsi);
        double prev = 0.0;
        for (double lam : lambdas) {
            nlohmann::json in{
                {"m", iv.m}, {"eta", iv.eta}, {"mu", iv.mu}, {"trsiginv", iv.tsi},
                {"lambda", lam}};
            double fp = wishart_min_eig_cdf_phi3(model, lam, cfg);
            double fm = wishart_min_eig_cdf_marcum(model, lam, cfg);
            rep.checks.push_back(
                make_check("marcum_path_vs_series", in, fm, fp, cross_tol, 1e-300));
            rep.checks.push_back(
                make_bound_check("cdf_monotone_lambda", in, fp - prev, 0.0, 1e-9));
            prev = fp;
        }
    }

    // Central case: identity covariance, zero mean, exact closed form.
    for (int m : {2, 3}) {
        auto model = WishartModel::from_invariants(m, 0.0, 0.0, static_cast<double>(m));
        for (double lam : lambdas) {
            nlohmann::json in{{"m", m}, {"lambda", lam}};
            double f = wishart_min_eig_cdf_phi3(model, lam, cfg);
            double exact = -std::expm1(-lam * m);
            rep.checks.push_back(
                make_check("central_closed_form", in, f, exact, 0.0, 1e-9));
        }
    }

    // Seeded Monte Carlo on the two matrix-built models.
    const WishartModel mc_models[2] = {detail::wishart_mc_model_a(),
                                       detail::wishart_mc_model_b()};
    const std::vector<double> mc_lambdas[2] = {{0.05, 0.1, 0.2, 0.4},
                                               {0.1, 0.2, 0.35, 0.6}};
    for (int idx = 0; idx < 2; ++idx) {
        const auto& model = mc_models[idx];
        auto mc = empirical_min_eig_cdf(model, mc_lambdas[idx], opt.samples,
                                        substream_seed(opt.seed, 2000 + idx));
        for (std::size_t t = 0; t < mc_lambdas[idx].size(); ++t) {
            nlohmann::json in{{"model", idx}, {"m", model.dim()},
                              {"eta", model.eta()}, {"mu", model.mu()},
                              {"trsiginv", model.trace_sigma_inv()},
                              {"lambda", mc_lambdas[idx][t]},
                              {"samples", mc[t].samples}};
            double analytic = wishart_min_eig_cdf_phi3(model, mc_lambdas[idx][t], cfg);
            rep.checks.push_back(make_check("monte_carlo_3se", in, analytic,
                                            mc[t].estimate, 0.0, 3.0 * mc[t].std_error));
        }
    }
    return rep;
}

inline const std::vector<std::string>& verify_suite_names() {
    static const std::vector<std::string> names = {
        "marcum-cross", "phi3-paths", "recursion", "laplace", "nakagami-mc",
        "wishart-mc"};
    return names;
}

inline Report run_verify_suite(const std::string& name, const VerifyOptions& opt = {}) {
    if (name == "marcum-cross") return verify_marcum_cross(opt);
    if (name == "phi3-paths") return verify_phi3_paths(opt);
    if (name == "recursion") return verify_recursion(opt);
    if (name == "laplace") return verify_laplace(opt);
    if (name == "nakagami-mc") return verify_nakagami_mc(opt);
    if (name == "wishart-mc") return verify_wishart_mc(opt);
    throw domain_error("verify: unknown suite");
}

}  // namespace mqphi
