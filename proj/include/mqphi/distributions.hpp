#pragma once

#include <cmath>
#include <complex>
#include <map>
#include <utility>

#include <Eigen/Dense>

#include "eval_config.hpp"
#include "marcum.hpp"
#include "phi3.hpp"
#include "special_functions.hpp"

namespace mqphi {

// Below this the correlation is treated as exactly zero and the joint law
// factorizes; the correlated formula would otherwise divide by rho.
constexpr double kRhoIndependent = 1e-6;

// Pair of correlated Nakagami envelopes: common integer fading index m,
// mean powers omega1/omega2, power correlation rho.
struct NakagamiBivariate {
    int m = 1;
    double omega1 = 1.0;
    double omega2 = 1.0;
    double rho = 0.0;

    NakagamiBivariate(int m_, double omega1_, double omega2_, double rho_)
        : m(m_), omega1(omega1_), omega2(omega2_), rho(rho_) {
        require_domain(m >= 1, "NakagamiBivariate: requires integer m >= 1");
        require_domain(std::isfinite(omega1) && omega1 > 0.0 &&
                           std::isfinite(omega2) && omega2 > 0.0,
                       "NakagamiBivariate: mean powers must be positive");
        require_domain(std::isfinite(rho) && rho >= 0.0 && rho <= 1.0 - kRhoIndependent,
                       "NakagamiBivariate: rho must lie in [0, 1 - 1e-6]");
    }

    double alpha() const { return std::sqrt(2.0 * m / (1.0 - rho)); }
    double beta() const { return alpha() * std::sqrt(rho); }
};

// Joint CDF of the normalized envelope pair (unit mean powers). The
// correlated branch is the closed form built from Marcum tails with
// coefficient polynomials; every coefficient is combined in log space.
inline double bivariate_nakagami_cdf_normalized(const NakagamiBivariate& model,
                                                double r1, double r2,
                                                const EvalConfig& cfg = {}) {
    require_domain(std::isfinite(r1) && r1 >= 0.0 && std::isfinite(r2) && r2 >= 0.0,
                   "bivariate_nakagami_cdf: requires r1, r2 >= 0");
    if (r1 == 0.0 || r2 == 0.0) return 0.0;
    int m = model.m;
    if (model.rho < kRhoIndependent)
        return regularized_lower_gamma(m, m * r1 * r1, cfg) *
               regularized_lower_gamma(m, m * r2 * r2, cfg);

    double rho = model.rho;
    double al = model.alpha();
    double be = model.beta();

    double f = regularized_lower_gamma(m, m * r2 * r2, cfg);

    double l1 = std::log(m * r1 * r1);
    for (int k = 0; k < m; ++k) {
        double wgt = std::exp(-m * r1 * r1 + k * l1 - std::lgamma(k + 1.0));
        f -= wgt * marcum_q(1 - k, r2 * al, r1 * be, cfg);
    }

    // Marcum tails at the swapped argument pair recur across the triple
    // sum with only the order changing; cache per distinct order.
    std::map<int, double> tails;
    auto tail = [&](int order) {
        auto it = tails.find(order);
        if (it != tails.end()) return it->second;
        double q = marcum_q(order, r2 * be, r1 * al, cfg);
        tails.emplace(order, q);
        return q;
    };

    double zz = 0.25 * std::pow(r1 * r2 * al * be, 2);
    double lr = std::log(rho);
    double l1r = std::log1p(-rho);
    double lx = std::log(m * r1 * r1 / rho);
    double base = -m * r2 * r2;
    for (int k = 0; k < m; ++k) {
        for (int i = 1; i <= m - k; ++i) {
            for (int r = 0; r <= 2 * (i - 1); ++r) {
                SignedLog a =
                    detail::coeff_polynomial_real(i, static_cast<double>(k + i), r)
                        .evaluate_log(zz);
                if (a.sign == 0) continue;
                double q = tail(2 - k - i + r);
                if (q <= 0.0) continue;
                double lcoef = r * (l1r - lr) - std::lgamma(k + 1.0) +
                               (k + i - r - 1.0) * lx + base + a.log_abs + std::log(q);
                f += a.sign * std::exp(lcoef);
            }
        }
    }

    double violation = std::max({-f, f - 1.0, 0.0});
    if (violation >= 1e-9)
        throw convergence_error("bivariate_nakagami_cdf: result outside [0, 1]");
    return std::min(1.0, std::max(0.0, f));
}

// Joint CDF at the model's actual mean powers via envelope scaling.
inline double bivariate_nakagami_cdf(const NakagamiBivariate& model, double r1,
                                     double r2, const EvalConfig& cfg = {}) {
    require_domain(std::isfinite(r1) && r1 >= 0.0 && std::isfinite(r2) && r2 >= 0.0,
                   "bivariate_nakagami_cdf: requires r1, r2 >= 0");
    return bivariate_nakagami_cdf_normalized(model, r1 / std::sqrt(model.omega1),
                                             r2 / std::sqrt(model.omega2), cfg);
}

// Unit-power Rayleigh special case in its direct two-tail form.
inline double bivariate_rayleigh_cdf(double rho, double r1, double r2,
                                     const EvalConfig& cfg = {}) {
    require_domain(std::isfinite(rho) && rho >= 0.0 && rho <= 1.0 - kRhoIndependent,
                   "bivariate_rayleigh_cdf: rho must lie in [0, 1 - 1e-6]");
    require_domain(std::isfinite(r1) && r1 >= 0.0 && std::isfinite(r2) && r2 >= 0.0,
                   "bivariate_rayleigh_cdf: requires r1, r2 >= 0");
    if (r1 == 0.0 || r2 == 0.0) return 0.0;
    if (rho < kRhoIndependent)
        return -std::expm1(-r1 * r1) * -std::expm1(-r2 * r2);
    double al = std::sqrt(2.0 / (1.0 - rho));
    double be = al * std::sqrt(rho);
    return 1.0 - std::exp(-r2 * r2) -
           std::exp(-r1 * r1) * marcum_q(1, r2 * al, r1 * be, cfg) +
           std::exp(-r2 * r2) * marcum_q(1, r2 * be, r1 * al, cfg);
}

// Square-case noncentral complex Wishart description: W = X^H X where the
// rows of X are independent complex Gaussians with common covariance Sigma
// and mean matrix Upsilon of rank at most one. The minimum-eigenvalue CDF
// depends on the matrices only through the three scalar invariants
// (eta, mu, tr Sigma^{-1}), so the class also offers a scalar factory.
class WishartModel {
  public:
    WishartModel(const Eigen::MatrixXcd& sigma, const Eigen::MatrixXcd& upsilon)
        : sigma_(sigma), upsilon_(upsilon), has_matrices_(true) {
        int m = static_cast<int>(sigma.rows());
        require_domain(m >= 1 && sigma.cols() == m, "WishartModel: sigma must be square");
        require_domain(upsilon.rows() == m && upsilon.cols() == m,
                       "WishartModel: upsilon must match sigma's dimension");
        double scale = sigma.norm();
        require_domain((sigma - sigma.adjoint()).norm() <= 1e-12 * (scale + 1.0),
                       "WishartModel: sigma must be Hermitian");

        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sigma);
        require_domain(es.info() == Eigen::Success,
                       "WishartModel: eigendecomposition failed");
        double lo = es.eigenvalues().minCoeff();
        require_domain(lo > 1e-12 * (scale + 1.0),
                       "WishartModel: sigma must be positive definite");
        sigma_sqrt_ = es.operatorSqrt();

        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(upsilon);
        const auto& sv = svd.singularValues();
        if (m >= 2)
            require_domain(sv(1) <= 1e-10 * (sv(0) + 1.0),
                           "WishartModel: upsilon must have rank at most one");

        Eigen::MatrixXcd sigma_inv = es.operatorInverseSqrt() * es.operatorInverseSqrt();
        Eigen::MatrixXcd theta = sigma_inv * upsilon.adjoint() * upsilon;
        dim_ = m;
        eta_ = theta.trace().real();
        mu_ = (theta * sigma_inv).trace().real();
        trace_sigma_inv_ = sigma_inv.trace().real();
    }

    static WishartModel from_invariants(int m, double eta, double mu,
                                        double trace_sigma_inv) {
        require_domain(m >= 1, "WishartModel: requires m >= 1");
        require_domain(std::isfinite(eta) && eta >= 0.0, "WishartModel: requires eta >= 0");
        require_domain(std::isfinite(mu) && mu >= 0.0, "WishartModel: requires mu >= 0");
        require_domain(std::isfinite(trace_sigma_inv) && trace_sigma_inv > 0.0,
                       "WishartModel: requires tr(sigma^-1) > 0");
        require_domain((eta == 0.0) == (mu == 0.0),
                       "WishartModel: eta and mu must vanish together");
        WishartModel out;
        out.dim_ = m;
        out.eta_ = eta;
        out.mu_ = mu;
        out.trace_sigma_inv_ = trace_sigma_inv;
        return out;
    }

    int dim() const { return dim_; }
    double eta() const { return eta_; }
    double mu() const { return mu_; }
    double trace_sigma_inv() const { return trace_sigma_inv_; }
    bool has_matrices() const { return has_matrices_; }

    const Eigen::MatrixXcd& sigma_sqrt() const {
        require_domain(has_matrices_, "WishartModel: no matrices behind this model");
        return sigma_sqrt_;
    }
    const Eigen::MatrixXcd& upsilon() const {
        require_domain(has_matrices_, "WishartModel: no matrices behind this model");
        return upsilon_;
    }

  private:
    WishartModel() = default;

    Eigen::MatrixXcd sigma_, upsilon_, sigma_sqrt_;
    int dim_ = 1;
    double eta_ = 0.0, mu_ = 0.0, trace_sigma_inv_ = 1.0;
    bool has_matrices_ = false;
};

namespace detail {

inline double wishart_cdf_common(int m, double eta, double mu, double tsi,
                                 double lambda, bool marcum_path,
                                 const EvalConfig& cfg) {
    require_domain(std::isfinite(lambda) && lambda >= 0.0,
                   "wishart_min_eig_cdf: requires lambda >= 0");
    if (lambda == 0.0) return 0.0;
    double zz = lambda * mu;
    double md = static_cast<double>(m);
    SignedLog tilde;
    if (marcum_path && eta > 0.0 && zz > 0.0)
        tilde = phi3_tilde_via_marcum_log({md, md, eta, zz}, cfg);
    else
        tilde = phi3_tilde_series_log({md, md, eta, zz}, cfg);
    if (tilde.sign <= 0)
        throw convergence_error("wishart_min_eig_cdf: series collapsed");
    double L = std::lgamma(md) - eta - lambda * tsi + tilde.log_abs;
    return -std::expm1(L);
}

}  // namespace detail

// Minimum-eigenvalue CDF through the direct series path.
inline double wishart_min_eig_cdf_phi3(const WishartModel& model, double lambda,
                                       const EvalConfig& cfg = {}) {
    return detail::wishart_cdf_common(model.dim(), model.eta(), model.mu(),
                                      model.trace_sigma_inv(), lambda, false, cfg);
}

// Minimum-eigenvalue CDF through the Marcum tail expansion; falls back to
// the series path in the central or boundary cases where the expansion's
// strict positivity preconditions fail.
inline double wishart_min_eig_cdf_marcum(const WishartModel& model, double lambda,
                                         const EvalConfig& cfg = {}) {
    return detail::wishart_cdf_common(model.dim(), model.eta(), model.mu(),
                                      model.trace_sigma_inv(), lambda, true, cfg);
}

// Transmit-diversity floor on the receive constellation distance.
inline double mimo_min_distance_bound(double lambda_min, double d0) {
    require_domain(std::isfinite(lambda_min) && lambda_min >= 0.0,
                   "mimo_min_distance_bound: requires lambda_min >= 0");
    require_domain(std::isfinite(d0) && d0 > 0.0,
                   "mimo_min_distance_bound: requires d0 > 0");
    return std::sqrt(lambda_min) * d0;
}

// Outage probability upper bound: the minimum-eigenvalue CDF evaluated at
// the SINR threshold scaled by nt / snr.
inline double mimo_outage_upper_bound(const WishartModel& model, double snr_per_symbol,
                                      int nt, double sinr_threshold,
                                      const EvalConfig& cfg = {}) {
    require_domain(std::isfinite(snr_per_symbol) && snr_per_symbol > 0.0,
                   "mimo_outage_upper_bound: requires snr > 0");
    require_domain(nt >= 1, "mimo_outage_upper_bound: requires nt >= 1");
    require_domain(std::isfinite(sinr_threshold) && sinr_threshold > 0.0,
                   "mimo_outage_upper_bound: requires threshold > 0");
    return wishart_min_eig_cdf_phi3(model, sinr_threshold * nt / snr_per_symbol, cfg);
}

}  // namespace mqphi
