#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <complex>

#include <Eigen/Dense>

#include "mqphi/distributions.hpp"

using namespace mqphi;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("normalized envelope pair anchors") {
    CHECK_THAT(bivariate_nakagami_cdf_normalized({1, 1, 1, 0.5}, 1.0, 1.2),
               WithinRel(0.54962414029267395782, 1e-12));
    CHECK_THAT(bivariate_nakagami_cdf_normalized({2, 1, 1, 0.5}, 1.0, 1.2),
               WithinRel(0.52894562755196174616, 1e-12));
    CHECK_THAT(bivariate_nakagami_cdf_normalized({4, 1, 1, 0.9}, 0.7, 1.4),
               WithinRel(0.13573179395859145259, 1e-11));
    CHECK_THAT(bivariate_nakagami_cdf_normalized({3, 1, 1, 0.3}, 1.1, 0.6),
               WithinRel(0.080834253211606384817, 1e-12));
}

TEST_CASE("rayleigh special case anchor and reduction") {
    CHECK_THAT(bivariate_rayleigh_cdf(0.9, 0.3, 2.9),
               WithinRel(0.086068814728771813253, 1e-12));
    for (double rho : {0.1, 0.5, 0.9}) {
        for (double r1 : {0.4, 1.0, 1.8}) {
            for (double r2 : {0.3, 1.1, 2.0}) {
                double general =
                    bivariate_nakagami_cdf_normalized({1, 1, 1, rho}, r1, r2);
                double special = bivariate_rayleigh_cdf(rho, r1, r2);
                CHECK_THAT(general, WithinRel(special, 1e-11));
            }
        }
    }
}

TEST_CASE("zero correlation factorizes the joint law") {
    for (int m : {1, 3}) {
        NakagamiBivariate model(m, 1.0, 1.0, 0.0);
        double joint = bivariate_nakagami_cdf_normalized(model, 0.9, 1.3);
        double product = regularized_lower_gamma(m, m * 0.81) *
                         regularized_lower_gamma(m, m * 1.69);
        CHECK_THAT(joint, WithinRel(product, 1e-13));
    }
    CHECK_THAT(bivariate_rayleigh_cdf(0.0, 0.9, 1.3),
               WithinRel(-std::expm1(-0.81) * -std::expm1(-1.69), 1e-13));
}

TEST_CASE("mean power scaling is envelope scaling") {
    NakagamiBivariate scaled(2, 4.0, 0.25, 0.6);
    NakagamiBivariate unit(2, 1.0, 1.0, 0.6);
    CHECK_THAT(bivariate_nakagami_cdf(scaled, 1.6, 0.45),
               WithinRel(bivariate_nakagami_cdf_normalized(unit, 0.8, 0.9), 1e-13));
    CHECK_THAT(bivariate_nakagami_cdf(unit, 0.8, 0.9),
               WithinRel(bivariate_nakagami_cdf_normalized(unit, 0.8, 0.9), 1e-13));
}

TEST_CASE("envelope distribution domain and edges") {
    CHECK(bivariate_nakagami_cdf_normalized({2, 1, 1, 0.4}, 0.0, 1.0) == 0.0);
    CHECK(bivariate_nakagami_cdf_normalized({2, 1, 1, 0.4}, 1.0, 0.0) == 0.0);
    CHECK_THROWS_AS(bivariate_nakagami_cdf_normalized({2, 1, 1, 0.4}, -1.0, 1.0),
                    domain_error);
    CHECK_THROWS_AS(NakagamiBivariate(0, 1, 1, 0.5), domain_error);
    CHECK_THROWS_AS(NakagamiBivariate(1, 0, 1, 0.5), domain_error);
    CHECK_THROWS_AS(NakagamiBivariate(1, 1, 1, -0.1), domain_error);
    CHECK_THROWS_AS(NakagamiBivariate(1, 1, 1, 0.9999999), domain_error);
    CHECK_THROWS_AS(bivariate_rayleigh_cdf(1.0, 1, 1), domain_error);
}

TEST_CASE("joint cdf respects monotonicity and rectangle mass") {
    NakagamiBivariate model(3, 1.0, 1.0, 0.7);
    const double grid[] = {0.3, 0.7, 1.1, 1.5, 1.9};
    double f[5][5];
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j)
            f[i][j] = bivariate_nakagami_cdf_normalized(model, grid[i], grid[j]);
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j + 1 < 5; ++j) {
            CHECK(f[i][j + 1] - f[i][j] >= -1e-9);
            CHECK(f[j + 1][i] - f[j][i] >= -1e-9);
        }
    for (int i = 0; i + 1 < 5; ++i)
        for (int j = 0; j + 1 < 5; ++j)
            CHECK(f[i + 1][j + 1] - f[i][j + 1] - f[i + 1][j] + f[i][j] >= -1e-9);
    // limits: far corner approaches 1
    CHECK_THAT(bivariate_nakagami_cdf_normalized(model, 8.0, 8.0),
               WithinAbs(1.0, 1e-9));
}

TEST_CASE("minimum eigenvalue cdf anchors via scalar invariants") {
    auto m2 = WishartModel::from_invariants(2, 1.5, 2.0, 2.5);
    CHECK_THAT(wishart_min_eig_cdf_phi3(m2, 0.8),
               WithinRel(0.77888870898902696083, 1e-12));
    auto m3 = WishartModel::from_invariants(3, 2.0, 3.0, 3.5);
    CHECK_THAT(wishart_min_eig_cdf_phi3(m3, 0.5),
               WithinRel(0.76129968576191641462, 1e-12));
}

TEST_CASE("both analytic eigenvalue paths agree") {
    auto model = WishartModel::from_invariants(2, 1.5, 2.0, 2.5);
    for (double lam : {0.05, 0.3, 0.8, 1.5, 3.0}) {
        double fp = wishart_min_eig_cdf_phi3(model, lam);
        double fm = wishart_min_eig_cdf_marcum(model, lam);
        CHECK_THAT(fm, WithinRel(fp, 1e-9));
    }
    auto deep = WishartModel::from_invariants(4, 0.8, 1.1, 4.6);
    for (double lam : {0.1, 0.6, 1.8}) {
        CHECK_THAT(wishart_min_eig_cdf_marcum(deep, lam),
                   WithinRel(wishart_min_eig_cdf_phi3(deep, lam), 1e-9));
    }
}

TEST_CASE("central case collapses to the exponential closed form") {
    for (int m : {1, 2, 3, 5}) {
        auto model =
            WishartModel::from_invariants(m, 0.0, 0.0, static_cast<double>(m));
        for (double lam : {0.1, 0.5, 1.0, 2.0}) {
            CHECK_THAT(wishart_min_eig_cdf_phi3(model, lam),
                       WithinAbs(-std::expm1(-lam * m), 1e-12));
            CHECK_THAT(wishart_min_eig_cdf_marcum(model, lam),
                       WithinAbs(-std::expm1(-lam * m), 1e-12));
        }
    }
}

TEST_CASE("eigenvalue cdf domain and edges") {
    auto model = WishartModel::from_invariants(2, 1.5, 2.0, 2.5);
    CHECK(wishart_min_eig_cdf_phi3(model, 0.0) == 0.0);
    CHECK(wishart_min_eig_cdf_marcum(model, 0.0) == 0.0);
    CHECK_THROWS_AS(wishart_min_eig_cdf_phi3(model, -0.5), domain_error);
    CHECK_THROWS_AS(WishartModel::from_invariants(0, 1, 1, 1), domain_error);
    CHECK_THROWS_AS(WishartModel::from_invariants(2, -1, 1, 1), domain_error);
    CHECK_THROWS_AS(WishartModel::from_invariants(2, 1, 1, 0), domain_error);
    CHECK_THROWS_AS(WishartModel::from_invariants(2, 0, 1, 1), domain_error);
    CHECK_THROWS_AS(WishartModel::from_invariants(2, 1, 0, 1), domain_error);
}

TEST_CASE("matrix constructor derives the scalar invariants") {
    using C = std::complex<double>;
    // diagonal covariance and a rank-one mean concentrated on column 0:
    // the invariants are hand-computable.
    Eigen::MatrixXcd sigma(2, 2), upsilon(2, 2);
    sigma << C(0.5, 0), C(0, 0), C(0, 0), C(2.0, 0);
    upsilon << C(1.0, 0), C(0, 0), C(0.5, 0), C(0, 0);
    WishartModel model(sigma, upsilon);
    CHECK(model.dim() == 2);
    // Ups^H Ups = diag(1.25, 0); Theta = Sigma^-1 Ups^H Ups = diag(2.5, 0)
    CHECK_THAT(model.eta(), WithinRel(2.5, 1e-12));
    CHECK_THAT(model.mu(), WithinRel(5.0, 1e-12));
    CHECK_THAT(model.trace_sigma_inv(), WithinRel(2.5, 1e-12));
    CHECK(model.has_matrices());
    CHECK_FALSE(WishartModel::from_invariants(2, 1, 1, 1).has_matrices());

    // Hermitian square root reproduces sigma
    Eigen::MatrixXcd root = model.sigma_sqrt();
    CHECK((root * root - sigma).norm() < 1e-12);
}

TEST_CASE("matrix constructor rejects malformed models") {
    using C = std::complex<double>;
    Eigen::MatrixXcd bad(2, 2), ups(2, 2);
    ups.setZero();
    bad << C(1, 0), C(0.5, 0.1), C(0.5, 0.1), C(1, 0);  // not Hermitian
    CHECK_THROWS_AS(WishartModel(bad, ups), domain_error);

    Eigen::MatrixXcd indef(2, 2);
    indef << C(1, 0), C(2, 0), C(2, 0), C(1, 0);  // eigenvalues 3, -1
    CHECK_THROWS_AS(WishartModel(indef, ups), domain_error);

    Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(2, 2);
    Eigen::MatrixXcd rank2(2, 2);
    rank2 << C(1, 0), C(0, 0), C(0, 0), C(1, 0);
    CHECK_THROWS_AS(WishartModel(id, rank2), domain_error);
}

TEST_CASE("scalar and matrix descriptions give the same distribution") {
    using C = std::complex<double>;
    Eigen::MatrixXcd sigma(2, 2), upsilon(2, 2);
    sigma << C(1.0, 0), C(0.3, 0.2), C(0.3, -0.2), C(1.2, 0);
    Eigen::VectorXcd u(2), v(2);
    u << C(0.9, 0), C(0.4, 0.3);
    v << C(1.0, 0), C(0.6, -0.2);
    upsilon = 0.8 * u * v.adjoint();
    WishartModel from_matrices(sigma, upsilon);
    auto from_scalars = WishartModel::from_invariants(
        2, from_matrices.eta(), from_matrices.mu(), from_matrices.trace_sigma_inv());
    for (double lam : {0.1, 0.4, 1.0})
        CHECK_THAT(wishart_min_eig_cdf_phi3(from_matrices, lam),
                   WithinRel(wishart_min_eig_cdf_phi3(from_scalars, lam), 1e-14));
}

TEST_CASE("diversity bounds wrap the eigenvalue distribution") {
    CHECK_THAT(mimo_min_distance_bound(0.25, 2.0), WithinRel(1.0, 1e-15));
    CHECK(mimo_min_distance_bound(0.0, 1.0) == 0.0);
    CHECK_THROWS_AS(mimo_min_distance_bound(-1.0, 1.0), domain_error);
    CHECK_THROWS_AS(mimo_min_distance_bound(1.0, 0.0), domain_error);

    auto model = WishartModel::from_invariants(2, 1.5, 2.0, 2.5);
    double direct = wishart_min_eig_cdf_phi3(model, 2.0 * 2.0 / 10.0);
    CHECK_THAT(mimo_outage_upper_bound(model, 10.0, 2, 2.0),
               WithinRel(direct, 1e-14));
    CHECK_THROWS_AS(mimo_outage_upper_bound(model, 0.0, 2, 1.0), domain_error);
    CHECK_THROWS_AS(mimo_outage_upper_bound(model, 1.0, 0, 1.0), domain_error);
}
