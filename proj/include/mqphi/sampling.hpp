#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "distributions.hpp"
#include "eval_config.hpp"

namespace mqphi {

namespace detail {

// splitmix64 step (Vigna's reference constants).
inline std::uint64_t splitmix64_next(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

}  // namespace detail

// Deterministic derivation of independent sub-stream seeds: the chunk index
// is folded into the base seed and passed through two splitmix64 steps.
// Chunked drivers key on the chunk index, so aggregate counts are identical
// however the chunks are scheduled.
inline std::uint64_t substream_seed(std::uint64_t base, std::uint64_t index) {
    std::uint64_t s = base ^ (0xD1B54A32D192ED03ull * (index + 1));
    detail::splitmix64_next(s);
    return detail::splitmix64_next(s);
}

// Standard normals from Box-Muller over mt19937_64. The mapping from raw
// engine output to (0,1] uniforms is spelled out here so streams are fully
// reproducible across platforms and standard libraries.
class NormalRng {
  public:
    explicit NormalRng(std::uint64_t seed) : eng_(seed) {}

    double uniform01() {  // in (0, 1]: never 0, so log() below is safe
        return ((eng_() >> 11) + 1.0) * 0x1.0p-53;
    }

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform01();
        double u2 = (eng_() >> 11) * 0x1.0p-53;  // in [0, 1)
        double r = std::sqrt(-2.0 * std::log(u1));
        double th = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(th);
        have_spare_ = true;
        return r * std::cos(th);
    }

    // CN(0,1): real and imaginary parts each of variance 1/2.
    std::complex<double> next_complex() {
        double re = next();
        double im = next();
        return {re / std::numbers::sqrt2, im / std::numbers::sqrt2};
    }

  private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// Stream of correlated envelope pairs. Each draw builds m Gaussian pairs
// sharing a common component with weight sqrt(rho), sums the squared
// magnitudes, and returns the mean-power-scaled root-mean-square.
class BivariateNakagamiSampler {
  public:
    BivariateNakagamiSampler(const NakagamiBivariate& model, std::uint64_t seed)
        : model_(model),
          rng_(seed),
          sqrt_rho_(std::sqrt(model.rho)),
          sqrt_1mrho_(std::sqrt(1.0 - model.rho)) {}

    std::pair<double, double> next() {
        double s1 = 0.0;
        double s2 = 0.0;
        for (int k = 0; k < model_.m; ++k) {
            std::complex<double> g = rng_.next_complex();
            std::complex<double> e = rng_.next_complex();
            std::complex<double> h = sqrt_rho_ * g + sqrt_1mrho_ * e;
            s1 += std::norm(g);
            s2 += std::norm(h);
        }
        double inv_m = 1.0 / model_.m;
        return {std::sqrt(model_.omega1 * s1 * inv_m),
                std::sqrt(model_.omega2 * s2 * inv_m)};
    }

  private:
    NakagamiBivariate model_;
    NormalRng rng_;
    double sqrt_rho_, sqrt_1mrho_;
};

namespace detail {

inline double hermitian_min_eig(const Eigen::MatrixXcd& w) {
    int m = static_cast<int>(w.rows());
    if (m == 1) return w(0, 0).real();
    if (m == 2) {
        double tr = w(0, 0).real() + w(1, 1).real();
        double det = (w(0, 0) * w(1, 1) - w(0, 1) * w(1, 0)).real();
        double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
        return 0.5 * (tr - disc);
    }
    if (m == 3) {
        // Trigonometric solution of the characteristic cubic.
        double q = (w(0, 0).real() + w(1, 1).real() + w(2, 2).real()) / 3.0;
        Eigen::Matrix3cd shifted = w - q * Eigen::Matrix3cd::Identity();
        double p2 = shifted.squaredNorm() / 6.0;
        if (p2 <= 0.0) return q;
        double p = std::sqrt(p2);
        Eigen::Matrix3cd bmat = shifted / p;
        double r = 0.5 * bmat.determinant().real();
        r = std::min(1.0, std::max(-1.0, r));
        double phi = std::acos(r) / 3.0;
        return q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(w, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
}

}  // namespace detail

// Stream of minimum eigenvalues of W = X^H X with X = Upsilon + G Sigma^{1/2};
// G is filled row by row with CN(0,1) entries, in that documented order.
class WishartMinEigSampler {
  public:
    WishartMinEigSampler(const WishartModel& model, std::uint64_t seed)
        : rng_(seed),
          upsilon_(model.upsilon()),
          sigma_sqrt_(model.sigma_sqrt()),
          dim_(model.dim()) {}

    double next() {
        Eigen::MatrixXcd g(dim_, dim_);
        for (int r = 0; r < dim_; ++r)
            for (int c = 0; c < dim_; ++c) g(r, c) = rng_.next_complex();
        Eigen::MatrixXcd x = upsilon_ + g * sigma_sqrt_;
        Eigen::MatrixXcd w = x.adjoint() * x;
        return detail::hermitian_min_eig(w);
    }

  private:
    NormalRng rng_;
    Eigen::MatrixXcd upsilon_, sigma_sqrt_;
    int dim_;
};

// One Monte Carlo estimate: a proportion, its binomial standard error, and
// the provenance needed to reproduce it.
struct McResult {
    double estimate = 0.0;
    double std_error = 0.0;
    std::int64_t samples = 0;
    std::uint64_t seed = 0;
};

namespace detail {

constexpr std::int64_t kChunkSamples = 1 << 16;

inline McResult finish(std::int64_t count, std::int64_t n, std::uint64_t seed) {
    double p = static_cast<double>(count) / static_cast<double>(n);
    return {p, std::sqrt(p * (1.0 - p) / static_cast<double>(n)), n, seed};
}

}  // namespace detail

// Empirical joint CDF of the envelope pair at several thresholds from one
// pass over n draws. Drawing is chunked; chunk c uses substream_seed(seed, c).
inline std::vector<McResult> empirical_bivariate_cdf(
    const NakagamiBivariate& model,
    const std::vector<std::pair<double, double>>& thresholds, std::int64_t n,
    std::uint64_t seed) {
    require_domain(n >= 10000, "empirical_cdf: requires at least 1e4 samples");
    std::vector<std::int64_t> counts(thresholds.size(), 0);
    std::int64_t done = 0;
    std::uint64_t chunk = 0;
    while (done < n) {
        std::int64_t take = std::min(detail::kChunkSamples, n - done);
        BivariateNakagamiSampler sampler(model, substream_seed(seed, chunk));
        for (std::int64_t i = 0; i < take; ++i) {
            auto [r1, r2] = sampler.next();
            for (std::size_t t = 0; t < thresholds.size(); ++t)
                if (r1 <= thresholds[t].first && r2 <= thresholds[t].second)
                    ++counts[t];
        }
        done += take;
        ++chunk;
    }
    std::vector<McResult> out;
    out.reserve(thresholds.size());
    for (std::int64_t c : counts) out.push_back(detail::finish(c, n, seed));
    return out;
}

// Empirical CDF of the minimum eigenvalue at several thresholds.
inline std::vector<McResult> empirical_min_eig_cdf(const WishartModel& model,
                                                   const std::vector<double>& lambdas,
                                                   std::int64_t n, std::uint64_t seed) {
    require_domain(n >= 10000, "empirical_cdf: requires at least 1e4 samples");
    std::vector<std::int64_t> counts(lambdas.size(), 0);
    std::int64_t done = 0;
    std::uint64_t chunk = 0;
    while (done < n) {
        std::int64_t take = std::min(detail::kChunkSamples, n - done);
        WishartMinEigSampler sampler(model, substream_seed(seed, chunk));
        for (std::int64_t i = 0; i < take; ++i) {
            double v = sampler.next();
            for (std::size_t t = 0; t < lambdas.size(); ++t)
                if (v <= lambdas[t]) ++counts[t];
        }
        done += take;
        ++chunk;
    }
    std::vector<McResult> out;
    out.reserve(lambdas.size());
    for (std::int64_t c : counts) out.push_back(detail::finish(c, n, seed));
    return out;
}

// Single-stream scalar variant for arbitrary sampler types; the seed field
// of the result records the label passed in, not the stream state.
template <class Sampler>
inline McResult empirical_cdf(Sampler& sampler, double threshold, std::int64_t n,
                              std::uint64_t seed_label) {
    require_domain(n >= 10000, "empirical_cdf: requires at least 1e4 samples");
    std::int64_t count = 0;
    for (std::int64_t i = 0; i < n; ++i)
        if (sampler.next() <= threshold) ++count;
    return detail::finish(count, n, seed_label);
}

}  // namespace mqphi
