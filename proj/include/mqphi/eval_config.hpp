#pragma once

#include <cstdint>
#include <stdexcept>

namespace mqphi {

// Knobs shared by every evaluation path. rel_tol is the delivered-accuracy
// target for the adaptive quadrature layer; abs_tol is the underflow guard;
// max_terms bounds every series; quad_points bounds the adaptive quadrature
// panel budget; mc_samples and seed drive the Monte Carlo layer.
struct EvalConfig {
    double rel_tol = 1e-12;
    double abs_tol = 1e-300;
    int max_terms = 10000;
    int quad_points = 2048;
    std::int64_t mc_samples = 1000000;
    std::uint64_t seed = 42;
};

// Series are truncated at machine epsilon rather than rel_tol: stopping a
// positive-term series at a looser threshold leaves a tail of comparable
// size, and the few extra terms down to epsilon cost nothing.
inline constexpr double kSeriesEps = 2.220446049250313e-16;

// Argument outside an operation's domain.
class domain_error : public std::domain_error {
  public:
    using std::domain_error::domain_error;
};

// Series or quadrature failed to reach its target within budget.
class convergence_error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline void require_domain(bool ok, const char* msg) {
    if (!ok) throw domain_error(msg);
}

}  // namespace mqphi
