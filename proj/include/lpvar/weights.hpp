#pragma once

// The psi and phi direction weights built from generalized-Gaussian vectors,
// their Monte Carlo moment estimators, scaling diagnostics for the diagonal
// direction, the subset-sum ratio bound, and the centered-square sum moments.

#include <vector>

#include <Eigen/Dense>

#include "lpvar/rng.hpp"
#include "lpvar/specfun.hpp"
#include "lpvar/stats.hpp"

namespace lpvar {

// Unit vector theta on the Euclidean sphere with its cached l1 norm.
struct Direction {
    Eigen::VectorXd theta;
    double norm1;

    explicit Direction(Eigen::VectorXd t);
    static Direction diagonal(int n);            // (1, ..., 1) / sqrt(n)
    static Direction axis(int n, int i);         // e_i
    int dim() const { return static_cast<int>(theta.size()); }
};

// sign(x) |x|^q with the measure-zero conventions 0^q := 0 for q > 0 and
// |x|^0 sign(x) := sign(x), sign(0) = 0. Computed as exp(q ln|x|) so that
// large q underflows cleanly to zero.
double signed_power(double x, double q);

// psi_theta(g) = | sum_i |g_i|^{p-1} sign(g_i) theta_i |
double psi_weight(const Eigen::Ref<const Eigen::VectorXd>& g, const PExponent& p,
                  const Direction& dir);

// phi_theta(g) = ( sum_i |g_i|^{2p-2} theta_i^2 )^{1/2}
double phi_weight(const Eigen::Ref<const Eigen::VectorXd>& g, const PExponent& p,
                  const Direction& dir);

// Batched Monte Carlo estimate of E psi_theta (moment = 1) or E psi_theta^2
// (moment = 2). Requires n_samples >= 3e4.
MomentEstimate estimate_epsi(const PExponent& p, int n, const Direction& dir,
                             int moment, std::int64_t n_samples, RngStream stream,
                             int threads = 0);

// E phi_theta, same batching scheme.
MomentEstimate estimate_ephi(const PExponent& p, int n, const Direction& dir,
                             std::int64_t n_samples, RngStream stream,
                             int threads = 0);

// Normalized E psi at the diagonal direction: sqrt(p) E psi for p <= n and
// (p / sqrt(n)) E psi for p > n, matching the two scaling regimes.
struct EpsiScaling {
    double p = 0.0;
    int n = 0;
    bool large_p_regime = false; // p > n
    double e_psi = 0.0;
    double e_psi_se = 0.0;
    double normalized = 0.0;
    double normalized_se = 0.0;
};

EpsiScaling epsi_scaling_check(const PExponent& p, int n, std::int64_t n_samples,
                               RngStream stream, int threads = 0);

// E | sum_{i in I} |g_i|^{p-1} sign(g_i) theta_i | / E psi_theta from paired
// samples. Empty index sets give exactly zero.
MomentEstimate subset_psi_ratio(const PExponent& p, int n, const Direction& dir,
                                const std::vector<int>& index_set,
                                std::int64_t n_samples, RngStream stream,
                                int threads = 0);

// ( E | sum_i (g_i^2 - gbar_i^2) |^alpha )^{1/alpha} for alpha in {2, 4, 8}
// subject to alpha <= e^p.
MomentEstimate symmetric_sum_moment(const PExponent& p, int n, double alpha,
                                    std::int64_t n_samples, RngStream stream,
                                    int threads = 0);

// Fraction of Haar-random directions whose estimated E psi_theta clears
// threshold * E psi_{theta_0}.
double haar_direction_fraction(const PExponent& p, int n, int n_dirs,
                               std::int64_t n_samples, RngStream stream,
                               double threshold = 0.05, int threads = 0);

} // namespace lpvar
