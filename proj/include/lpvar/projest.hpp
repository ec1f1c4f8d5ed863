#pragma once

// Expectations over random vectors uniform on hyperplane projections of
// B_p^n through the psi-weighted cone representation, the variance report
// (covariance, largest eigenvalue, conjecture ratio), and the four-summand
// upper-bound decomposition of Var |X|^2.

#include <array>
#include <functional>
#include <stdexcept>

#include <Eigen/Dense>

#include "lpvar/rng.hpp"
#include "lpvar/specfun.hpp"
#include "lpvar/stats.hpp"
#include "lpvar/weights.hpp"

namespace lpvar {

struct DegenerateWeightError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Projection of B_p^n onto the hyperplane orthogonal to dir.theta.
struct ProjectedBodySpec {
    PExponent p;
    int n;
    Direction dir;

    ProjectedBodySpec(PExponent p_, int n_, Direction dir_)
        : p(p_), n(n_), dir(std::move(dir_)) {
        if (n < 2) throw std::invalid_argument("ProjectedBodySpec: n must be >= 2");
        if (dir.dim() != n)
            throw std::invalid_argument("ProjectedBodySpec: direction dimension mismatch");
    }
};

struct VarianceReport {
    MomentEstimate e_norm2;              // E |X|^2
    MomentEstimate e_norm4;              // E |X|^4
    double var_norm2 = 0.0;              // Var |X|^2
    double var_norm2_se = 0.0;
    Eigen::MatrixXd cov;                 // covariance in an orthonormal basis of H
    double lambda2 = 0.0;                // largest eigenvalue of cov
    double lambda2_se = 0.0;             // batch-replicate spread
    double ratio = 0.0;                  // Var |X|^2 / (lambda2 E |X|^2)
    double ratio_se = 0.0;
    std::array<double, 4> terms{};       // four-summand decomposition
    std::array<double, 4> term_ses{};
};

// Deterministic orthonormal basis of theta-perp (n x (n-1)), Gram-Schmidt
// completion of theta over the canonical basis. Shared with the quadrature
// oracle so both integrate the same parametrization.
Eigen::MatrixXd hyperplane_basis(const Eigen::Ref<const Eigen::VectorXd>& theta);

// E f(X) = E[f(P_H(G/S)) psi] / E[psi]; f receives the projected point in
// ambient coordinates. Ratio-of-means with delta-method errors over paired
// batches. Throws DegenerateWeightError when the weight mean is statistically
// indistinguishable from zero (below 6 sigma).
MomentEstimate estimate_ef(const ProjectedBodySpec& spec,
                           const std::function<double(const Eigen::VectorXd&)>& f,
                           std::int64_t n_samples, RngStream stream,
                           int threads = 0);

// Full variance report from one common sample pool.
VarianceReport variance_report(const ProjectedBodySpec& spec, std::int64_t n_samples,
                               RngStream stream, int threads = 0);

// The four summands bounding Var |X|^2, each with its standard error.
std::array<MomentEstimate, 4> four_term_decomposition(const ProjectedBodySpec& spec,
                                                      std::int64_t n_samples,
                                                      RngStream stream,
                                                      int threads = 0);

// n^{1 - 4/p}, the expected order of lambda^2 E |X|^2.
double theoretical_scale(const ProjectedBodySpec& spec);

// Largest eigenvalue of a symmetric matrix (dense selfadjoint solve).
// Throws if the input is asymmetric beyond 1e-8.
double largest_eigenvalue(const Eigen::Ref<const Eigen::MatrixXd>& sym);

} // namespace lpvar
