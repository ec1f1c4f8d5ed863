#pragma once

// Chord geometry of B_p^n along a direction, membership in the hyperplane
// projection, the volume-one isotropic normalization, exact uniform sampling
// on Steiner symmetrizations, and the variance-comparison checks.

#include <optional>

#include <Eigen/Dense>

#include "lpvar/projest.hpp"
#include "lpvar/rng.hpp"
#include "lpvar/specfun.hpp"
#include "lpvar/stats.hpp"
#include "lpvar/weights.hpp"

namespace lpvar {

// Fiber {t : ||y + t theta||_p <= 1} of the unit ball along theta.
struct Chord {
    double a = 0.0;
    double b = 0.0;
    double half_length() const { return 0.5 * (b - a); }
};

// Endpoints of the fiber through y in theta-perp, or nullopt when the fiber
// misses the ball. Convex bisection to 1e-12.
std::optional<Chord> chord(const PExponent& p, int n, const Direction& dir,
                           const Eigen::Ref<const Eigen::VectorXd>& y);

// min over t of ||y + t theta||_p (golden section on the convex fiber map).
double projection_depth(const PExponent& p, int n, const Direction& dir,
                        const Eigen::Ref<const Eigen::VectorXd>& y);

// Whether y (in theta-perp) belongs to the projection of B_p^n: the convex
// 1-D minimum of t -> ||y + t theta||_p is <= 1 (interior tolerance 1e-10).
bool membership_projection(const PExponent& p, int n, const Direction& dir,
                           const Eigen::Ref<const Eigen::VectorXd>& y);

// Volume-one rescaling of B_p^n with its axis second moment L_K^2.
struct IsotropicBodySpec {
    PExponent p;
    int n;
    double scale; // |B_p^n|^{-1/n}
    double lk2;   // E <X, e_1>^2 on the volume-one body
};

IsotropicBodySpec isotropic_spec(const PExponent& p, int n);

// One uniform point of S_theta(K~), K~ the volume-one body: uniform point of
// K~, projected to theta-perp, plus a uniform offset along the centered fiber.
Eigen::VectorXd sample_steiner_point(RngEngine& eng, const IsotropicBodySpec& body,
                                     const Direction& dir);

// N sample rows from S_theta(K~).
Eigen::MatrixXd sample_steiner(RngStream stream, const PExponent& p, int n,
                               const Direction& dir, std::int64_t n_samples);

// Var |Y|^2 on the symmetrization vs Var |X|^2 on the volume-one body, the
// n L_K^4 comparison bound, and the conjecture ratios of both bodies.
struct SteinerCompare {
    double var_y = 0.0, var_y_se = 0.0;
    double var_x = 0.0, var_x_se = 0.0;
    double bound = 0.0;        // n * L_K^4
    double e2_y = 0.0, e2_x = 0.0;
    double lambda2_y = 0.0;    // eigensolve of the sampled covariance of Y
    double lambda2_x = 0.0;    // closed form L_K^2
    double r_y = 0.0, r_x = 0.0;
    double axis2_y = 0.0, axis2_y_se = 0.0; // E <Y,theta>^2
    double axis2_x = 0.0, axis2_x_se = 0.0;
    double axis4_y = 0.0, axis4_y_se = 0.0; // E <Y,theta>^4
    double axis4_x = 0.0, axis4_x_se = 0.0;
};

SteinerCompare steiner_variance_compare(const PExponent& p, int n, const Direction& dir,
                                        std::int64_t n_samples, RngStream stream,
                                        int threads = 0);

// |sqrt(Var|X|^2) - sqrt(Var|P_E X|^2)| <= sqrt(Var|P_{E-perp} X|^2) from one
// uniform-on-B_p^n pool, with the 4-sigma slack bookkeeping.
struct ProjectionDecomposition {
    double sd_full = 0.0, sd_full_se = 0.0;
    double sd_proj = 0.0, sd_proj_se = 0.0;
    double sd_perp = 0.0, sd_perp_se = 0.0;
    double lhs = 0.0;       // |sd_full - sd_proj|
    double rhs = 0.0;       // sd_perp
    double slack = 0.0;     // 4 * combined sigma
    bool holds = false;     // lhs <= rhs + slack
};

ProjectionDecomposition projection_decomposition_check(const PExponent& p, int n,
                                                       const Direction& dir,
                                                       std::int64_t n_samples,
                                                       RngStream stream,
                                                       int threads = 0);

} // namespace lpvar
