#pragma once

// Deterministic midpoint-rule oracles for n in {2, 3}: moments over B_p^n,
// moments over hyperplane projections of B_p^n, the deterministic value of
// E psi_theta, and boundary (surface) integrals on the l_p circle. Every
// value is certified by agreement of two successive grid refinements.

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "lpvar/specfun.hpp"
#include "lpvar/weights.hpp"

namespace lpvar {

struct OracleUncertifiedError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct QuadConfig {
    int grid_points_per_axis = 0; // 0 selects 2048 (n = 2) or 512 (n = 3)
    int refinement_levels = 2;
    double certify_rel_tol = 1e-4;
};

// Certified oracle value with the relative delta between the last two
// refinement levels.
struct CertifiedValue {
    double value = 0.0;
    double refinement_delta = 0.0;
};

// E prod_i x_i^{k_i} for X uniform on B_p^n, n <= 3.
CertifiedValue quad_moments_ball(const PExponent& p, int n,
                                 const std::vector<int>& exponents,
                                 QuadConfig cfg = {});

// |B_p^n| itself from the same grids.
CertifiedValue quad_volume_ball(const PExponent& p, int n, QuadConfig cfg = {});

// E f(X) for X uniform on the projection of B_p^n onto theta-perp; f takes
// the ambient n-vector. Uses the same hyperplane basis as the estimators.
CertifiedValue quad_moments_projection(const PExponent& p, int n, const Direction& dir,
                                       const std::function<double(const Eigen::VectorXd&)>& f,
                                       QuadConfig cfg = {});

// E psi_theta by tensor quadrature against the product density.
CertifiedValue quad_epsi(const PExponent& p, int n, const Direction& dir,
                         QuadConfig cfg = {});

// Surface integral Int_{boundary B_p^2} f dsigma (unnormalized), n = 2 only.
CertifiedValue quad_boundary_integral(const PExponent& p,
                                      const std::function<double(double, double)>& f,
                                      QuadConfig cfg = {});

} // namespace lpvar
