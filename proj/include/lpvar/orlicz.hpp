#pragma once

// The Orlicz function M associated with the coordinate weights |g|^{p-1}
// (q = 2 instance), the Luxemburg norm it induces, and the Monte Carlo
// comparison E phi_theta vs ||theta||_M. Only p > 1 is supported here: the
// dual exponent degenerates at p = 1 and callers handle that case directly.

#include <vector>

#include <Eigen/Dense>

#include "lpvar/rng.hpp"
#include "lpvar/specfun.hpp"
#include "lpvar/stats.hpp"
#include "lpvar/weights.hpp"

namespace lpvar {

struct UnsupportedExponentError : std::domain_error {
    using std::domain_error::domain_error;
};

// M(s) = (2 / (p Gamma(1+1/p))) * Int_0^s [ t gamma(2-1/p, t^{-p*})
//         + Gamma(2-1/p)-free tail exp(-t^{-p*}) ] dt,
// where gamma(.,.) is the lower incomplete gamma function and p* the dual
// exponent. The cumulative integral is cached on a fixed grid at
// construction; evaluations integrate the remaining partial cell on demand,
// so instances are immutable and safe for concurrent readers.
class OrliczM {
  public:
    explicit OrliczM(const PExponent& p);

    double eval(double s) const;        // M(s), relative error <= 1e-8
    double inverse(double y) const;     // smallest s with M(s) = y, y > 0
    const PExponent& exponent() const { return p_; }

    // Outer integrand before the 2/(p Gamma(1+1/p)) prefactor.
    double integrand(double t) const;

  private:
    PExponent p_;
    double prefactor_;   // 2 / (p Gamma(1+1/p))
    double inner_a_;     // 2 - 1/p
    double gamma_a_;     // Gamma(2 - 1/p)
    std::vector<double> grid_s_;
    std::vector<double> grid_m_;

    double integrate(double lo, double hi) const;
};

// Luxemburg norm ||x||_M = inf { rho > 0 : sum_i M(|x_i| / rho) <= 1 },
// bisection to 1e-10 relative. Zero vectors give zero.
double luxemburg_norm(const OrliczM& m, const Eigen::Ref<const Eigen::VectorXd>& x);

// Monte Carlo E phi_theta divided by ||theta||_M.
RatioEstimate orlicz_vs_mc(const OrliczM& m, int n, const Direction& dir,
                           std::int64_t n_samples, RngStream stream,
                           int threads = 0);

} // namespace lpvar
