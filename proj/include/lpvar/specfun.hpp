#pragma once

// Special-function kernel: log-gamma, regularized incomplete gamma, the
// closed-form moment oracles for generalized-Gaussian coordinates, and the
// volume of the unit l_p ball.

#include <stdexcept>

namespace lpvar {

// Validated exponent p in [1, inf) with cached dual exponent p* = p/(p-1).
// The dual degenerates to +inf at p = 1; `dual_infinite` flags that case.
struct PExponent {
    double p;
    double p_star;
    bool dual_infinite;

    explicit PExponent(double p_value);
};

// ln Gamma(x) for x > 0. Relative error below 1e-12 on [1e-3, 1e4].
double log_gamma(double x);

// Regularized lower incomplete gamma P(a, x) = gamma(a, x) / Gamma(a).
// Series expansion for x < a + 1, Lentz continued fraction otherwise.
double reg_lower_inc_gamma(double a, double x);

// E|g|^alpha = Gamma((alpha+1)/p) / Gamma(1/p) for the generalized Gaussian g
// with density exp(-|t|^p) / (2 Gamma(1 + 1/p)).
double moment_g(const PExponent& p, double alpha);

// E S^alpha = Gamma((n+alpha)/p) / Gamma(n/p) where S is the l_p norm of n
// independent copies of g.
double moment_S(const PExponent& p, int n, double alpha);

// |B_p^n| = (2 Gamma(1 + 1/p))^n / Gamma(1 + n/p), evaluated in log space.
double log_ball_volume(const PExponent& p, int n);
double ball_volume(const PExponent& p, int n);

} // namespace lpvar
