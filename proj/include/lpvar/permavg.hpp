#pragma once

// Permutation-average functional Ave_pi (sum_i |a_{i,pi(i)}|^q)^{1/q}, its
// two-block rearrangement equivalent, and a randomized ratio sweep.

#include <limits>

#include <Eigen/Dense>

#include "lpvar/rng.hpp"

namespace lpvar {

// Square matrix with the exponent q in [1, inf]; q = inf is handled as max.
struct RearrangementInput {
    Eigen::MatrixXd a;
    double q = 2.0;

    RearrangementInput(Eigen::MatrixXd m, double q_) : a(std::move(m)), q(q_) {
        if (a.rows() != a.cols() || a.rows() < 1)
            throw std::invalid_argument("RearrangementInput: matrix must be square");
        if (!(q >= 1.0))
            throw std::invalid_argument("RearrangementInput: q must be >= 1");
        if (!a.allFinite())
            throw std::invalid_argument("RearrangementInput: entries must be finite");
    }
    int n() const { return static_cast<int>(a.rows()); }
};

// (1/n) sum_{k=1}^{n} a*_k + ((1/n) sum_{k=n+1}^{n^2} (a*_k)^q)^{1/q} with a*
// the entries of |a| sorted in non-increasing order.
double rearrangement_functional(const RearrangementInput& inp);

// Exact average over all n! permutations; n <= 8.
double brute_avg_permutations(const RearrangementInput& inp);

struct RatioWindow {
    double min_ratio = std::numeric_limits<double>::infinity();
    double max_ratio = 0.0;
    int n_cases = 0;
};

// Deterministic sweep case: 0 = all ones, 1 = positive rank one, others are
// generalized-Gaussian matrices with p cycling over {1, 1.5, 2, 3, 8}.
Eigen::MatrixXd permavg_case_matrix(int case_id, int n, RngStream stream,
                                    std::string* label = nullptr);

// Ratio brute/functional over random generalized-Gaussian matrices (several
// p), plus an all-ones and a positive rank-one case; n <= 7.
RatioWindow ratio_window_check(int n_cases, int n, double q, RngStream stream);

} // namespace lpvar
