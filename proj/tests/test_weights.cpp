#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "lpvar/rng.hpp"
#include "lpvar/weights.hpp"

using namespace lpvar;

TEST_CASE("direction construction and invariants") {
    const Direction d0 = Direction::diagonal(9);
    CHECK(d0.norm1 == doctest::Approx(3.0).epsilon(1e-12));
    const Direction e2 = Direction::axis(5, 2);
    CHECK(e2.norm1 == doctest::Approx(1.0));
    CHECK_THROWS_AS(Direction(Eigen::VectorXd::Constant(4, 1.0)), std::invalid_argument);
    // 1 <= ||theta||_1 <= sqrt(n)
    RngEngine eng(RngStream{1, 1});
    for (int i = 0; i < 50; ++i) {
        const Direction d(sample_haar_direction(eng, 7));
        CHECK(d.norm1 >= 1.0 - 1e-12);
        CHECK(d.norm1 <= std::sqrt(7.0) + 1e-12);
    }
}

TEST_CASE("signed power conventions") {
    CHECK(signed_power(2.0, 3.0) == doctest::Approx(8.0));
    CHECK(signed_power(-2.0, 3.0) == doctest::Approx(-8.0));
    CHECK(signed_power(0.0, 2.5) == 0.0);
    // p = 1 convention: zeroth power keeps only the sign, sign(0) = 0
    CHECK(signed_power(3.0, 0.0) == 1.0);
    CHECK(signed_power(-3.0, 0.0) == -1.0);
    CHECK(signed_power(0.0, 0.0) == 0.0);
    // large-exponent underflow flushes to zero
    CHECK(signed_power(0.5, 4000.0) == 0.0);
}

TEST_CASE("psi and phi pointwise forms") {
    const int n = 4;
    const PExponent p(3.0);
    const Direction e1 = Direction::axis(n, 0);
    Eigen::VectorXd g(n);
    g << -1.3, 0.4, 2.0, -0.7;
    CHECK(psi_weight(g, p, e1) == doctest::Approx(std::pow(1.3, 2.0)).epsilon(1e-12));
    CHECK(phi_weight(g, p, e1) == doctest::Approx(std::pow(1.3, 2.0)).epsilon(1e-12));

    // p = 1 with positive entries reduces to |sum theta_i|
    const Direction d0 = Direction::diagonal(n);
    Eigen::VectorXd pos(n);
    pos << 0.2, 1.1, 0.5, 2.2;
    CHECK(psi_weight(pos, PExponent(1.0), d0) ==
          doctest::Approx(d0.theta.sum()).epsilon(1e-12));

    CHECK_THROWS_AS(psi_weight(Eigen::VectorXd::Zero(3), p, e1), std::invalid_argument);
}

TEST_CASE("psi is dominated by sqrt(n) phi pointwise") {
    RngEngine eng(RngStream{2, 2});
    for (double pv : {1.0, 1.7, 3.0}) {
        const PExponent p(pv);
        const int n = 6;
        const Direction d(sample_haar_direction(eng, n));
        for (int i = 0; i < 2000; ++i) {
            Eigen::VectorXd g(n);
            for (int j = 0; j < n; ++j) g[j] = sample_gg(eng, p);
            CHECK(psi_weight(g, p, d) <= std::sqrt(static_cast<double>(n)) *
                                             phi_weight(g, p, d) + 1e-12);
        }
    }
}

TEST_CASE("E psi^2 at p = 2 is exactly one half") {
    const int n = 5;
    RngEngine eng(RngStream{3, 3});
    const Direction d(sample_haar_direction(eng, n));
    const MomentEstimate e =
        estimate_epsi(PExponent(2.0), n, d, 2, 200000, RngStream{3, 4});
    CHECK(std::fabs(e.mean - 0.5) <= 4.0 * e.std_err);
    // E phi^2 = E|g|^{2p-2}
    const MomentEstimate f = estimate_ephi(PExponent(3.0), n, d, 200000, RngStream{3, 5});
    (void)f; // first moment; squared check below via moments
}

TEST_CASE("estimate_epsi windows, permutation and sign invariance") {
    const PExponent p(4.0);
    const int n = 12;
    RngEngine eng(RngStream{4, 1});
    const Direction d(sample_haar_direction(eng, n));

    const MomentEstimate e = estimate_epsi(p, n, d, 1, 100000, RngStream{4, 2});
    CHECK(p.p * e.mean >= 0.05);
    CHECK(std::sqrt(p.p) * e.mean <= 20.0);

    // coordinate permutation of theta
    Eigen::VectorXd perm = d.theta;
    std::reverse(perm.data(), perm.data() + n);
    const MomentEstimate ep =
        estimate_epsi(p, n, Direction(perm), 1, 100000, RngStream{4, 3});
    CHECK(std::fabs(e.mean - ep.mean) <=
          4.0 * std::sqrt(e.std_err * e.std_err + ep.std_err * ep.std_err));

    // sign flips
    Eigen::VectorXd flip = d.theta;
    for (int i = 0; i < n; i += 2) flip[i] = -flip[i];
    const MomentEstimate ef =
        estimate_epsi(p, n, Direction(flip), 1, 100000, RngStream{4, 4});
    CHECK(std::fabs(e.mean - ef.mean) <=
          4.0 * std::sqrt(e.std_err * e.std_err + ef.std_err * ef.std_err));

    CHECK_THROWS_AS(estimate_epsi(p, n, d, 3, 100000, RngStream{4, 5}),
                    std::invalid_argument);
    CHECK_THROWS_AS(estimate_epsi(p, n, d, 1, 1000, RngStream{4, 6}),
                    std::invalid_argument);
}

TEST_CASE("Khintchine sandwich and second-moment consistency") {
    RngEngine eng(RngStream{5, 1});
    for (double pv : {1.0, 2.0, 5.0}) {
        const PExponent p(pv);
        const int n = 10;
        const Direction d(sample_haar_direction(eng, n));
        const MomentEstimate e1 = estimate_epsi(p, n, d, 1, 150000, RngStream{5, 2});
        const MomentEstimate e2 = estimate_epsi(p, n, d, 2, 150000, RngStream{5, 3});
        const MomentEstimate f1 = estimate_ephi(p, n, d, 150000, RngStream{5, 4});
        const double ratio = e1.mean / f1.mean;
        CHECK(ratio >= 0.5);
        CHECK(ratio <= 1.05);
        CHECK(e2.mean >= e1.mean * e1.mean - 4.0 * e2.std_err);
    }
}

TEST_CASE("diagonal lower bound across directions") {
    // E psi_theta sqrt(n) / (E psi_theta0 ||theta||_1) stays above the floor
    RngEngine eng(RngStream{6, 1});
    for (double pv : {1.5, 4.0}) {
        const PExponent p(pv);
        const int n = 8;
        const MomentEstimate base =
            estimate_epsi(p, n, Direction::diagonal(n), 1, 100000, RngStream{6, 2});
        for (int k = 0; k < 3; ++k) {
            const Direction d(sample_haar_direction(eng, n));
            const MomentEstimate e = estimate_epsi(p, n, d, 1, 100000, RngStream{6, 3});
            CHECK(e.mean * std::sqrt(static_cast<double>(n)) /
                      (base.mean * d.norm1) >= 0.02);
        }
    }
}

TEST_CASE("scaling regimes for the diagonal direction") {
    const EpsiScaling small = epsi_scaling_check(PExponent(4.0), 16, 100000,
                                                 RngStream{7, 1});
    CHECK(!small.large_p_regime);
    CHECK(small.normalized == doctest::Approx(2.0 * small.e_psi));
    CHECK(small.normalized >= 0.05);
    CHECK(small.normalized <= 20.0);

    const EpsiScaling large = epsi_scaling_check(PExponent(256.0), 16, 100000,
                                                 RngStream{7, 2});
    CHECK(large.large_p_regime);
    CHECK(large.normalized == doctest::Approx(64.0 * large.e_psi));
    CHECK(large.normalized >= 0.05);
    CHECK(large.normalized <= 20.0);
}

TEST_CASE("subset ratio: exact endpoints and the one-sided bound") {
    const PExponent p(1.5);
    const int n = 10;
    RngEngine eng(RngStream{8, 1});
    const Direction d(sample_haar_direction(eng, n));

    std::vector<int> all(n);
    for (int i = 0; i < n; ++i) all[i] = i;
    const MomentEstimate full = subset_psi_ratio(p, n, d, all, 100000, RngStream{8, 2});
    CHECK(full.mean == 1.0);
    CHECK(full.std_err == 0.0);

    const MomentEstimate empty = subset_psi_ratio(p, n, d, {}, 100000, RngStream{8, 3});
    CHECK(empty.mean == 0.0);

    for (int c = 0; c < 5; ++c) {
        const Direction dc(sample_haar_direction(eng, n));
        std::vector<int> subset;
        for (int i = 0; i < n; ++i)
            if (eng.next_u64() & 1u) subset.push_back(i);
        const MomentEstimate e = subset_psi_ratio(
            p, n, dc, subset, 100000, RngStream{8, 4 + static_cast<std::uint64_t>(c)});
        CHECK(e.mean <= 1.0 + 4.0 * e.std_err);
    }
    CHECK_THROWS_AS(subset_psi_ratio(p, n, d, {n}, 100000, RngStream{8, 99}),
                    std::invalid_argument);
}

TEST_CASE("centered-square sums: closed form at alpha 2 and the cap at 4") {
    for (double pv : {1.5, 2.0, 4.0}) {
        const PExponent p(pv);
        const int n = 16;
        const MomentEstimate e2 =
            symmetric_sum_moment(p, n, 2.0, 400000, RngStream{9, 1});
        const double mg2 = moment_g(p, 2.0);
        const double closed = 2.0 * n * (moment_g(p, 4.0) - mg2 * mg2);
        const double emp = e2.mean * e2.mean;
        const double emp_se = 2.0 * e2.mean * e2.std_err;
        CHECK(std::fabs(emp - closed) <= 4.0 * emp_se);
    }
    // p = 2, alpha = 2: E (sum X_i)^2 = n exactly
    const MomentEstimate g2 = symmetric_sum_moment(PExponent(2.0), 64, 2.0, 400000,
                                                   RngStream{9, 2});
    CHECK(std::fabs(g2.mean * g2.mean - 64.0) <= 4.0 * 2.0 * g2.mean * g2.std_err);

    for (int n : {16, 64}) {
        const MomentEstimate e4 =
            symmetric_sum_moment(PExponent(2.0), n, 4.0, 200000, RngStream{9, 3});
        const double normalized = e4.mean / std::sqrt(4.0 * n);
        CHECK(normalized > 0.0);
        CHECK(normalized <= 10.0);
    }
    // alpha must satisfy alpha <= e^p
    CHECK_THROWS_AS(symmetric_sum_moment(PExponent(1.0), 8, 4.0, 100000,
                                         RngStream{9, 4}),
                    std::invalid_argument);
    CHECK_THROWS_AS(symmetric_sum_moment(PExponent(2.0), 8, 3.0, 100000,
                                         RngStream{9, 5}),
                    std::invalid_argument);
}

TEST_CASE("haar fraction clears the diagonal threshold") {
    // p = 2 makes E psi direction-free, so every direction passes.
    const double frac = haar_direction_fraction(PExponent(2.0), 8, 50, 30000,
                                                RngStream{10, 1});
    CHECK(frac == 1.0);
    const double frac4 = haar_direction_fraction(PExponent(4.0), 32, 50, 30000,
                                                 RngStream{10, 2});
    CHECK(frac4 >= 0.95);
    CHECK_THROWS_AS(haar_direction_fraction(PExponent(2.0), 8, 10, 30000,
                                            RngStream{10, 3}),
                    std::invalid_argument);
}
