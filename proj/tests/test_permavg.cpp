#include <doctest.h>

#include <cmath>

#include "lpvar/permavg.hpp"

using namespace lpvar;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("single-entry matrices") {
    Eigen::MatrixXd a(1, 1);
    a << -2.5;
    const RearrangementInput inp(a, 2.0);
    CHECK(rearrangement_functional(inp) == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(brute_avg_permutations(inp) == doctest::Approx(2.5).epsilon(1e-15));
}

TEST_CASE("all-ones closed forms") {
    for (int n : {2, 3, 5, 7}) {
        const RearrangementInput inp(Eigen::MatrixXd::Ones(n, n), 2.0);
        CHECK(std::fabs(brute_avg_permutations(inp) - std::sqrt(n)) <= 1e-12);
        CHECK(std::fabs(rearrangement_functional(inp) -
                        (1.0 + std::sqrt(n - 1.0))) <= 1e-12);
    }
    // q = infinity: max along the permutation, head + first tail entry
    const RearrangementInput iinf(Eigen::MatrixXd::Ones(3, 3), kInf);
    CHECK(brute_avg_permutations(iinf) == doctest::Approx(1.0));
    CHECK(rearrangement_functional(iinf) == doctest::Approx(2.0));
}

TEST_CASE("single nonzero entry feeds only the head block") {
    for (int n : {2, 4, 6}) {
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
        a(1, 0) = -7.0;
        const RearrangementInput inp(a, 2.0);
        CHECK(rearrangement_functional(inp) == doctest::Approx(7.0 / n).epsilon(1e-14));
    }
}

TEST_CASE("identity matrix average counts fixed points") {
    const RearrangementInput inp(Eigen::MatrixXd::Identity(3, 3), 2.0);
    // S_3: one permutation with 3 fixed points, three with 1, two with 0
    const double expected = (std::sqrt(3.0) + 3.0) / 6.0;
    CHECK(brute_avg_permutations(inp) == doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("row and column permutations and sign flips leave both sides fixed") {
    RngStream stream{81, 0};
    const Eigen::MatrixXd a = permavg_case_matrix(5, 5, stream);
    const RearrangementInput base(a, 2.0);
    const double b0 = brute_avg_permutations(base);
    const double f0 = rearrangement_functional(base);

    Eigen::MatrixXd rowperm = a;
    rowperm.row(0).swap(rowperm.row(3));
    Eigen::MatrixXd colperm = rowperm;
    colperm.col(1).swap(colperm.col(4));
    Eigen::MatrixXd flipped = colperm;
    flipped.row(2) = -flipped.row(2);
    flipped(0, 0) = -flipped(0, 0);

    const RearrangementInput tr(flipped, 2.0);
    CHECK(std::fabs(brute_avg_permutations(tr) - b0) <= 1e-12);
    CHECK(std::fabs(rearrangement_functional(tr) - f0) <= 1e-12);
}

TEST_CASE("degree-one homogeneity and entrywise monotonicity") {
    RngStream stream{81, 1};
    const Eigen::MatrixXd a = permavg_case_matrix(7, 4, stream);
    const RearrangementInput base(a, 2.0);
    const RearrangementInput scaled((3.5 * a).eval(), 2.0);
    CHECK(brute_avg_permutations(scaled) ==
          doctest::Approx(3.5 * brute_avg_permutations(base)).epsilon(1e-13));
    CHECK(rearrangement_functional(scaled) ==
          doctest::Approx(3.5 * rearrangement_functional(base)).epsilon(1e-13));

    Eigen::MatrixXd bigger = a.cwiseAbs();
    bigger.array() += 0.25;
    CHECK(rearrangement_functional(RearrangementInput(bigger, 2.0)) >=
          rearrangement_functional(base));
}

TEST_CASE("randomized ratio window") {
    for (int n : {4, 5, 6, 7}) {
        const RatioWindow w = ratio_window_check(20, n, 2.0, RngStream{82, 0});
        CHECK(w.n_cases == 20);
        CHECK(w.min_ratio >= 0.2);
        CHECK(w.max_ratio <= 5.0);
    }
    // the all-ones member of the sweep has a known ratio
    for (int n : {4, 7}) {
        const double r = std::sqrt(static_cast<double>(n)) /
                         (1.0 + std::sqrt(n - 1.0));
        CHECK(r >= 0.7);
        CHECK(r <= 1.0);
    }
    CHECK_THROWS_AS(ratio_window_check(20, 8, 2.0, RngStream{82, 1}),
                    std::invalid_argument);
}

TEST_CASE("brute force is capped at n = 8") {
    CHECK_THROWS_AS(brute_avg_permutations(
                        RearrangementInput(Eigen::MatrixXd::Ones(9, 9), 2.0)),
                    std::invalid_argument);
    CHECK_THROWS_AS(RearrangementInput(Eigen::MatrixXd::Ones(2, 3), 2.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(RearrangementInput(Eigen::MatrixXd::Ones(2, 2), 0.5),
                    std::invalid_argument);
}
