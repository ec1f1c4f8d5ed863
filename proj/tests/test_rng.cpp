#include <doctest.h>

#include <cmath>

#include "lpvar/quadoracle.hpp"
#include "lpvar/rng.hpp"
#include "lpvar/specfun.hpp"
#include "lpvar/stats.hpp"
#include "lpvar/weights.hpp"

using namespace lpvar;

namespace {

// Batched empirical mean of f over draws from one engine-valued sampler.
MomentEstimate mc_mean(RngStream stream, std::int64_t n, const std::function<double(RngEngine&)>& f) {
    const std::int64_t batch = n / kBatchCount;
    std::vector<double> bm(kBatchCount);
    for_each_batch(kBatchCount, [&](int b) {
        RngEngine eng(stream.substream(b));
        double acc = 0.0;
        for (std::int64_t i = 0; i < batch; ++i) acc += f(eng);
        bm[b] = acc / batch;
    });
    return estimate_from_batches(bm, batch * kBatchCount);
}

double zscore(const MomentEstimate& e, double target) {
    return (e.mean - target) / e.std_err;
}

} // namespace

TEST_CASE("streams are reproducible and distinct") {
    RngEngine a(RngStream{123, 7});
    RngEngine b(RngStream{123, 7});
    RngEngine c(RngStream{123, 8});
    bool all_equal = true, any_diff = false;
    for (int i = 0; i < 256; ++i) {
        const std::uint64_t x = a.next_u64(), y = b.next_u64(), z = c.next_u64();
        all_equal = all_equal && x == y;
        any_diff = any_diff || x != z;
    }
    CHECK(all_equal);
    CHECK(any_diff);

    RngEngine g1(RngStream{9, 1}), g2(RngStream{9, 1});
    for (int i = 0; i < 64; ++i) CHECK(g1.next_gamma(0.37) == g2.next_gamma(0.37));

    // substream derivation is pure
    const RngStream s{42, 0};
    CHECK(s.substream(3).stream_id == s.substream(3).stream_id);
    CHECK(s.substream(3).stream_id != s.substream(4).stream_id);
}

TEST_CASE("gamma sampler moments and exponential tail") {
    const std::int64_t n = 1000000;
    // P(W > 1) = e^{-1} at shape 1.
    const MomentEstimate tail = mc_mean(RngStream{11, 1}, n, [](RngEngine& e) {
        return e.next_gamma(1.0) > 1.0 ? 1.0 : 0.0;
    });
    CHECK(std::fabs(zscore(tail, std::exp(-1.0))) <= 4.0);

    for (double shape : {1.0 / 64.0, 0.5, 1.0, 3.7}) {
        const MomentEstimate m = mc_mean(RngStream{11, 2}, n, [shape](RngEngine& e) {
            return e.next_gamma(shape);
        });
        CHECK(std::fabs(zscore(m, shape)) <= 4.0);
    }
}

TEST_CASE("generalized Gaussian matches the gamma-ratio moments") {
    const std::int64_t n = 1000000;
    for (double pv : {1.0, 1.5, 3.0, 8.0}) {
        const PExponent p(pv);
        for (double alpha : {1.0, 2.0, 4.0}) {
            const MomentEstimate m =
                mc_mean(RngStream{13, static_cast<std::uint64_t>(pv * 16)}, n,
                        [&](RngEngine& e) {
                            return std::pow(std::fabs(sample_gg(e, p)), alpha);
                        });
            CHECK(std::fabs(zscore(m, moment_g(p, alpha))) <= 4.0);
        }
        const MomentEstimate sym =
            mc_mean(RngStream{13, 99}, n, [&](RngEngine& e) { return sample_gg(e, p); });
        CHECK(std::fabs(zscore(sym, 0.0)) <= 4.0);
    }
}

TEST_CASE("coordinate vector with its norm: moments and exchangeability") {
    const std::int64_t n_samples = 200000;
    for (double pv : {1.0, 2.0, 3.0}) {
        const PExponent p(pv);
        const int n = 8;
        for (double alpha : {1.0, 2.0}) {
            const MomentEstimate m = mc_mean(RngStream{17, 3}, n_samples,
                                             [&](RngEngine& e) {
                                                 return std::pow(sample_gs(e, p, n).s, alpha);
                                             });
            CHECK(std::fabs(zscore(m, moment_S(p, n, alpha))) <= 4.0);
        }
    }
    // s > 0 and first-vs-second coordinate symmetry
    RngEngine eng(RngStream{17, 4});
    const PExponent p(1.5);
    double m1 = 0, m2 = 0;
    const int reps = 100000;
    for (int i = 0; i < reps; ++i) {
        const GSample gs = sample_gs(eng, p, 4);
        CHECK(gs.s > 0.0);
        m1 += gs.g[0] * gs.g[0];
        m2 += gs.g[1] * gs.g[1];
    }
    const double mg2 = moment_g(p, 2.0);
    CHECK(std::fabs(m1 / reps - mg2) <= 5.0 * mg2 / std::sqrt(reps));
    CHECK(std::fabs(m2 / reps - mg2) <= 5.0 * mg2 / std::sqrt(reps));
}

TEST_CASE("cone points sit on the sphere for every p") {
    for (double pv : {1.0, 2.0, 7.5, 64.0, 800.0}) {
        const PExponent p(pv);
        RngEngine eng(RngStream{19, static_cast<std::uint64_t>(pv)});
        for (int i = 0; i < 300; ++i) {
            const ConePoint c = sample_cone(eng, p, 6);
            CHECK(std::fabs(lp_norm(c.y, pv) - 1.0) <= 1e-12);
        }
    }
}

TEST_CASE("cone measure on the circle has coordinate second moment 1/2") {
    const MomentEstimate m = mc_mean(RngStream{23, 0}, 400000, [](RngEngine& e) {
        const ConePoint c = sample_cone(e, PExponent(2.0), 2);
        return c.y[0] * c.y[0];
    });
    CHECK(std::fabs(zscore(m, 0.5)) <= 4.0);
}

TEST_CASE("G/S and S decouple: max coordinate vs norm correlation") {
    const std::int64_t N = 200000;
    const PExponent p(1.5);
    RngEngine eng(RngStream{29, 0});
    double sa = 0, sb = 0, sab = 0, saa = 0, sbb = 0;
    for (std::int64_t i = 0; i < N; ++i) {
        const GSample gs = sample_gs(eng, p, 16);
        const double a = gs.g.cwiseAbs().maxCoeff() / gs.s;
        const double b = gs.s;
        sa += a; sb += b; sab += a * b; saa += a * a; sbb += b * b;
    }
    const double ma = sa / N, mb = sb / N;
    const double corr = (sab / N - ma * mb) /
                        std::sqrt((saa / N - ma * ma) * (sbb / N - mb * mb));
    CHECK(std::fabs(corr) <= 4.0 / std::sqrt(static_cast<double>(N)));
}

TEST_CASE("uniform ball samples: containment and radial moments") {
    for (double pv : {1.0, 2.0, 4.0}) {
        const PExponent p(pv);
        const int n = 5;
        RngEngine eng(RngStream{31, static_cast<std::uint64_t>(pv)});
        for (int i = 0; i < 2000; ++i)
            CHECK(lp_norm(sample_ball_uniform(eng, p, n), pv) <= 1.0 + 1e-12);
        const MomentEstimate m = mc_mean(RngStream{31, 77}, 200000, [&](RngEngine& e) {
            return std::pow(lp_norm(sample_ball_uniform(e, p, n), pv), pv);
        });
        CHECK(std::fabs(zscore(m, static_cast<double>(n) / (n + pv))) <= 4.0);
    }
    const MomentEstimate disk = mc_mean(RngStream{31, 78}, 200000, [](RngEngine& e) {
        return sample_ball_uniform(e, PExponent(2.0), 2).squaredNorm();
    });
    CHECK(std::fabs(zscore(disk, 0.5)) <= 4.0);
}

TEST_CASE("cone-to-surface reweighting reproduces boundary integrals") {
    // E_mu[f(y) n |B_p^2| |grad ||.||_p(y)|] equals the surface integral of f
    // over the boundary; checked against the deterministic arc quadrature.
    for (double pv : {1.5, 3.0}) {
        const PExponent p(pv);
        const double vol = ball_volume(p, 2);
        const auto weighted = [&](RngEngine& e, auto&& f) {
            const ConePoint c = sample_cone(e, p, 2);
            double grad2 = 0.0;
            for (int i = 0; i < 2; ++i)
                grad2 += std::pow(std::fabs(c.y[i]), 2.0 * pv - 2.0);
            return f(c.y[0], c.y[1]) * 2.0 * vol * std::sqrt(grad2);
        };
        const auto f_one = [](double, double) { return 1.0; };
        const auto f_x2 = [](double x, double) { return x * x; };

        const CertifiedValue perimeter = quad_boundary_integral(p, f_one);
        const CertifiedValue x2 = quad_boundary_integral(p, f_x2);
        const MomentEstimate m1 =
            mc_mean(RngStream{37, static_cast<std::uint64_t>(pv * 2)}, 2000000,
                    [&](RngEngine& e) { return weighted(e, f_one); });
        const MomentEstimate m2 =
            mc_mean(RngStream{37, static_cast<std::uint64_t>(pv * 2) + 1}, 2000000,
                    [&](RngEngine& e) { return weighted(e, f_x2); });
        CHECK(std::fabs(m1.mean - perimeter.value) <= 0.01 * perimeter.value);
        CHECK(std::fabs(m2.mean - x2.value) <= 0.01 * x2.value);
    }
}

TEST_CASE("haar directions are unit and isotropic") {
    RngEngine eng(RngStream{41, 0});
    const int n = 6;
    Eigen::VectorXd mean = Eigen::VectorXd::Zero(n);
    const int reps = 50000;
    for (int i = 0; i < reps; ++i) {
        const Eigen::VectorXd d = sample_haar_direction(eng, n);
        CHECK(std::fabs(d.norm() - 1.0) <= 1e-12);
        mean += d;
    }
    mean /= reps;
    CHECK(mean.cwiseAbs().maxCoeff() <= 5.0 / std::sqrt(static_cast<double>(reps)));
}
