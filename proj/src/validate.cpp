#include "lpvar/validate.hpp"

#include <chrono>
#include <cmath>

#include "lpvar/orlicz.hpp"
#include "lpvar/permavg.hpp"
#include "lpvar/projest.hpp"
#include "lpvar/quadoracle.hpp"
#include "lpvar/rng.hpp"
#include "lpvar/steiner.hpp"
#include "lpvar/weights.hpp"

namespace lpvar {

namespace {

using nlohmann::json;

RngStream stream_for(const ValidationOptions& opt, const std::string& tag, double p,
                     int n, int idx) {
    return RngStream{opt.seed, fanout_stream_id(tag, p, n, idx)};
}

Direction haar_dir(const ValidationOptions& opt, const std::string& tag, double p,
                   int n, int idx) {
    RngEngine eng(stream_for(opt, tag + "/theta", p, n, idx));
    return Direction(sample_haar_direction(eng, n));
}

// ---- C1: sampler moments vs the gamma-ratio oracles -----------------------

CriterionResult c1_moment_oracle(const ValidationOptions& opt) {
    CriterionResult r{"C1", "moment oracle for |g|^alpha and S^alpha", true, {}, 0};
    static const double kP[] = {1.0, 1.5, 2.0, 3.0, 8.0};
    static const double kAlpha[] = {1.0, 2.0, 4.0};
    static const int kN[] = {8, 64};
    const std::int64_t n_samples = 1000000;
    const std::int64_t batch = n_samples / kBatchCount;
    double worst_z = 0.0;

    for (double pv : kP) {
        const PExponent p(pv);
        std::vector<std::vector<double>> bm(3, std::vector<double>(kBatchCount));
        const RngStream st = stream_for(opt, "C1/g", pv, 0, 0);
        for_each_batch(kBatchCount, [&](int b) {
            RngEngine eng(st.substream(b));
            double a1 = 0, a2 = 0, a4 = 0;
            for (std::int64_t i = 0; i < batch; ++i) {
                const double g = std::fabs(sample_gg(eng, p));
                const double g2 = g * g;
                a1 += g;
                a2 += g2;
                a4 += g2 * g2;
            }
            bm[0][b] = a1 / batch;
            bm[1][b] = a2 / batch;
            bm[2][b] = a4 / batch;
        }, opt.threads);
        for (int a = 0; a < 3; ++a) {
            const MomentEstimate e = estimate_from_batches(bm[a], n_samples);
            const double z = (e.mean - moment_g(p, kAlpha[a])) / e.std_err;
            worst_z = std::fmax(worst_z, std::fabs(z));
        }
        for (int n : kN) {
            std::vector<std::vector<double>> sm(3, std::vector<double>(kBatchCount));
            const RngStream ss = stream_for(opt, "C1/S", pv, n, 0);
            for_each_batch(kBatchCount, [&](int b) {
                RngEngine eng(ss.substream(b));
                double a1 = 0, a2 = 0, a4 = 0;
                for (std::int64_t i = 0; i < batch; ++i) {
                    const double s = sample_gs(eng, p, n).s;
                    const double s2 = s * s;
                    a1 += s;
                    a2 += s2;
                    a4 += s2 * s2;
                }
                sm[0][b] = a1 / batch;
                sm[1][b] = a2 / batch;
                sm[2][b] = a4 / batch;
            }, opt.threads);
            for (int a = 0; a < 3; ++a) {
                const MomentEstimate e = estimate_from_batches(sm[a], n_samples);
                const double z = (e.mean - moment_S(p, n, kAlpha[a])) / e.std_err;
                worst_z = std::fmax(worst_z, std::fabs(z));
            }
        }
    }
    r.passed = worst_z <= 4.0;
    r.values["max_abs_z"] = worst_z;
    return r;
}

// ---- C2: independence of G/S and S ----------------------------------------

CriterionResult c2_independence(const ValidationOptions& opt) {
    CriterionResult r{"C2", "independence of G/S and S", true, {}, 0};
    const std::int64_t n_samples = 1000000;
    const std::int64_t batch = n_samples / kBatchCount;
    const int n = 16;
    json rs = json::array();
    for (double pv : {1.5, 3.0}) {
        const PExponent p(pv);
        const RngStream st = stream_for(opt, "C2", pv, n, 0);
        std::vector<double> sa(kBatchCount), sb(kBatchCount), sab(kBatchCount),
            saa(kBatchCount), sbb(kBatchCount);
        for_each_batch(kBatchCount, [&](int b) {
            RngEngine eng(st.substream(b));
            double a = 0, bb = 0, ab = 0, aa = 0, b2 = 0;
            for (std::int64_t i = 0; i < batch; ++i) {
                const GSample gs = sample_gs(eng, p, n);
                const double u = gs.g.cwiseAbs().maxCoeff() / gs.s; // ||G/S||_inf
                const double v = gs.s;
                a += u;
                bb += v;
                ab += u * v;
                aa += u * u;
                b2 += v * v;
            }
            sa[b] = a; sb[b] = bb; sab[b] = ab; saa[b] = aa; sbb[b] = b2;
        }, opt.threads);
        const double N = static_cast<double>(batch) * kBatchCount;
        const double ma = pairwise_sum(sa) / N;
        const double mb = pairwise_sum(sb) / N;
        const double cov = pairwise_sum(sab) / N - ma * mb;
        const double va = pairwise_sum(saa) / N - ma * ma;
        const double vb = pairwise_sum(sbb) / N - mb * mb;
        const double corr = cov / std::sqrt(va * vb);
        const double cap = 4.0 / std::sqrt(N);
        rs.push_back({{"p", pv}, {"pearson_r", corr}, {"cap", cap}});
        if (std::fabs(corr) > cap) r.passed = false;
    }
    r.values["cases"] = rs;
    return r;
}

// ---- C3: closed forms on the Euclidean disk and ball -----------------------

CriterionResult c3_disk_closed_forms(const ValidationOptions& opt) {
    CriterionResult r{"C3", "Euclidean ball closed forms", true, {}, 0};
    const std::int64_t n_samples = 1000000;
    {
        const int n = 3;
        const ProjectedBodySpec spec(PExponent(2.0), n, Direction::axis(n, n - 1));
        const VarianceReport rep =
            variance_report(spec, n_samples, stream_for(opt, "C3", 2.0, n, 0), opt.threads);
        const double ze = (rep.e_norm2.mean - 0.5) / rep.e_norm2.std_err;
        const double zv = (rep.var_norm2 - 1.0 / 12.0) / rep.var_norm2_se;
        const double zl = (rep.lambda2 - 0.25) / rep.lambda2_se;
        const double zr = (rep.ratio - 2.0 / 3.0) / rep.ratio_se;
        r.values["disk"] = {{"e_norm2", rep.e_norm2.mean}, {"z_e", ze},
                            {"var_norm2", rep.var_norm2},  {"z_var", zv},
                            {"lambda2", rep.lambda2},      {"z_lambda", zl},
                            {"ratio", rep.ratio},          {"z_ratio", zr}};
        if (std::fabs(ze) > 4 || std::fabs(zv) > 4 || std::fabs(zl) > 4 ||
            std::fabs(zr) > 4)
            r.passed = false;
    }
    {
        const int n = 9; // projection is the uniform ball B_2^8
        const ProjectedBodySpec spec(PExponent(2.0), n, Direction::axis(n, n - 1));
        const VarianceReport rep =
            variance_report(spec, n_samples, stream_for(opt, "C3", 2.0, n, 0), opt.threads);
        const double m = n - 1;
        const double ze = (rep.e_norm2.mean - m / (m + 2)) / rep.e_norm2.std_err;
        const double zl = (rep.lambda2 - 1.0 / (m + 2)) / rep.lambda2_se;
        r.values["ball8"] = {{"e_norm2", rep.e_norm2.mean}, {"z_e", ze},
                             {"lambda2", rep.lambda2},      {"z_lambda", zl}};
        if (std::fabs(ze) > 4 || std::fabs(zl) > 4) r.passed = false;
    }
    return r;
}

// ---- C4: Monte Carlo vs deterministic quadrature ---------------------------

CriterionResult c4_quadrature(const ValidationOptions& opt) {
    CriterionResult r{"C4", "projection estimator vs quadrature oracle", true, {}, 0};
    const auto norm2 = [](const Eigen::VectorXd& y) { return y.squaredNorm(); };
    json cases = json::array();
    for (double pv : {1.5, 3.0}) {
        const PExponent p(pv);
        const Direction dir = haar_dir(opt, "C4", pv, 3, 0);
        const CertifiedValue oracle = quad_moments_projection(p, 3, dir, norm2);
        const ProjectedBodySpec spec(p, 3, dir);
        const MomentEstimate est =
            estimate_ef(spec, norm2, 2000000, stream_for(opt, "C4", pv, 3, 0),
                        opt.threads);
        const double tol = std::fmax(4.0 * est.std_err, 0.01 * std::fabs(oracle.value));
        const bool ok = std::fabs(est.mean - oracle.value) <= tol;
        cases.push_back({{"p", pv}, {"oracle", oracle.value},
                         {"oracle_delta", oracle.refinement_delta},
                         {"estimate", est.mean}, {"std_err", est.std_err},
                         {"ok", ok}});
        if (!ok) r.passed = false;
    }
    r.values["cases"] = cases;
    return r;
}

// ---- C5 / C6: boundedness sweep and Haar-typical fraction ------------------

CriterionResult c5_ratio_sweep(const ValidationOptions& opt) {
    CriterionResult r{"C5", "variance ratio boundedness sweep", true, {}, 0};
    const std::int64_t n_samples = 100000;
    double max_ratio = 0.0, max_ratio_log = 0.0, max_ratio_large_p = 0.0;
    double scale_lo = 1e300, scale_hi = 0.0; // lambda^2 E|X|^2 / n^{1-4/p}
    for (int n : {8, 16, 32, 64}) {
        for (double pv : {1.0, 2.0, 4.0, 16.0, 64.0}) {
            const PExponent p(pv);
            for (int d = 0; d < 3; ++d) {
                const Direction dir = haar_dir(opt, "C5", pv, n, d);
                const ProjectedBodySpec spec(p, n, dir);
                const VarianceReport rep =
                    variance_report(spec, n_samples,
                                    stream_for(opt, "C5", pv, n, d), opt.threads);
                max_ratio = std::fmax(max_ratio, rep.ratio);
                max_ratio_log = std::fmax(max_ratio_log, rep.ratio / std::log1p(pv));
                const double normalized =
                    rep.lambda2 * rep.e_norm2.mean / theoretical_scale(spec);
                scale_lo = std::fmin(scale_lo, normalized);
                scale_hi = std::fmax(scale_hi, normalized);
            }
        }
    }
    for (int n : {4, 8}) {
        const double pv = static_cast<double>(n) * n * n; // p = n^3 > n regime
        const PExponent p(pv);
        for (int d = 0; d < 3; ++d) {
            const Direction dir = haar_dir(opt, "C5/large", pv, n, d);
            const VarianceReport rep =
                variance_report(ProjectedBodySpec(p, n, dir), n_samples,
                                stream_for(opt, "C5/large", pv, n, d), opt.threads);
            max_ratio_large_p = std::fmax(max_ratio_large_p, rep.ratio);
        }
    }
    const double cap = opt.windows.ratio_max;
    r.passed = max_ratio <= cap && max_ratio_log <= cap &&
               max_ratio_large_p <= cap && scale_lo >= opt.windows.scaling_lo &&
               scale_hi <= opt.windows.scaling_hi;
    r.values = {{"max_ratio", max_ratio},
                {"max_ratio_over_log1p", max_ratio_log},
                {"max_ratio_p_gt_n", max_ratio_large_p},
                {"cap", cap},
                {"scale_law_min", scale_lo},
                {"scale_law_max", scale_hi},
                {"scale_window", {opt.windows.scaling_lo, opt.windows.scaling_hi}}};
    return r;
}

CriterionResult c6_haar_fraction(const ValidationOptions& opt) {
    CriterionResult r{"C6", "Haar-typical ratio fraction", true, {}, 0};
    const int n = 32, n_dirs = 50;
    const double pv = 16.0;
    const PExponent p(pv);
    int pass = 0;
    for (int d = 0; d < n_dirs; ++d) {
        const Direction dir = haar_dir(opt, "C6", pv, n, d);
        const VarianceReport rep =
            variance_report(ProjectedBodySpec(p, n, dir), 100000,
                            stream_for(opt, "C6", pv, n, d), opt.threads);
        if (rep.ratio <= opt.windows.ratio_max) ++pass;
    }
    const double fraction = static_cast<double>(pass) / n_dirs;
    r.passed = fraction >= opt.windows.haar_fraction_min;
    r.values = {{"fraction", fraction}, {"min", opt.windows.haar_fraction_min}};
    return r;
}

// ---- C7 / C8: E psi scaling windows ----------------------------------------

CriterionResult c7_epsi_scaling(const ValidationOptions& opt, bool quick) {
    CriterionResult r{"C7", "E psi scaling windows", true, {}, 0};
    const std::int64_t n_samples = 100000;
    const double lo = opt.windows.scaling_lo, hi = opt.windows.scaling_hi;
    double worst_lo = 1e300, worst_hi = 0.0, worst_d0_lo = 1e300, worst_d0_hi = 0.0;

    std::vector<std::pair<double, int>> grid;
    if (quick) {
        grid = {{2.0, 16}, {4.0, 16}};
    } else {
        for (int n : {8, 16, 32, 64})
            for (double pv : {1.0, 2.0, 4.0, 16.0, 64.0})
                if (pv <= n) grid.emplace_back(pv, n);
    }
    for (const auto& [pv, n] : grid) {
        const PExponent p(pv);
        const int dirs = quick ? 1 : 3;
        for (int d = 0; d < dirs; ++d) {
            const Direction dir = haar_dir(opt, "C7", pv, n, d);
            const MomentEstimate e = estimate_epsi(p, n, dir, 1, n_samples,
                                                   stream_for(opt, "C7", pv, n, d),
                                                   opt.threads);
            worst_lo = std::fmin(worst_lo, pv * e.mean);
            worst_hi = std::fmax(worst_hi, std::sqrt(pv) * e.mean);
        }
        const EpsiScaling sc = epsi_scaling_check(p, n, n_samples,
                                                  stream_for(opt, "C7/d0", pv, n, 0),
                                                  opt.threads);
        worst_d0_lo = std::fmin(worst_d0_lo, sc.normalized);
        worst_d0_hi = std::fmax(worst_d0_hi, sc.normalized);
    }
    // p = n^2 diagonal-direction regime.
    const std::vector<int> big = quick ? std::vector<int>{16} : std::vector<int>{4, 8, 16};
    for (int n : big) {
        const double pv = static_cast<double>(n) * n;
        const EpsiScaling sc = epsi_scaling_check(PExponent(pv), n, n_samples,
                                                  stream_for(opt, "C7/n2", pv, n, 0),
                                                  opt.threads);
        worst_d0_lo = std::fmin(worst_d0_lo, sc.normalized);
        worst_d0_hi = std::fmax(worst_d0_hi, sc.normalized);
    }
    r.passed = worst_lo >= lo && worst_hi <= hi && worst_d0_lo >= lo && worst_d0_hi <= hi;
    r.values = {{"min_p_epsi", worst_lo},
                {"max_sqrtp_epsi", worst_hi},
                {"min_normalized_diag", worst_d0_lo},
                {"max_normalized_diag", worst_d0_hi},
                {"window", {lo, hi}}};
    return r;
}

CriterionResult c8_remark_limit(const ValidationOptions& opt) {
    CriterionResult r{"C8", "large-p limit p E psi -> ||theta||_1", true, {}, 0};
    const int n = 4;
    const double pv = 800.0;
    const PExponent p(pv);
    const std::int64_t n_samples = 1000000;
    std::vector<std::pair<std::string, Direction>> dirs;
    dirs.emplace_back("diag", Direction::diagonal(n));
    dirs.emplace_back("axis", Direction::axis(n, 0));
    dirs.emplace_back("haar", haar_dir(opt, "C8", pv, n, 0));
    json cases = json::array();
    int idx = 0;
    for (const auto& [name, dir] : dirs) {
        const MomentEstimate e = estimate_epsi(p, n, dir, 1, n_samples,
                                               stream_for(opt, "C8", pv, n, idx++),
                                               opt.threads);
        const double v = pv * e.mean / dir.norm1;
        const double sigma = pv * e.std_err / dir.norm1;
        const bool ok = v >= opt.windows.remark_lo - 4.0 * sigma &&
                        v <= opt.windows.remark_hi + 4.0 * sigma;
        cases.push_back({{"theta", name}, {"value", v}, {"sigma", sigma}, {"ok", ok}});
        if (!ok) r.passed = false;
    }
    r.values["cases"] = cases;
    return r;
}

// ---- C9: Orlicz-norm equivalence -------------------------------------------

CriterionResult c9_orlicz(const ValidationOptions& opt, bool quick) {
    CriterionResult r{"C9", "E phi vs Luxemburg norm", true, {}, 0};
    const std::vector<double> ps = quick ? std::vector<double>{2.0}
                                         : std::vector<double>{1.5, 2.0, 4.0};
    const std::vector<int> ns = quick ? std::vector<int>{16} : std::vector<int>{16, 64};
    const int dirs = quick ? 2 : 5;
    const std::int64_t n_samples = quick ? 50000 : 100000;
    double min_ratio = 1e300, max_ratio = 0.0, max_cert = 0.0;
    for (double pv : ps) {
        const PExponent p(pv);
        const OrliczM m(p);
        for (int n : ns) {
            for (int d = 0; d < dirs; ++d) {
                const Direction dir = haar_dir(opt, "C9", pv, n, d);
                const RatioEstimate re =
                    orlicz_vs_mc(m, n, dir, n_samples,
                                 stream_for(opt, "C9", pv, n, d), opt.threads);
                min_ratio = std::fmin(min_ratio, re.value);
                max_ratio = std::fmax(max_ratio, re.value);
                // Luxemburg self-consistency at the returned root.
                const double rho = luxemburg_norm(m, dir.theta);
                double sum = 0.0;
                for (int i = 0; i < n; ++i) {
                    const double a = std::fabs(dir.theta[i]);
                    if (a > 0.0) sum += m.eval(a / rho);
                }
                max_cert = std::fmax(max_cert, std::fabs(sum - 1.0));
            }
        }
    }
    r.passed = min_ratio >= opt.windows.orlicz_lo &&
               max_ratio <= opt.windows.orlicz_hi && max_cert <= 1e-6;
    r.values = {{"min_ratio", min_ratio},
                {"max_ratio", max_ratio},
                {"max_luxemburg_residual", max_cert},
                {"window", {opt.windows.orlicz_lo, opt.windows.orlicz_hi}}};
    return r;
}

// ---- C10..C12: permutation averages, subset bound, centered squares --------

CriterionResult c10_permavg(const ValidationOptions& opt) {
    CriterionResult r{"C10", "permutation average vs rearrangement", true, {}, 0};
    double min_ratio = 1e300, max_ratio = 0.0, worst_exact = 0.0;
    for (int n : {4, 5, 6, 7}) {
        const RatioWindow w =
            ratio_window_check(20, n, 2.0, stream_for(opt, "C10", 2.0, n, 0));
        min_ratio = std::fmin(min_ratio, w.min_ratio);
        max_ratio = std::fmax(max_ratio, w.max_ratio);
        const RearrangementInput ones(Eigen::MatrixXd::Ones(n, n), 2.0);
        worst_exact = std::fmax(
            worst_exact, std::fabs(brute_avg_permutations(ones) - std::sqrt(n)));
        worst_exact = std::fmax(
            worst_exact, std::fabs(rearrangement_functional(ones) -
                                   (1.0 + std::sqrt(static_cast<double>(n) - 1.0))));
    }
    r.passed = min_ratio >= opt.windows.permavg_lo &&
               max_ratio <= opt.windows.permavg_hi && worst_exact <= 1e-12;
    r.values = {{"min_ratio", min_ratio},
                {"max_ratio", max_ratio},
                {"ones_closed_form_error", worst_exact},
                {"window", {opt.windows.permavg_lo, opt.windows.permavg_hi}}};
    return r;
}

CriterionResult c11_subset_bound(const ValidationOptions& opt) {
    CriterionResult r{"C11", "subset weight sum never exceeds the full sum", true, {}, 0};
    const int n = 16;
    double worst_margin = -1e300;
    for (double pv : {1.5, 4.0}) {
        const PExponent p(pv);
        for (int c = 0; c < 10; ++c) {
            const Direction dir = haar_dir(opt, "C11", pv, n, c);
            RngEngine eng(stream_for(opt, "C11/set", pv, n, c));
            std::vector<int> subset;
            for (int i = 0; i < n; ++i)
                if (eng.next_u64() & 1u) subset.push_back(i);
            const MomentEstimate e =
                subset_psi_ratio(p, n, dir, subset, 100000,
                                 stream_for(opt, "C11", pv, n, c), opt.threads);
            worst_margin = std::fmax(worst_margin, e.mean - 1.0 - 4.0 * e.std_err);
        }
    }
    r.passed = worst_margin <= 0.0;
    r.values = {{"worst_margin", worst_margin}};
    return r;
}

CriterionResult c12_symmetric_sum(const ValidationOptions& opt) {
    CriterionResult r{"C12", "centered-square sum moments", true, {}, 0};
    const int n = 32;
    json cases = json::array();
    for (double pv : {1.5, 2.0, 4.0}) {
        const PExponent p(pv);
        const MomentEstimate e2 = symmetric_sum_moment(p, n, 2.0, 1000000,
                                                       stream_for(opt, "C12", pv, n, 2),
                                                       opt.threads);
        // Closed form at alpha = 2 via independence.
        const double mg2 = moment_g(p, 2.0);
        const double closed = 2.0 * n * (moment_g(p, 4.0) - mg2 * mg2);
        const double emp_sq = e2.mean * e2.mean;
        const double emp_sq_se = 2.0 * e2.mean * e2.std_err;
        const double z = (emp_sq - closed) / emp_sq_se;

        const MomentEstimate e4 = symmetric_sum_moment(p, n, 4.0, 1000000,
                                                       stream_for(opt, "C12", pv, n, 4),
                                                       opt.threads);
        const double normalized = e4.mean / std::sqrt(4.0 * n);
        const bool ok = std::fabs(z) <= 4.0 && normalized > 0.0 &&
                        normalized <= opt.windows.centered_sum_cap;
        cases.push_back({{"p", pv}, {"alpha2_sq", emp_sq}, {"closed", closed},
                         {"z", z}, {"alpha4_normalized", normalized}, {"ok", ok}});
        if (!ok) r.passed = false;
    }
    r.values["cases"] = cases;
    return r;
}

// ---- C13 / C14: projection decomposition and Steiner comparison ------------

CriterionResult c13_projection_decomposition(const ValidationOptions& opt) {
    CriterionResult r{"C13", "variance decomposition across a hyperplane split",
                      true, {}, 0};
    const int n = 8;
    const double pv = 3.0;
    const PExponent p(pv);
    double worst = -1e300;
    for (int d = 0; d < 10; ++d) {
        const Direction dir = haar_dir(opt, "C13", pv, n, d);
        const ProjectionDecomposition pd = projection_decomposition_check(
            p, n, dir, 1000000, stream_for(opt, "C13", pv, n, d), opt.threads);
        worst = std::fmax(worst, pd.lhs - pd.rhs - pd.slack);
        if (!pd.holds) r.passed = false;
    }
    r.values = {{"worst_margin", worst}};
    return r;
}

CriterionResult c14_steiner(const ValidationOptions& opt) {
    CriterionResult r{"C14", "Steiner symmetrization variance comparison", true, {}, 0};
    const int n = 3;
    const double pv = 1.5;
    const PExponent p(pv);
    const std::int64_t n_samples = 1000000;
    double worst_bound_margin = -1e300, worst_mono = -1e300;

    for (int d = 0; d < 10; ++d) {
        const Direction dir = haar_dir(opt, "C14", pv, n, d);
        const SteinerCompare sc = steiner_variance_compare(
            p, n, dir, n_samples, stream_for(opt, "C14", pv, n, d), opt.threads);
        const double sigma =
            std::sqrt(sc.var_y_se * sc.var_y_se + sc.var_x_se * sc.var_x_se);
        worst_bound_margin =
            std::fmax(worst_bound_margin,
                      std::fabs(sc.var_y - sc.var_x) -
                          opt.windows.steiner_factor * sc.bound - 4.0 * sigma);
        const double mono_sigma = 4.0 * std::sqrt(sc.axis4_y_se * sc.axis4_y_se +
                                                  sc.axis4_x_se * sc.axis4_x_se);
        worst_mono = std::fmax(worst_mono, sc.axis4_y - sc.axis4_x - mono_sigma);
    }
    // Identity case: symmetrizing a 1-symmetric body along a coordinate axis.
    const SteinerCompare id = steiner_variance_compare(
        p, n, Direction::axis(n, n - 1), n_samples,
        stream_for(opt, "C14/axis", pv, n, 0), opt.threads);
    const double id_sigma =
        std::sqrt(id.var_y_se * id.var_y_se + id.var_x_se * id.var_x_se);
    const double id_margin = std::fabs(id.var_y - id.var_x) - 4.0 * id_sigma;

    r.passed = worst_bound_margin <= 0.0 && worst_mono <= 0.0 && id_margin <= 0.0;
    r.values = {{"worst_bound_margin", worst_bound_margin},
                {"worst_monotonicity_margin", worst_mono},
                {"identity_margin", id_margin}};
    return r;
}

std::vector<CriterionResult> run_quick(const ValidationOptions& opt);

// ---- C15: determinism and budget self-check ---------------------------------

CriterionResult c15_determinism(const ValidationOptions& opt, double full_elapsed) {
    CriterionResult r{"C15", "determinism and runtime budget", true, {}, 0};
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<CriterionResult> a = run_quick(opt);
    const auto t1 = std::chrono::steady_clock::now();
    const std::vector<CriterionResult> b = run_quick(opt);
    const std::string ra = validation_report(Suite::quick, a, opt, false).dump(2);
    const std::string rb = validation_report(Suite::quick, b, opt, false).dump(2);
    const double quick_seconds = std::chrono::duration<double>(t1 - t0).count();
    const bool bytes_equal = ra == rb;
    const bool quick_budget = quick_seconds <= 120.0;
    const bool full_budget = full_elapsed <= 1800.0;
    r.passed = bytes_equal && quick_budget && full_budget;
    r.values = {{"quick_reports_byte_identical", bytes_equal},
                {"quick_seconds", quick_seconds},
                {"quick_budget_ok", quick_budget},
                {"full_seconds_before_c15", full_elapsed},
                {"full_budget_ok", full_budget}};
    return r;
}

template <typename F>
CriterionResult timed(F&& f) {
    const auto t0 = std::chrono::steady_clock::now();
    CriterionResult r = f();
    r.wall_seconds = std::chrono::duration<double>(
        std::chrono::steady_clock::now() - t0).count();
    return r;
}

std::vector<CriterionResult> run_quick(const ValidationOptions& opt) {
    std::vector<CriterionResult> out;
    out.push_back(timed([&] { return c1_moment_oracle(opt); }));
    out.push_back(timed([&] { return c2_independence(opt); }));
    out.push_back(timed([&] { return c3_disk_closed_forms(opt); }));
    out.push_back(timed([&] { return c7_epsi_scaling(opt, true); }));
    out.push_back(timed([&] { return c9_orlicz(opt, true); }));
    return out;
}

} // namespace

std::vector<CriterionResult> run_criteria(Suite suite, const ValidationOptions& opt) {
    if (suite == Suite::quick) return run_quick(opt);
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<CriterionResult> out;
    out.push_back(timed([&] { return c1_moment_oracle(opt); }));
    out.push_back(timed([&] { return c2_independence(opt); }));
    out.push_back(timed([&] { return c3_disk_closed_forms(opt); }));
    out.push_back(timed([&] { return c4_quadrature(opt); }));
    out.push_back(timed([&] { return c5_ratio_sweep(opt); }));
    out.push_back(timed([&] { return c6_haar_fraction(opt); }));
    out.push_back(timed([&] { return c7_epsi_scaling(opt, false); }));
    out.push_back(timed([&] { return c8_remark_limit(opt); }));
    out.push_back(timed([&] { return c9_orlicz(opt, false); }));
    out.push_back(timed([&] { return c10_permavg(opt); }));
    out.push_back(timed([&] { return c11_subset_bound(opt); }));
    out.push_back(timed([&] { return c12_symmetric_sum(opt); }));
    out.push_back(timed([&] { return c13_projection_decomposition(opt); }));
    out.push_back(timed([&] { return c14_steiner(opt); }));
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    out.push_back(timed([&] { return c15_determinism(opt, elapsed); }));
    return out;
}

nlohmann::json validation_report(Suite suite, const std::vector<CriterionResult>& results,
                                 const ValidationOptions& opt, bool include_timing) {
    static const std::pair<const char*, const char*> kAll[] = {
        {"C1", "moment oracle for |g|^alpha and S^alpha"},
        {"C2", "independence of G/S and S"},
        {"C3", "Euclidean ball closed forms"},
        {"C4", "projection estimator vs quadrature oracle"},
        {"C5", "variance ratio boundedness sweep"},
        {"C6", "Haar-typical ratio fraction"},
        {"C7", "E psi scaling windows"},
        {"C8", "large-p limit p E psi -> ||theta||_1"},
        {"C9", "E phi vs Luxemburg norm"},
        {"C10", "permutation average vs rearrangement"},
        {"C11", "subset weight sum never exceeds the full sum"},
        {"C12", "centered-square sum moments"},
        {"C13", "variance decomposition across a hyperplane split"},
        {"C14", "Steiner symmetrization variance comparison"},
        {"C15", "determinism and runtime budget"}};
    nlohmann::json rep;
    rep["suite"] = suite == Suite::quick ? "quick" : "full";
    rep["seed"] = opt.seed;
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& [id, title] : kAll) {
        const CriterionResult* found = nullptr;
        for (const auto& r : results)
            if (r.id == id) found = &r;
        nlohmann::json item;
        if (found) {
            item = {{"id", found->id},
                    {"title", found->title},
                    {"status", found->passed ? "pass" : "fail"},
                    {"values", found->values}};
            if (include_timing) item["wall_seconds"] = found->wall_seconds;
        } else {
            item = {{"id", id}, {"title", title}, {"status", "skipped"}};
        }
        arr.push_back(item);
    }
    rep["criteria"] = arr;
    rep["all_passed"] = all_passed(results);
    return rep;
}

bool all_passed(const std::vector<CriterionResult>& results) {
    for (const auto& r : results)
        if (!r.passed) return false;
    return true;
}

} // namespace lpvar
