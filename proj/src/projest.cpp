#include "lpvar/projest.hpp"

#include <cmath>

namespace lpvar {

Eigen::MatrixXd hyperplane_basis(const Eigen::Ref<const Eigen::VectorXd>& theta) {
    const int n = static_cast<int>(theta.size());
    const Eigen::VectorXd t = theta / theta.norm();
    Eigen::MatrixXd basis(n, n - 1);
    int col = 0;
    for (int i = 0; i < n && col < n - 1; ++i) {
        Eigen::VectorXd v = Eigen::VectorXd::Unit(n, i);
        v -= t * t.dot(v);
        for (int j = 0; j < col; ++j) v -= basis.col(j) * basis.col(j).dot(v);
        const double nv = v.norm();
        if (nv < 1e-8) continue;
        v /= nv;
        // One re-orthogonalization pass keeps the basis orthonormal to
        // machine precision even for nearly axis-aligned theta.
        v -= t * t.dot(v);
        for (int j = 0; j < col; ++j) v -= basis.col(j) * basis.col(j).dot(v);
        v.normalize();
        basis.col(col++) = v;
    }
    if (col != n - 1)
        throw std::runtime_error("hyperplane_basis: failed to complete basis");
    return basis;
}

double theoretical_scale(const ProjectedBodySpec& spec) {
    return std::pow(static_cast<double>(spec.n), 1.0 - 4.0 / spec.p.p);
}

double largest_eigenvalue(const Eigen::Ref<const Eigen::MatrixXd>& sym) {
    if (sym.rows() != sym.cols())
        throw std::invalid_argument("largest_eigenvalue: matrix must be square");
    const double asym = (sym - sym.transpose()).cwiseAbs().maxCoeff();
    if (asym > 1e-8)
        throw std::invalid_argument("largest_eigenvalue: matrix asymmetric beyond 1e-8");
    Eigen::MatrixXd m = 0.5 * (sym + sym.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(m, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("largest_eigenvalue: eigensolver failed");
    return solver.eigenvalues().maxCoeff();
}

namespace {

// Per-batch sums of everything the report needs, all under the psi weight.
struct PoolBatch {
    double w = 0.0;       // sum psi
    double q2 = 0.0;      // sum |P_H y|^2 psi
    double q4 = 0.0;      // sum |P_H y|^4 psi
    double full2 = 0.0;   // sum |y|^2 psi
    double full4 = 0.0;   // sum |y|^4 psi
    double axis2 = 0.0;   // sum <y,theta>^2 psi
    double axis4 = 0.0;   // sum <y,theta>^4 psi
    double coord4 = 0.0;  // sum (sum_i y_i^4) psi
    Eigen::VectorXd p2;   // per-coordinate sum y_i^2 psi
    Eigen::VectorXd p4;   // per-coordinate sum y_i^4 psi
    Eigen::MatrixXd zz;   // sum psi * z z', z = B' y (basis coordinates)
};

struct PoolSums {
    std::vector<PoolBatch> batches;
    std::int64_t batch_size = 0;
    Eigen::MatrixXd basis;
};

PoolSums run_weighted_pool(const ProjectedBodySpec& spec, std::int64_t n_samples,
                           RngStream stream, int threads) {
    if (n_samples < kBatchCount)
        throw std::invalid_argument("run_weighted_pool: too few samples");
    const int n = spec.n;
    PoolSums pool;
    pool.batch_size = n_samples / kBatchCount;
    pool.basis = hyperplane_basis(spec.dir.theta);
    pool.batches.resize(kBatchCount);
    for_each_batch(kBatchCount, [&](int b) {
        RngEngine eng(stream.substream(static_cast<std::uint64_t>(b)));
        PoolBatch acc;
        acc.p2 = Eigen::VectorXd::Zero(n);
        acc.p4 = Eigen::VectorXd::Zero(n);
        acc.zz = Eigen::MatrixXd::Zero(n - 1, n - 1);
        Eigen::VectorXd y(n), z(n - 1);
        for (std::int64_t i = 0; i < pool.batch_size; ++i) {
            const GSample gs = sample_gs(eng, spec.p, n);
            y = gs.g / gs.s;
            const double w = psi_weight(gs.g, spec.p, spec.dir);
            const double a = y.dot(spec.dir.theta);
            const double r2 = y.squaredNorm();
            const double proj2 = r2 - a * a;
            acc.w += w;
            acc.q2 += proj2 * w;
            acc.q4 += proj2 * proj2 * w;
            acc.full2 += r2 * w;
            acc.full4 += r2 * r2 * w;
            acc.axis2 += a * a * w;
            acc.axis4 += a * a * a * a * w;
            double c4 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double y2 = y[j] * y[j];
                acc.p2[j] += y2 * w;
                acc.p4[j] += y2 * y2 * w;
                c4 += y2 * y2;
            }
            acc.coord4 += c4 * w;
            z.noalias() = pool.basis.transpose() * y;
            acc.zz.selfadjointView<Eigen::Lower>().rankUpdate(z, w);
        }
        acc.zz = Eigen::MatrixXd(acc.zz.selfadjointView<Eigen::Lower>());
        pool.batches[b] = std::move(acc);
    }, threads);
    return pool;
}

void check_weight_not_degenerate(const std::vector<double>& w_means,
                                 std::int64_t batch_size) {
    const MomentEstimate w = estimate_from_batches(w_means, batch_size * kBatchCount);
    if (w.mean < 6.0 * w.std_err)
        throw DegenerateWeightError("weight mean consistent with zero");
}

std::array<double, 4> terms_from_sums(double w, double q_full4, double coord4,
                                      double axis2, double axis4, double full2,
                                      const Eigen::VectorXd& p2) {
    // term1 = sum_i [ E y_i^4 psi / E psi - (E y_i^2 psi / E psi)^2 ]
    // term2 = cross moments minus product of marginals, i != j
    // term3 = E <y,theta>^4 psi / E psi
    // term4 = 2 (E |y|^2 psi / E psi)(E <y,theta>^2 psi / E psi)
    const Eigen::VectorXd m2 = p2 / w;
    const double sum_m2_sq = m2.squaredNorm();
    const double t1 = coord4 / w - sum_m2_sq;
    const double mean_full2 = full2 / w;
    const double t2 = (q_full4 - coord4) / w - (mean_full2 * mean_full2 - sum_m2_sq);
    const double t3 = axis4 / w;
    const double t4 = 2.0 * mean_full2 * (axis2 / w);
    return {t1, t2, t3, t4};
}

} // namespace

MomentEstimate estimate_ef(const ProjectedBodySpec& spec,
                           const std::function<double(const Eigen::VectorXd&)>& f,
                           std::int64_t n_samples, RngStream stream, int threads) {
    if (n_samples < kBatchCount)
        throw std::invalid_argument("estimate_ef: too few samples");
    const int n = spec.n;
    const std::int64_t batch_size = n_samples / kBatchCount;
    std::vector<double> num(kBatchCount), den(kBatchCount);
    for_each_batch(kBatchCount, [&](int b) {
        RngEngine eng(stream.substream(static_cast<std::uint64_t>(b)));
        Eigen::VectorXd y(n);
        double an = 0.0, ad = 0.0;
        for (std::int64_t i = 0; i < batch_size; ++i) {
            const GSample gs = sample_gs(eng, spec.p, n);
            y = gs.g / gs.s;
            y -= y.dot(spec.dir.theta) * spec.dir.theta;
            const double w = psi_weight(gs.g, spec.p, spec.dir);
            an += f(y) * w;
            ad += w;
        }
        num[b] = an / static_cast<double>(batch_size);
        den[b] = ad / static_cast<double>(batch_size);
    }, threads);
    check_weight_not_degenerate(den, batch_size);
    const RatioEstimate r = ratio_from_batch_means(num, den);
    return MomentEstimate{r.value, r.std_err, batch_size * kBatchCount, kBatchCount};
}

VarianceReport variance_report(const ProjectedBodySpec& spec, std::int64_t n_samples,
                               RngStream stream, int threads) {
    const PoolSums pool = run_weighted_pool(spec, n_samples, stream, threads);
    const int b = kBatchCount;
    const double inv_bs = 1.0 / static_cast<double>(pool.batch_size);

    std::vector<double> wm(b), q2m(b), q4m(b);
    for (int i = 0; i < b; ++i) {
        wm[i] = pool.batches[i].w * inv_bs;
        q2m[i] = pool.batches[i].q2 * inv_bs;
        q4m[i] = pool.batches[i].q4 * inv_bs;
    }
    check_weight_not_degenerate(wm, pool.batch_size);

    VarianceReport rep;
    const RatioEstimate r2 = ratio_from_batch_means(q2m, wm);
    const RatioEstimate r4 = ratio_from_batch_means(q4m, wm);
    const std::int64_t total = pool.batch_size * kBatchCount;
    rep.e_norm2 = MomentEstimate{r2.value, r2.std_err, total, b};
    rep.e_norm4 = MomentEstimate{r4.value, r4.std_err, total, b};

    const double m2 = r2.value;
    const double m4 = r4.value;
    rep.var_norm2 = m4 - m2 * m2;

    // Delta method for Var = A4/D - (A2/D)^2 over batch means (A4, A2, D).
    const double wbar = pairwise_sum(wm) / b;
    const double a2bar = pairwise_sum(q2m) / b;
    const double a4bar = pairwise_sum(q4m) / b;
    std::vector<std::vector<double>> rows(b, std::vector<double>(3));
    for (int i = 0; i < b; ++i) rows[i] = {q4m[i], q2m[i], wm[i]};
    const std::vector<double> grad_var = {
        1.0 / wbar, -2.0 * m2 / wbar, (-a4bar + 2.0 * a2bar * m2) / (wbar * wbar)};
    rep.var_norm2_se = delta_method_std_err(rows, grad_var);

    // Covariance in the basis of H and its largest eigenvalue.
    Eigen::MatrixXd cov_sum = Eigen::MatrixXd::Zero(spec.n - 1, spec.n - 1);
    double w_total = 0.0;
    for (int i = 0; i < b; ++i) {
        cov_sum += pool.batches[i].zz;
        w_total += pool.batches[i].w;
    }
    rep.cov = cov_sum / w_total;
    rep.cov = 0.5 * (rep.cov + rep.cov.transpose()).eval();
    rep.lambda2 = largest_eigenvalue(rep.cov);

    // Uncertainty of the largest eigenvalue from batch subsampling. With a
    // (near-)degenerate spectrum the sample maximum overshoots the true
    // eigenvalue by the noise-matrix edge, which scales like 1/sqrt(N); batch
    // eigenvalues carry sqrt(B) times the pool overshoot, so the Richardson
    // difference (mean_batch - pool)/(sqrt(B) - 1) estimates the pool bias.
    // lambda2_se combines that with the replicate spread, RMSE style.
    std::vector<double> lam(b);
    for (int i = 0; i < b; ++i) {
        Eigen::MatrixXd cb = pool.batches[i].zz / pool.batches[i].w;
        cb = 0.5 * (cb + cb.transpose()).eval();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cb, Eigen::EigenvaluesOnly);
        lam[i] = es.eigenvalues().maxCoeff();
    }
    const MomentEstimate lam_est = estimate_from_batches(lam, total);
    const double lam_bias =
        (lam_est.mean - rep.lambda2) / (std::sqrt(static_cast<double>(b)) - 1.0);
    rep.lambda2_se =
        std::sqrt(lam_est.std_err * lam_est.std_err + lam_bias * lam_bias);

    // Ratio R = Var / (lambda2 E|X|^2): delta method over the batch means with
    // lambda2 at its point estimate, widened by the eigenvalue uncertainty.
    const double lam2 = rep.lambda2;
    rep.ratio = rep.var_norm2 / (lam2 * m2);
    const std::vector<double> grad_ratio = {
        1.0 / (lam2 * a2bar),
        -a4bar / (lam2 * a2bar * a2bar) - 1.0 / (lam2 * wbar),
        a2bar / (lam2 * wbar * wbar)};
    const double se_fixed_lam = delta_method_std_err(rows, grad_ratio);
    const double se_from_lam = std::fabs(rep.ratio) * rep.lambda2_se / lam2;
    rep.ratio_se = std::sqrt(se_fixed_lam * se_fixed_lam + se_from_lam * se_from_lam);

    // Four-summand decomposition from the same pool.
    double full4 = 0.0, coord4 = 0.0, axis2 = 0.0, axis4 = 0.0, full2 = 0.0;
    Eigen::VectorXd p2 = Eigen::VectorXd::Zero(spec.n);
    for (int i = 0; i < b; ++i) {
        full4 += pool.batches[i].full4;
        coord4 += pool.batches[i].coord4;
        axis2 += pool.batches[i].axis2;
        axis4 += pool.batches[i].axis4;
        full2 += pool.batches[i].full2;
        p2 += pool.batches[i].p2;
    }
    rep.terms = terms_from_sums(w_total, full4, coord4, axis2, axis4, full2, p2);

    for (int t = 0; t < 4; ++t) {
        std::vector<double> reps(b);
        for (int i = 0; i < b; ++i) {
            const PoolBatch& pb = pool.batches[i];
            reps[i] = terms_from_sums(pb.w, pb.full4, pb.coord4, pb.axis2, pb.axis4,
                                      pb.full2, pb.p2)[t];
        }
        rep.term_ses[t] = estimate_from_batches(reps, total).std_err;
    }
    return rep;
}

std::array<MomentEstimate, 4> four_term_decomposition(const ProjectedBodySpec& spec,
                                                      std::int64_t n_samples,
                                                      RngStream stream, int threads) {
    const VarianceReport rep = variance_report(spec, n_samples, stream, threads);
    std::array<MomentEstimate, 4> out;
    for (int t = 0; t < 4; ++t)
        out[t] = MomentEstimate{rep.terms[t], rep.term_ses[t],
                                rep.e_norm2.n_samples, rep.e_norm2.n_batches};
    return out;
}

} // namespace lpvar
