#include "lpvar/steiner.hpp"

#include <cmath>

namespace lpvar {

namespace {

constexpr double kGolden = 0.6180339887498949;

// Convex coercive fiber map t -> ||y + t theta||_p.
struct FiberNorm {
    const Eigen::VectorXd& y;
    const Eigen::VectorXd& theta;
    double p;
    mutable Eigen::VectorXd scratch;

    double operator()(double t) const {
        scratch = y + t * theta;
        return lp_norm(scratch, p);
    }
};

// Bracket and golden-section the minimum of a convex function.
double fiber_min(const FiberNorm& fn, double* t_min) {
    const double f0 = fn(0.0);
    double span = 1.0;
    while (fn(span) <= f0 || fn(-span) <= f0) span *= 2.0;
    double a = -span, b = span;
    double c = b - kGolden * (b - a);
    double d = a + kGolden * (b - a);
    double fc = fn(c), fd = fn(d);
    while (b - a > 1e-12) {
        if (fc < fd) {
            b = d; d = c; fd = fc;
            c = b - kGolden * (b - a);
            fc = fn(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + kGolden * (b - a);
            fd = fn(d);
        }
    }
    const double t = 0.5 * (a + b);
    if (t_min) *t_min = t;
    return fn(t);
}

// Norm and its t-derivative in one pass, max-rescaled so that large p does
// not overflow.
void fiber_norm_deriv(const Eigen::VectorXd& y, const Eigen::VectorXd& theta,
                      double p, double t, double* val, double* deriv) {
    double m = 0.0;
    const int n = static_cast<int>(y.size());
    for (int i = 0; i < n; ++i) m = std::fmax(m, std::fabs(y[i] + t * theta[i]));
    if (m == 0.0) {
        *val = 0.0;
        *deriv = 0.0;
        return;
    }
    double acc = 0.0, der = 0.0;
    for (int i = 0; i < n; ++i) {
        const double v = y[i] + t * theta[i];
        const double r = std::fabs(v) / m;
        if (r == 0.0) continue;
        const double rp = std::pow(r, p);
        acc += rp;
        der += (v < 0.0 ? -1.0 : 1.0) * (rp / r) * theta[i];
    }
    const double root = std::pow(acc, 1.0 / p);
    *val = m * root;
    *deriv = der * root / acc;
}

// Root of ||y + t theta||_p = 1 to the right (dirn = +1) or left (dirn = -1)
// of an interior point t0. Bracket by doubling, then safeguarded Newton.
double fiber_root(const Eigen::VectorXd& y, const Eigen::VectorXd& theta, double p,
                  double t0, int dirn) {
    double val = 0.0, deriv = 0.0;
    double step = 1.0;
    double hi = t0 + dirn * step;
    fiber_norm_deriv(y, theta, p, hi, &val, &deriv);
    while (val <= 1.0) {
        step *= 2.0;
        hi = t0 + dirn * step;
        fiber_norm_deriv(y, theta, p, hi, &val, &deriv);
    }
    double lo = t0;
    if (dirn < 0) std::swap(lo, hi);
    double t = 0.5 * (lo + hi);
    for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
        fiber_norm_deriv(y, theta, p, t, &val, &deriv);
        (val <= 1.0) == (dirn > 0) ? lo = t : hi = t;
        double next = deriv != 0.0 ? t - (val - 1.0) / deriv : lo - 1.0;
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        t = next;
    }
    return 0.5 * (lo + hi);
}

void require_in_hyperplane(const Direction& dir,
                           const Eigen::Ref<const Eigen::VectorXd>& y) {
    if (y.size() != dir.theta.size())
        throw std::invalid_argument("chord: dimension mismatch");
    if (std::fabs(y.dot(dir.theta)) > 1e-10)
        throw std::invalid_argument("chord: y must lie in theta-perp");
}

} // namespace

std::optional<Chord> chord(const PExponent& p, int n, const Direction& dir,
                           const Eigen::Ref<const Eigen::VectorXd>& y) {
    if (dir.dim() != n) throw std::invalid_argument("chord: dimension mismatch");
    require_in_hyperplane(dir, y);
    const Eigen::VectorXd yv = y;
    FiberNorm fn{yv, dir.theta, p.p, Eigen::VectorXd(n)};
    double t_min = 0.0;
    const double f_min = fiber_min(fn, &t_min);
    if (f_min > 1.0) return std::nullopt;
    const double b = fiber_root(yv, dir.theta, p.p, t_min, +1);
    const double a = fiber_root(yv, dir.theta, p.p, t_min, -1);
    return Chord{a, b};
}

double projection_depth(const PExponent& p, int n, const Direction& dir,
                        const Eigen::Ref<const Eigen::VectorXd>& y) {
    if (dir.dim() != n)
        throw std::invalid_argument("projection_depth: dimension mismatch");
    require_in_hyperplane(dir, y);
    const Eigen::VectorXd yv = y;
    FiberNorm fn{yv, dir.theta, p.p, Eigen::VectorXd(n)};
    return fiber_min(fn, nullptr);
}

bool membership_projection(const PExponent& p, int n, const Direction& dir,
                           const Eigen::Ref<const Eigen::VectorXd>& y) {
    return projection_depth(p, n, dir, y) <= 1.0 + 1e-10;
}

IsotropicBodySpec isotropic_spec(const PExponent& p, int n) {
    const double scale = std::exp(-log_ball_volume(p, n) / n);
    const double lk2 = scale * scale * (static_cast<double>(n) / (n + 2)) *
                       moment_g(p, 2.0) / moment_S(p, n, 2.0);
    return IsotropicBodySpec{p, n, scale, lk2};
}

Eigen::VectorXd sample_steiner_point(RngEngine& eng, const IsotropicBodySpec& body,
                                     const Direction& dir) {
    const int n = body.n;
    const Eigen::VectorXd x_unit = sample_ball_uniform(eng, body.p, n);
    const double t0 = x_unit.dot(dir.theta);
    Eigen::VectorXd y_unit = x_unit - t0 * dir.theta;
    double val = 0.0, deriv = 0.0;
    fiber_norm_deriv(y_unit, dir.theta, body.p.p, t0, &val, &deriv);
    double half = 0.0;
    if (val <= 1.0) {
        const double b = fiber_root(y_unit, dir.theta, body.p.p, t0, +1);
        const double a = fiber_root(y_unit, dir.theta, body.p.p, t0, -1);
        half = 0.5 * (b - a);
    }
    const double t = (2.0 * eng.next_double() - 1.0) * half;
    return body.scale * (y_unit + t * dir.theta);
}

Eigen::MatrixXd sample_steiner(RngStream stream, const PExponent& p, int n,
                               const Direction& dir, std::int64_t n_samples) {
    const IsotropicBodySpec body = isotropic_spec(p, n);
    Eigen::MatrixXd out(n_samples, n);
    const std::int64_t per_batch = (n_samples + kBatchCount - 1) / kBatchCount;
    for_each_batch(kBatchCount, [&](int b) {
        RngEngine eng(stream.substream(static_cast<std::uint64_t>(b)));
        const std::int64_t lo = b * per_batch;
        const std::int64_t hi = std::min<std::int64_t>(n_samples, lo + per_batch);
        for (std::int64_t i = lo; i < hi; ++i)
            out.row(i) = sample_steiner_point(eng, body, dir).transpose();
    });
    return out;
}

namespace {

struct BodyBatch {
    double m2 = 0.0, m4 = 0.0;   // |.|^2, |.|^4
    double a2 = 0.0, a4 = 0.0;   // <., theta>^2, <., theta>^4
    Eigen::MatrixXd xx;          // second-moment matrix accumulator
};

// Var = m4 - m2^2 point estimate with delta-method standard error from
// per-batch means (rows = {m4_b, m2_b}).
void variance_with_se(const std::vector<double>& m4b, const std::vector<double>& m2b,
                      double* var, double* se) {
    const int b = static_cast<int>(m4b.size());
    const double m4 = pairwise_sum(m4b) / b;
    const double m2 = pairwise_sum(m2b) / b;
    *var = m4 - m2 * m2;
    std::vector<std::vector<double>> rows(b, std::vector<double>(2));
    for (int i = 0; i < b; ++i) rows[i] = {m4b[i], m2b[i]};
    *se = delta_method_std_err(rows, {1.0, -2.0 * m2});
}

} // namespace

SteinerCompare steiner_variance_compare(const PExponent& p, int n, const Direction& dir,
                                        std::int64_t n_samples, RngStream stream,
                                        int threads) {
    const IsotropicBodySpec body = isotropic_spec(p, n);
    const std::int64_t batch_size = n_samples / kBatchCount;
    if (batch_size < 1)
        throw std::invalid_argument("steiner_variance_compare: too few samples");

    std::vector<BodyBatch> yb(kBatchCount), xb(kBatchCount);
    for_each_batch(kBatchCount, [&](int b) {
        RngEngine eng_y(stream.substream(2 * static_cast<std::uint64_t>(b)));
        RngEngine eng_x(stream.substream(2 * static_cast<std::uint64_t>(b) + 1));
        BodyBatch ay, ax;
        ay.xx = Eigen::MatrixXd::Zero(n, n);
        ax.xx = Eigen::MatrixXd::Zero(n, n); // unused for X (lambda is closed form)
        for (std::int64_t i = 0; i < batch_size; ++i) {
            const Eigen::VectorXd y = sample_steiner_point(eng_y, body, dir);
            const double ry = y.squaredNorm();
            const double ty = y.dot(dir.theta);
            ay.m2 += ry;
            ay.m4 += ry * ry;
            ay.a2 += ty * ty;
            ay.a4 += ty * ty * ty * ty;
            ay.xx.selfadjointView<Eigen::Lower>().rankUpdate(y, 1.0);

            const Eigen::VectorXd x = body.scale * sample_ball_uniform(eng_x, p, n);
            const double rx = x.squaredNorm();
            const double tx = x.dot(dir.theta);
            ax.m2 += rx;
            ax.m4 += rx * rx;
            ax.a2 += tx * tx;
            ax.a4 += tx * tx * tx * tx;
        }
        yb[b] = std::move(ay);
        xb[b] = std::move(ax);
    }, threads);

    const double inv_bs = 1.0 / static_cast<double>(batch_size);
    std::vector<double> ym2(kBatchCount), ym4(kBatchCount), xm2(kBatchCount),
        xm4(kBatchCount), ya2(kBatchCount), ya4(kBatchCount), xa2(kBatchCount),
        xa4(kBatchCount);
    Eigen::MatrixXd yxx = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < kBatchCount; ++i) {
        ym2[i] = yb[i].m2 * inv_bs;
        ym4[i] = yb[i].m4 * inv_bs;
        ya2[i] = yb[i].a2 * inv_bs;
        ya4[i] = yb[i].a4 * inv_bs;
        xm2[i] = xb[i].m2 * inv_bs;
        xm4[i] = xb[i].m4 * inv_bs;
        xa2[i] = xb[i].a2 * inv_bs;
        xa4[i] = xb[i].a4 * inv_bs;
        yxx += yb[i].xx;
    }
    const std::int64_t total = batch_size * kBatchCount;

    SteinerCompare out;
    variance_with_se(ym4, ym2, &out.var_y, &out.var_y_se);
    variance_with_se(xm4, xm2, &out.var_x, &out.var_x_se);
    out.bound = n * body.lk2 * body.lk2;
    out.e2_y = pairwise_sum(ym2) / kBatchCount;
    out.e2_x = pairwise_sum(xm2) / kBatchCount;

    Eigen::MatrixXd cov_y = Eigen::MatrixXd(yxx.selfadjointView<Eigen::Lower>()) /
                            static_cast<double>(total);
    out.lambda2_y = largest_eigenvalue(cov_y);
    out.lambda2_x = body.lk2;
    out.r_y = out.var_y / (out.lambda2_y * out.e2_y);
    out.r_x = out.var_x / (out.lambda2_x * out.e2_x);

    const MomentEstimate eya2 = estimate_from_batches(ya2, total);
    const MomentEstimate eya4 = estimate_from_batches(ya4, total);
    const MomentEstimate exa2 = estimate_from_batches(xa2, total);
    const MomentEstimate exa4 = estimate_from_batches(xa4, total);
    out.axis2_y = eya2.mean;
    out.axis2_y_se = eya2.std_err;
    out.axis4_y = eya4.mean;
    out.axis4_y_se = eya4.std_err;
    out.axis2_x = exa2.mean;
    out.axis2_x_se = exa2.std_err;
    out.axis4_x = exa4.mean;
    out.axis4_x_se = exa4.std_err;
    return out;
}

ProjectionDecomposition projection_decomposition_check(const PExponent& p, int n,
                                                       const Direction& dir,
                                                       std::int64_t n_samples,
                                                       RngStream stream, int threads) {
    const std::int64_t batch_size = n_samples / kBatchCount;
    if (batch_size < 1)
        throw std::invalid_argument("projection_decomposition_check: too few samples");
    std::vector<double> fm2(kBatchCount), fm4(kBatchCount), pm2(kBatchCount),
        pm4(kBatchCount), qm2(kBatchCount), qm4(kBatchCount);
    for_each_batch(kBatchCount, [&](int b) {
        RngEngine eng(stream.substream(static_cast<std::uint64_t>(b)));
        double f2 = 0, f4 = 0, p2 = 0, p4 = 0, q2 = 0, q4 = 0;
        for (std::int64_t i = 0; i < batch_size; ++i) {
            const Eigen::VectorXd x = sample_ball_uniform(eng, p, n);
            const double r2 = x.squaredNorm();
            const double a = x.dot(dir.theta);
            const double perp2 = a * a;
            const double proj2 = r2 - perp2;
            f2 += r2;
            f4 += r2 * r2;
            p2 += proj2;
            p4 += proj2 * proj2;
            q2 += perp2;
            q4 += perp2 * perp2;
        }
        const double inv = 1.0 / static_cast<double>(batch_size);
        fm2[b] = f2 * inv; fm4[b] = f4 * inv;
        pm2[b] = p2 * inv; pm4[b] = p4 * inv;
        qm2[b] = q2 * inv; qm4[b] = q4 * inv;
    }, threads);

    auto sd_of = [&](const std::vector<double>& m4b, const std::vector<double>& m2b,
                     double* sd, double* se) {
        double var = 0.0, var_se = 0.0;
        variance_with_se(m4b, m2b, &var, &var_se);
        *sd = std::sqrt(std::fmax(var, 0.0));
        *se = *sd > 0.0 ? var_se / (2.0 * *sd) : var_se;
    };

    ProjectionDecomposition out;
    sd_of(fm4, fm2, &out.sd_full, &out.sd_full_se);
    sd_of(pm4, pm2, &out.sd_proj, &out.sd_proj_se);
    sd_of(qm4, qm2, &out.sd_perp, &out.sd_perp_se);
    out.lhs = std::fabs(out.sd_full - out.sd_proj);
    out.rhs = out.sd_perp;
    const double lhs_se =
        std::sqrt(out.sd_full_se * out.sd_full_se + out.sd_proj_se * out.sd_proj_se);
    out.slack = 4.0 * std::sqrt(lhs_se * lhs_se + out.sd_perp_se * out.sd_perp_se);
    out.holds = out.lhs <= out.rhs + out.slack;
    return out;
}

} // namespace lpvar
