#include "lpvar/weights.hpp"

#include <cmath>
#include <stdexcept>

namespace lpvar {

Direction::Direction(Eigen::VectorXd t) : theta(std::move(t)) {
    const double n2 = theta.norm();
    if (theta.size() < 1 || std::fabs(n2 - 1.0) > 1e-12)
        throw std::invalid_argument("Direction: theta must be a unit vector");
    norm1 = theta.lpNorm<1>();
}

Direction Direction::diagonal(int n) {
    return Direction(Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(static_cast<double>(n))));
}

Direction Direction::axis(int n, int i) {
    return Direction(Eigen::VectorXd::Unit(n, i));
}

double signed_power(double x, double q) {
    if (q == 0.0) return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
    if (x == 0.0) return 0.0;
    const double mag = std::exp(q * std::log(std::fabs(x)));
    return x < 0.0 ? -mag : mag;
}

double psi_weight(const Eigen::Ref<const Eigen::VectorXd>& g, const PExponent& p,
                  const Direction& dir) {
    if (g.size() != dir.theta.size())
        throw std::invalid_argument("psi_weight: dimension mismatch");
    const double q = p.p - 1.0;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < g.size(); ++i)
        acc += signed_power(g[i], q) * dir.theta[i];
    return std::fabs(acc);
}

double phi_weight(const Eigen::Ref<const Eigen::VectorXd>& g, const PExponent& p,
                  const Direction& dir) {
    if (g.size() != dir.theta.size())
        throw std::invalid_argument("phi_weight: dimension mismatch");
    const double q = p.p - 1.0;
    double acc = 0.0;
    for (Eigen::Index i = 0; i < g.size(); ++i) {
        const double t = signed_power(g[i], q) * dir.theta[i];
        acc += t * t;
    }
    return std::sqrt(acc);
}

namespace {

// Shared batching loop: accumulates mean f(g) over n_samples draws.
MomentEstimate batched_g_mean(const PExponent& p, int n, std::int64_t n_samples,
                              RngStream stream, int threads,
                              const std::function<double(const Eigen::VectorXd&)>& f) {
    if (n_samples < kBatchCount)
        throw std::invalid_argument("batched_g_mean: too few samples");
    const std::int64_t batch_size = n_samples / kBatchCount;
    std::vector<double> bm(kBatchCount);
    for_each_batch(kBatchCount, [&](int b) {
        RngEngine eng(stream.substream(static_cast<std::uint64_t>(b)));
        Eigen::VectorXd g(n);
        double acc = 0.0;
        for (std::int64_t i = 0; i < batch_size; ++i) {
            for (int j = 0; j < n; ++j) g[j] = sample_gg(eng, p);
            acc += f(g);
        }
        bm[b] = acc / static_cast<double>(batch_size);
    }, threads);
    return estimate_from_batches(bm, batch_size * kBatchCount);
}

} // namespace

MomentEstimate estimate_epsi(const PExponent& p, int n, const Direction& dir,
                             int moment, std::int64_t n_samples, RngStream stream,
                             int threads) {
    if (moment != 1 && moment != 2)
        throw std::invalid_argument("estimate_epsi: moment must be 1 or 2");
    if (n_samples < 30000)
        throw std::invalid_argument("estimate_epsi: need n_samples >= 3e4");
    if (dir.dim() != n) throw std::invalid_argument("estimate_epsi: dimension mismatch");
    return batched_g_mean(p, n, n_samples, stream, threads,
                          [&](const Eigen::VectorXd& g) {
                              const double w = psi_weight(g, p, dir);
                              return moment == 1 ? w : w * w;
                          });
}

MomentEstimate estimate_ephi(const PExponent& p, int n, const Direction& dir,
                             std::int64_t n_samples, RngStream stream, int threads) {
    if (dir.dim() != n) throw std::invalid_argument("estimate_ephi: dimension mismatch");
    return batched_g_mean(p, n, n_samples, stream, threads,
                          [&](const Eigen::VectorXd& g) { return phi_weight(g, p, dir); });
}

EpsiScaling epsi_scaling_check(const PExponent& p, int n, std::int64_t n_samples,
                               RngStream stream, int threads) {
    const Direction d0 = Direction::diagonal(n);
    const MomentEstimate e = estimate_epsi(p, n, d0, 1, n_samples, stream, threads);
    EpsiScaling out;
    out.p = p.p;
    out.n = n;
    out.large_p_regime = p.p > static_cast<double>(n);
    out.e_psi = e.mean;
    out.e_psi_se = e.std_err;
    const double factor =
        out.large_p_regime ? p.p / std::sqrt(static_cast<double>(n)) : std::sqrt(p.p);
    out.normalized = factor * e.mean;
    out.normalized_se = factor * e.std_err;
    return out;
}

MomentEstimate subset_psi_ratio(const PExponent& p, int n, const Direction& dir,
                                const std::vector<int>& index_set,
                                std::int64_t n_samples, RngStream stream,
                                int threads) {
    if (dir.dim() != n) throw std::invalid_argument("subset_psi_ratio: dimension mismatch");
    for (int i : index_set)
        if (i < 0 || i >= n)
            throw std::invalid_argument("subset_psi_ratio: index out of range");
    if (index_set.empty())
        return MomentEstimate{0.0, 0.0, n_samples, kBatchCount};

    std::vector<char> mask(n, 0);
    for (int i : index_set) mask[i] = 1;
    const std::int64_t batch_size = n_samples / kBatchCount;
    std::vector<double> num(kBatchCount), den(kBatchCount);
    const double q = p.p - 1.0;
    for_each_batch(kBatchCount, [&](int b) {
        RngEngine eng(stream.substream(static_cast<std::uint64_t>(b)));
        double an = 0.0, ad = 0.0;
        for (std::int64_t i = 0; i < batch_size; ++i) {
            double part = 0.0, full = 0.0;
            for (int j = 0; j < n; ++j) {
                const double term = signed_power(sample_gg(eng, p), q) * dir.theta[j];
                full += term;
                if (mask[j]) part += term;
            }
            an += std::fabs(part);
            ad += std::fabs(full);
        }
        num[b] = an / static_cast<double>(batch_size);
        den[b] = ad / static_cast<double>(batch_size);
    }, threads);
    const RatioEstimate r = ratio_from_batch_means(num, den);
    return MomentEstimate{r.value, r.std_err, batch_size * kBatchCount, kBatchCount};
}

MomentEstimate symmetric_sum_moment(const PExponent& p, int n, double alpha,
                                    std::int64_t n_samples, RngStream stream,
                                    int threads) {
    if (alpha != 2.0 && alpha != 4.0 && alpha != 8.0)
        throw std::invalid_argument("symmetric_sum_moment: alpha must be 2, 4, or 8");
    if (alpha > std::exp(p.p))
        throw std::invalid_argument("symmetric_sum_moment: alpha exceeds e^p");
    const std::int64_t batch_size = n_samples / kBatchCount;
    std::vector<double> bm(kBatchCount);
    for_each_batch(kBatchCount, [&](int b) {
        RngEngine eng(stream.substream(static_cast<std::uint64_t>(b)));
        double acc = 0.0;
        for (std::int64_t i = 0; i < batch_size; ++i) {
            double t = 0.0;
            for (int j = 0; j < n; ++j) {
                const double g = sample_gg(eng, p);
                const double gb = sample_gg(eng, p);
                t += g * g - gb * gb;
            }
            acc += std::pow(std::fabs(t), alpha);
        }
        bm[b] = acc / static_cast<double>(batch_size);
    }, threads);
    const MomentEstimate raw = estimate_from_batches(bm, batch_size * kBatchCount);
    // Delta method for the alpha-th root of the mean.
    const double value = std::pow(raw.mean, 1.0 / alpha);
    const double se = raw.mean > 0.0
        ? raw.std_err * value / (alpha * raw.mean)
        : 0.0;
    return MomentEstimate{value, se, raw.n_samples, raw.n_batches};
}

double haar_direction_fraction(const PExponent& p, int n, int n_dirs,
                               std::int64_t n_samples, RngStream stream,
                               double threshold, int threads) {
    if (n_dirs < 50)
        throw std::invalid_argument("haar_direction_fraction: need n_dirs >= 50");
    const MomentEstimate base =
        estimate_epsi(p, n, Direction::diagonal(n), 1, n_samples,
                      stream.substream(0xd1a60000u), threads);
    int pass = 0;
    for (int d = 0; d < n_dirs; ++d) {
        RngEngine eng(stream.substream(2 * static_cast<std::uint64_t>(d) + 1));
        const Direction dir(sample_haar_direction(eng, n));
        const MomentEstimate e =
            estimate_epsi(p, n, dir, 1, n_samples,
                          stream.substream(2 * static_cast<std::uint64_t>(d) + 2), threads);
        if (e.mean >= threshold * base.mean) ++pass;
    }
    return static_cast<double>(pass) / n_dirs;
}

} // namespace lpvar
