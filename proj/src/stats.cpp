#include "lpvar/stats.hpp"

#include <atomic>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace lpvar {

MomentEstimate estimate_from_batches(const std::vector<double>& batch_means,
                                     std::int64_t n_samples) {
    const int b = static_cast<int>(batch_means.size());
    if (b < 2) throw std::invalid_argument("estimate_from_batches: need >= 2 batches");
    const double mean = pairwise_sum(batch_means) / b;
    double ss = 0.0;
    for (double v : batch_means) ss += (v - mean) * (v - mean);
    const double var_of_mean = ss / (static_cast<double>(b) * (b - 1));
    return MomentEstimate{mean, std::sqrt(var_of_mean), n_samples, b};
}

RatioEstimate ratio_from_batch_means(const std::vector<double>& num,
                                     const std::vector<double>& den) {
    const int b = static_cast<int>(num.size());
    if (b < 2 || den.size() != num.size())
        throw std::invalid_argument("ratio_from_batch_means: need matched batches");
    const double nbar = pairwise_sum(num) / b;
    const double dbar = pairwise_sum(den) / b;
    if (dbar == 0.0) throw std::domain_error("ratio_from_batch_means: zero denominator");
    const double r = nbar / dbar;
    double ss = 0.0;
    for (int i = 0; i < b; ++i) {
        const double resid = (num[i] - r * den[i]) / dbar;
        ss += resid * resid;
    }
    return RatioEstimate{r, std::sqrt(ss / (static_cast<double>(b) * (b - 1)))};
}

double delta_method_std_err(const std::vector<std::vector<double>>& batches,
                            const std::vector<double>& grad) {
    const int b = static_cast<int>(batches.size());
    const int k = static_cast<int>(grad.size());
    if (b < 2) throw std::invalid_argument("delta_method_std_err: need >= 2 batches");
    std::vector<double> mean(k, 0.0);
    for (const auto& row : batches)
        for (int j = 0; j < k; ++j) mean[j] += row[j];
    for (double& m : mean) m /= b;
    // var(g) ~ grad' S grad / b with S the sample covariance of batch means.
    double acc = 0.0;
    for (const auto& row : batches) {
        double proj = 0.0;
        for (int j = 0; j < k; ++j) proj += grad[j] * (row[j] - mean[j]);
        acc += proj * proj;
    }
    return std::sqrt(acc / (static_cast<double>(b) * (b - 1)));
}

namespace {
std::atomic<int> g_default_threads{0};
}

int default_threads() {
    int t = g_default_threads.load(std::memory_order_relaxed);
    if (t > 0) return t;
    const unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

void set_default_threads(int threads) {
    g_default_threads.store(threads > 0 ? threads : 0, std::memory_order_relaxed);
}

void for_each_batch(int n_batches, const std::function<void(int)>& body, int threads) {
    if (threads <= 0) threads = default_threads();
    if (threads > n_batches) threads = n_batches;
    if (threads <= 1) {
        for (int i = 0; i < n_batches; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::atomic<bool> failed{false};
    auto worker = [&] {
        while (true) {
            const int i = next.fetch_add(1, std::memory_order_relaxed);
            if (i >= n_batches || failed.load(std::memory_order_relaxed)) return;
            try {
                body(i);
            } catch (...) {
                if (!failed.exchange(true)) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (failed.load()) std::rethrow_exception(first_error);
}

double pairwise_sum(const std::vector<double>& values) {
    // Fixed binary tree over indices.
    std::function<double(std::size_t, std::size_t)> rec =
        [&](std::size_t lo, std::size_t hi) -> double {
        if (hi - lo <= 8) {
            double s = 0.0;
            for (std::size_t i = lo; i < hi; ++i) s += values[i];
            return s;
        }
        const std::size_t mid = lo + (hi - lo) / 2;
        return rec(lo, mid) + rec(mid, hi);
    };
    return values.empty() ? 0.0 : rec(0, values.size());
}

} // namespace lpvar
