#pragma once

// Batch-mean Monte Carlo bookkeeping: moment estimates with standard errors,
// delta-method ratio estimates from paired batches, and the worker fan-out
// used by every estimator. Estimators split work into kBatchCount batches,
// one substream per batch, so results are identical for any thread count.

#include <cstdint>
#include <functional>
#include <vector>

namespace lpvar {

inline constexpr int kBatchCount = 100;

// Monte Carlo value with a batch-based standard error.
struct MomentEstimate {
    double mean = 0.0;
    double std_err = 0.0;
    std::int64_t n_samples = 0;
    int n_batches = 0;
};

struct RatioEstimate {
    double value = 0.0;
    double std_err = 0.0;
};

// Mean and standard error of the mean from per-batch means.
MomentEstimate estimate_from_batches(const std::vector<double>& batch_means,
                                     std::int64_t n_samples);

// Ratio-of-means sum(num)/sum(den) with delta-method standard error from
// paired batch means.
RatioEstimate ratio_from_batch_means(const std::vector<double>& num,
                                     const std::vector<double>& den);

// Delta-method standard error of g(mean(components)) where `batches` holds
// one row of component batch means per batch and `grad` is the gradient of g
// at the component means.
double delta_method_std_err(const std::vector<std::vector<double>>& batches,
                            const std::vector<double>& grad);

// Process-wide default worker count (clamped hardware concurrency).
int default_threads();
void set_default_threads(int threads);

// Runs body(0) ... body(n_batches - 1) across a worker pool. Bodies must
// write only to their own slots. threads <= 0 selects default_threads().
void for_each_batch(int n_batches, const std::function<void(int)>& body,
                    int threads = 0);

// Pairwise (tree) summation in fixed index order; deterministic regardless
// of how the values were produced.
double pairwise_sum(const std::vector<double>& values);

} // namespace lpvar
