#include "lpvar/permavg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace lpvar {

double rearrangement_functional(const RearrangementInput& inp) {
    const int n = inp.n();
    std::vector<double> sorted(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            sorted[static_cast<std::size_t>(i) * n + j] = std::fabs(inp.a(i, j));
    std::sort(sorted.begin(), sorted.end(), std::greater<double>());

    double head = 0.0;
    for (int k = 0; k < n; ++k) head += sorted[k];
    head /= n;

    double tail = 0.0;
    if (std::isinf(inp.q)) {
        tail = (n > 1) ? sorted[n] : 0.0;
    } else {
        double acc = 0.0;
        for (std::size_t k = n; k < sorted.size(); ++k)
            acc += std::pow(sorted[k], inp.q);
        tail = acc > 0.0 ? std::pow(acc / n, 1.0 / inp.q) : 0.0;
    }
    return head + tail;
}

double brute_avg_permutations(const RearrangementInput& inp) {
    const int n = inp.n();
    if (n > 8)
        throw std::invalid_argument("brute_avg_permutations: n must be <= 8");
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    double total = 0.0;
    std::int64_t count = 0;
    do {
        double v;
        if (std::isinf(inp.q)) {
            v = 0.0;
            for (int i = 0; i < n; ++i) v = std::fmax(v, std::fabs(inp.a(i, perm[i])));
        } else {
            double acc = 0.0;
            for (int i = 0; i < n; ++i) acc += std::pow(std::fabs(inp.a(i, perm[i])), inp.q);
            v = std::pow(acc, 1.0 / inp.q);
        }
        total += v;
        ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total / static_cast<double>(count);
}

Eigen::MatrixXd permavg_case_matrix(int case_id, int n, RngStream stream,
                                    std::string* label) {
    static const double kExponents[] = {1.0, 1.5, 2.0, 3.0, 8.0};
    Eigen::MatrixXd a(n, n);
    RngEngine eng(stream.substream(static_cast<std::uint64_t>(case_id)));
    if (case_id == 0) {
        a.setOnes();
        if (label) *label = "ones";
    } else if (case_id == 1) {
        Eigen::VectorXd u(n), v(n);
        for (int i = 0; i < n; ++i) u[i] = eng.next_open();
        for (int i = 0; i < n; ++i) v[i] = eng.next_open();
        a = u * v.transpose();
        if (label) *label = "rank_one";
    } else {
        const PExponent p(kExponents[case_id % 5]);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) a(i, j) = sample_gg(eng, p);
        if (label) *label = "gg_p" + std::to_string(kExponents[case_id % 5]).substr(0, 3);
    }
    return a;
}

RatioWindow ratio_window_check(int n_cases, int n, double q, RngStream stream) {
    if (n > 7) throw std::invalid_argument("ratio_window_check: n must be <= 7");
    if (n_cases < 2) throw std::invalid_argument("ratio_window_check: need >= 2 cases");
    RatioWindow out;
    for (int c = 0; c < n_cases; ++c) {
        const Eigen::MatrixXd a = permavg_case_matrix(c, n, stream);
        const RearrangementInput inp(a, q);
        const double ratio = brute_avg_permutations(inp) / rearrangement_functional(inp);
        out.min_ratio = std::fmin(out.min_ratio, ratio);
        out.max_ratio = std::fmax(out.max_ratio, ratio);
        ++out.n_cases;
    }
    return out;
}

} // namespace lpvar
