#pragma once

// Run configuration for the command-line tool: sweep lists, direction mode,
// sampling sizes, seeds, worker count, output, and the window constants used
// by every bounded-constant check. Precedence is flags > config file >
// defaults; the JSON mapping round-trips exactly.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

namespace lpvar {

// Two-sided and one-sided window constants standing in for the absolute
// constants of the bounded-ratio statements. All checks read these from the
// configuration; none are hard-coded in criteria logic.
struct Windows {
    double scaling_lo = 0.05;      // normalized E psi windows
    double scaling_hi = 20.0;
    double ratio_max = 30.0;       // variance-conjecture ratio cap
    double orlicz_lo = 0.1;        // E phi / Luxemburg-norm window
    double orlicz_hi = 10.0;
    double permavg_lo = 0.2;       // brute / rearrangement window
    double permavg_hi = 5.0;
    double remark_lo = 0.8;        // p E psi / ||theta||_1 limit window
    double remark_hi = 1.25;
    double steiner_factor = 10.0;  // multiplier on n L_K^4
    double haar_fraction_min = 0.95;
    double haar_threshold = 0.05;  // E psi_theta >= threshold * E psi_theta0
    double centered_sum_cap = 10.0;     // centered-square sum vs sqrt(alpha n)
    double khintchine_lo = 0.5;    // E psi / E phi sandwich
    double khintchine_hi = 1.05;
    double diag_comparison_lower = 0.02;  // E psi sqrt(n) / (E psi_0 ||theta||_1)

    bool operator==(const Windows&) const = default;
};

struct RunConfig {
    std::vector<double> p_list = {1.0, 1.5, 2.0, 4.0};
    std::vector<int> n_list = {8, 16};
    std::string theta_mode = "haar"; // haar | diag | axis | file
    std::string theta_file;
    int dirs_per_cell = 3;
    std::int64_t samples = 100000;
    std::uint64_t seed = 20260808;
    int threads = 0;                 // 0 = hardware default
    std::string out;
    std::string format = "csv";      // csv | json
    Windows windows;

    bool operator==(const RunConfig&) const = default;
    void validate() const;           // throws on invariant violations
};

nlohmann::json to_json(const RunConfig& config);
RunConfig config_from_json(const nlohmann::json& j);

// Per-task stream id: a documented splitmix-chain hash of the subcommand
// tag, p, n, and the direction index under the master seed.
std::uint64_t fanout_stream_id(const std::string& subcommand, double p, int n,
                               int theta_index);

// %.17g rendering used for every CSV/JSON number the tool emits.
std::string format_g17(double v);

} // namespace lpvar
