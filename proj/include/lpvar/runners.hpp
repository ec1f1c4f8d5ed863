#pragma once

// Sweep runners behind the CLI subcommands: each produces a table with a
// pinned header that serializes to RFC-4180 CSV ('.' decimals, 17 significant
// digits) or to a JSON array of row objects.

#include <string>
#include <vector>

#include "lpvar/config.hpp"

namespace lpvar {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

std::string table_to_csv(const Table& t);
std::string table_to_json(const Table& t);
std::string render_table(const Table& t, const std::string& format);

// Sampler-vs-oracle moment table: |g|^alpha rows per p and S^alpha rows per
// (p, n), alpha in {1, 2, 4}.
Table run_moments(const RunConfig& config);

// One variance report row per (p, n, direction).
Table run_ratio(const RunConfig& config);

// E phi / Luxemburg norm per (p > 1, n, direction).
Table run_orlicz(const RunConfig& config);

// Steiner comparison per (p, n, direction).
Table run_steiner(const RunConfig& config);

// Permutation-average vs rearrangement per (n, case).
Table run_permavg(const RunConfig& config);

} // namespace lpvar
