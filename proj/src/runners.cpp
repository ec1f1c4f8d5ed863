#include "lpvar/runners.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "lpvar/orlicz.hpp"
#include "lpvar/permavg.hpp"
#include "lpvar/projest.hpp"
#include "lpvar/quadoracle.hpp"
#include "lpvar/rng.hpp"
#include "lpvar/steiner.hpp"
#include "lpvar/weights.hpp"

namespace lpvar {

namespace {

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::string nan_str() { return format_g17(std::nan("")); }

// Directions for one (p, n) cell under the configured mode. Returns pairs of
// (direction, stream id used to draw it; 0 for deterministic modes).
std::vector<std::pair<Direction, std::uint64_t>> cell_directions(
    const RunConfig& config, const std::string& subcommand, double p, int n) {
    std::vector<std::pair<Direction, std::uint64_t>> out;
    if (config.theta_mode == "diag") {
        out.emplace_back(Direction::diagonal(n), 0);
    } else if (config.theta_mode == "axis") {
        out.emplace_back(Direction::axis(n, n - 1), 0);
    } else if (config.theta_mode == "file") {
        std::ifstream in(config.theta_file);
        if (!in)
            throw std::runtime_error("cannot open theta file: " + config.theta_file);
        std::string line;
        while (std::getline(in, line)) {
            for (char& c : line)
                if (c == ',') c = ' ';
            std::istringstream ls(line);
            std::vector<double> vals;
            double v;
            while (ls >> v) vals.push_back(v);
            if (vals.empty()) continue;
            if (static_cast<int>(vals.size()) != n)
                throw std::runtime_error("theta file row dimension mismatch in " +
                                         config.theta_file);
            Eigen::VectorXd t =
                Eigen::Map<Eigen::VectorXd>(vals.data(), static_cast<int>(vals.size()));
            t.normalize();
            out.emplace_back(Direction(t), 0);
        }
        if (out.empty())
            throw std::runtime_error("theta file has no directions: " + config.theta_file);
    } else { // haar
        for (int d = 0; d < config.dirs_per_cell; ++d) {
            const std::uint64_t sid = fanout_stream_id(subcommand + "/theta", p, n, d);
            RngEngine eng(RngStream{config.seed, sid});
            out.emplace_back(Direction(sample_haar_direction(eng, n)), sid);
        }
    }
    return out;
}

} // namespace

std::string table_to_csv(const Table& t) {
    std::string out;
    for (std::size_t i = 0; i < t.header.size(); ++i) {
        if (i) out += ',';
        out += csv_field(t.header[i]);
    }
    out += "\r\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += csv_field(row[i]);
        }
        out += "\r\n";
    }
    return out;
}

std::string table_to_json(const Table& t) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& row : t.rows) {
        nlohmann::json obj;
        for (std::size_t i = 0; i < t.header.size(); ++i) obj[t.header[i]] = row[i];
        rows.push_back(obj);
    }
    return rows.dump(2) + "\n";
}

std::string render_table(const Table& t, const std::string& format) {
    return format == "json" ? table_to_json(t) : table_to_csv(t);
}

Table run_moments(const RunConfig& config) {
    config.validate();
    Table t;
    t.header = {"kind", "p", "n", "alpha", "samples",
                "empirical", "std_err", "oracle", "z_score"};
    static const double kAlphas[] = {1.0, 2.0, 4.0};
    const std::int64_t batch = config.samples / kBatchCount;
    const std::int64_t total = batch * kBatchCount;

    for (double pv : config.p_list) {
        const PExponent p(pv);
        // |g|^alpha moments, all alphas from one pass.
        std::vector<std::vector<double>> bm(3, std::vector<double>(kBatchCount));
        const std::uint64_t sid = fanout_stream_id("moments/g", pv, 0, 0);
        for_each_batch(kBatchCount, [&](int b) {
            RngEngine eng(RngStream{config.seed, sid}.substream(b));
            double a1 = 0, a2 = 0, a4 = 0;
            for (std::int64_t i = 0; i < batch; ++i) {
                const double g = std::fabs(sample_gg(eng, p));
                a1 += g;
                a2 += g * g;
                a4 += g * g * g * g;
            }
            bm[0][b] = a1 / batch;
            bm[1][b] = a2 / batch;
            bm[2][b] = a4 / batch;
        }, config.threads);
        for (int a = 0; a < 3; ++a) {
            const MomentEstimate e = estimate_from_batches(bm[a], total);
            const double oracle = moment_g(p, kAlphas[a]);
            const double z = (e.mean - oracle) / e.std_err;
            t.rows.push_back({"g", format_g17(pv), "", format_g17(kAlphas[a]),
                              std::to_string(total), format_g17(e.mean),
                              format_g17(e.std_err), format_g17(oracle), format_g17(z)});
        }
        for (int n : config.n_list) {
            std::vector<std::vector<double>> sm(3, std::vector<double>(kBatchCount));
            const std::uint64_t ssid = fanout_stream_id("moments/S", pv, n, 0);
            for_each_batch(kBatchCount, [&](int b) {
                RngEngine eng(RngStream{config.seed, ssid}.substream(b));
                double a1 = 0, a2 = 0, a4 = 0;
                for (std::int64_t i = 0; i < batch; ++i) {
                    const double s = sample_gs(eng, p, n).s;
                    a1 += s;
                    a2 += s * s;
                    a4 += s * s * s * s;
                }
                sm[0][b] = a1 / batch;
                sm[1][b] = a2 / batch;
                sm[2][b] = a4 / batch;
            }, config.threads);
            for (int a = 0; a < 3; ++a) {
                const MomentEstimate e = estimate_from_batches(sm[a], total);
                const double oracle = moment_S(p, n, kAlphas[a]);
                const double z = (e.mean - oracle) / e.std_err;
                t.rows.push_back({"S", format_g17(pv), std::to_string(n),
                                  format_g17(kAlphas[a]), std::to_string(total),
                                  format_g17(e.mean), format_g17(e.std_err),
                                  format_g17(oracle), format_g17(z)});
            }
        }
    }
    return t;
}

Table run_ratio(const RunConfig& config) {
    config.validate();
    Table t;
    t.header = {"p", "n", "theta_mode", "theta_seed", "N",
                "e_norm2", "e_norm2_se", "var_norm2", "var_norm2_se", "lambda2",
                "ratio", "ratio_se", "ratio_over_log1p", "scale_n_pow",
                "term1", "term2", "term3", "term4"};
    for (double pv : config.p_list) {
        const PExponent p(pv);
        for (int n : config.n_list) {
            int idx = 0;
            for (const auto& [dir, sid] : cell_directions(config, "ratio", pv, n)) {
                const ProjectedBodySpec spec(p, n, dir);
                const RngStream stream{config.seed,
                                       fanout_stream_id("ratio", pv, n, idx)};
                std::vector<std::string> row = {format_g17(pv), std::to_string(n),
                                                config.theta_mode, std::to_string(sid),
                                                std::to_string(config.samples)};
                try {
                    const VarianceReport rep =
                        variance_report(spec, config.samples, stream, config.threads);
                    row.insert(row.end(),
                               {format_g17(rep.e_norm2.mean),
                                format_g17(rep.e_norm2.std_err),
                                format_g17(rep.var_norm2), format_g17(rep.var_norm2_se),
                                format_g17(rep.lambda2), format_g17(rep.ratio),
                                format_g17(rep.ratio_se),
                                format_g17(rep.ratio / std::log1p(pv)),
                                format_g17(theoretical_scale(spec)),
                                format_g17(rep.terms[0]), format_g17(rep.terms[1]),
                                format_g17(rep.terms[2]), format_g17(rep.terms[3])});
                } catch (const DegenerateWeightError&) {
                    // flagged, not dropped: numeric fields become nan
                    for (int k = 0; k < 13; ++k) row.push_back(nan_str());
                }
                t.rows.push_back(std::move(row));
                ++idx;
            }
        }
    }
    return t;
}

Table run_orlicz(const RunConfig& config) {
    config.validate();
    Table t;
    t.header = {"p", "n", "theta_mode", "theta_index", "N",
                "e_phi", "e_phi_se", "lux_norm", "ratio", "ratio_se", "in_window"};
    for (double pv : config.p_list) {
        if (pv == 1.0) continue; // dual exponent degenerates; handled elsewhere
        const PExponent p(pv);
        const OrliczM m(p);
        for (int n : config.n_list) {
            int idx = 0;
            for (const auto& [dir, sid] : cell_directions(config, "orlicz", pv, n)) {
                (void)sid;
                const RngStream stream{config.seed,
                                       fanout_stream_id("orlicz", pv, n, idx)};
                const MomentEstimate ephi =
                    estimate_ephi(p, n, dir, config.samples, stream, config.threads);
                const double norm = luxemburg_norm(m, dir.theta);
                const double ratio = ephi.mean / norm;
                const bool ok =
                    ratio >= config.windows.orlicz_lo && ratio <= config.windows.orlicz_hi;
                t.rows.push_back({format_g17(pv), std::to_string(n), config.theta_mode,
                                  std::to_string(idx), std::to_string(config.samples),
                                  format_g17(ephi.mean), format_g17(ephi.std_err),
                                  format_g17(norm), format_g17(ratio),
                                  format_g17(ephi.std_err / norm), ok ? "1" : "0"});
                ++idx;
            }
        }
    }
    return t;
}

Table run_steiner(const RunConfig& config) {
    config.validate();
    Table t;
    t.header = {"p", "n", "theta_mode", "theta_index", "N",
                "var_y", "var_y_se", "var_x", "var_x_se", "bound",
                "abs_diff", "within_window", "r_x", "r_y"};
    for (double pv : config.p_list) {
        const PExponent p(pv);
        for (int n : config.n_list) {
            int idx = 0;
            for (const auto& [dir, sid] : cell_directions(config, "steiner", pv, n)) {
                (void)sid;
                const RngStream stream{config.seed,
                                       fanout_stream_id("steiner", pv, n, idx)};
                const SteinerCompare sc = steiner_variance_compare(
                    p, n, dir, config.samples, stream, config.threads);
                const double diff = std::fabs(sc.var_y - sc.var_x);
                const double sigma =
                    std::sqrt(sc.var_y_se * sc.var_y_se + sc.var_x_se * sc.var_x_se);
                const bool ok =
                    diff <= config.windows.steiner_factor * sc.bound + 4.0 * sigma;
                t.rows.push_back({format_g17(pv), std::to_string(n), config.theta_mode,
                                  std::to_string(idx), std::to_string(config.samples),
                                  format_g17(sc.var_y), format_g17(sc.var_y_se),
                                  format_g17(sc.var_x), format_g17(sc.var_x_se),
                                  format_g17(sc.bound), format_g17(diff),
                                  ok ? "1" : "0", format_g17(sc.r_x),
                                  format_g17(sc.r_y)});
                ++idx;
            }
        }
    }
    return t;
}

Table run_permavg(const RunConfig& config) {
    config.validate();
    Table t;
    t.header = {"n", "q", "case", "label", "brute", "rearrangement", "ratio",
                "in_window"};
    const double q = 2.0;
    const int n_cases = 20;
    for (int n : config.n_list) {
        if (n > 7) continue; // brute force path is capped
        for (int c = 0; c < n_cases; ++c) {
            const RngStream stream{config.seed, fanout_stream_id("permavg", q, n, c)};
            std::string label;
            const Eigen::MatrixXd a = permavg_case_matrix(c, n, stream, &label);
            const RearrangementInput inp(a, q);
            const double brute = brute_avg_permutations(inp);
            const double func = rearrangement_functional(inp);
            const double ratio = brute / func;
            const bool ok = ratio >= config.windows.permavg_lo &&
                            ratio <= config.windows.permavg_hi;
            t.rows.push_back({std::to_string(n), format_g17(q), std::to_string(c),
                              label, format_g17(brute), format_g17(func),
                              format_g17(ratio), ok ? "1" : "0"});
        }
    }
    return t;
}

} // namespace lpvar
