#include "lpvar/config.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "lpvar/rng.hpp"

namespace lpvar {

void RunConfig::validate() const {
    for (double p : p_list)
        if (!std::isfinite(p) || p < 1.0)
            throw std::invalid_argument("config: every p must be finite and >= 1");
    if (p_list.empty() || n_list.empty())
        throw std::invalid_argument("config: p and n lists must be non-empty");
    for (int n : n_list)
        if (n < 2) throw std::invalid_argument("config: every n must be >= 2");
    if (samples < 30000)
        throw std::invalid_argument("config: samples must be >= 3e4");
    if (threads < 0)
        throw std::invalid_argument("config: threads must be >= 0");
    if (dirs_per_cell < 1)
        throw std::invalid_argument("config: dirs_per_cell must be >= 1");
    if (theta_mode != "haar" && theta_mode != "diag" && theta_mode != "axis" &&
        theta_mode != "file")
        throw std::invalid_argument("config: theta mode must be haar|diag|axis|file");
    if (theta_mode == "file" && theta_file.empty())
        throw std::invalid_argument("config: theta mode 'file' needs theta_file");
    if (format != "csv" && format != "json")
        throw std::invalid_argument("config: format must be csv or json");
}

namespace {

nlohmann::json windows_to_json(const Windows& w) {
    return nlohmann::json{{"scaling_lo", w.scaling_lo},
                          {"scaling_hi", w.scaling_hi},
                          {"ratio_max", w.ratio_max},
                          {"orlicz_lo", w.orlicz_lo},
                          {"orlicz_hi", w.orlicz_hi},
                          {"permavg_lo", w.permavg_lo},
                          {"permavg_hi", w.permavg_hi},
                          {"remark_lo", w.remark_lo},
                          {"remark_hi", w.remark_hi},
                          {"steiner_factor", w.steiner_factor},
                          {"haar_fraction_min", w.haar_fraction_min},
                          {"haar_threshold", w.haar_threshold},
                          {"centered_sum_cap", w.centered_sum_cap},
                          {"khintchine_lo", w.khintchine_lo},
                          {"khintchine_hi", w.khintchine_hi},
                          {"diag_comparison_lower", w.diag_comparison_lower}};
}

Windows windows_from_json(const nlohmann::json& j) {
    Windows w;
    w.scaling_lo = j.value("scaling_lo", w.scaling_lo);
    w.scaling_hi = j.value("scaling_hi", w.scaling_hi);
    w.ratio_max = j.value("ratio_max", w.ratio_max);
    w.orlicz_lo = j.value("orlicz_lo", w.orlicz_lo);
    w.orlicz_hi = j.value("orlicz_hi", w.orlicz_hi);
    w.permavg_lo = j.value("permavg_lo", w.permavg_lo);
    w.permavg_hi = j.value("permavg_hi", w.permavg_hi);
    w.remark_lo = j.value("remark_lo", w.remark_lo);
    w.remark_hi = j.value("remark_hi", w.remark_hi);
    w.steiner_factor = j.value("steiner_factor", w.steiner_factor);
    w.haar_fraction_min = j.value("haar_fraction_min", w.haar_fraction_min);
    w.haar_threshold = j.value("haar_threshold", w.haar_threshold);
    w.centered_sum_cap = j.value("centered_sum_cap", w.centered_sum_cap);
    w.khintchine_lo = j.value("khintchine_lo", w.khintchine_lo);
    w.khintchine_hi = j.value("khintchine_hi", w.khintchine_hi);
    w.diag_comparison_lower = j.value("diag_comparison_lower", w.diag_comparison_lower);
    return w;
}

} // namespace

nlohmann::json to_json(const RunConfig& c) {
    return nlohmann::json{{"p", c.p_list},
                          {"n", c.n_list},
                          {"theta", c.theta_mode},
                          {"theta_file", c.theta_file},
                          {"dirs", c.dirs_per_cell},
                          {"samples", c.samples},
                          {"seed", c.seed},
                          {"threads", c.threads},
                          {"out", c.out},
                          {"format", c.format},
                          {"windows", windows_to_json(c.windows)}};
}

RunConfig config_from_json(const nlohmann::json& j) {
    RunConfig c;
    c.p_list = j.value("p", c.p_list);
    c.n_list = j.value("n", c.n_list);
    c.theta_mode = j.value("theta", c.theta_mode);
    c.theta_file = j.value("theta_file", c.theta_file);
    c.dirs_per_cell = j.value("dirs", c.dirs_per_cell);
    c.samples = j.value("samples", c.samples);
    c.seed = j.value("seed", c.seed);
    c.threads = j.value("threads", c.threads);
    c.out = j.value("out", c.out);
    c.format = j.value("format", c.format);
    if (j.contains("windows")) c.windows = windows_from_json(j.at("windows"));
    return c;
}

std::uint64_t fanout_stream_id(const std::string& subcommand, double p, int n,
                               int theta_index) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : subcommand) h = (h ^ ch) * 0x100000001b3ULL;
    h = mix64(h, std::bit_cast<std::uint64_t>(p));
    h = mix64(h, static_cast<std::uint64_t>(n));
    h = mix64(h, static_cast<std::uint64_t>(theta_index));
    return h;
}

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace lpvar
