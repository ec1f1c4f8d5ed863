// Command-line front end: sweep subcommands writing CSV/JSON tables, the
// validation battery, and SVG diagnostics.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "lpvar/config.hpp"
#include "lpvar/runners.hpp"
#include "lpvar/stats.hpp"
#include "lpvar/svgplot.hpp"
#include "lpvar/validate.hpp"

namespace {

std::vector<double> parse_double_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) out.push_back(std::stod(tok));
    }
    return out;
}

std::vector<int> parse_int_list(const std::string& s) {
    std::vector<int> out;
    for (double v : parse_double_list(s)) out.push_back(static_cast<int>(v));
    return out;
}

struct CommonFlags {
    std::string config_path, p_list, n_list, theta, theta_file, out, format;
    std::int64_t samples = -1;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int threads = -1;
    int dirs = -1;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
    cmd->add_option("--config", f.config_path, "JSON config file");
    cmd->add_option("--p", f.p_list, "comma-separated p values");
    cmd->add_option("--n", f.n_list, "comma-separated dimensions");
    cmd->add_option("--theta", f.theta, "direction mode: haar|diag|axis|file");
    cmd->add_option("--theta-file", f.theta_file, "file with one direction per line");
    cmd->add_option("--dirs", f.dirs, "Haar directions per (p, n) cell");
    cmd->add_option("--samples", f.samples, "Monte Carlo samples per estimate");
    cmd->add_option("--seed", f.seed, "master seed")->each([&](const std::string&) {
        f.seed_set = true;
    });
    cmd->add_option("--threads", f.threads, "worker threads (0 = hardware)");
    cmd->add_option("--out", f.out, "output path (default stdout)");
    cmd->add_option("--format", f.format, "csv | json");
}

// Precedence: flags > config file > defaults.
lpvar::RunConfig resolve_config(const CommonFlags& f) {
    lpvar::RunConfig c;
    if (!f.config_path.empty()) {
        std::ifstream in(f.config_path);
        if (!in) throw std::runtime_error("cannot open config: " + f.config_path);
        nlohmann::json j;
        in >> j;
        c = lpvar::config_from_json(j);
    }
    if (!f.p_list.empty()) c.p_list = parse_double_list(f.p_list);
    if (!f.n_list.empty()) c.n_list = parse_int_list(f.n_list);
    if (!f.theta.empty()) c.theta_mode = f.theta;
    if (!f.theta_file.empty()) {
        c.theta_file = f.theta_file;
        if (f.theta.empty()) c.theta_mode = "file";
    }
    if (f.dirs >= 0) c.dirs_per_cell = f.dirs;
    if (f.samples >= 0) c.samples = f.samples;
    if (f.seed_set) c.seed = f.seed;
    if (f.threads >= 0) c.threads = f.threads;
    if (!f.out.empty()) c.out = f.out;
    if (!f.format.empty()) c.format = f.format;
    c.validate();
    return c;
}

void write_output(const std::string& path, const std::string& payload) {
    if (path.empty()) {
        std::cout << payload;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << payload;
    if (!out) throw std::runtime_error("write failed: " + path);
}

int run_table_command(const CommonFlags& flags,
                      lpvar::Table (*runner)(const lpvar::RunConfig&)) {
    const lpvar::RunConfig config = resolve_config(flags);
    lpvar::set_default_threads(config.threads);
    const lpvar::Table table = runner(config);
    write_output(config.out, lpvar::render_table(table, config.format));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Monte Carlo and quadrature toolkit for uniform vectors on "
                 "hyperplane projections of l_p balls"};
    app.require_subcommand(1);

    CommonFlags fm, fr, fo, fs, fp, fv;
    std::string suite = "quick";
    std::string plot_in, plot_kind = "ratio", plot_out;

    add_common(app.add_subcommand("moments", "sampler-vs-oracle moment table"), fm);
    add_common(app.add_subcommand("ratio", "variance report sweep"), fr);
    add_common(app.add_subcommand("orlicz", "E phi vs Luxemburg norm sweep"), fo);
    add_common(app.add_subcommand("steiner", "Steiner comparison sweep"), fs);
    add_common(app.add_subcommand("permavg", "permutation average sweep"), fp);

    CLI::App* val = app.add_subcommand("validate", "acceptance battery");
    add_common(val, fv);
    val->add_option("--suite", suite, "quick | full");

    CLI::App* plot = app.add_subcommand("plot", "SVG from a CSV produced by this tool");
    plot->add_option("csv", plot_in, "input CSV path")->required();
    plot->add_option("--kind", plot_kind, "ratio | epsi | terms");
    plot->add_option("--out", plot_out, "output SVG path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("moments")) return run_table_command(fm, lpvar::run_moments);
        if (app.got_subcommand("ratio")) return run_table_command(fr, lpvar::run_ratio);
        if (app.got_subcommand("orlicz")) return run_table_command(fo, lpvar::run_orlicz);
        if (app.got_subcommand("steiner")) return run_table_command(fs, lpvar::run_steiner);
        if (app.got_subcommand("permavg")) return run_table_command(fp, lpvar::run_permavg);

        if (app.got_subcommand("validate")) {
            if (suite != "quick" && suite != "full")
                throw std::runtime_error("suite must be quick or full");
            lpvar::RunConfig config;
            if (!fv.config_path.empty() || fv.seed_set || fv.threads >= 0) {
                CommonFlags only = fv;
                only.p_list.clear();
                only.n_list.clear();
                config = resolve_config(only);
            }
            lpvar::set_default_threads(config.threads);
            lpvar::ValidationOptions opt;
            opt.seed = fv.seed_set ? fv.seed : config.seed;
            opt.threads = config.threads;
            opt.windows = config.windows;
            const lpvar::Suite s = suite == "quick" ? lpvar::Suite::quick
                                                    : lpvar::Suite::full;
            const auto results = lpvar::run_criteria(s, opt);
            for (const auto& r : results)
                std::cerr << r.id << (r.passed ? " PASS " : " FAIL ") << r.title
                          << " (" << lpvar::format_g17(r.wall_seconds) << " s)\n";
            const nlohmann::json rep = lpvar::validation_report(
                s, results, opt, /*include_timing=*/s == lpvar::Suite::full);
            write_output(fv.out, rep.dump(2) + "\n");
            return lpvar::all_passed(results) ? 0 : 2;
        }

        if (app.got_subcommand("plot")) {
            std::ifstream in(plot_in, std::ios::binary);
            if (!in) throw std::runtime_error("cannot open CSV: " + plot_in);
            std::stringstream buf;
            buf << in.rdbuf();
            const std::string svg = lpvar::plot_svg_from_csv(buf.str(), plot_kind);
            write_output(plot_out, svg);
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
