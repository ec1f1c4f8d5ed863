// Acceptance battery: runs every validation criterion at its stated sample
// size, printing one pass/fail line per criterion, then checks the criterion
// runtime budgets and the byte-level determinism of the command-line
// `validate --suite quick` report.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "lpvar/validate.hpp"

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return {};
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

int main(int argc, char** argv) {
    using namespace lpvar;
    int failures = 0;
    auto report = [&](const std::string& id, bool ok, const std::string& detail) {
        std::printf("%-4s %s  %s\n", id.c_str(), ok ? "PASS" : "FAIL", detail.c_str());
        if (!ok) ++failures;
    };

    ValidationOptions opt;
    opt.seed = 20260808;
    const auto results = run_criteria(Suite::full, opt);
    for (const auto& r : results) {
        std::ostringstream detail;
        detail << r.title << " [" << r.values.dump() << "] ("
               << r.wall_seconds << " s)";
        report(r.id, r.passed, detail.str());
    }

    // Stated runtime limits: criterion 1 < 60 s, criterion 4 < 3 min,
    // criterion 5 < 10 min.
    for (const auto& r : results) {
        if (r.id == "C1") report("C1t", r.wall_seconds < 60.0, "runtime < 60 s");
        if (r.id == "C4") report("C4t", r.wall_seconds < 180.0, "runtime < 3 min");
        if (r.id == "C5") report("C5t", r.wall_seconds < 600.0, "runtime < 10 min");
    }

    // External determinism: the CLI quick report is byte-identical across
    // runs with the same seed.
    if (argc > 1) {
        const std::string cli = argv[1];
        const std::string c1 = cli + " validate --suite quick --seed 321 --out "
                                     "acc_quick_1.json 2> acc_quick_1.log";
        const std::string c2 = cli + " validate --suite quick --seed 321 --out "
                                     "acc_quick_2.json 2> acc_quick_2.log";
        const auto t0 = std::chrono::steady_clock::now();
        const int e1 = std::system(c1.c_str());
        const double quick_wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                .count();
        const int e2 = std::system(c2.c_str());
        const std::string r1 = slurp("acc_quick_1.json");
        const std::string r2 = slurp("acc_quick_2.json");
        report("C15a", e1 == 0 && e2 == 0, "validate --suite quick exits 0");
        report("C15b", !r1.empty() && r1 == r2,
               "quick reports byte-identical across runs");
        report("C15c", quick_wall <= 120.0, "quick suite within 2 minutes");
        std::remove("acc_quick_1.json");
        std::remove("acc_quick_2.json");
        std::remove("acc_quick_1.log");
        std::remove("acc_quick_2.log");

        // Sensitivity probe: with a corrupted window the suite must go red.
        {
            std::ofstream cfg("acc_corrupt.json");
            cfg << "{\"windows\": {\"scaling_lo\": 19.0, \"scaling_hi\": 19.5}}\n";
            cfg.close();
            const int ec = std::system((cli + " validate --suite quick --seed 321"
                                              " --config acc_corrupt.json --out"
                                              " acc_corrupt.out 2> acc_corrupt.log")
                                           .c_str());
            report("C15d", ec != 0, "corrupted window makes validate exit nonzero");
            std::remove("acc_corrupt.json");
            std::remove("acc_corrupt.out");
            std::remove("acc_corrupt.log");
        }
    } else {
        std::printf("note: CLI path not supplied; external determinism check "
                    "skipped\n");
    }

    std::printf("%s (%d failure%s)\n", failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL",
                failures, failures == 1 ? "" : "s");
    return failures == 0 ? 0 : 1;
}
