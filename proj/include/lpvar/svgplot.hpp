#pragma once

// Hand-emitted SVG diagnostics from the tool's own CSV output: ratio vs p
// per n, normalized E phi vs p per n, and the stacked four-term breakdown.

#include <stdexcept>
#include <string>

namespace lpvar {

struct PlotError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// kind: "ratio" (ratio sweep CSV), "epsi" (orlicz CSV, plots sqrt(p) e_phi),
// "terms" (ratio sweep CSV, stacked term1..term4 bars). Throws PlotError on
// an empty body or a schema mismatch naming the missing column.
std::string plot_svg_from_csv(const std::string& csv, const std::string& kind);

} // namespace lpvar
