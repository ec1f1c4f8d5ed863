#include "lpvar/svgplot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <sstream>
#include <vector>

namespace lpvar {

namespace {

struct Csv {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name) return static_cast<int>(i);
        throw PlotError("missing column: " + name);
    }
};

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                cur += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

Csv parse_csv(const std::string& text) {
    Csv csv;
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw PlotError("empty CSV");
    csv.header = split_csv_line(line);
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r") continue;
        csv.rows.push_back(split_csv_line(line));
    }
    if (csv.rows.empty()) throw PlotError("CSV has no data rows");
    return csv;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

const char* kPalette[] = {"#1b6ca8", "#c0392b", "#27ae60", "#8e44ad",
                          "#d68910", "#16a085", "#7f8c8d", "#2c3e50"};

struct Frame {
    double x0 = 70, y0 = 40, w = 660, h = 480; // plot area in an 800x600 canvas
    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;

    double px(double x) const { return x0 + (x - xmin) / (xmax - xmin) * w; }
    double py(double y) const { return y0 + h - (y - ymin) / (ymax - ymin) * h; }
};

void open_svg(std::string& s) {
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"600\" "
         "viewBox=\"0 0 800 600\">\n";
    s += "<rect width=\"800\" height=\"600\" fill=\"white\"/>\n";
}

void draw_axes(std::string& s, const Frame& f, const std::string& xlabel,
               const std::string& ylabel) {
    s += "<rect x=\"" + fmt(f.x0) + "\" y=\"" + fmt(f.y0) + "\" width=\"" + fmt(f.w) +
         "\" height=\"" + fmt(f.h) + "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double xv = f.xmin + (f.xmax - f.xmin) * k / 4.0;
        const double yv = f.ymin + (f.ymax - f.ymin) * k / 4.0;
        s += "<text x=\"" + fmt(f.px(xv)) + "\" y=\"" + fmt(f.y0 + f.h + 18) +
             "\" font-size=\"11\" text-anchor=\"middle\">" + fmt(xv) + "</text>\n";
        s += "<text x=\"" + fmt(f.x0 - 8) + "\" y=\"" + fmt(f.py(yv) + 4) +
             "\" font-size=\"11\" text-anchor=\"end\">" + fmt(yv) + "</text>\n";
    }
    s += "<text x=\"" + fmt(f.x0 + f.w / 2) + "\" y=\"592\" font-size=\"13\" "
         "text-anchor=\"middle\">" + xlabel + "</text>\n";
    s += "<text x=\"16\" y=\"" + fmt(f.y0 + f.h / 2) +
         "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 " +
         fmt(f.y0 + f.h / 2) + ")\">" + ylabel + "</text>\n";
}

// One polyline per n over (x = p, y = value(row)).
std::string series_plot(const Csv& csv, int col_p, int col_n,
                        const std::function<double(const std::vector<std::string>&)>& value,
                        const std::string& xlabel, const std::string& ylabel) {
    std::map<std::string, std::vector<std::pair<double, double>>> series;
    Frame f;
    f.xmin = 1e300; f.xmax = -1e300; f.ymin = 1e300; f.ymax = -1e300;
    for (const auto& row : csv.rows) {
        const double x = std::strtod(row[col_p].c_str(), nullptr);
        const double y = value(row);
        if (!std::isfinite(y)) continue;
        series[row[col_n]].emplace_back(x, y);
        f.xmin = std::fmin(f.xmin, x); f.xmax = std::fmax(f.xmax, x);
        f.ymin = std::fmin(f.ymin, y); f.ymax = std::fmax(f.ymax, y);
    }
    if (series.empty()) throw PlotError("no finite data to plot");
    if (f.xmax == f.xmin) { f.xmin -= 1; f.xmax += 1; }
    if (f.ymax == f.ymin) { f.ymin -= 1; f.ymax += 1; }
    const double pad = 0.05 * (f.ymax - f.ymin);
    f.ymin -= pad; f.ymax += pad;

    std::string s;
    open_svg(s);
    draw_axes(s, f, xlabel, ylabel);
    int idx = 0;
    for (auto& [name, pts] : series) {
        std::sort(pts.begin(), pts.end());
        const char* color = kPalette[idx % 8];
        std::string poly = "<polyline fill=\"none\" stroke=\"";
        poly += color;
        poly += "\" stroke-width=\"1.5\" points=\"";
        for (const auto& [x, y] : pts)
            poly += fmt(f.px(x)) + "," + fmt(f.py(y)) + " ";
        poly += "\"/>\n";
        s += poly;
        for (const auto& [x, y] : pts)
            s += "<circle cx=\"" + fmt(f.px(x)) + "\" cy=\"" + fmt(f.py(y)) +
                 "\" r=\"2.5\" fill=\"" + color + "\"/>\n";
        s += "<text x=\"" + fmt(f.x0 + f.w - 90) + "\" y=\"" +
             fmt(f.y0 + 16 + 16 * idx) + "\" font-size=\"12\" fill=\"" + color +
             "\">n = " + name + "</text>\n";
        ++idx;
    }
    s += "</svg>\n";
    return s;
}

std::string stacked_terms_plot(const Csv& csv) {
    const int cp = csv.column("p");
    const int cn = csv.column("n");
    int ct[4];
    for (int k = 0; k < 4; ++k) ct[k] = csv.column("term" + std::to_string(k + 1));

    double ymax = 0.0;
    std::vector<std::array<double, 4>> vals;
    std::vector<std::string> labels;
    for (const auto& row : csv.rows) {
        std::array<double, 4> v{};
        double pos = 0.0;
        bool ok = true;
        for (int k = 0; k < 4; ++k) {
            v[k] = std::strtod(row[ct[k]].c_str(), nullptr);
            if (!std::isfinite(v[k])) ok = false;
            pos += std::fmax(v[k], 0.0);
        }
        if (!ok) continue;
        vals.push_back(v);
        labels.push_back("p=" + row[cp] + ",n=" + row[cn]);
        ymax = std::fmax(ymax, pos);
    }
    if (vals.empty()) throw PlotError("no finite data to plot");

    Frame f;
    f.xmin = 0; f.xmax = static_cast<double>(vals.size());
    f.ymin = 0; f.ymax = ymax * 1.05;
    std::string s;
    open_svg(s);
    draw_axes(s, f, "sweep cell", "term value");
    const double bw = f.w / vals.size();
    for (std::size_t i = 0; i < vals.size(); ++i) {
        double base = 0.0;
        for (int k = 0; k < 4; ++k) {
            const double v = std::fmax(vals[i][k], 0.0);
            if (v <= 0.0) continue;
            const double y1 = f.py(base + v);
            const double hpx = f.py(base) - y1;
            s += "<rect x=\"" + fmt(f.x0 + i * bw + 1) + "\" y=\"" + fmt(y1) +
                 "\" width=\"" + fmt(bw - 2) + "\" height=\"" + fmt(hpx) +
                 "\" fill=\"" + kPalette[k] + "\"/>\n";
            base += v;
        }
    }
    for (int k = 0; k < 4; ++k)
        s += "<text x=\"" + fmt(f.x0 + f.w - 90) + "\" y=\"" + fmt(f.y0 + 16 + 16 * k) +
             "\" font-size=\"12\" fill=\"" + std::string(kPalette[k]) + "\">term" +
             std::to_string(k + 1) + "</text>\n";
    s += "</svg>\n";
    return s;
}

} // namespace

std::string plot_svg_from_csv(const std::string& csv_text, const std::string& kind) {
    const Csv csv = parse_csv(csv_text);
    if (kind == "ratio") {
        const int cr = csv.column("ratio");
        return series_plot(csv, csv.column("p"), csv.column("n"),
                           [cr](const std::vector<std::string>& row) {
                               return std::strtod(row[cr].c_str(), nullptr);
                           },
                           "p", "Var|X|^2 / (lambda^2 E|X|^2)");
    }
    if (kind == "epsi") {
        const int cp = csv.column("p");
        const int ce = csv.column("e_phi");
        return series_plot(csv, cp, csv.column("n"),
                           [cp, ce](const std::vector<std::string>& row) {
                               const double p = std::strtod(row[cp].c_str(), nullptr);
                               const double e = std::strtod(row[ce].c_str(), nullptr);
                               return std::sqrt(p) * e;
                           },
                           "p", "sqrt(p) * E phi");
    }
    if (kind == "terms") return stacked_terms_plot(csv);
    throw PlotError("unknown plot kind: " + kind);
}

} // namespace lpvar
