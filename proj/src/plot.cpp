#include "sublab/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "sublab/errors.hpp"
#include "sublab/limit_laws.hpp"

namespace sublab::harness {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 440.0;
constexpr double kLeft = 62.0;
constexpr double kRight = 618.0;
constexpr double kTop = 24.0;
constexpr double kBottom = 392.0;

std::string g6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

struct CsvFile {
    std::map<std::string, std::string> meta;  // `# key=value` preamble lines
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

CsvFile read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open CSV file: " + path);
    CsvFile csv;
    std::string line;
    bool have_header = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            const auto eq = line.find('=');
            if (eq != std::string::npos) {
                std::size_t start = 1;
                while (start < line.size() && line[start] == ' ') ++start;
                csv.meta[line.substr(start, eq - start)] = line.substr(eq + 1);
            }
            continue;
        }
        if (!have_header) {
            csv.header = split_csv(line);
            have_header = true;
            continue;
        }
        if (line.rfind("error,", 0) == 0) continue;  // machine-readable error row
        csv.rows.push_back(split_csv(line));
    }
    if (!have_header) throw FormatError(path + ": no header row found");
    return csv;
}

double parse_field(const std::string& s, const char* what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw FormatError(std::string("cannot parse ") + what + " value \"" + s + "\"");
    }
}

std::size_t column_index(const CsvFile& csv, const std::string& name, const char* kind) {
    const auto it = std::find(csv.header.begin(), csv.header.end(), name);
    if (it == csv.header.end()) {
        throw FormatError(std::string(kind) + ": CSV schema mismatch, missing column \"" + name +
                          "\"");
    }
    return static_cast<std::size_t>(it - csv.header.begin());
}

/// Affine data->pixel map.
struct Axis {
    double v0, v1, p0, p1;
    double operator()(double v) const { return p0 + (v - v0) / (v1 - v0) * (p1 - p0); }
};

void open_svg(std::ostringstream& os, const std::string& title) {
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
       << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
    os << "<rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
    os << "<text x=\"" << (kLeft + kRight) / 2 << "\" y=\"16\" text-anchor=\"middle\" "
       << "font-family=\"sans-serif\" font-size=\"14\">" << title << "</text>\n";
}

void draw_frame(std::ostringstream& os) {
    os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kRight - kLeft
       << "\" height=\"" << kBottom - kTop
       << "\" fill=\"none\" stroke=\"black\" stroke-width=\"1\"/>\n";
}

void x_tick(std::ostringstream& os, double px, const std::string& label) {
    os << "<line x1=\"" << g6(px) << "\" y1=\"" << kBottom << "\" x2=\"" << g6(px) << "\" y2=\""
       << kBottom + 5 << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << g6(px) << "\" y=\"" << kBottom + 20
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << label
       << "</text>\n";
}

void y_tick(std::ostringstream& os, double py, const std::string& label) {
    os << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << g6(py) << "\" x2=\"" << kLeft << "\" y2=\""
       << g6(py) << "\" stroke=\"black\"/>\n";
    os << "<text x=\"" << kLeft - 8 << "\" y=\"" << g6(py + 4)
       << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" << label
       << "</text>\n";
}

void axis_titles(std::ostringstream& os, const std::string& x_title, const std::string& y_title) {
    os << "<text x=\"" << (kLeft + kRight) / 2 << "\" y=\"" << kBottom + 40
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">" << x_title
       << "</text>\n";
    os << "<text x=\"16\" y=\"" << (kTop + kBottom) / 2
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
       << "transform=\"rotate(-90 16 " << (kTop + kBottom) / 2 << ")\">" << y_title
       << "</text>\n";
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot open output file: " + path);
    out << content;
}

void plot_cdf_overlay(const CsvFile& csv, const std::string& out_path) {
    static const std::vector<std::string> kSampleHeader = {
        "replica", "level", "crossing_time", "undershoot", "overshoot", "crept"};
    if (csv.header != kSampleHeader) {
        throw FormatError("cdf-overlay: CSV schema mismatch, expected the raw sample dump "
                          "header replica,level,crossing_time,undershoot,overshoot,crept");
    }
    const auto alpha_it = csv.meta.find("alpha");
    if (alpha_it == csv.meta.end()) {
        throw FormatError("cdf-overlay: missing `# alpha=` preamble line");
    }
    const double alpha = parse_field(alpha_it->second, "alpha");
    if (csv.rows.empty()) throw FormatError("cdf-overlay: empty data section");

    std::vector<double> ratios;
    ratios.reserve(csv.rows.size());
    for (const auto& row : csv.rows) {
        const double level = parse_field(row[1], "level");
        const double undershoot = parse_field(row[3], "undershoot");
        ratios.push_back(undershoot / level);
    }
    std::sort(ratios.begin(), ratios.end());

    const Axis x{0.0, 1.0, kLeft, kRight};
    const Axis y{0.0, 1.0, kBottom, kTop};

    std::ostringstream os;
    open_svg(os, "undershoot ratio: empirical CDF vs Beta(" + g6(alpha) + "," + g6(1 - alpha) +
                     ")");
    draw_frame(os);
    for (double t : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        x_tick(os, x(t), g6(t));
        y_tick(os, y(t), g6(t));
    }
    axis_titles(os, "undershoot / level", "probability");

    // Empirical CDF as a staircase, subsampled to at most ~2000 steps.
    const std::size_t n = ratios.size();
    const std::size_t stride = n > 2000 ? (n + 1999) / 2000 : 1;
    std::ostringstream ecdf;
    ecdf << "M" << g6(x(std::min(ratios.front(), 1.0))) << ' ' << g6(y(0.0));
    for (std::size_t i = 0; i < n; i += stride) {
        const std::size_t j = std::min(i + stride, n);  // height after this block
        const double px = x(std::min(ratios[i], 1.0));
        const double f = static_cast<double>(j) / static_cast<double>(n);
        ecdf << " H" << g6(px) << " V" << g6(y(f));
    }
    ecdf << " H" << g6(x(1.0));
    os << "<path id=\"ecdf\" d=\"" << ecdf.str()
       << "\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\"/>\n";

    std::ostringstream theory;
    constexpr int kNodes = 256;
    for (int i = 0; i <= kNodes; ++i) {
        const double t = static_cast<double>(i) / kNodes;
        theory << (i == 0 ? "M" : " L") << g6(x(t)) << ' ' << g6(y(limits::beta_cdf(alpha, t)));
    }
    os << "<path id=\"theory\" d=\"" << theory.str()
       << "\" fill=\"none\" stroke=\"#d62728\" stroke-width=\"1.5\" "
          "stroke-dasharray=\"6 3\"/>\n";

    os << "</svg>\n";
    write_file(out_path, os.str());
}

void plot_ratio_vs_s(const CsvFile& csv, const std::string& out_path) {
    const std::size_t s_col = column_index(csv, "s", "ratio-vs-s");
    const std::size_t ratio_col = column_index(csv, "ratio", "ratio-vs-s");

    std::vector<std::pair<double, double>> pts;  // (log10 s, ratio)
    for (const auto& row : csv.rows) {
        if (row.size() <= std::max(s_col, ratio_col)) continue;
        if (row[ratio_col].empty()) continue;  // rows of this schema without a ratio
        const double s = parse_field(row[s_col], "s");
        if (!(s > 0.0)) throw FormatError("ratio-vs-s: s values must be positive");
        pts.emplace_back(std::log10(s), parse_field(row[ratio_col], "ratio"));
    }
    if (pts.empty()) throw FormatError("ratio-vs-s: empty data section");
    std::sort(pts.begin(), pts.end());

    double lx0 = pts.front().first, lx1 = pts.back().first;
    if (lx1 - lx0 < 1.0) {
        const double mid = (lx0 + lx1) / 2;
        lx0 = mid - 0.5;
        lx1 = mid + 0.5;
    }
    double r0 = 1.0, r1 = 1.0;  // always include the reference level
    for (const auto& [ls, r] : pts) {
        r0 = std::min(r0, r);
        r1 = std::max(r1, r);
    }
    const double pad = 0.1 * (r1 - r0 > 0 ? r1 - r0 : 0.2);
    r0 -= pad;
    r1 += pad;

    const Axis x{lx0, lx1, kLeft, kRight};
    const Axis y{r0, r1, kBottom, kTop};

    std::ostringstream os;
    open_svg(os, "ratio to target vs level");
    draw_frame(os);
    for (int k = static_cast<int>(std::ceil(lx0)); k <= static_cast<int>(std::floor(lx1)); ++k) {
        x_tick(os, x(k), g6(std::pow(10.0, k)));
    }
    for (int i = 0; i <= 4; ++i) {
        const double r = r0 + (r1 - r0) * i / 4.0;
        y_tick(os, y(r), g6(r));
    }
    axis_titles(os, "level s (log scale)", "ratio to target");

    os << "<line id=\"reference\" x1=\"" << kLeft << "\" y1=\"" << g6(y(1.0)) << "\" x2=\""
       << kRight << "\" y2=\"" << g6(y(1.0))
       << "\" stroke=\"#888888\" stroke-dasharray=\"4 4\"/>\n";

    std::ostringstream path;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        path << (i == 0 ? "M" : " L") << g6(x(pts[i].first)) << ' ' << g6(y(pts[i].second));
    }
    os << "<path id=\"ratio-points\" d=\"" << path.str()
       << "\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\"/>\n";
    for (const auto& [ls, r] : pts) {
        os << "<circle cx=\"" << g6(x(ls)) << "\" cy=\"" << g6(y(r))
           << "\" r=\"3\" fill=\"#1f77b4\"/>\n";
    }

    os << "</svg>\n";
    write_file(out_path, os.str());
}

}  // namespace

void emit_plot(const std::string& csv_path, const std::string& kind,
               const std::string& out_path) {
    const CsvFile csv = read_csv(csv_path);
    if (kind == "cdf-overlay") {
        plot_cdf_overlay(csv, out_path);
    } else if (kind == "ratio-vs-s") {
        plot_ratio_vs_s(csv, out_path);
    } else {
        throw FormatError("unknown plot kind \"" + kind +
                          "\" (expected cdf-overlay or ratio-vs-s)");
    }
}

}  // namespace sublab::harness
