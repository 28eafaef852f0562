#include "ltsim/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ltsim/errors.hpp"

namespace ltsim {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& field, int line) {
    try {
        std::size_t used = 0;
        double v = std::stod(field, &used);
        if (used != field.size()) throw std::invalid_argument(field);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("csv line " + std::to_string(line) + ": bad number \"" + field +
                          "\"");
    }
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
}

} // namespace

CsvRow csv_row(const EstimatePoint& point) {
    CsvRow row;
    row.strategy = strategy_name(point.strategy);
    row.d = point.delay;
    row.power_db = point.power_db;
    row.mse = point.mse;
    row.mse_ci95 = point.mse_ci95;
    row.avg_power = point.avg_power;
    row.mu = point.mu;
    row.blocks = point.blocks;
    row.seed = point.seed;
    return row;
}

std::string to_csv(const std::vector<CsvRow>& rows) {
    std::ostringstream out;
    out << kCsvHeader << '\n';
    for (const CsvRow& r : rows) {
        out << r.strategy << ',' << r.d << ',' << fmt_double(r.power_db) << ','
            << fmt_double(r.mse) << ',' << fmt_double(r.mse_ci95) << ','
            << fmt_double(r.avg_power) << ',' << fmt_double(r.mu) << ',' << r.blocks << ','
            << r.seed << '\n';
    }
    return out.str();
}

std::vector<CsvRow> parse_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("csv is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kCsvHeader)
        throw ConfigError(std::string("csv header mismatch, expected: ") + kCsvHeader);

    std::vector<CsvRow> rows;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::vector<std::string> f = split_fields(line);
        if (f.size() != 9)
            throw ConfigError("csv line " + std::to_string(lineno) + ": expected 9 fields");
        CsvRow r;
        r.strategy = f[0];
        r.d = static_cast<int>(parse_double(f[1], lineno));
        r.power_db = parse_double(f[2], lineno);
        r.mse = parse_double(f[3], lineno);
        r.mse_ci95 = parse_double(f[4], lineno);
        r.avg_power = parse_double(f[5], lineno);
        r.mu = parse_double(f[6], lineno);
        r.blocks = static_cast<long long>(parse_double(f[7], lineno));
        try {
            std::size_t used = 0;
            r.seed = static_cast<std::uint64_t>(std::stoull(f[8], &used));
            if (used != f[8].size()) throw std::invalid_argument(f[8]);
        } catch (const std::exception&) {
            throw ConfigError("csv line " + std::to_string(lineno) + ": bad seed \"" + f[8] +
                              "\"");
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot write file: " + path);
    out << content;
    if (!out) throw ConfigError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

namespace {

constexpr int kWidth = 720;
constexpr int kHeight = 480;
constexpr int kMarginLeft = 70;
constexpr int kMarginRight = 160;
constexpr int kMarginTop = 40;
constexpr int kMarginBottom = 50;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt_coord(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string fmt_tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

struct Series {
    std::string label;
    std::vector<std::pair<double, double>> xy;
};

} // namespace

std::string render_svg(const std::vector<CsvRow>& rows, const PlotSpec& spec) {
    std::vector<Series> series;
    for (const CsvRow& r : rows) {
        double x = spec.x_is_delay ? r.d : r.power_db;
        double y = r.mse;
        if (!std::isfinite(x) || !std::isfinite(y)) continue;
        if (spec.log_y && y <= 0.0) continue;
        std::string label =
            spec.x_is_delay ? r.strategy : r.strategy + " d=" + std::to_string(r.d);
        auto it = std::find_if(series.begin(), series.end(),
                               [&](const Series& s) { return s.label == label; });
        if (it == series.end()) {
            series.push_back({label, {}});
            it = series.end() - 1;
        }
        it->xy.emplace_back(x, y);
    }
    if (series.empty()) throw ValidationError("no plottable rows");

    double x_min = series[0].xy[0].first, x_max = x_min;
    double y_min = series[0].xy[0].second, y_max = y_min;
    for (Series& s : series) {
        std::stable_sort(s.xy.begin(), s.xy.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        for (const auto& [x, y] : s.xy) {
            x_min = std::min(x_min, x);
            x_max = std::max(x_max, x);
            y_min = std::min(y_min, y);
            y_max = std::max(y_max, y);
        }
    }
    if (x_max == x_min) { x_min -= 1.0; x_max += 1.0; }
    double ty_min = spec.log_y ? std::log10(y_min) : y_min;
    double ty_max = spec.log_y ? std::log10(y_max) : y_max;
    if (ty_max == ty_min) { ty_min -= 1.0; ty_max += 1.0; }

    const double plot_w = kWidth - kMarginLeft - kMarginRight;
    const double plot_h = kHeight - kMarginTop - kMarginBottom;
    auto px = [&](double x) { return kMarginLeft + (x - x_min) / (x_max - x_min) * plot_w; };
    auto py = [&](double y) {
        double t = spec.log_y ? std::log10(y) : y;
        return kMarginTop + (ty_max - t) / (ty_max - ty_min) * plot_h;
    };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
    svg << "<rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
    svg << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"15\">" << spec.title << "</text>\n";

    svg << "<rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop << "\" width=\""
        << fmt_coord(plot_w) << "\" height=\"" << fmt_coord(plot_h)
        << "\" fill=\"none\" stroke=\"#333333\"/>\n";

    for (int i = 0; i <= 5; ++i) {
        double x = x_min + (x_max - x_min) * i / 5.0;
        double gx = px(x);
        svg << "<line x1=\"" << fmt_coord(gx) << "\" y1=\"" << kMarginTop + plot_h
            << "\" x2=\"" << fmt_coord(gx) << "\" y2=\"" << kMarginTop + plot_h + 5
            << "\" stroke=\"#333333\"/>\n";
        svg << "<text x=\"" << fmt_coord(gx) << "\" y=\"" << kMarginTop + plot_h + 20
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">"
            << fmt_tick(x) << "</text>\n";
    }
    if (spec.log_y) {
        for (int e = static_cast<int>(std::ceil(ty_min)); e <= std::floor(ty_max); ++e) {
            double gy = py(std::pow(10.0, e));
            svg << "<line x1=\"" << kMarginLeft << "\" y1=\"" << fmt_coord(gy) << "\" x2=\""
                << kMarginLeft + plot_w << "\" y2=\"" << fmt_coord(gy)
                << "\" stroke=\"#dddddd\"/>\n";
            svg << "<text x=\"" << kMarginLeft - 8 << "\" y=\"" << fmt_coord(gy + 4)
                << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">1e"
                << e << "</text>\n";
        }
    } else {
        for (int i = 0; i <= 5; ++i) {
            double y = ty_min + (ty_max - ty_min) * i / 5.0;
            double gy = py(y);
            svg << "<text x=\"" << kMarginLeft - 8 << "\" y=\"" << fmt_coord(gy + 4)
                << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">"
                << fmt_tick(y) << "</text>\n";
        }
    }

    svg << "<text x=\"" << kMarginLeft + plot_w / 2 << "\" y=\"" << kHeight - 12
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
        << spec.x_label << "</text>\n";
    svg << "<text x=\"18\" y=\"" << kMarginTop + plot_h / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
        << "transform=\"rotate(-90 18 " << kMarginTop + plot_h / 2 << ")\">" << spec.y_label
        << "</text>\n";

    for (std::size_t i = 0; i < series.size(); ++i) {
        const char* color = kPalette[i % (sizeof kPalette / sizeof kPalette[0])];
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" "
            << "points=\"";
        for (const auto& [x, y] : series[i].xy)
            svg << fmt_coord(px(x)) << ',' << fmt_coord(py(y)) << ' ';
        svg << "\"/>\n";
        for (const auto& [x, y] : series[i].xy)
            svg << "<circle cx=\"" << fmt_coord(px(x)) << "\" cy=\"" << fmt_coord(py(y))
                << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
        double ly = kMarginTop + 14.0 * (static_cast<double>(i) + 1.0);
        svg << "<line x1=\"" << kMarginLeft + plot_w + 10 << "\" y1=\"" << fmt_coord(ly - 4)
            << "\" x2=\"" << kMarginLeft + plot_w + 30 << "\" y2=\"" << fmt_coord(ly - 4)
            << "\" stroke=\"" << color << "\" stroke-width=\"1.5\"/>\n";
        svg << "<text x=\"" << kMarginLeft + plot_w + 35 << "\" y=\"" << fmt_coord(ly)
            << "\" font-family=\"sans-serif\" font-size=\"11\">" << series[i].label
            << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

} // namespace ltsim
