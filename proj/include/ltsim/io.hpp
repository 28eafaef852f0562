#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ltsim/sim.hpp"

namespace ltsim {

// One result row. Strategy estimates use their strategy name; deterministic
// curves (bounds, closed forms) reuse the schema with mse_ci95 = 0 and
// blocks = 0 so every output shares one format.
struct CsvRow {
    std::string strategy;
    int d = 0;
    double power_db = 0.0;
    double mse = 0.0;
    double mse_ci95 = 0.0;
    double avg_power = 0.0;
    double mu = 0.0;
    long long blocks = 0;
    std::uint64_t seed = 0;
};

inline constexpr const char* kCsvHeader =
    "strategy,d,power_db,mse,mse_ci95,avg_power,mu,blocks,seed";

CsvRow csv_row(const EstimatePoint& point);

// Doubles are written with 17 significant digits so parse_csv(to_csv(rows))
// reproduces the values bit for bit.
std::string to_csv(const std::vector<CsvRow>& rows);
std::vector<CsvRow> parse_csv(const std::string& text);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label = "mse";
    bool x_is_delay = false; // x axis: delay column instead of power_db
    bool log_y = true;
};

// Fixed-size line chart of the rows, one polyline per (strategy, d) series
// for power sweeps or per strategy for delay sweeps, in first-appearance
// order. Pure function of the parsed rows: rendering a written-then-reparsed
// CSV reproduces the SVG byte for byte.
std::string render_svg(const std::vector<CsvRow>& rows, const PlotSpec& spec);

} // namespace ltsim
