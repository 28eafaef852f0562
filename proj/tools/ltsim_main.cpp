#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ltsim/bounds.hpp"
#include "ltsim/config.hpp"
#include "ltsim/errors.hpp"
#include "ltsim/io.hpp"
#include "ltsim/no_csi.hpp"
#include "ltsim/sim.hpp"
#include "ltsim/waterfill.hpp"

namespace {

using namespace ltsim;

struct CommonOpts {
    std::string config_path;
    std::string out_dir = ".";
    std::string format = "both"; // csv | svg | both
    std::uint64_t seed = 1;
    int blocks = 20000;
    std::vector<double> power_db;
    std::vector<int> delays;
};

Setup pick_setup(const CommonOpts& opts, bool rayleigh_default) {
    if (!opts.config_path.empty()) return load_setup_file(opts.config_path);
    return rayleigh_default ? reference_rayleigh_setup() : reference_discrete_setup();
}

std::vector<double> default_power_grid() {
    std::vector<double> grid;
    for (int db = -5; db <= 30; db += 5) grid.push_back(db);
    return grid;
}

void emit(const CommonOpts& opts, const std::string& name, const std::vector<CsvRow>& rows,
          const PlotSpec& plot) {
    namespace fs = std::filesystem;
    fs::create_directories(opts.out_dir);
    fs::path csv_path = fs::path(opts.out_dir) / (name + ".csv");
    write_text_file(csv_path.string(), to_csv(rows));
    std::cout << "wrote " << csv_path.string() << " (" << rows.size() << " rows)\n";
    if (opts.format == "csv") return;
    // The chart is rendered from the written file, not the in-memory rows,
    // so the CSV stays the source of truth.
    std::vector<CsvRow> parsed = parse_csv(read_text_file(csv_path.string()));
    fs::path svg_path = fs::path(opts.out_dir) / (name + ".svg");
    write_text_file(svg_path.string(), render_svg(parsed, plot));
    std::cout << "wrote " << svg_path.string() << '\n';
    if (opts.format == "svg") fs::remove(csv_path);
}

CsvRow bound_row(const std::string& name, int d, double power_db, double value, double mu,
                 std::uint64_t seed) {
    CsvRow row;
    row.strategy = name;
    row.d = d;
    row.power_db = power_db;
    row.mse = value;
    row.avg_power = std::pow(10.0, power_db / 10.0);
    row.mu = mu;
    row.seed = seed;
    return row;
}

std::vector<CsvRow> sweep_rows(const SweepSpec& spec, const Setup& setup) {
    std::vector<CsvRow> rows;
    for (const EstimatePoint& p : run_sweep(spec, setup.source, setup.channel)) {
        if (!p.calibrated || std::isnan(p.mse)) {
            std::cerr << "warning: calibration failed at " << strategy_name(p.strategy)
                      << " d=" << p.delay << " power_db=" << p.power_db << "\n";
            continue;
        }
        rows.push_back(csv_row(p));
    }
    return rows;
}

int cmd_strict_delay(const CommonOpts& opts) {
    Setup setup = pick_setup(opts, false);
    std::vector<double> grid = opts.power_db.empty() ? default_power_grid() : opts.power_db;
    std::vector<CsvRow> rows;
    for (double db : grid) {
        AllocationTable table =
            strict_delay_optimal(setup.source, setup.channel, std::pow(10.0, db / 10.0));
        CsvRow row = bound_row("strict", 1, db, table.average_distortion, table.multiplier,
                               opts.seed);
        row.avg_power = table.average_power;
        rows.push_back(row);
    }
    emit(opts, "strict_delay", rows, {"optimal single-slot transmission", "average power (dB)"});
    return 0;
}

int cmd_figure(const CommonOpts& opts, const std::string& name, int pool_max) {
    if (name == "fig4" || name == "fig5") {
        bool rayleigh = name == "fig5";
        Setup setup = pick_setup(opts, rayleigh);
        SweepSpec spec;
        spec.strategies = {rayleigh ? StrategyKind::Ltsm : StrategyKind::Lthm};
        spec.delays = opts.delays.empty() ? std::vector<int>{1, 3, 9, 41} : opts.delays;
        spec.power_db = opts.power_db.empty() ? default_power_grid() : opts.power_db;
        spec.blocks = opts.blocks;
        spec.seed = opts.seed;
        std::vector<CsvRow> rows = sweep_rows(spec, setup);
        for (double db : spec.power_db) {
            TlbResult bound = tlb(setup.source, setup.channel, std::pow(10.0, db / 10.0));
            rows.push_back(bound_row("tlb", 0, db, bound.distortion, bound.alpha, opts.seed));
        }
        emit(opts, name, rows,
             {rayleigh ? "soft matching, rayleigh channel" : "hard matching, discrete channel",
              "average power (dB)"});
        return 0;
    }
    if (name == "fig6") {
        Setup setup = pick_setup(opts, true);
        SweepSpec spec;
        spec.strategies = {StrategyKind::Lthm, StrategyKind::Ltsm};
        spec.delays = opts.delays.empty() ? std::vector<int>{1, 3, 5, 9, 17, 33} : opts.delays;
        spec.power_db = opts.power_db.empty() ? std::vector<double>{10.0} : opts.power_db;
        spec.blocks = opts.blocks;
        spec.seed = opts.seed;
        std::vector<CsvRow> rows = sweep_rows(spec, setup);
        double db = spec.power_db.front();
        double power = std::pow(10.0, db / 10.0);
        for (int d : spec.delays) {
            LlbResult lower = llb(setup.source, setup.channel, d, power, pool_max);
            if (lower.capped)
                std::cerr << "warning: llb maximizer sits on the pool cap (" << pool_max
                          << ") at d=" << d << "; the bound may be loose\n";
            rows.push_back(bound_row("llb", d, db, lower.distortion, lower.multiplier,
                                     opts.seed));
        }
        TlbResult bound = tlb(setup.source, setup.channel, power);
        for (int d : spec.delays)
            rows.push_back(bound_row("tlb", d, db, bound.distortion, bound.alpha, opts.seed));
        PlotSpec plot{"matching strategies vs bounds at 10 dB", "delay"};
        plot.x_is_delay = true;
        emit(opts, name, rows, plot);
        return 0;
    }
    if (name == "fig7") {
        Setup setup = pick_setup(opts, false);
        std::vector<double> grid = opts.power_db.empty() ? default_power_grid() : opts.power_db;
        std::vector<CsvRow> rows;
        for (double db : grid) {
            double power = std::pow(10.0, db / 10.0);
            AllocationTable csi = strict_delay_optimal(setup.source, setup.channel, power);
            AllocationTable blind = no_csi_strict(setup.source, setup.channel, power);
            TlbResult tlb_csi = tlb(setup.source, setup.channel, power);
            TlbResult tlb_blind = tlb_no_csi(setup.source, setup.channel, power);
            rows.push_back(bound_row("lt_csi", 1, db, csi.average_distortion,
                                     csi.multiplier, opts.seed));
            rows.push_back(bound_row("lt_nocsi", 1, db, blind.average_distortion,
                                     blind.multiplier, opts.seed));
            rows.push_back(bound_row("tlb_csi", 0, db, tlb_csi.distortion, tlb_csi.alpha,
                                     opts.seed));
            rows.push_back(bound_row("tlb_nocsi", 0, db, tlb_blind.distortion, 0.0,
                                     opts.seed));
        }
        emit(opts, name, rows,
             {"single-slot transmission with and without encoder channel knowledge",
              "average power (dB)"});
        return 0;
    }
    throw ConfigError("unknown figure preset: " + name);
}

int cmd_bounds(const CommonOpts& opts, int pool_max, bool rayleigh) {
    Setup setup = pick_setup(opts, rayleigh);
    std::vector<double> grid = opts.power_db.empty() ? default_power_grid() : opts.power_db;
    std::vector<int> delays = opts.delays.empty() ? std::vector<int>{1, 3, 5, 9} : opts.delays;
    std::vector<CsvRow> rows;
    for (double db : grid) {
        double power = std::pow(10.0, db / 10.0);
        TlbResult bound = tlb(setup.source, setup.channel, power);
        rows.push_back(bound_row("tlb", 0, db, bound.distortion, bound.alpha, opts.seed));
        for (int d : delays) {
            LlbResult lower = llb(setup.source, setup.channel, d, power, pool_max);
            if (lower.capped)
                std::cerr << "warning: llb maximizer sits on the pool cap (" << pool_max
                          << ") at d=" << d << " power_db=" << db
                          << "; the bound may be loose\n";
            rows.push_back(bound_row("llb", d, db, lower.distortion, lower.multiplier,
                                     opts.seed));
        }
    }
    emit(opts, "bounds", rows, {"distortion lower bounds", "average power (dB)"});
    return 0;
}

int cmd_no_csi(const CommonOpts& opts) {
    Setup setup = pick_setup(opts, false);
    std::vector<double> grid = opts.power_db.empty() ? default_power_grid() : opts.power_db;
    std::vector<CsvRow> rows;
    for (double db : grid) {
        double power = std::pow(10.0, db / 10.0);
        AllocationTable blind = no_csi_strict(setup.source, setup.channel, power);
        TlbResult bound = tlb_no_csi(setup.source, setup.channel, power);
        rows.push_back(bound_row("lt_nocsi", 1, db, blind.average_distortion,
                                 blind.multiplier, opts.seed));
        rows.push_back(bound_row("tlb_nocsi", 0, db, bound.distortion, 0.0, opts.seed));
    }
    emit(opts, "no_csi", rows,
         {"single-slot transmission without encoder channel knowledge",
          "average power (dB)"});
    return 0;
}

int cmd_counterexample(const CounterexampleSpec& spec) {
    CounterexampleResult res = counterexample(spec);
    std::printf("diagonal     %.6f\n", res.diagonal);
    std::printf("non-diagonal %.6f\n", res.non_diagonal);
    if (res.non_diagonal < res.diagonal)
        std::printf("verdict: non-diagonal wins by %.6f\n", res.diagonal - res.non_diagonal);
    else if (res.non_diagonal == res.diagonal)
        std::printf("verdict: tie\n");
    else
        std::printf("verdict: diagonal wins by %.6f\n", res.non_diagonal - res.diagonal);
    return 0;
}

int cmd_run(const CommonOpts& opts, const std::string& strategy, const std::string& mode,
            bool rayleigh) {
    Setup setup = pick_setup(opts, rayleigh);
    SweepSpec spec;
    if (strategy == "lthm") spec.strategies = {StrategyKind::Lthm};
    else if (strategy == "ltsm") spec.strategies = {StrategyKind::Ltsm};
    else if (strategy == "both") spec.strategies = {StrategyKind::Lthm, StrategyKind::Ltsm};
    else throw ConfigError("strategy must be lthm, ltsm or both");
    if (mode == "analytic") spec.mode = EstimatorMode::Analytic;
    else if (mode == "noise") spec.mode = EstimatorMode::NoiseSampled;
    else throw ConfigError("mode must be analytic or noise");
    spec.delays = opts.delays.empty() ? std::vector<int>{1} : opts.delays;
    spec.power_db = opts.power_db.empty() ? std::vector<double>{10.0} : opts.power_db;
    spec.blocks = opts.blocks;
    spec.seed = opts.seed;
    std::vector<CsvRow> rows = sweep_rows(spec, setup);
    emit(opts, "run", rows, {"matching strategy sweep", "average power (dB)"});
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"delay-constrained linear transmission simulator"};
    app.require_subcommand(1);

    CommonOpts opts;
    app.add_option("--config", opts.config_path, "JSON model config (source + channel)");
    app.add_option("--seed", opts.seed, "root RNG seed");
    app.add_option("--out", opts.out_dir, "output directory");
    app.add_option("--blocks", opts.blocks, "Monte Carlo blocks per grid point");
    app.add_option("--power-db", opts.power_db, "power grid in dB")->delimiter(',');
    app.add_option("--delay", opts.delays, "delay grid")->delimiter(',');
    app.add_option("--format", opts.format, "csv | svg | both")
        ->check(CLI::IsMember({"csv", "svg", "both"}));

    auto* strict = app.add_subcommand(
        "strict-delay", "optimal single-slot curve; csv columns: " + std::string(kCsvHeader));

    std::string figure_name;
    int pool_max = 64;
    auto* figure = app.add_subcommand("figure", "canned experiment presets fig4..fig7");
    figure->add_option("name", figure_name, "fig4 | fig5 | fig6 | fig7")->required();
    figure->add_option("--pool-max", pool_max, "lower-bound pool-size cap");

    bool rayleigh = false;
    auto* bounds_cmd = app.add_subcommand("bounds", "theoretical and linear lower bounds");
    bounds_cmd->add_option("--pool-max", pool_max, "lower-bound pool-size cap");
    bounds_cmd->add_flag("--rayleigh", rayleigh, "use the rayleigh preset instead of discrete");

    auto* no_csi_cmd =
        app.add_subcommand("no-csi", "single-slot transmission without encoder CSI");

    CounterexampleSpec ce;
    auto* counter = app.add_subcommand("counterexample",
                                       "two-measurement split where repetition beats "
                                       "one-to-one mapping");
    counter->add_option("--p1", ce.p1, "request probability of the live parameter");
    counter->add_option("--sigma1-sq", ce.sigma1_sq, "variance of the live parameter");
    counter->add_option("--h1", ce.h1, "live channel magnitude");
    counter->add_option("--power", ce.power, "average power budget");
    counter->add_option("--p11", ce.p11, "power of the (1,1) request pair");
    counter->add_option("--p12", ce.p12, "power of the (1,2) request pair");
    counter->add_option("--p21", ce.p21, "power of the (2,1) request pair");

    std::string run_strategy = "both";
    std::string run_mode = "analytic";
    bool run_rayleigh = false;
    auto* run = app.add_subcommand("run", "strategy sweep over the delay and power grids");
    run->add_option("--strategy", run_strategy, "lthm | ltsm | both");
    run->add_option("--mode", run_mode, "analytic | noise");
    run->add_flag("--rayleigh", run_rayleigh, "use the rayleigh preset instead of discrete");

    // global options are accepted after the subcommand name too
    for (CLI::App* sub : app.get_subcommands([](CLI::App*) { return true; }))
        sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (strict->parsed()) return cmd_strict_delay(opts);
        if (figure->parsed()) return cmd_figure(opts, figure_name, pool_max);
        if (bounds_cmd->parsed()) return cmd_bounds(opts, pool_max, rayleigh);
        if (no_csi_cmd->parsed()) return cmd_no_csi(opts);
        if (counter->parsed()) return cmd_counterexample(ce);
        if (run->parsed()) return cmd_run(opts, run_strategy, run_mode, run_rayleigh);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    } catch (const ValidationError& e) {
        std::cerr << "validation failure: " << e.what() << '\n';
        return 4;
    }
    return 0;
}
