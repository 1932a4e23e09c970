/*
Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    https://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/
#include <rbvq/experiment.hpp>
#include <rbvq/plot.hpp>
#include <rbvq/tuning.hpp>

#include <CLI11.hpp>
#include <fmt/core.h>

#include <iostream>
#include <sstream>

using namespace rbvq;

namespace {

struct RunArgs {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> runs;
    std::optional<std::string> out;
    std::optional<std::size_t> threads;
};

int cmd_run(const RunArgs& args) {
    RunConfig cfg = load_run_config(args.config);
    if (args.seed) cfg.seed = *args.seed;
    if (args.runs) cfg.runs = *args.runs;
    if (args.out) cfg.output = *args.out;
    if (args.threads) cfg.threads = *args.threads;
    cfg.validate();
    const auto result = run_experiment(cfg);
    write_experiment(cfg, result);
    const auto& last = result.mean.back();
    fmt::print("{}: {} run(s) of {} iterations, final mse {:.6g}, dead units {:.3g}; wrote {}\n", cfg.name,
               cfg.runs, cfg.iterations, last.mse, last.dead_units, (cfg.output / "metrics.csv").string());
    return 0;
}

struct TuneArgs {
    std::string method;
    std::vector<std::string> axes;
    std::uint64_t seed = 0;
    std::size_t runs = 10;
    std::size_t iterations = 50000;
    std::size_t units = 100;
    std::size_t threads = 0;
    std::string out = "tune";
};

ParamAxis parse_axis(const std::string& spec) {
    const auto eq = spec.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw InvalidInput(fmt::format("--axis expects name=v1,v2,...; got '{}'", spec));
    }
    ParamAxis axis{spec.substr(0, eq), {}};
    std::stringstream ss(spec.substr(eq + 1));
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        try {
            std::size_t used = 0;
            axis.values.push_back(std::stod(cell, &used));
            if (used != cell.size()) throw std::invalid_argument(cell);
        } catch (const std::exception&) {
            throw InvalidInput(fmt::format("--axis {}: '{}' is not a number", axis.name, cell));
        }
    }
    return axis;
}

int cmd_tune(const TuneArgs& args) {
    const auto method = parse_method(args.method);
    if (!method) {
        throw InvalidInput(fmt::format("--method: unknown method '{}'", args.method));
    }
    ParamGrid grid = default_grid(*method);
    if (!args.axes.empty()) {
        grid.axes.clear();
        for (const auto& spec : args.axes) {
            grid.axes.push_back(parse_axis(spec));
        }
    }
    TuneOptions opts;
    opts.seed = args.seed;
    opts.runs = args.runs;
    opts.iterations = args.iterations;
    opts.units = args.units;
    opts.threads = args.threads;
    const auto result = grid_search(grid, opts);
    const std::filesystem::path out = std::filesystem::path(args.out) / fmt::format("tune_{}.csv", args.method);
    write_text_file(out, tune_result_csv(result));
    const auto& best = result.best_score();
    std::string combo;
    for (std::size_t a = 0; a < result.axis_names.size(); ++a) {
        combo += fmt::format("{}{}={}", a ? " " : "", result.axis_names[a], best.values[a]);
    }
    fmt::print("{}: best of {} combos: {} (nmse {:.6g}); wrote {}\n", args.method, result.table.size(), combo,
               best.nmse, out.string());
    return 0;
}

struct PlotArgs {
    std::vector<std::string> inputs;
    std::string out = "plot.svg";
    std::string metric = "mse";
    bool log_y = false;
    std::string title;
};

int cmd_plot(const PlotArgs& args) {
    std::vector<std::filesystem::path> paths(args.inputs.begin(), args.inputs.end());
    PlotOptions opts;
    opts.metric = args.metric;
    opts.log_y = args.log_y;
    opts.title = args.title;
    plot_metrics(paths, args.out, opts);
    fmt::print("wrote {}\n", args.out);
    return 0;
}

struct ValidateArgs {
    std::vector<std::string> names;
    std::vector<std::string> csvs;
    bool header = false;
    bool drop_last = false;
};

int report(const Dataset& ds, const std::string& ref_name) {
    const auto stats = compute_stats(ds);
    const auto ref = reference_characteristics(ref_name);
    if (!ref) {
        fmt::print("{}: N={} D={} STD={:.4g} MAX={:.4g} MIN={:.4g} (no reference)\n", ds.name(), stats.n, stats.dim,
                   stats.stddev, stats.max, stats.min);
        return 0;
    }
    const auto problems = validate_dataset(ds, *ref);
    fmt::print("{}: N={} D={} STD={:.4g} MAX={:.4g} MIN={:.4g} {}\n", ref_name, stats.n, stats.dim, stats.stddev,
               stats.max, stats.min, problems.empty() ? "ok" : "MISMATCH");
    for (const auto& p : problems) {
        fmt::print("  {}\n", p);
    }
    return problems.empty() ? 0 : 1;
}

int cmd_validate(const ValidateArgs& args) {
    int failures = 0;
    std::vector<std::string> names = args.names;
    if (names.empty() && args.csvs.empty()) {
        names = {"blobs", "circles", "moons"};
        for (const auto& s : surrogate_names()) names.push_back(s);
    }
    for (const auto& name : names) {
        failures += report(make_builtin(name, 0, 0), name);
    }
    for (const auto& path : args.csvs) {
        const Dataset ds = load_csv_dataset(path, {args.header, args.drop_last});
        failures += report(ds, ds.name());
    }
    return failures == 0 ? 0 : 1;
}

struct ExportArgs {
    std::string name;
    std::size_t n = 1000;
    std::uint64_t seed = 0;
    std::string out;
};

int cmd_export(const ExportArgs& args) {
    const Dataset ds = make_builtin(args.name, args.n, args.seed);
    std::string text;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const auto p = ds.point(i);
        for (std::size_t d = 0; d < p.size(); ++d) {
            text += fmt::format("{}{:.17g}", d ? "," : "", p[d]);
        }
        text += '\n';
    }
    write_text_file(args.out, text);
    fmt::print("wrote {} points to {}\n", ds.size(), args.out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Remove-birth vector quantization benchmark harness"};
    app.require_subcommand(1);

    RunArgs run_args;
    auto* run = app.add_subcommand("run", "Train a method on a configured stream and write metrics CSVs");
    run->add_option("--config", run_args.config, "JSON run configuration")->required();
    run->add_option("--seed", run_args.seed, "Master seed (overrides config)");
    run->add_option("--runs", run_args.runs, "Number of seeded runs (overrides config)");
    run->add_option("--out", run_args.out, "Output directory (overrides config)");
    run->add_option("--threads", run_args.threads, "Worker threads, 0 for all cores");

    TuneArgs tune_args;
    auto* tune = app.add_subcommand("tune", "Grid search over blobs, circles and moons");
    tune->add_option("--method", tune_args.method, "Method to tune")->required();
    tune->add_option("--axis", tune_args.axes, "Replace the default grid: name=v1,v2,... (repeatable)");
    tune->add_option("--seed", tune_args.seed, "Master seed");
    tune->add_option("--runs", tune_args.runs, "Runs per combo and dataset");
    tune->add_option("--iterations", tune_args.iterations, "Training iterations per run");
    tune->add_option("--units", tune_args.units, "Codebook size");
    tune->add_option("--threads", tune_args.threads, "Worker threads, 0 for all cores");
    tune->add_option("--out", tune_args.out, "Output directory");

    PlotArgs plot_args;
    auto* plot = app.add_subcommand("plot", "Render one metric from several metrics CSVs as SVG");
    plot->add_option("inputs", plot_args.inputs, "Metrics CSV files")->required();
    plot->add_option("--out", plot_args.out, "SVG output path");
    plot->add_option("--metric", plot_args.metric, "Column to plot");
    plot->add_flag("--log", plot_args.log_y, "Logarithmic y axis");
    plot->add_option("--title", plot_args.title, "Plot title");

    auto* datasets = app.add_subcommand("datasets", "Dataset utilities");
    datasets->require_subcommand(1);
    ValidateArgs validate_args;
    auto* validate = datasets->add_subcommand("validate", "Check datasets against the reference characteristics");
    validate->add_option("names", validate_args.names, "Builtin dataset names");
    validate->add_option("--csv", validate_args.csvs, "Dataset files to check (reference looked up by file stem)");
    validate->add_flag("--header", validate_args.header, "CSV files have a header line");
    validate->add_flag("--drop-last", validate_args.drop_last, "Drop the trailing label column");
    ExportArgs export_args;
    auto* exp = datasets->add_subcommand("export", "Write a builtin dataset as CSV");
    exp->add_option("name", export_args.name, "Builtin dataset name")->required();
    exp->add_option("--n", export_args.n, "Points for generated sets");
    exp->add_option("--seed", export_args.seed, "Generator seed");
    exp->add_option("--out", export_args.out, "Output CSV")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*run) return cmd_run(run_args);
        if (*tune) return cmd_tune(tune_args);
        if (*plot) return cmd_plot(plot_args);
        if (*validate) return cmd_validate(validate_args);
        if (*exp) return cmd_export(export_args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
