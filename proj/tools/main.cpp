#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <string>
#include <vector>

#include "tsimpute/bench.hpp"
#include "tsimpute/decomposition.hpp"
#include "tsimpute/io.hpp"
#include "tsimpute/missing.hpp"
#include "tsimpute/series.hpp"
#include "tsimpute/statespace.hpp"

namespace {

using namespace tsimpute;

std::string format_cell(double value) {
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

struct SimulateOptions {
    std::string input;
    std::string output;
    int frequency = 1;
    double rate = 0.1;
    std::uint64_t seed = 1;
};

int run_simulate(const SimulateOptions& options) {
    const TimeSeries series = load_csv(options.input, options.frequency);
    const AmputationResult result = create_missing(series, options.rate, options.seed);
    write_series_csv(result.data, options.output);
    std::cout << "removed " << result.na_indices.size() << " of " << series.size()
              << " values -> " << options.output << "\n";
    return 0;
}

struct ImputeOptions {
    std::string input;
    std::string output;
    std::string algorithm = "linear";
    int frequency = 1;
    std::size_t lags = 10;
};

int run_impute(const ImputeOptions& options) {
    const TimeSeries series = load_csv(options.input, options.frequency);
    const Algorithm algorithm = algorithm_from_string(options.algorithm);
    const ImputationOutcome outcome = impute(series, algorithm, options.lags);
    write_series_csv(outcome.series, options.output);
    std::cout << "filled " << outcome.filled_indices.size() << " values with "
              << to_string(algorithm) << " -> " << options.output << "\n";
    return 0;
}

struct DecomposeOptions {
    std::string input;
    std::string output;
    std::string method = "stl";
    int frequency = 12;
};

int run_decompose(const DecomposeOptions& options) {
    const TimeSeries series = load_csv(options.input, options.frequency);
    Decomposition decomposition;
    if (options.method == "classical") {
        decomposition = classical_decompose(series);
    } else if (options.method == "stl") {
        decomposition = stl_periodic(series);
    } else {
        raise(Errc::parse_error, "method must be 'classical' or 'stl'");
    }
    std::ofstream file(options.output);
    if (!file) raise(Errc::io_error, "cannot write '" + options.output + "'");
    file << "time,observed,trend,seasonal,remainder\n";
    for (std::size_t t = 0; t < series.size(); ++t) {
        file << format_cell(series.time_at(t)) << ',' << format_cell(*series[t]) << ',';
        if (decomposition.trend[t]) {
            file << format_cell(*decomposition.trend[t]);
        } else {
            file << "NA";
        }
        file << ',' << format_cell(decomposition.seasonal[t]) << ',';
        if (decomposition.remainder[t]) {
            file << format_cell(*decomposition.remainder[t]);
        } else {
            file << "NA";
        }
        file << '\n';
    }
    std::cout << "decomposition (" << options.method << ") -> " << options.output << "\n";
    return 0;
}

struct AcfOptions {
    std::string input;
    std::string output;
    int frequency = 1;
    std::size_t max_lag = 20;
};

int run_acf(const AcfOptions& options) {
    const TimeSeries series = load_csv(options.input, options.frequency);
    const AcfResult result = acf(series, options.max_lag);
    std::ofstream file(options.output);
    if (!file) raise(Errc::io_error, "cannot write '" + options.output + "'");
    file << "lag,coefficient,bound\n";
    for (std::size_t lag = 0; lag < result.coefficients.size(); ++lag) {
        file << lag << ',' << format_cell(result.coefficients[lag]) << ','
             << format_cell(result.significance_bound) << '\n';
    }
    std::cout << "acf up to lag " << options.max_lag << " -> " << options.output << "\n";
    return 0;
}

struct BenchOptions {
    std::vector<std::string> datasets;
    bool synthetic = false;
    std::string config;
    std::string out_dir = ".";
    int frequency = 1;
    std::uint64_t synthetic_seed = 1;
};

ExperimentConfig load_config(const std::string& path) {
    ExperimentConfig config;
    if (path.empty()) return config;
    std::ifstream file(path);
    if (!file) raise(Errc::file_not_found, "cannot open '" + path + "'");
    nlohmann::json json;
    try {
        file >> json;
    } catch (const nlohmann::json::exception& error) {
        raise(Errc::parse_error, "'" + path + "': " + error.what());
    }
    if (json.contains("rates")) config.rates = json["rates"].get<std::vector<double>>();
    if (json.contains("seeds")) {
        config.seeds = json["seeds"].get<std::vector<std::uint64_t>>();
    }
    if (json.contains("algorithms")) {
        config.algorithms.clear();
        for (const auto& name : json["algorithms"]) {
            config.algorithms.push_back(algorithm_from_string(name.get<std::string>()));
        }
    }
    if (json.contains("lags")) config.lags = json["lags"].get<std::size_t>();
    return config;
}

int run_bench(const BenchOptions& options) {
    const ExperimentConfig config = load_config(options.config);
    std::vector<NamedSeries> datasets;
    if (options.synthetic) {
        datasets = default_synthetic_datasets(options.synthetic_seed);
    }
    for (const std::string& path : options.datasets) {
        datasets.push_back(NamedSeries{std::filesystem::path(path).stem().string(),
                                       load_csv(path, options.frequency)});
    }
    if (datasets.empty()) {
        raise(Errc::parse_error, "pass --synthetic and/or --datasets");
    }

    std::filesystem::create_directories(options.out_dir);
    const std::filesystem::path out_dir(options.out_dir);
    const std::vector<RunRecord> records = run_benchmark(config, datasets);
    emit_results_csv(records, out_dir / "results.csv");
    for (PlotMetric metric : {PlotMetric::rmse, PlotMetric::mape, PlotMetric::runtime}) {
        emit_strip_plot(records, metric,
                        out_dir / (std::string(to_string(metric)) + ".svg"));
    }
    std::cout << records.size() << " runs -> " << (out_dir / "results.csv").string()
              << " (+ rmse/mape/runtime SVG strip plots)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"tsimpute: univariate time-series imputation toolkit and benchmark"};
    app.require_subcommand(1);

    SimulateOptions simulate;
    CLI::App* simulate_cmd =
        app.add_subcommand("simulate", "amputate a complete series (MCAR, exponential gaps)");
    simulate_cmd->add_option("--input", simulate.input, "input CSV (time,value)")->required();
    simulate_cmd->add_option("--frequency", simulate.frequency, "observations per season");
    simulate_cmd->add_option("--rate", simulate.rate, "exponential gap rate (lambda)")
        ->required();
    simulate_cmd->add_option("--seed", simulate.seed, "random seed");
    simulate_cmd->add_option("--output", simulate.output, "output CSV")->required();

    ImputeOptions impute_options;
    CLI::App* impute_cmd = app.add_subcommand("impute", "fill the gaps in a series");
    impute_cmd->add_option("--input", impute_options.input, "input CSV (may contain NA)")
        ->required();
    impute_cmd->add_option("--frequency", impute_options.frequency, "observations per season");
    std::string algorithm_help = "one of:";
    for (tsimpute::Algorithm algorithm : tsimpute::all_algorithms()) {
        algorithm_help += " " + std::string(tsimpute::to_string(algorithm));
    }
    impute_cmd->add_option("--algorithm", impute_options.algorithm, algorithm_help);
    impute_cmd->add_option("--lags", impute_options.lags, "lags for lagged_regression");
    impute_cmd->add_option("--output", impute_options.output, "output CSV")->required();

    DecomposeOptions decompose;
    CLI::App* decompose_cmd =
        app.add_subcommand("decompose", "trend/seasonal/remainder decomposition");
    decompose_cmd->add_option("--input", decompose.input, "input CSV (complete)")->required();
    decompose_cmd->add_option("--frequency", decompose.frequency, "observations per season")
        ->required();
    decompose_cmd->add_option("--method", decompose.method, "classical or stl");
    decompose_cmd->add_option("--output", decompose.output, "output CSV")->required();

    AcfOptions acf_options;
    CLI::App* acf_cmd = app.add_subcommand("acf", "sample autocorrelation");
    acf_cmd->add_option("--input", acf_options.input, "input CSV (complete)")->required();
    acf_cmd->add_option("--frequency", acf_options.frequency, "observations per season");
    acf_cmd->add_option("--max-lag", acf_options.max_lag, "largest lag")->required();
    acf_cmd->add_option("--output", acf_options.output, "output CSV")->required();

    BenchOptions bench;
    CLI::App* bench_cmd = app.add_subcommand("bench", "run the benchmark grid");
    bench_cmd->add_option("--datasets", bench.datasets, "complete CSV datasets")
        ->delimiter(',');
    bench_cmd->add_flag("--synthetic", bench.synthetic,
                        "include the four synthetic archetype datasets");
    bench_cmd->add_option("--frequency", bench.frequency,
                          "observations per season for --datasets files");
    bench_cmd->add_option("--synthetic-seed", bench.synthetic_seed,
                          "noise seed for the synthetic datasets");
    bench_cmd->add_option("--config", bench.config,
                          "JSON config: rates, seeds, algorithms, lags");
    bench_cmd->add_option("--out-dir", bench.out_dir, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& help) {
        app.exit(help);
        return 0;
    } catch (const CLI::ParseError& error) {
        app.exit(error);
        return 1;
    }

    try {
        if (simulate_cmd->parsed()) return run_simulate(simulate);
        if (impute_cmd->parsed()) return run_impute(impute_options);
        if (decompose_cmd->parsed()) return run_decompose(decompose);
        if (acf_cmd->parsed()) return run_acf(acf_options);
        if (bench_cmd->parsed()) return run_bench(bench);
    } catch (const tsimpute::Error& error) {
        std::cerr << "error: " << error.what() << "\n";
        return tsimpute::exit_code(error.code());
    } catch (const std::exception& error) {
        std::cerr << "internal error: " << error.what() << "\n";
        return 3;
    }
    return 1;
}
