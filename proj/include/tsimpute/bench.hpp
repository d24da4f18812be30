#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "tsimpute/imputation.hpp"
#include "tsimpute/missing.hpp"
#include "tsimpute/series.hpp"

namespace tsimpute {

/// Grid definition for a benchmark run. The defaults reproduce the
/// standard experiment: 4 rates x 25 seeds x 6 algorithms = 600 runs per
/// dataset.
struct ExperimentConfig {
    std::vector<double> rates = {0.1, 0.3, 0.5, 0.7};
    std::vector<std::uint64_t> seeds = default_seeds();
    std::vector<Algorithm> algorithms = {
        Algorithm::mean,          Algorithm::locf,
        Algorithm::linear,        Algorithm::seasonal_interp,
        Algorithm::kalman_struct, Algorithm::lagged_regression,
    };
    std::size_t lags = 10;  // for lagged_regression

    static std::vector<std::uint64_t> default_seeds();  // 1..25
    void validate() const;
};

/// One benchmark outcome. Failed runs carry NaN metrics.
struct RunRecord {
    std::string dataset;
    Algorithm algorithm = Algorithm::mean;
    double rate = 0.0;
    std::uint64_t seed = 0;
    double rmse = 0.0;
    double mape = 0.0;
    double runtime_seconds = 0.0;
    std::size_t n_missing = 0;
};

enum class SyntheticKind { none, trend, seasonal, trend_seasonal };

/// Recipe for a synthetic series: base level 100 plus an optional linear
/// trend (slope 0.5 per step), an optional seasonal sine of amplitude 10,
/// and Gaussian noise. Seasonal kinds require frequency >= 2.
struct SyntheticSpec {
    SyntheticKind kind = SyntheticKind::none;
    std::size_t n = 144;
    int frequency = 1;
    double noise_sigma = 0.0;
    std::uint64_t seed = 1;
};

std::string_view to_string(SyntheticKind kind);
SyntheticKind synthetic_kind_from_string(std::string_view name);

TimeSeries generate_synthetic(const SyntheticSpec& spec);

struct NamedSeries {
    std::string name;
    TimeSeries series;
};

/// The four stock archetypes: white noise (n=500), trend only (n=168),
/// seasonal only (n=192, f=12), trend plus seasonal (n=144, f=12), all
/// with noise sigma 1.
std::vector<NamedSeries> default_synthetic_datasets(std::uint64_t seed = 1);

/// Dispatch by label; `lags` only affects lagged_regression.
ImputationOutcome impute(const TimeSeries& series, Algorithm algorithm, std::size_t lags = 10);

/**
 * Runs the full grid: for every (dataset, rate, seed) the dataset is
 * amputated once, then every algorithm imputes the gapped copy. Records
 * carry RMSE/MAPE over the amputated indices and the wall-clock runtime
 * of the impute call alone. A failing run (or an empty index set at rate
 * 0) yields NaN metrics and a warning on stderr instead of aborting.
 * Records come back sorted by (dataset, algorithm, rate, seed) and are a
 * pure function of the inputs, runtimes aside.
 */
std::vector<RunRecord> run_benchmark(const ExperimentConfig& config,
                                     const std::vector<NamedSeries>& datasets);

}  // namespace tsimpute
