#include "tsimpute/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iostream>
#include <limits>
#include <numbers>
#include <tuple>

#include "tsimpute/metrics.hpp"
#include "tsimpute/random.hpp"
#include "tsimpute/statespace.hpp"

namespace tsimpute {

std::vector<std::uint64_t> ExperimentConfig::default_seeds() {
    std::vector<std::uint64_t> seeds(25);
    for (std::size_t i = 0; i < seeds.size(); ++i) seeds[i] = i + 1;
    return seeds;
}

void ExperimentConfig::validate() const {
    if (rates.empty() || seeds.empty() || algorithms.empty()) {
        raise(Errc::parse_error, "rates, seeds and algorithms must all be non-empty");
    }
    for (double rate : rates) {
        if (rate < 0.0) raise(Errc::negative_rate, "rates must be >= 0");
    }
}

std::string_view to_string(SyntheticKind kind) {
    switch (kind) {
        case SyntheticKind::none: return "none";
        case SyntheticKind::trend: return "trend";
        case SyntheticKind::seasonal: return "seasonal";
        case SyntheticKind::trend_seasonal: return "trend_seasonal";
    }
    return "unknown";
}

SyntheticKind synthetic_kind_from_string(std::string_view name) {
    for (SyntheticKind kind : {SyntheticKind::none, SyntheticKind::trend,
                               SyntheticKind::seasonal, SyntheticKind::trend_seasonal}) {
        if (to_string(kind) == name) return kind;
    }
    raise(Errc::parse_error, "unknown synthetic kind '" + std::string(name) + "'");
}

TimeSeries generate_synthetic(const SyntheticSpec& spec) {
    const bool has_trend =
        spec.kind == SyntheticKind::trend || spec.kind == SyntheticKind::trend_seasonal;
    const bool has_seasonal =
        spec.kind == SyntheticKind::seasonal || spec.kind == SyntheticKind::trend_seasonal;
    if (has_seasonal && spec.frequency < 2) {
        raise(Errc::invalid_frequency, "seasonal synthetics need frequency >= 2");
    }
    if (spec.n == 0) {
        raise(Errc::empty_series, "synthetic length must be >= 1");
    }
    Rng rng(spec.seed);
    std::vector<double> values(spec.n);
    for (std::size_t i = 0; i < spec.n; ++i) {
        const double t = static_cast<double>(i + 1);
        double value = 100.0;
        if (has_trend) value += 0.5 * t;
        if (has_seasonal) {
            value += 10.0 * std::sin(2.0 * std::numbers::pi * t / spec.frequency);
        }
        if (spec.noise_sigma > 0.0) value += rng.normal(0.0, spec.noise_sigma);
        values[i] = value;
    }
    return make_series(values, spec.frequency);
}

std::vector<NamedSeries> default_synthetic_datasets(std::uint64_t seed) {
    return {
        {"noise", generate_synthetic({SyntheticKind::none, 500, 1, 1.0, seed})},
        {"trend", generate_synthetic({SyntheticKind::trend, 168, 1, 1.0, seed})},
        {"seasonal", generate_synthetic({SyntheticKind::seasonal, 192, 12, 1.0, seed})},
        {"trend_seasonal",
         generate_synthetic({SyntheticKind::trend_seasonal, 144, 12, 1.0, seed})},
    };
}

ImputationOutcome impute(const TimeSeries& series, Algorithm algorithm, std::size_t lags) {
    switch (algorithm) {
        case Algorithm::mean: return impute_mean(series, MeanMode::overall);
        case Algorithm::seasonal_mean: return impute_mean(series, MeanMode::seasonal);
        case Algorithm::locf: return impute_locf(series);
        case Algorithm::nocb: return impute_nocb(series);
        case Algorithm::linear: return impute_linear(series);
        case Algorithm::seasonal_interp: return impute_seasonal_interp(series);
        case Algorithm::kalman_struct: return impute_kalman_struct(series);
        case Algorithm::kalman_arima: return impute_kalman_arima(series);
        case Algorithm::lagged_regression:
            return impute_lagged_regression(series, LaggedRegressionOptions{lags, 50, 1e-6});
    }
    raise(Errc::parse_error, "unhandled algorithm");
}

std::vector<RunRecord> run_benchmark(const ExperimentConfig& config,
                                     const std::vector<NamedSeries>& datasets) {
    config.validate();
    for (const NamedSeries& dataset : datasets) {
        if (!dataset.series.is_complete()) {
            raise(Errc::incomplete_dataset,
                  "dataset '" + dataset.name + "' has missing values");
        }
    }

    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<RunRecord> records;
    records.reserve(datasets.size() * config.rates.size() * config.seeds.size() *
                    config.algorithms.size());

    for (const NamedSeries& dataset : datasets) {
        for (double rate : config.rates) {
            for (std::uint64_t seed : config.seeds) {
                const AmputationResult amputation =
                    create_missing(dataset.series, rate, seed);
                std::vector<std::size_t> eval_indices;
                eval_indices.reserve(amputation.na_indices.size());
                for (std::size_t one_based : amputation.na_indices) {
                    eval_indices.push_back(one_based - 1);
                }
                for (Algorithm algorithm : config.algorithms) {
                    RunRecord record;
                    record.dataset = dataset.name;
                    record.algorithm = algorithm;
                    record.rate = rate;
                    record.seed = seed;
                    record.n_missing = amputation.na_indices.size();
                    record.rmse = nan;
                    record.mape = nan;
                    try {
                        const auto start = std::chrono::steady_clock::now();
                        const ImputationOutcome outcome =
                            impute(amputation.data, algorithm, config.lags);
                        const auto stop = std::chrono::steady_clock::now();
                        record.runtime_seconds =
                            std::chrono::duration<double>(stop - start).count();
                        const ErrorReport report =
                            evaluate(outcome.series, dataset.series, eval_indices);
                        record.rmse = report.rmse;
                        record.mape = report.mape;
                    } catch (const std::exception& error) {
                        std::clog << "warning: " << dataset.name << "/"
                                  << to_string(algorithm) << " rate=" << rate
                                  << " seed=" << seed << " failed: " << error.what()
                                  << " (recorded as NaN)\n";
                    }
                    records.push_back(std::move(record));
                }
            }
        }
    }

    std::sort(records.begin(), records.end(), [](const RunRecord& a, const RunRecord& b) {
        return std::tie(a.dataset, a.algorithm, a.rate, a.seed) <
               std::tie(b.dataset, b.algorithm, b.rate, b.seed);
    });
    return records;
}

}  // namespace tsimpute
