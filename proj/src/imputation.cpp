#include "tsimpute/imputation.hpp"

#include <algorithm>
#include <cmath>

#include "tsimpute/decomposition.hpp"
#include "tsimpute/linalg.hpp"

namespace tsimpute {

std::string_view to_string(Algorithm algorithm) {
    switch (algorithm) {
        case Algorithm::mean: return "mean";
        case Algorithm::seasonal_mean: return "seasonal_mean";
        case Algorithm::locf: return "locf";
        case Algorithm::nocb: return "nocb";
        case Algorithm::linear: return "linear";
        case Algorithm::seasonal_interp: return "seasonal_interp";
        case Algorithm::kalman_struct: return "kalman_struct";
        case Algorithm::kalman_arima: return "kalman_arima";
        case Algorithm::lagged_regression: return "lagged_regression";
    }
    return "unknown";
}

const std::vector<Algorithm>& all_algorithms() {
    static const std::vector<Algorithm> algorithms = {
        Algorithm::mean,          Algorithm::seasonal_mean, Algorithm::locf,
        Algorithm::nocb,          Algorithm::linear,        Algorithm::seasonal_interp,
        Algorithm::kalman_struct, Algorithm::kalman_arima,  Algorithm::lagged_regression,
    };
    return algorithms;
}

Algorithm algorithm_from_string(std::string_view name) {
    for (Algorithm algorithm : all_algorithms()) {
        if (to_string(algorithm) == name) return algorithm;
    }
    raise(Errc::parse_error, "unknown algorithm '" + std::string(name) + "'");
}

namespace {

struct Scan {
    std::vector<std::size_t> missing;  // 0-based, increasing
    std::size_t observed = 0;
    double sum = 0.0;

    double mean() const { return sum / static_cast<double>(observed); }
};

Scan scan_series(const TimeSeries& series) {
    Scan scan;
    const std::vector<Obs>& values = series.values();
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (values[i]) {
            scan.sum += *values[i];
            ++scan.observed;
        } else {
            scan.missing.push_back(i);
        }
    }
    return scan;
}

Scan scan_or_throw(const TimeSeries& series) {
    Scan scan = scan_series(series);
    if (scan.observed == 0) {
        raise(Errc::all_missing, "cannot impute a series with no observed values");
    }
    return scan;
}

ImputationOutcome finish(const TimeSeries& input, std::vector<Obs> values, Scan scan,
                         Algorithm algorithm) {
    return ImputationOutcome{
        TimeSeries(std::move(values), input.frequency(), input.start()),
        std::move(scan.missing), algorithm};
}

/// Missing runs as [first, last] inclusive ranges.
std::vector<std::pair<std::size_t, std::size_t>> missing_runs(
    const std::vector<std::size_t>& missing) {
    std::vector<std::pair<std::size_t, std::size_t>> runs;
    for (std::size_t i = 0; i < missing.size();) {
        std::size_t j = i;
        while (j + 1 < missing.size() && missing[j + 1] == missing[j] + 1) ++j;
        runs.emplace_back(missing[i], missing[j]);
        i = j + 1;
    }
    return runs;
}

}  // namespace

ImputationOutcome impute_mean(const TimeSeries& series, MeanMode mode) {
    Scan scan = scan_or_throw(series);
    std::vector<Obs> values = series.values();

    if (mode == MeanMode::overall) {
        const double mean = scan.mean();
        for (std::size_t i : scan.missing) values[i] = mean;
        return finish(series, std::move(values), std::move(scan), Algorithm::mean);
    }

    const std::size_t f = static_cast<std::size_t>(series.frequency());
    std::vector<double> phase_sum(f, 0.0);
    std::vector<std::size_t> phase_count(f, 0);
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!values[i]) continue;
        phase_sum[i % f] += *values[i];
        ++phase_count[i % f];
    }
    for (std::size_t i : scan.missing) {
        if (phase_count[i % f] == 0) {
            raise(Errc::empty_phase,
                  "phase " + std::to_string(i % f) + " has no observed values");
        }
        values[i] = phase_sum[i % f] / static_cast<double>(phase_count[i % f]);
    }
    return finish(series, std::move(values), std::move(scan), Algorithm::seasonal_mean);
}

ImputationOutcome impute_locf(const TimeSeries& series) {
    Scan scan = scan_or_throw(series);
    std::vector<Obs> values = series.values();
    for (const auto& [first, last] : missing_runs(scan.missing)) {
        // A leading run has no predecessor: the first entry takes the
        // overall mean, which the carry then propagates across the run.
        const double fill = first == 0 ? scan.mean() : *values[first - 1];
        for (std::size_t t = first; t <= last; ++t) values[t] = fill;
    }
    return finish(series, std::move(values), std::move(scan), Algorithm::locf);
}

ImputationOutcome impute_nocb(const TimeSeries& series) {
    Scan scan = scan_or_throw(series);
    std::vector<Obs> values = series.values();
    const std::size_t n = values.size();
    for (const auto& [first, last] : missing_runs(scan.missing)) {
        const double fill = last == n - 1 ? scan.mean() : *values[last + 1];
        for (std::size_t t = first; t <= last; ++t) values[t] = fill;
    }
    return finish(series, std::move(values), std::move(scan), Algorithm::nocb);
}

ImputationOutcome impute_linear(const TimeSeries& series) {
    Scan scan = scan_or_throw(series);
    std::vector<Obs> values = series.values();
    const std::size_t n = values.size();
    for (const auto& [first, last] : missing_runs(scan.missing)) {
        if (first == 0 && last == n - 1) continue;  // impossible: observed >= 1
        if (first == 0) {
            for (std::size_t t = first; t <= last; ++t) values[t] = *values[last + 1];
        } else if (last == n - 1) {
            for (std::size_t t = first; t <= last; ++t) values[t] = *values[first - 1];
        } else {
            const double left = *values[first - 1];
            const double right = *values[last + 1];
            const double slope =
                (right - left) / static_cast<double>(last + 1 - (first - 1));
            for (std::size_t t = first; t <= last; ++t) {
                values[t] = left + slope * static_cast<double>(t - (first - 1));
            }
        }
    }
    return finish(series, std::move(values), std::move(scan), Algorithm::linear);
}

ImputationOutcome impute_seasonal_interp(const TimeSeries& series) {
    if (series.frequency() == 1) {
        ImputationOutcome outcome = impute_linear(series);
        outcome.algorithm = Algorithm::seasonal_interp;
        return outcome;
    }
    Scan scan = scan_or_throw(series);

    const TimeSeries prefilled = impute_linear(series).series;
    const Decomposition decomposition = stl_periodic(prefilled);

    // Interpolate the deseasonalized series (gaps kept), then restore the
    // seasonal component at the gaps only.
    std::vector<Obs> deseasonalized(series.size());
    for (std::size_t t = 0; t < series.size(); ++t) {
        if (series[t]) deseasonalized[t] = *series[t] - decomposition.seasonal[t];
    }
    const TimeSeries interpolated =
        impute_linear(TimeSeries(std::move(deseasonalized), series.frequency(), series.start()))
            .series;

    std::vector<Obs> values = series.values();
    for (std::size_t t : scan.missing) {
        values[t] = *interpolated[t] + decomposition.seasonal[t];
    }
    return finish(series, std::move(values), std::move(scan), Algorithm::seasonal_interp);
}

ImputationOutcome impute_lagged_regression(const TimeSeries& series,
                                           const LaggedRegressionOptions& options) {
    const std::size_t n = series.size();
    const std::size_t k = options.lags;
    if (n <= k + 2) {
        raise(Errc::series_too_short,
              "lagged regression needs n > lags + 2, got n = " + std::to_string(n) +
                  ", lags = " + std::to_string(k));
    }
    Scan scan = scan_or_throw(series);
    if (scan.missing.empty()) {
        return finish(series, series.values(), std::move(scan), Algorithm::lagged_regression);
    }

    const std::size_t rows = n - k;
    const std::size_t cols = k + 1;
    // Working values and the originally-missing mask, cell for cell.
    Matrix work(rows, cols);
    std::vector<char> cell_missing(rows * cols, 0);
    const auto series_index = [&](std::size_t row, std::size_t col) {
        return k + row - col;  // column 0 is "x", column j is lag_j
    };
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            const Obs& v = series[series_index(r, c)];
            if (v) {
                work(r, c) = *v;
            } else {
                cell_missing[r * cols + c] = 1;
            }
        }
    }

    // Column-mean initialization of the missing cells.
    std::vector<char> column_has_missing(cols, 0);
    for (std::size_t c = 0; c < cols; ++c) {
        double sum = 0.0;
        std::size_t count = 0;
        for (std::size_t r = 0; r < rows; ++r) {
            if (!cell_missing[r * cols + c]) {
                sum += work(r, c);
                ++count;
            }
        }
        const double fill = count > 0 ? sum / static_cast<double>(count) : scan.mean();
        for (std::size_t r = 0; r < rows; ++r) {
            if (cell_missing[r * cols + c]) {
                work(r, c) = fill;
                column_has_missing[c] = 1;
            }
        }
    }

    // Regression sweeps. Each target column is fit on the other columns
    // plus an intercept, using the rows where the target was observed.
    const std::size_t terms = cols;  // (cols - 1) regressors + intercept
    std::vector<double> row_features(terms);
    for (int iteration = 0; iteration < options.max_iterations; ++iteration) {
        double max_change = 0.0;
        for (std::size_t c = 0; c < cols; ++c) {
            if (!column_has_missing[c]) continue;
            Matrix ata(terms, terms);
            std::vector<double> atb(terms, 0.0);
            std::size_t fit_rows = 0;
            for (std::size_t r = 0; r < rows; ++r) {
                if (cell_missing[r * cols + c]) continue;
                ++fit_rows;
                row_features[0] = 1.0;
                std::size_t idx = 1;
                for (std::size_t other = 0; other < cols; ++other) {
                    if (other != c) row_features[idx++] = work(r, other);
                }
                const double target = work(r, c);
                for (std::size_t a = 0; a < terms; ++a) {
                    for (std::size_t b = a; b < terms; ++b) {
                        ata(a, b) += row_features[a] * row_features[b];
                    }
                    atb[a] += row_features[a] * target;
                }
            }
            if (fit_rows == 0) continue;  // nothing to learn from; keep inits
            for (std::size_t a = 0; a < terms; ++a) {
                for (std::size_t b = 0; b < a; ++b) ata(a, b) = ata(b, a);
                ata(a, a) += 1e-8;  // ridge keeps collinear lags solvable
            }
            std::vector<double> beta;
            if (!cholesky_solve(ata, atb, beta) && !solve_linear(ata, atb, beta)) {
                continue;
            }
            for (std::size_t r = 0; r < rows; ++r) {
                if (!cell_missing[r * cols + c]) continue;
                double predicted = beta[0];
                std::size_t idx = 1;
                for (std::size_t other = 0; other < cols; ++other) {
                    if (other != c) predicted += beta[idx++] * work(r, other);
                }
                max_change = std::max(max_change, std::abs(predicted - work(r, c)));
                work(r, c) = predicted;
            }
        }
        if (max_change < options.tolerance) break;
    }

    // A gap at time t may correspond to several cells; reconcile by mean.
    std::vector<Obs> values = series.values();
    for (std::size_t t : scan.missing) {
        double sum = 0.0;
        std::size_t count = 0;
        if (t >= k) {
            sum += work(t - k, 0);
            ++count;
        }
        const std::size_t j_low = t < k ? k - t : 1;
        const std::size_t j_high = std::min(k, n - 1 - t);
        for (std::size_t j = std::max<std::size_t>(j_low, 1); j <= j_high; ++j) {
            sum += work(t - k + j, j);
            ++count;
        }
        values[t] = sum / static_cast<double>(count);
    }
    return finish(series, std::move(values), std::move(scan), Algorithm::lagged_regression);
}

}  // namespace tsimpute
