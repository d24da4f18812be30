#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "tsimpute/errors.hpp"

namespace tsimpute {

/// A single observation; disengaged means the value is missing.
using Obs = std::optional<double>;

/**
 * Equi-spaced univariate time series.
 *
 * Index i maps to time start + i/frequency; no per-point timestamps are
 * stored. `frequency` is the number of observations per season (1 for
 * non-seasonal data). Missing entries are represented explicitly, never
 * by sentinel values. Instances are immutable value types and safe to
 * share read-only across threads.
 */
class TimeSeries {
public:
    /// Throws EmptySeries / InvalidFrequency on invalid arguments.
    TimeSeries(std::vector<Obs> values, int frequency, double start = 1.0);

    std::size_t size() const noexcept { return values_.size(); }
    int frequency() const noexcept { return frequency_; }
    double start() const noexcept { return start_; }
    double time_at(std::size_t i) const {
        return start_ + static_cast<double>(i) / frequency_;
    }

    const Obs& operator[](std::size_t i) const { return values_[i]; }
    const std::vector<Obs>& values() const noexcept { return values_; }

    bool is_complete() const noexcept;
    std::size_t observed_count() const noexcept;
    /// 0-based positions of the missing entries, in increasing order.
    std::vector<std::size_t> missing_positions() const;

    bool operator==(const TimeSeries&) const = default;

private:
    std::vector<Obs> values_;
    int frequency_;
    double start_;
};

/// Factory mirroring the constructor; values are copied, never aliased.
TimeSeries make_series(std::vector<Obs> values, int frequency, double start = 1.0);
/// Convenience overload for complete data.
TimeSeries make_series(const std::vector<double>& values, int frequency, double start = 1.0);

/**
 * Sample autocorrelation up to a maximum lag.
 *
 * `coefficients[k]` is the biased estimator
 *   sum_{t=1}^{n-k} (y_t - ybar)(y_{t+k} - ybar) / sum_{t=1}^{n} (y_t - ybar)^2,
 * so coefficients[0] == 1 exactly and every value lies in [-1, 1].
 * `significance_bound` is the usual large-sample bound 1.96/sqrt(n).
 */
struct AcfResult {
    std::vector<double> coefficients;  // indexed by lag 0..max_lag
    std::size_t n = 0;
    double significance_bound = 0.0;
};

/// Requires a complete series (impute first) and max_lag < n.
/// Throws MissingValuesPresent, LagOutOfRange, ZeroVariance.
AcfResult acf(const TimeSeries& series, std::size_t max_lag);

/**
 * Lagged recasting of a series as a matrix.
 *
 * Column 0 ("x") holds values[lags + i] for row i; column j >= 1
 * ("lag_j") holds values[lags + i - j]. Missing input entries propagate
 * into the matrix unchanged. Rows: n - lags, columns: lags + 1.
 */
class LagMatrix {
public:
    LagMatrix(std::size_t rows, std::size_t lags);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t lags() const noexcept { return lags_; }
    std::size_t columns() const noexcept { return lags_ + 1; }

    const Obs& cell(std::size_t row, std::size_t column) const;
    Obs& cell(std::size_t row, std::size_t column);

    /// "x" for column 0, "lag_<j>" for column j.
    static std::string column_name(std::size_t column);

private:
    std::size_t rows_;
    std::size_t lags_;
    std::vector<Obs> cells_;  // row-major
};

/// Throws LagOutOfRange unless 1 <= lags < series length.
LagMatrix create_lags(const TimeSeries& series, std::size_t lags);

}  // namespace tsimpute
