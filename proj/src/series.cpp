#include "tsimpute/series.hpp"

#include <algorithm>
#include <cmath>

namespace tsimpute {

TimeSeries::TimeSeries(std::vector<Obs> values, int frequency, double start)
    : values_(std::move(values)), frequency_(frequency), start_(start) {
    if (values_.empty()) {
        raise(Errc::empty_series, "a series must contain at least one entry");
    }
    if (frequency_ < 1) {
        raise(Errc::invalid_frequency,
              "frequency must be >= 1, got " + std::to_string(frequency_));
    }
}

bool TimeSeries::is_complete() const noexcept {
    return std::all_of(values_.begin(), values_.end(),
                       [](const Obs& v) { return v.has_value(); });
}

std::size_t TimeSeries::observed_count() const noexcept {
    return static_cast<std::size_t>(std::count_if(
        values_.begin(), values_.end(), [](const Obs& v) { return v.has_value(); }));
}

std::vector<std::size_t> TimeSeries::missing_positions() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!values_[i]) out.push_back(i);
    }
    return out;
}

TimeSeries make_series(std::vector<Obs> values, int frequency, double start) {
    return TimeSeries(std::move(values), frequency, start);
}

TimeSeries make_series(const std::vector<double>& values, int frequency, double start) {
    std::vector<Obs> obs(values.begin(), values.end());
    return TimeSeries(std::move(obs), frequency, start);
}

AcfResult acf(const TimeSeries& series, std::size_t max_lag) {
    const std::size_t n = series.size();
    if (!series.is_complete()) {
        raise(Errc::missing_values_present, "acf requires a complete series");
    }
    if (max_lag >= n) {
        raise(Errc::lag_out_of_range,
              "max_lag " + std::to_string(max_lag) + " must be < n = " + std::to_string(n));
    }

    double sum = 0.0;
    for (const Obs& v : series.values()) sum += *v;
    const double mean = sum / static_cast<double>(n);

    double denominator = 0.0;
    for (const Obs& v : series.values()) {
        const double d = *v - mean;
        denominator += d * d;
    }
    if (denominator == 0.0) {
        raise(Errc::zero_variance, "constant series has no autocorrelation");
    }

    AcfResult result;
    result.n = n;
    result.significance_bound = 1.96 / std::sqrt(static_cast<double>(n));
    result.coefficients.reserve(max_lag + 1);
    result.coefficients.push_back(1.0);
    for (std::size_t lag = 1; lag <= max_lag; ++lag) {
        double numerator = 0.0;
        for (std::size_t t = 0; t + lag < n; ++t) {
            numerator += (*series[t] - mean) * (*series[t + lag] - mean);
        }
        result.coefficients.push_back(numerator / denominator);
    }
    return result;
}

LagMatrix::LagMatrix(std::size_t rows, std::size_t lags)
    : rows_(rows), lags_(lags), cells_(rows * (lags + 1)) {}

const Obs& LagMatrix::cell(std::size_t row, std::size_t column) const {
    return cells_[row * columns() + column];
}

Obs& LagMatrix::cell(std::size_t row, std::size_t column) {
    return cells_[row * columns() + column];
}

std::string LagMatrix::column_name(std::size_t column) {
    return column == 0 ? std::string("x") : "lag_" + std::to_string(column);
}

LagMatrix create_lags(const TimeSeries& series, std::size_t lags) {
    const std::size_t n = series.size();
    if (lags < 1 || lags >= n) {
        raise(Errc::lag_out_of_range,
              "lags must satisfy 1 <= lags < n, got lags = " + std::to_string(lags) +
                  " with n = " + std::to_string(n));
    }
    LagMatrix matrix(n - lags, lags);
    for (std::size_t i = 0; i < n - lags; ++i) {
        matrix.cell(i, 0) = series[lags + i];
        for (std::size_t j = 1; j <= lags; ++j) {
            matrix.cell(i, j) = series[lags + i - j];
        }
    }
    return matrix;
}

}  // namespace tsimpute
