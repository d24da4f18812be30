#pragma once

#include <string_view>
#include <vector>

#include "tsimpute/series.hpp"

namespace tsimpute {

/// Labels for every imputation algorithm the toolkit ships.
enum class Algorithm {
    mean,
    seasonal_mean,
    locf,
    nocb,
    linear,
    seasonal_interp,
    kalman_struct,
    kalman_arima,
    lagged_regression,
};

std::string_view to_string(Algorithm algorithm);
Algorithm algorithm_from_string(std::string_view name);
/// All algorithm labels, for CLI help and validation.
const std::vector<Algorithm>& all_algorithms();

/**
 * Result of filling a series: the completed series, the 0-based positions
 * that were missing on input, and which algorithm ran. Originally
 * observed entries are preserved bit-for-bit.
 */
struct ImputationOutcome {
    TimeSeries series;
    std::vector<std::size_t> filled_indices;  // 0-based
    Algorithm algorithm;
};

enum class MeanMode { overall, seasonal };

/// Overall mode fills with the mean of the observed values; seasonal mode
/// with the mean of the observed values sharing the same phase (requires
/// every phase to have at least one observation).
ImputationOutcome impute_mean(const TimeSeries& series, MeanMode mode = MeanMode::overall);

/// Last observation carried forward. A missing first entry is patched
/// with the overall observed mean before the carry, so a leading missing
/// run is filled entirely with that mean.
ImputationOutcome impute_locf(const TimeSeries& series);

/// Next observation carried backward; a missing last entry is patched
/// with the overall observed mean (mirror of the locf patch).
ImputationOutcome impute_nocb(const TimeSeries& series);

/// Straight-line interpolation across interior gaps at unit index
/// spacing; leading/trailing gaps take the nearest observed value.
ImputationOutcome impute_linear(const TimeSeries& series);

/**
 * Seasonal-decomposition interpolation: estimate the seasonal component
 * via periodic STL on a linearly pre-filled copy, interpolate the
 * deseasonalized series linearly, and add the seasonal back at the gaps.
 * With frequency 1 this is exactly impute_linear.
 */
ImputationOutcome impute_seasonal_interp(const TimeSeries& series);

struct LaggedRegressionOptions {
    std::size_t lags = 10;
    int max_iterations = 50;
    double tolerance = 1e-6;
};

/**
 * Iterative regression on the lag matrix: missing cells start at their
 * column means, then each column with missing cells is repeatedly
 * re-predicted by least squares on the remaining columns (fit on rows
 * where the target column was observed) until the largest cell change
 * drops below the tolerance. A gap may surface in several matrix cells;
 * the final value is the mean of its imputed cells.
 *
 * The normal equations carry a tiny ridge term (1e-8 on the diagonal,
 * data-scaled) so collinear lag columns cannot derail the sweep.
 * Requires n > lags + 2.
 */
ImputationOutcome impute_lagged_regression(const TimeSeries& series,
                                           const LaggedRegressionOptions& options = {});

}  // namespace tsimpute
