#pragma once

#include <span>

#include "tsimpute/series.hpp"

namespace tsimpute {

/// Imputation error summary over a set of evaluated positions.
struct ErrorReport {
    double rmse = 0.0;
    double mape = 0.0;  // a fraction: 0.5 means 50%
    std::size_t count = 0;
};

/// Root mean square error between the two series over the given 0-based
/// indices (normally the amputated positions). Both series must be
/// complete and of equal length; the index set must be non-empty.
double rmse(const TimeSeries& imputed, const TimeSeries& truth,
            std::span<const std::size_t> indices);

/// Mean absolute percentage error, returned as a fraction. Throws
/// ZeroTruthValue if any evaluated truth value is 0.
double mape(const TimeSeries& imputed, const TimeSeries& truth,
            std::span<const std::size_t> indices);

ErrorReport evaluate(const TimeSeries& imputed, const TimeSeries& truth,
                     std::span<const std::size_t> indices);

}  // namespace tsimpute
