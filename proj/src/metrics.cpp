#include "tsimpute/metrics.hpp"

#include <cmath>

namespace tsimpute {

namespace {

void check_inputs(const TimeSeries& imputed, const TimeSeries& truth,
                  std::span<const std::size_t> indices) {
    if (imputed.size() != truth.size()) {
        raise(Errc::length_mismatch,
              "series lengths differ: " + std::to_string(imputed.size()) + " vs " +
                  std::to_string(truth.size()));
    }
    if (!imputed.is_complete() || !truth.is_complete()) {
        raise(Errc::missing_values_present, "metrics require complete series");
    }
    if (indices.empty()) {
        raise(Errc::empty_index_set, "no indices to evaluate");
    }
    for (std::size_t i : indices) {
        if (i >= truth.size()) {
            raise(Errc::index_out_of_range,
                  "index " + std::to_string(i) + " >= n = " + std::to_string(truth.size()));
        }
    }
}

}  // namespace

double rmse(const TimeSeries& imputed, const TimeSeries& truth,
            std::span<const std::size_t> indices) {
    check_inputs(imputed, truth, indices);
    double acc = 0.0;
    for (std::size_t i : indices) {
        const double d = *imputed[i] - *truth[i];
        acc += d * d;
    }
    return std::sqrt(acc / static_cast<double>(indices.size()));
}

double mape(const TimeSeries& imputed, const TimeSeries& truth,
            std::span<const std::size_t> indices) {
    check_inputs(imputed, truth, indices);
    double acc = 0.0;
    for (std::size_t i : indices) {
        const double y = *truth[i];
        if (y == 0.0) {
            raise(Errc::zero_truth_value,
                  "truth value at index " + std::to_string(i) + " is zero");
        }
        acc += std::abs(*imputed[i] - y) / std::abs(y);
    }
    return acc / static_cast<double>(indices.size());
}

ErrorReport evaluate(const TimeSeries& imputed, const TimeSeries& truth,
                     std::span<const std::size_t> indices) {
    return ErrorReport{rmse(imputed, truth, indices), mape(imputed, truth, indices),
                       indices.size()};
}

}  // namespace tsimpute
