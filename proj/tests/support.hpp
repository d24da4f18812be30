#pragma once

// Shared helpers for the test suites: random series generation and a few
// hand-rolled statistics kept independent of the library code they check.

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include "tsimpute/random.hpp"
#include "tsimpute/series.hpp"

namespace test_support {

using tsimpute::Obs;
using tsimpute::Rng;
using tsimpute::TimeSeries;

inline std::vector<double> random_values(std::size_t n, Rng& rng, double mean = 0.0,
                                         double sd = 1.0) {
    std::vector<double> values(n);
    for (double& v : values) v = rng.normal(mean, sd);
    return values;
}

/// Complete series with standard-normal noise around `mean`.
inline TimeSeries random_series(std::size_t n, int frequency, Rng& rng, double mean = 0.0,
                                double sd = 1.0) {
    return tsimpute::make_series(random_values(n, rng, mean, sd), frequency);
}

/// Knock out each entry independently with probability p, but keep at
/// least `keep` observed values (re-observing random positions if needed).
inline TimeSeries amputate_bernoulli(const TimeSeries& series, double p, Rng& rng,
                                     std::size_t keep = 2) {
    std::vector<Obs> values = series.values();
    for (Obs& v : values) {
        if (rng.uniform() < p) v = std::nullopt;
    }
    std::size_t observed = 0;
    for (const Obs& v : values) observed += v.has_value() ? 1 : 0;
    while (observed < keep) {
        const std::size_t i = static_cast<std::size_t>(rng.below(values.size()));
        if (!values[i]) {
            values[i] = *series[i];
            ++observed;
        }
    }
    return TimeSeries(values, series.frequency(), series.start());
}

inline double rms(const std::vector<double>& xs) {
    double acc = 0.0;
    for (double x : xs) acc += x * x;
    return std::sqrt(acc / static_cast<double>(xs.size()));
}

inline double mean_of(const std::vector<double>& xs) {
    double acc = 0.0;
    for (double x : xs) acc += x;
    return acc / static_cast<double>(xs.size());
}

inline double sample_variance(const std::vector<double>& xs) {
    const double m = mean_of(xs);
    double acc = 0.0;
    for (double x : xs) acc += (x - m) * (x - m);
    return acc / static_cast<double>(xs.size() - 1);
}

inline double max_abs_diff(const TimeSeries& a, const TimeSeries& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        worst = std::max(worst, std::abs(*a[i] - *b[i]));
    }
    return worst;
}

}  // namespace test_support
