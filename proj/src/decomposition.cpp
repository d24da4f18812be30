#include "tsimpute/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "tsimpute/linalg.hpp"

namespace tsimpute {

namespace {

void require_decomposable(const TimeSeries& series) {
    if (!series.is_complete()) {
        raise(Errc::missing_values_present, "decomposition requires a complete series");
    }
    const int f = series.frequency();
    if (f < 2) {
        raise(Errc::frequency_too_low, "decomposition requires frequency >= 2");
    }
    if (series.size() < 2 * static_cast<std::size_t>(f)) {
        raise(Errc::series_too_short,
              "decomposition requires n >= 2f, got n = " + std::to_string(series.size()) +
                  ", f = " + std::to_string(f));
    }
}

/// Per-phase means of `detrended` (skipping disengaged cells), centered to
/// zero mean across the f phase values, then tiled over the series length.
std::vector<double> periodic_seasonal(const std::vector<Obs>& detrended, std::size_t n, int f) {
    std::vector<double> phase_sum(static_cast<std::size_t>(f), 0.0);
    std::vector<std::size_t> phase_count(static_cast<std::size_t>(f), 0);
    for (std::size_t t = 0; t < n; ++t) {
        if (!detrended[t]) continue;
        phase_sum[t % f] += *detrended[t];
        ++phase_count[t % f];
    }
    std::vector<double> phase_mean(static_cast<std::size_t>(f), 0.0);
    for (std::size_t j = 0; j < static_cast<std::size_t>(f); ++j) {
        if (phase_count[j] == 0) {
            raise(Errc::empty_phase, "phase " + std::to_string(j) + " has no usable values");
        }
        phase_mean[j] = phase_sum[j] / static_cast<double>(phase_count[j]);
    }
    const double grand =
        std::accumulate(phase_mean.begin(), phase_mean.end(), 0.0) / static_cast<double>(f);
    std::vector<double> seasonal(n);
    for (std::size_t t = 0; t < n; ++t) seasonal[t] = phase_mean[t % f] - grand;
    return seasonal;
}

}  // namespace

Decomposition classical_decompose(const TimeSeries& series) {
    require_decomposable(series);
    const std::size_t n = series.size();
    const std::size_t f = static_cast<std::size_t>(series.frequency());
    const std::size_t half = f / 2;

    Decomposition out;
    out.method = DecompositionMethod::classical;
    out.trend.assign(n, std::nullopt);
    out.remainder.assign(n, std::nullopt);

    // Centered moving average; for even f the end weights are halved,
    // which is the 2xf double pass in one formula.
    for (std::size_t t = half; t + half < n; ++t) {
        double acc = 0.0;
        if (f % 2 == 0) {
            acc += 0.5 * (*series[t - half] + *series[t + half]);
            for (std::size_t j = t - half + 1; j < t + half; ++j) acc += *series[j];
        } else {
            for (std::size_t j = t - half; j <= t + half; ++j) acc += *series[j];
        }
        out.trend[t] = acc / static_cast<double>(f);
    }

    std::vector<Obs> detrended(n);
    for (std::size_t t = 0; t < n; ++t) {
        if (out.trend[t]) detrended[t] = *series[t] - *out.trend[t];
    }
    out.seasonal = periodic_seasonal(detrended, n, series.frequency());

    for (std::size_t t = 0; t < n; ++t) {
        if (out.trend[t]) out.remainder[t] = *series[t] - *out.trend[t] - out.seasonal[t];
    }
    return out;
}

std::vector<double> loess_smooth(std::span<const double> xs, std::span<const double> ys,
                                 double span, int degree) {
    const std::size_t n = xs.size();
    if (ys.size() != n) {
        raise(Errc::length_mismatch, "xs and ys lengths differ: " + std::to_string(n) +
                                         " vs " + std::to_string(ys.size()));
    }
    if (degree < 1 || degree > 2) {
        raise(Errc::neighborhood_too_small, "loess degree must be 1 or 2");
    }
    for (std::size_t i = 1; i < n; ++i) {
        if (!(xs[i] > xs[i - 1])) {
            raise(Errc::non_increasing_x, "xs must be strictly increasing");
        }
    }
    const std::size_t min_points = static_cast<std::size_t>(degree) + 2;
    std::size_t q = static_cast<std::size_t>(std::ceil(span * static_cast<double>(n)));
    if (n < min_points || span * static_cast<double>(n) < static_cast<double>(min_points)) {
        raise(Errc::neighborhood_too_small,
              "span*n must cover at least degree + 2 points");
    }
    q = std::min(q, n);

    std::vector<double> fitted(n, 0.0);
    const std::size_t terms = static_cast<std::size_t>(degree) + 1;
    std::size_t lo = 0;
    for (std::size_t i = 0; i < n; ++i) {
        // Slide the q-point window so it holds the nearest neighbours of xs[i].
        while (lo + q < n && xs[lo + q] - xs[i] < xs[i] - xs[lo]) ++lo;
        const std::size_t hi = lo + q - 1;
        const double d_max = std::max(xs[i] - xs[lo], xs[hi] - xs[i]);

        // Weighted normal equations over powers of (x - xs[i]).
        Matrix ata(terms, terms);
        std::vector<double> atb(terms, 0.0);
        for (std::size_t j = lo; j <= hi; ++j) {
            const double d = std::abs(xs[j] - xs[i]);
            double w = 1.0;
            if (d_max > 0.0) {
                const double u = d / d_max;
                const double t = 1.0 - u * u * u;
                w = t > 0.0 ? t * t * t : 0.0;
            }
            if (w == 0.0) continue;
            double basis[3] = {1.0, xs[j] - xs[i], 0.0};
            basis[2] = basis[1] * basis[1];
            for (std::size_t r = 0; r < terms; ++r) {
                for (std::size_t c = 0; c < terms; ++c) ata(r, c) += w * basis[r] * basis[c];
                atb[r] += w * basis[r] * ys[j];
            }
        }
        std::vector<double> beta;
        if (!cholesky_solve(ata, atb, beta)) {
            // Degenerate tricube weights (ties at d_max); retry unweighted.
            Matrix ata2(terms, terms);
            std::vector<double> atb2(terms, 0.0);
            for (std::size_t j = lo; j <= hi; ++j) {
                double basis[3] = {1.0, xs[j] - xs[i], 0.0};
                basis[2] = basis[1] * basis[1];
                for (std::size_t r = 0; r < terms; ++r) {
                    for (std::size_t c = 0; c < terms; ++c) ata2(r, c) += basis[r] * basis[c];
                    atb2[r] += basis[r] * ys[j];
                }
            }
            if (!cholesky_solve(ata2, atb2, beta)) {
                raise(Errc::neighborhood_too_small, "local fit is singular");
            }
        }
        fitted[i] = beta[0];  // value of the local polynomial at xs[i]
    }
    return fitted;
}

double default_stl_trend_span(std::size_t n, int frequency) {
    const double dn = static_cast<double>(n);
    return std::min(1.0, std::max(1.5 * frequency / dn, 10.0 / dn));
}

Decomposition stl_periodic(const TimeSeries& series, double trend_span, int inner_iterations) {
    require_decomposable(series);
    const std::size_t n = series.size();
    const int f = series.frequency();
    if (inner_iterations < 1) inner_iterations = 1;
    if (trend_span <= 0.0) trend_span = default_stl_trend_span(n, f);
    trend_span = std::min(trend_span, 1.0);

    std::vector<double> xs(n);
    std::iota(xs.begin(), xs.end(), 0.0);

    std::vector<double> trend(n, 0.0);
    std::vector<double> seasonal(n, 0.0);
    std::vector<Obs> work(n);
    for (int iter = 0; iter < inner_iterations; ++iter) {
        for (std::size_t t = 0; t < n; ++t) work[t] = *series[t] - trend[t];
        seasonal = periodic_seasonal(work, n, f);
        std::vector<double> deseasonalized(n);
        for (std::size_t t = 0; t < n; ++t) deseasonalized[t] = *series[t] - seasonal[t];
        trend = loess_smooth(xs, deseasonalized, trend_span, 1);
    }

    Decomposition out;
    out.method = DecompositionMethod::stl_periodic;
    out.seasonal = std::move(seasonal);
    out.trend.resize(n);
    out.remainder.resize(n);
    for (std::size_t t = 0; t < n; ++t) {
        out.trend[t] = trend[t];
        out.remainder[t] = *series[t] - trend[t] - out.seasonal[t];
    }
    return out;
}

}  // namespace tsimpute
