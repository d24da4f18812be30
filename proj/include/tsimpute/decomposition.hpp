#pragma once

#include <span>
#include <vector>

#include "tsimpute/series.hpp"

namespace tsimpute {

enum class DecompositionMethod { classical, stl_periodic };

/**
 * Additive split of a series: original = trend + seasonal + remainder
 * wherever trend is defined. The seasonal component repeats with the
 * series frequency and sums to zero over one full period.
 *
 * Classical decomposition leaves the trend (and hence the remainder)
 * undefined for floor(f/2) points at each edge; the STL variant defines
 * it everywhere.
 */
struct Decomposition {
    std::vector<Obs> trend;
    std::vector<double> seasonal;
    std::vector<Obs> remainder;
    DecompositionMethod method = DecompositionMethod::classical;
};

/// Moving-average decomposition: centered window of length f (double
/// 2-by-f pass for even f), per-phase seasonal means, centered.
/// Requires a complete series, f >= 2 and n >= 2f.
Decomposition classical_decompose(const TimeSeries& series);

/**
 * Locally weighted least-squares smoother with tricube weights.
 *
 * For each x_i the fit uses the ceil(span*n) nearest neighbours, weighted
 * by w = (1 - (d/d_max)^3)^3, and evaluates a weighted polynomial fit of
 * the given degree (1 or 2) at x_i. Reproduces any global polynomial of
 * degree <= `degree` exactly. xs must be strictly increasing and
 * span*n >= degree + 2.
 */
std::vector<double> loess_smooth(std::span<const double> xs, std::span<const double> ys,
                                 double span, int degree);

/// Heuristic trend window for stl_periodic: min(1, 1.5 f / n), at least 10/n.
double default_stl_trend_span(std::size_t n, int frequency);

/**
 * Simplified periodic STL: alternates a periodic seasonal estimate
 * (cycle-subseries means, the degenerate "periodic" seasonal window)
 * with a degree-1 loess trend on the deseasonalized series. No
 * robustness iterations. trend_span <= 0 selects the default heuristic.
 * Requirements as classical_decompose.
 */
Decomposition stl_periodic(const TimeSeries& series, double trend_span = 0.0,
                           int inner_iterations = 2);

}  // namespace tsimpute
