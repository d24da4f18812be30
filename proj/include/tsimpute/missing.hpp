#pragma once

#include <cstdint>
#include <vector>

#include "tsimpute/series.hpp"

namespace tsimpute {

/// Missingness mechanism taxonomy. The simulator below produces MCAR
/// exclusively: P(r | Y_observed, Y_missing) = P(r). MAR conditions the
/// gap probability on observed covariates (for a univariate series, the
/// point in time); NMAR on the missing values themselves.
enum class MechanismLabel { mcar, mar, nmar };

/**
 * A complete series after amputation: the gapped data plus the sorted
 * list of removed positions.
 *
 * `na_indices` are 1-based (matching the convention of the simulation
 * recipe this mirrors); data[i-1] is missing exactly for i in na_indices.
 * `rate` is the per-step hazard of the exponential gap law.
 */
struct AmputationResult {
    TimeSeries data;
    std::vector<std::size_t> na_indices;  // 1-based, strictly increasing
    double rate = 0.0;
    std::uint64_t seed = 0;
};

/**
 * Draws the 1-based indices to delete for a series of length n: starting
 * from a = 0, repeatedly advance a by ceil(Exp(rate)) and mark a until it
 * passes n. Gap increments are therefore i.i.d. Geometric(1 - e^{-rate}).
 *
 * Sees only the length, never the values, so the mechanism is MCAR by
 * construction. rate = 0 yields no indices. Deterministic in (n, rate,
 * seed) on every platform (see Rng).
 */
std::vector<std::size_t> draw_missing_indices(std::size_t n, double rate, std::uint64_t seed);

/// Amputates a complete series. Throws AlreadyMissing if the input has
/// gaps, NegativeRate if rate < 0. rate = 0 passes the series through.
AmputationResult create_missing(const TimeSeries& series, double rate, std::uint64_t seed);

}  // namespace tsimpute
