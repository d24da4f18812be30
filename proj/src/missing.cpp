#include "tsimpute/missing.hpp"

#include <cmath>

#include "tsimpute/random.hpp"

namespace tsimpute {

std::vector<std::size_t> draw_missing_indices(std::size_t n, double rate, std::uint64_t seed) {
    if (rate < 0.0) {
        raise(Errc::negative_rate, "rate must be >= 0, got " + std::to_string(rate));
    }
    std::vector<std::size_t> indices;
    if (rate == 0.0) return indices;

    Rng rng(seed);
    std::size_t position = 0;
    while (position < n) {
        const double step = rng.exponential(rate);
        std::size_t next =
            static_cast<std::size_t>(std::ceil(static_cast<double>(position) + step));
        // A zero variate (uniform draw exactly 1) would stall; treat it as
        // the minimal gap.
        if (next <= position) next = position + 1;
        position = next;
        if (position <= n) indices.push_back(position);
    }
    return indices;
}

AmputationResult create_missing(const TimeSeries& series, double rate, std::uint64_t seed) {
    if (!series.is_complete()) {
        raise(Errc::already_missing, "input series already contains missing values");
    }
    std::vector<std::size_t> indices = draw_missing_indices(series.size(), rate, seed);
    std::vector<Obs> values = series.values();
    for (std::size_t one_based : indices) values[one_based - 1] = std::nullopt;
    return AmputationResult{
        TimeSeries(std::move(values), series.frequency(), series.start()),
        std::move(indices), rate, seed};
}

}  // namespace tsimpute
