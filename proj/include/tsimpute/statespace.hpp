#pragma once

#include <span>
#include <vector>

#include "tsimpute/imputation.hpp"
#include "tsimpute/linalg.hpp"
#include "tsimpute/series.hpp"

namespace tsimpute {

/**
 * Linear-Gaussian state-space model with a scalar observation:
 *
 *   x_t = T x_{t-1} + w_t,   w_t ~ N(0, Q),   x_0 ~ N(a0, P0)
 *   y_t = Z' x_t + e_t,      e_t ~ N(0, h)
 *
 * The first observation y_1 is preceded by one transition from x_0, so a
 * filter pass starts with a predict step. Q and P0 must be symmetric
 * positive semi-definite.
 */
struct StateSpaceModel {
    std::size_t state_dim = 0;
    Matrix transition;                // T, m x m
    std::vector<double> observation;  // Z, length m
    Matrix state_noise;               // Q, m x m
    double obs_noise = 0.0;           // h >= 0
    std::vector<double> initial_mean; // a0
    Matrix initial_cov;               // P0, m x m

    /// Throws on dimension mismatches or non-PSD covariances.
    void validate() const;
};

/**
 * Filter/smoother output. Row t of the mean matrices is the state at time
 * t+1 (1-based model time). `filtered_*` hold the posterior after the
 * update at t; `smoothed_*` condition on the whole series and are empty
 * for a filter-only pass. `log_likelihood` sums the Gaussian
 * prediction-error terms -(log 2*pi + log F_t + v_t^2/F_t)/2 over the
 * observed time points (so it has exactly `likelihood_terms` terms).
 */
struct KalmanOutput {
    Matrix filtered_means;             // n x m
    std::vector<Matrix> filtered_covs; // n of m x m
    Matrix smoothed_means;             // n x m (empty if not smoothed)
    std::vector<Matrix> smoothed_covs;
    double log_likelihood = 0.0;
    std::size_t likelihood_terms = 0;
};

/**
 * Standard predict/update recursion. Missing observations get a predict
 * step only and contribute no likelihood term. The first
 * `likelihood_burn_in` observed points are excluded from the likelihood
 * (used to approximate a diffuse likelihood when fitting); state updates
 * still happen for them.
 *
 * Throws DegenerateInnovation when an innovation variance is not
 * positive while the innovation itself is non-negligible (an exactly
 * predicted noise-free observation is skipped instead).
 */
KalmanOutput kalman_filter(const StateSpaceModel& model, std::span<const Obs> observations,
                           std::size_t likelihood_burn_in = 0);

/// Filter plus fixed-interval (backward-recursion) smoothing. Smoothed
/// covariances never exceed the filtered ones in trace.
KalmanOutput kalman_smooth(const StateSpaceModel& model, std::span<const Obs> observations);

/**
 * Maximum-likelihood basic structural model.
 *
 * States are (level, slope, seasonal dummies s_1..s_{f-1}) for f >= 2
 * (m = f + 1) or a local linear trend (m = 2) for f = 1. The seasonal
 * block follows the negative-sum recurrence s_t = -sum_{j=1}^{f-1}
 * s_{t-j} + noise. Free parameters are the level/slope/seasonal (f >= 2
 * only) and observation variances, optimized over log-variances with a
 * deterministic Nelder-Mead simplex (max 500 evaluations). Initialization
 * is approximately diffuse: a0 = (first observed value, 0, ...), P0 =
 * 1e7 * sample variance * I, with the first m likelihood terms excluded.
 *
 * Missing values are allowed (the filter skips them); for f >= 2 every
 * phase needs at least one observation and n >= 2f, for f = 1 n >= 4.
 */
StateSpaceModel fit_bsm(const TimeSeries& series);

/// Fit a basic structural model, smooth, and fill each gap with the
/// smoothed observation estimate Z' x_t. A missing first entry is patched
/// with the overall mean beforehand and keeps that value.
ImputationOutcome impute_kalman_struct(const TimeSeries& series);

/**
 * AR-based state-space imputation: choose differencing d in {0,1} (the
 * variance-minimizing choice on a linearly pre-filled copy, ties prefer
 * d = 1), fit an AR(p), p <= 5, by Yule-Walker/AIC on the pre-filled,
 * differenced, mean-centered series, then Kalman-smooth the genuinely
 * gapped differenced series in companion form and integrate back.
 * Requires n >= 20 and at least 2 observed values.
 */
ImputationOutcome impute_kalman_arima(const TimeSeries& series);

/// The AR order rule used by impute_kalman_arima: Yule-Walker estimates,
/// AIC = n log(sigma_p^2) + 2(p+1), smallest order on ties. Input must
/// already be mean-centered.
std::size_t select_ar_order(std::span<const double> centered, std::size_t max_order);

}  // namespace tsimpute
