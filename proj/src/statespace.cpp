#include "tsimpute/statespace.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

namespace tsimpute {

namespace {

constexpr double kDiffusePrior = 1e7;
constexpr std::size_t kMaxFitEvaluations = 500;
constexpr double kSimplexTolerance = 1e-8;

struct SparseMatrix {
    struct Entry {
        std::size_t row;
        std::size_t col;
        double value;
    };
    std::vector<Entry> entries;
    std::size_t dim = 0;

    static SparseMatrix from(const Matrix& dense) {
        SparseMatrix sparse;
        sparse.dim = dense.rows();
        for (std::size_t i = 0; i < dense.rows(); ++i) {
            for (std::size_t j = 0; j < dense.cols(); ++j) {
                if (dense(i, j) != 0.0) sparse.entries.push_back({i, j, dense(i, j)});
            }
        }
        return sparse;
    }

    // out = T x
    void apply(std::span<const double> x, std::span<double> out) const {
        std::fill(out.begin(), out.end(), 0.0);
        for (const Entry& e : entries) out[e.row] += e.value * x[e.col];
    }

    // out = T' x
    void apply_transpose(std::span<const double> x, std::span<double> out) const {
        std::fill(out.begin(), out.end(), 0.0);
        for (const Entry& e : entries) out[e.col] += e.value * x[e.row];
    }

    // out = T A
    void left_multiply(const Matrix& a, Matrix& out) const {
        std::fill(out.data(), out.data() + dim * dim, 0.0);
        for (const Entry& e : entries) {
            const double v = e.value;
            for (std::size_t j = 0; j < dim; ++j) out(e.row, j) += v * a(e.col, j);
        }
    }

    // out = A T'
    void right_multiply_transpose(const Matrix& a, Matrix& out) const {
        std::fill(out.data(), out.data() + dim * dim, 0.0);
        for (const Entry& e : entries) {
            const double v = e.value;
            for (std::size_t i = 0; i < dim; ++i) out(i, e.row) += v * a(i, e.col);
        }
    }

    // out = T' A T
    void sandwich_transpose(const Matrix& a, Matrix& scratch, Matrix& out) const {
        // scratch = T' A
        std::fill(scratch.data(), scratch.data() + dim * dim, 0.0);
        for (const Entry& e : entries) {
            const double v = e.value;
            for (std::size_t j = 0; j < dim; ++j) scratch(e.col, j) += v * a(e.row, j);
        }
        // out = scratch T
        std::fill(out.data(), out.data() + dim * dim, 0.0);
        for (const Entry& e : entries) {
            const double v = e.value;
            for (std::size_t i = 0; i < dim; ++i) out(i, e.col) += v * scratch(i, e.row);
        }
    }
};

/// Per-step filter history needed by the smoother.
struct FilterTrace {
    Matrix predicted_means;              // n x m
    std::vector<Matrix> predicted_covs;  // n of m x m
    Matrix posterior_means;
    std::vector<Matrix> posterior_covs;
    std::vector<double> innovations;
    std::vector<double> innovation_vars;
    Matrix gains;                        // n x m, K_t
    std::vector<char> updated;           // informative observation at t
};

double dot(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

/// Core predict/update pass. When `trace` is non-null every per-step
/// quantity is recorded (needed for smoothing); otherwise the pass runs
/// allocation-free per step, which is what the likelihood optimizer uses.
double run_filter(const StateSpaceModel& model, std::span<const Obs> observations,
                  std::size_t burn_in, FilterTrace* trace, std::size_t* terms_out) {
    const std::size_t m = model.state_dim;
    const std::size_t n = observations.size();
    const SparseMatrix transition = SparseMatrix::from(model.transition);
    const std::vector<double>& z = model.observation;

    std::vector<double> state = model.initial_mean;
    std::vector<double> state_next(m);
    Matrix cov = model.initial_cov;
    Matrix tp(m, m);
    Matrix cov_pred(m, m);
    std::vector<double> pz(m);
    std::vector<double> gain(m);

    if (trace) {
        trace->predicted_means = Matrix(n, m);
        trace->predicted_covs.assign(n, Matrix(m, m));
        trace->posterior_means = Matrix(n, m);
        trace->posterior_covs.assign(n, Matrix(m, m));
        trace->innovations.assign(n, 0.0);
        trace->innovation_vars.assign(n, 0.0);
        trace->gains = Matrix(n, m);
        trace->updated.assign(n, 0);
    }

    double log_likelihood = 0.0;
    std::size_t observed_seen = 0;
    std::size_t terms = 0;

    for (std::size_t t = 0; t < n; ++t) {
        // Predict.
        transition.apply(state, state_next);
        std::swap(state, state_next);
        transition.left_multiply(cov, tp);
        transition.right_multiply_transpose(tp, cov_pred);
        add_in_place(cov_pred, model.state_noise);
        symmetrize(cov_pred);
        cov = cov_pred;

        if (trace) {
            for (std::size_t i = 0; i < m; ++i) trace->predicted_means(t, i) = state[i];
            trace->predicted_covs[t] = cov;
        }

        if (observations[t]) {
            for (std::size_t i = 0; i < m; ++i) pz[i] = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                for (std::size_t j = 0; j < m; ++j) pz[i] += cov(i, j) * z[j];
            }
            const double innovation_var = dot(z, pz) + model.obs_noise;
            const double innovation = *observations[t] - dot(z, state);

            if (innovation_var <= 0.0) {
                const double scale = 1.0 + std::abs(model.obs_noise);
                if (innovation_var < -1e-8 * scale ||
                    std::abs(innovation) > 1e-6 * (1.0 + std::abs(*observations[t]))) {
                    raise(Errc::degenerate_innovation,
                          "innovation variance " + std::to_string(innovation_var) +
                              " at t = " + std::to_string(t + 1));
                }
                // Exactly predicted noise-free observation: nothing to learn.
            } else {
                for (std::size_t i = 0; i < m; ++i) gain[i] = pz[i] / innovation_var;
                for (std::size_t i = 0; i < m; ++i) state[i] += gain[i] * innovation;
                for (std::size_t i = 0; i < m; ++i) {
                    for (std::size_t j = 0; j < m; ++j) cov(i, j) -= gain[i] * pz[j];
                }
                symmetrize(cov);
                ++observed_seen;
                if (observed_seen > burn_in) {
                    log_likelihood -=
                        0.5 * (std::log(2.0 * std::numbers::pi) + std::log(innovation_var) +
                               innovation * innovation / innovation_var);
                    ++terms;
                }
                if (trace) {
                    trace->innovations[t] = innovation;
                    trace->innovation_vars[t] = innovation_var;
                    for (std::size_t i = 0; i < m; ++i) trace->gains(t, i) = gain[i];
                    trace->updated[t] = 1;
                }
            }
        }

        if (trace) {
            for (std::size_t i = 0; i < m; ++i) trace->posterior_means(t, i) = state[i];
            trace->posterior_covs[t] = cov;
        }
    }

    if (terms_out) *terms_out = terms;
    return log_likelihood;
}

}  // namespace

void StateSpaceModel::validate() const {
    const std::size_t m = state_dim;
    if (m == 0 || transition.rows() != m || transition.cols() != m ||
        observation.size() != m || state_noise.rows() != m || state_noise.cols() != m ||
        initial_mean.size() != m || initial_cov.rows() != m || initial_cov.cols() != m) {
        raise(Errc::length_mismatch, "state-space dimensions are inconsistent");
    }
    if (!(obs_noise >= 0.0)) {
        raise(Errc::degenerate_innovation, "observation noise variance must be >= 0");
    }
    for (const Matrix* mat : {&state_noise, &initial_cov}) {
        double scale = 1.0;
        for (std::size_t i = 0; i < m; ++i) scale = std::max(scale, std::abs((*mat)(i, i)));
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = i + 1; j < m; ++j) {
                if (std::abs((*mat)(i, j) - (*mat)(j, i)) > 1e-10 * scale) {
                    raise(Errc::length_mismatch, "covariance matrix is not symmetric");
                }
            }
        }
        const std::vector<double> eigen = symmetric_eigenvalues(*mat);
        if (!eigen.empty() && eigen.front() < -1e-10 * scale) {
            raise(Errc::length_mismatch, "covariance matrix is not positive semi-definite");
        }
    }
}

KalmanOutput kalman_filter(const StateSpaceModel& model, std::span<const Obs> observations,
                           std::size_t likelihood_burn_in) {
    model.validate();
    if (observations.empty()) {
        raise(Errc::empty_series, "filter requires at least one observation slot");
    }
    FilterTrace trace;
    KalmanOutput out;
    out.log_likelihood =
        run_filter(model, observations, likelihood_burn_in, &trace, &out.likelihood_terms);
    out.filtered_means = std::move(trace.posterior_means);
    out.filtered_covs = std::move(trace.posterior_covs);
    return out;
}

KalmanOutput kalman_smooth(const StateSpaceModel& model, std::span<const Obs> observations) {
    model.validate();
    if (observations.empty()) {
        raise(Errc::empty_series, "smoother requires at least one observation slot");
    }
    const std::size_t m = model.state_dim;
    const std::size_t n = observations.size();
    const SparseMatrix transition = SparseMatrix::from(model.transition);
    const std::vector<double>& z = model.observation;

    FilterTrace trace;
    KalmanOutput out;
    out.log_likelihood = run_filter(model, observations, 0, &trace, &out.likelihood_terms);

    out.smoothed_means = Matrix(n, m);
    out.smoothed_covs.assign(n, Matrix(m, m));

    // Backward recursion on the weighted innovation sums r and N
    // (fixed-interval smoothing without explicit covariance inversion).
    std::vector<double> r(m, 0.0);
    std::vector<double> r_next(m);
    std::vector<double> u(m);
    Matrix big_n(m, m);
    Matrix n_next(m, m);
    Matrix scratch(m, m);
    std::vector<double> kt_m1(m);
    std::vector<double> b_k(m);

    for (std::size_t ti = n; ti-- > 0;) {
        if (trace.updated[ti]) {
            const double inv_f = 1.0 / trace.innovation_vars[ti];
            const double scaled_innovation = trace.innovations[ti] * inv_f;
            // u = T' r, then subtract the gain direction: L' r = u - Z (K' u).
            transition.apply_transpose(r, u);
            double ku = 0.0;
            for (std::size_t i = 0; i < m; ++i) ku += trace.gains(ti, i) * u[i];
            for (std::size_t i = 0; i < m; ++i) {
                r_next[i] = z[i] * scaled_innovation + u[i] - z[i] * ku;
            }
            // n_next = Z Z'/F + L' N L with L = T (I - K Z').
            transition.sandwich_transpose(big_n, scratch, n_next);
            for (std::size_t j = 0; j < m; ++j) {
                double acc = 0.0;
                for (std::size_t i = 0; i < m; ++i) acc += trace.gains(ti, i) * n_next(i, j);
                kt_m1[j] = acc;
            }
            for (std::size_t i = 0; i < m; ++i) {
                for (std::size_t j = 0; j < m; ++j) n_next(i, j) -= z[i] * kt_m1[j];
            }
            for (std::size_t i = 0; i < m; ++i) {
                double acc = 0.0;
                for (std::size_t j = 0; j < m; ++j) acc += n_next(i, j) * trace.gains(ti, j);
                b_k[i] = acc;
            }
            for (std::size_t i = 0; i < m; ++i) {
                for (std::size_t j = 0; j < m; ++j) {
                    n_next(i, j) += z[i] * z[j] * inv_f - b_k[i] * z[j];
                }
            }
        } else {
            transition.apply_transpose(r, r_next);
            transition.sandwich_transpose(big_n, scratch, n_next);
        }
        symmetrize(n_next);

        const Matrix& pred_cov = trace.predicted_covs[ti];
        for (std::size_t i = 0; i < m; ++i) {
            double acc = trace.predicted_means(ti, i);
            for (std::size_t j = 0; j < m; ++j) acc += pred_cov(i, j) * r_next[j];
            out.smoothed_means(ti, i) = acc;
        }
        Matrix pn = matmul(pred_cov, n_next);
        Matrix pnp = matmul(pn, pred_cov);
        Matrix smoothed_cov = pred_cov;
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < m; ++j) smoothed_cov(i, j) -= pnp(i, j);
        }
        symmetrize(smoothed_cov);
        out.smoothed_covs[ti] = std::move(smoothed_cov);

        r = r_next;
        big_n = n_next;
    }

    out.filtered_means = std::move(trace.posterior_means);
    out.filtered_covs = std::move(trace.posterior_covs);
    return out;
}

namespace {

/// Deterministic Nelder-Mead over log-variances. Returns the best vertex.
std::vector<double> nelder_mead(const std::function<double(std::span<const double>)>& objective,
                                std::vector<double> start, std::size_t max_evaluations,
                                double size_tolerance, bool* found_finite) {
    const std::size_t dim = start.size();
    std::vector<std::vector<double>> vertices(dim + 1, start);
    for (std::size_t i = 0; i < dim; ++i) vertices[i + 1][i] += 1.0;

    std::size_t evaluations = 0;
    *found_finite = false;
    const auto eval = [&](std::span<const double> x) {
        ++evaluations;
        const double value = objective(x);
        if (std::isfinite(value)) *found_finite = true;
        return std::isfinite(value) ? value : std::numeric_limits<double>::infinity();
    };

    std::vector<double> values(dim + 1);
    for (std::size_t i = 0; i <= dim; ++i) values[i] = eval(vertices[i]);

    std::vector<double> centroid(dim), reflected(dim), trial(dim);
    while (evaluations < max_evaluations) {
        // Order: best first.
        std::vector<std::size_t> order(dim + 1);
        for (std::size_t i = 0; i <= dim; ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
        const std::size_t best = order.front();
        const std::size_t worst = order.back();
        const std::size_t second_worst = order[dim - 1];

        double size = 0.0;
        for (std::size_t i = 0; i <= dim; ++i) {
            for (std::size_t j = 0; j < dim; ++j) {
                size = std::max(size, std::abs(vertices[i][j] - vertices[best][j]));
            }
        }
        if (size < size_tolerance) break;

        std::fill(centroid.begin(), centroid.end(), 0.0);
        for (std::size_t i = 0; i <= dim; ++i) {
            if (i == worst) continue;
            for (std::size_t j = 0; j < dim; ++j) centroid[j] += vertices[i][j];
        }
        for (std::size_t j = 0; j < dim; ++j) centroid[j] /= static_cast<double>(dim);

        for (std::size_t j = 0; j < dim; ++j) {
            reflected[j] = centroid[j] + (centroid[j] - vertices[worst][j]);
        }
        const double reflected_value = eval(reflected);

        if (reflected_value < values[best]) {
            for (std::size_t j = 0; j < dim; ++j) {
                trial[j] = centroid[j] + 2.0 * (centroid[j] - vertices[worst][j]);
            }
            const double expanded_value = eval(trial);
            if (expanded_value < reflected_value) {
                vertices[worst] = trial;
                values[worst] = expanded_value;
            } else {
                vertices[worst] = reflected;
                values[worst] = reflected_value;
            }
        } else if (reflected_value < values[second_worst]) {
            vertices[worst] = reflected;
            values[worst] = reflected_value;
        } else {
            const bool outside = reflected_value < values[worst];
            const std::vector<double>& base = outside ? reflected : vertices[worst];
            for (std::size_t j = 0; j < dim; ++j) {
                trial[j] = centroid[j] + 0.5 * (base[j] - centroid[j]);
            }
            const double contracted_value = eval(trial);
            if (contracted_value < std::min(reflected_value, values[worst])) {
                vertices[worst] = trial;
                values[worst] = contracted_value;
            } else {
                for (std::size_t i = 0; i <= dim; ++i) {
                    if (i == best) continue;
                    for (std::size_t j = 0; j < dim; ++j) {
                        vertices[i][j] = vertices[best][j] + 0.5 * (vertices[i][j] - vertices[best][j]);
                    }
                    values[i] = eval(vertices[i]);
                    if (evaluations >= max_evaluations) break;
                }
            }
        }
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i <= dim; ++i) {
        if (values[i] < values[best]) best = i;
    }
    return vertices[best];
}

struct SeriesStats {
    std::size_t observed = 0;
    double mean = 0.0;
    double variance = 0.0;  // floored away from zero
    double first_observed = 0.0;
};

SeriesStats observed_stats(const TimeSeries& series) {
    SeriesStats stats;
    double sum = 0.0;
    bool have_first = false;
    for (const Obs& v : series.values()) {
        if (!v) continue;
        sum += *v;
        ++stats.observed;
        if (!have_first) {
            stats.first_observed = *v;
            have_first = true;
        }
    }
    if (stats.observed == 0) {
        raise(Errc::all_missing, "series has no observed values");
    }
    stats.mean = sum / static_cast<double>(stats.observed);
    double ss = 0.0;
    for (const Obs& v : series.values()) {
        if (!v) continue;
        const double d = *v - stats.mean;
        ss += d * d;
    }
    stats.variance = stats.observed > 1 ? ss / static_cast<double>(stats.observed - 1) : 0.0;
    stats.variance = std::max(stats.variance, 1e-12 * (1.0 + stats.mean * stats.mean));
    return stats;
}

StateSpaceModel make_bsm(int frequency, const SeriesStats& stats,
                         std::span<const double> variances) {
    StateSpaceModel model;
    if (frequency >= 2) {
        const std::size_t m = static_cast<std::size_t>(frequency) + 1;
        model.state_dim = m;
        model.transition = Matrix(m, m);
        model.transition(0, 0) = 1.0;
        model.transition(0, 1) = 1.0;
        model.transition(1, 1) = 1.0;
        for (std::size_t j = 2; j < m; ++j) model.transition(2, j) = -1.0;
        for (std::size_t r = 3; r < m; ++r) model.transition(r, r - 1) = 1.0;
        model.observation.assign(m, 0.0);
        model.observation[0] = 1.0;
        model.observation[2] = 1.0;
        model.state_noise = Matrix(m, m);
        model.state_noise(0, 0) = variances[0];
        model.state_noise(1, 1) = variances[1];
        model.state_noise(2, 2) = variances[2];
        model.obs_noise = variances[3];
    } else {
        model.state_dim = 2;
        model.transition = Matrix(2, 2);
        model.transition(0, 0) = 1.0;
        model.transition(0, 1) = 1.0;
        model.transition(1, 1) = 1.0;
        model.observation = {1.0, 0.0};
        model.state_noise = Matrix(2, 2);
        model.state_noise(0, 0) = variances[0];
        model.state_noise(1, 1) = variances[1];
        model.obs_noise = variances[2];
    }
    model.initial_mean.assign(model.state_dim, 0.0);
    model.initial_mean[0] = stats.first_observed;
    model.initial_cov = Matrix(model.state_dim, model.state_dim);
    for (std::size_t i = 0; i < model.state_dim; ++i) {
        model.initial_cov(i, i) = kDiffusePrior * stats.variance;
    }
    return model;
}

}  // namespace

StateSpaceModel fit_bsm(const TimeSeries& series) {
    const std::size_t n = series.size();
    const int f = series.frequency();
    const SeriesStats stats = observed_stats(series);

    if (f >= 2) {
        if (n < 2 * static_cast<std::size_t>(f)) {
            raise(Errc::series_too_short, "structural fit needs n >= 2f");
        }
        std::vector<std::size_t> phase_observed(static_cast<std::size_t>(f), 0);
        for (std::size_t i = 0; i < n; ++i) {
            if (series[i]) ++phase_observed[i % f];
        }
        for (std::size_t j = 0; j < phase_observed.size(); ++j) {
            if (phase_observed[j] == 0) {
                raise(Errc::empty_phase,
                      "phase " + std::to_string(j) + " has no observed values");
            }
        }
    } else if (n < 4) {
        raise(Errc::series_too_short, "local trend fit needs n >= 4");
    }

    const double s2 = stats.variance;
    std::vector<double> start;
    if (f >= 2) {
        start = {std::log(0.1 * s2), std::log(0.01 * s2), std::log(0.1 * s2),
                 std::log(0.5 * s2)};
    } else {
        start = {std::log(0.1 * s2), std::log(0.01 * s2), std::log(0.5 * s2)};
    }

    const std::size_t burn_in = f >= 2 ? static_cast<std::size_t>(f) + 1 : 2;
    const std::span<const Obs> observations(series.values());
    std::vector<double> variances(start.size());
    const auto objective = [&](std::span<const double> log_variances) -> double {
        for (std::size_t i = 0; i < log_variances.size(); ++i) {
            variances[i] = std::exp(log_variances[i]);
        }
        const StateSpaceModel model = make_bsm(f, stats, variances);
        try {
            return -run_filter(model, observations, burn_in, nullptr, nullptr);
        } catch (const Error&) {
            return std::numeric_limits<double>::infinity();
        }
    };

    bool found_finite = false;
    const std::vector<double> best =
        nelder_mead(objective, start, kMaxFitEvaluations, kSimplexTolerance, &found_finite);
    if (!found_finite) {
        raise(Errc::optimization_failed, "likelihood was non-finite at every probe");
    }
    for (std::size_t i = 0; i < best.size(); ++i) variances[i] = std::exp(best[i]);
    return make_bsm(f, stats, variances);
}

ImputationOutcome impute_kalman_struct(const TimeSeries& series) {
    const SeriesStats stats = observed_stats(series);
    std::vector<std::size_t> missing = series.missing_positions();
    if (missing.empty()) {
        return ImputationOutcome{series, {}, Algorithm::kalman_struct};
    }

    // The structural fit needs an anchored start: a missing first entry is
    // patched with the overall mean and keeps that value.
    std::vector<Obs> values = series.values();
    if (!values[0]) values[0] = stats.mean;
    const TimeSeries patched(std::move(values), series.frequency(), series.start());

    const StateSpaceModel model = fit_bsm(patched);
    const KalmanOutput smoothed = kalman_smooth(model, patched.values());

    std::vector<Obs> result = patched.values();
    for (std::size_t t : patched.missing_positions()) {
        double estimate = 0.0;
        for (std::size_t i = 0; i < model.state_dim; ++i) {
            estimate += model.observation[i] * smoothed.smoothed_means(t, i);
        }
        result[t] = estimate;
    }
    return ImputationOutcome{
        TimeSeries(std::move(result), series.frequency(), series.start()),
        std::move(missing), Algorithm::kalman_struct};
}

namespace {

double sample_variance(std::span<const double> xs) {
    if (xs.size() < 2) return 0.0;
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    return ss / static_cast<double>(xs.size() - 1);
}

struct ArFit {
    std::size_t order = 0;
    std::vector<double> coefficients;
    double innovation_variance = 0.0;
};

/// Yule-Walker coefficients by Levinson-Durbin, order selected by AIC
/// n*log(sigma^2) + 2(p+1) over p = 0..max_order.
ArFit fit_ar_yule_walker(std::span<const double> centered, std::size_t max_order) {
    const std::size_t n = centered.size();
    max_order = std::min(max_order, n > 1 ? n - 1 : 0);

    std::vector<double> autocov(max_order + 1, 0.0);
    for (std::size_t k = 0; k <= max_order; ++k) {
        double acc = 0.0;
        for (std::size_t t = 0; t + k < n; ++t) acc += centered[t] * centered[t + k];
        autocov[k] = acc / static_cast<double>(n);
    }

    const double variance_floor = 1e-12 * (1.0 + autocov[0]) + 1e-300;
    ArFit best;
    best.innovation_variance = std::max(autocov[0], variance_floor);
    double best_aic = static_cast<double>(n) * std::log(best.innovation_variance) + 2.0;

    if (autocov[0] <= variance_floor) return best;  // effectively constant

    std::vector<double> phi(max_order + 1, 0.0);
    std::vector<double> previous(max_order + 1, 0.0);
    double sigma2 = autocov[0];
    for (std::size_t p = 1; p <= max_order; ++p) {
        double acc = autocov[p];
        for (std::size_t j = 1; j < p; ++j) acc -= previous[j] * autocov[p - j];
        const double reflection = acc / sigma2;
        phi[p] = reflection;
        for (std::size_t j = 1; j < p; ++j) phi[j] = previous[j] - reflection * previous[p - j];
        sigma2 *= (1.0 - reflection * reflection);
        sigma2 = std::max(sigma2, variance_floor);
        std::copy(phi.begin(), phi.begin() + static_cast<std::ptrdiff_t>(p) + 1,
                  previous.begin());

        const double aic =
            static_cast<double>(n) * std::log(sigma2) + 2.0 * (static_cast<double>(p) + 1.0);
        if (aic < best_aic) {
            best_aic = aic;
            best.order = p;
            best.coefficients.assign(phi.begin() + 1,
                                     phi.begin() + static_cast<std::ptrdiff_t>(p) + 1);
            best.innovation_variance = sigma2;
        }
    }
    return best;
}

/// Companion-form state space for an AR(p); AR(0) degenerates to pure noise.
StateSpaceModel make_ar_model(const ArFit& fit) {
    const std::size_t m = std::max<std::size_t>(fit.order, 1);
    StateSpaceModel model;
    model.state_dim = m;
    model.transition = Matrix(m, m);
    for (std::size_t j = 0; j < fit.order; ++j) model.transition(0, j) = fit.coefficients[j];
    for (std::size_t r = 1; r < m; ++r) model.transition(r, r - 1) = 1.0;
    model.observation.assign(m, 0.0);
    model.observation[0] = 1.0;
    model.state_noise = Matrix(m, m);
    model.state_noise(0, 0) = fit.innovation_variance;
    model.obs_noise = 0.0;
    model.initial_mean.assign(m, 0.0);

    // Stationary covariance from vec(P) = (I - T (x) T)^{-1} vec(Q).
    const std::size_t mm = m * m;
    Matrix system(mm, mm);
    std::vector<double> rhs(mm, 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t j = 0; j < m; ++j) {
            const std::size_t row = i * m + j;
            rhs[row] = model.state_noise(i, j);
            for (std::size_t k = 0; k < m; ++k) {
                for (std::size_t l = 0; l < m; ++l) {
                    const double value = model.transition(i, k) * model.transition(j, l);
                    system(row, k * m + l) = (row == k * m + l ? 1.0 : 0.0) - value;
                }
            }
        }
    }
    std::vector<double> vec_p;
    model.initial_cov = Matrix(m, m);
    if (solve_linear(system, rhs, vec_p)) {
        for (std::size_t i = 0; i < m; ++i) {
            for (std::size_t j = 0; j < m; ++j) model.initial_cov(i, j) = vec_p[i * m + j];
        }
        symmetrize(model.initial_cov);
        const std::vector<double> eigen = symmetric_eigenvalues(model.initial_cov);
        if (eigen.front() < 0.0) {
            model.initial_cov = Matrix(m, m);
            for (std::size_t i = 0; i < m; ++i) {
                model.initial_cov(i, i) = kDiffusePrior * fit.innovation_variance;
            }
        }
    } else {
        for (std::size_t i = 0; i < m; ++i) {
            model.initial_cov(i, i) = kDiffusePrior * fit.innovation_variance;
        }
    }
    return model;
}

}  // namespace

std::size_t select_ar_order(std::span<const double> centered, std::size_t max_order) {
    return fit_ar_yule_walker(centered, max_order).order;
}

ImputationOutcome impute_kalman_arima(const TimeSeries& series) {
    const std::size_t n = series.size();
    if (n < 20) {
        raise(Errc::series_too_short, "AR state-space imputation needs n >= 20");
    }
    const SeriesStats stats = observed_stats(series);
    if (stats.observed < 2) {
        raise(Errc::all_missing, "AR state-space imputation needs >= 2 observed values");
    }
    std::vector<std::size_t> missing = series.missing_positions();
    if (missing.empty()) {
        return ImputationOutcome{series, {}, Algorithm::kalman_arima};
    }

    // Differencing choice on the linearly pre-filled copy; ties prefer d=1
    // so a constant series reduces to pure noise around zero.
    const TimeSeries prefilled = impute_linear(series).series;
    std::vector<double> level(n);
    for (std::size_t i = 0; i < n; ++i) level[i] = *prefilled[i];
    std::vector<double> diffed(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) diffed[i] = level[i + 1] - level[i];
    const int d = sample_variance(diffed) <= sample_variance(level) ? 1 : 0;

    const std::vector<double>& base = d == 1 ? diffed : level;
    double mean = 0.0;
    for (double x : base) mean += x;
    mean /= static_cast<double>(base.size());

    std::vector<double> centered(base.size());
    for (std::size_t i = 0; i < base.size(); ++i) centered[i] = base[i] - mean;
    const ArFit fit = fit_ar_yule_walker(centered, 5);
    const StateSpaceModel model = make_ar_model(fit);

    // Smooth the genuinely gapped (differenced, centered) series.
    std::vector<Obs> gapped;
    if (d == 1) {
        gapped.resize(n - 1);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            if (series[i] && series[i + 1]) gapped[i] = *series[i + 1] - *series[i] - mean;
        }
    } else {
        gapped.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (series[i]) gapped[i] = *series[i] - mean;
        }
    }
    const KalmanOutput smoothed = kalman_smooth(model, gapped);
    std::vector<double> estimate(gapped.size());
    for (std::size_t i = 0; i < gapped.size(); ++i) {
        estimate[i] = smoothed.smoothed_means(i, 0) + mean;
    }

    std::vector<Obs> values = series.values();
    if (d == 0) {
        for (std::size_t t : missing) values[t] = estimate[t];
    } else {
        // estimate[i] approximates y[i+1] - y[i]; integrate each gap from
        // its nearest observed anchor.
        for (std::size_t i = 0; i < missing.size();) {
            std::size_t j = i;
            while (j + 1 < missing.size() && missing[j + 1] == missing[j] + 1) ++j;
            const std::size_t first = missing[i];
            const std::size_t last = missing[j];
            if (first == 0) {
                for (std::size_t t = last + 1; t-- > first;) {
                    values[t] = *values[t + 1] - estimate[t];
                }
            } else {
                for (std::size_t t = first; t <= last; ++t) {
                    values[t] = *values[t - 1] + estimate[t - 1];
                }
            }
            i = j + 1;
        }
    }
    return ImputationOutcome{
        TimeSeries(std::move(values), series.frequency(), series.start()),
        std::move(missing), Algorithm::kalman_arima};
}

}  // namespace tsimpute
