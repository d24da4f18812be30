#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "support.hpp"
#include "tsimpute/metrics.hpp"

using namespace tsimpute;
using test_support::random_series;

namespace {

// Naive recomputations, accumulated back to front so the summation order
// differs from the implementation.
double oracle_rmse(const TimeSeries& imputed, const TimeSeries& truth,
                   const std::vector<std::size_t>& indices) {
    double acc = 0.0;
    for (std::size_t k = indices.size(); k-- > 0;) {
        const std::size_t i = indices[k];
        acc += (*imputed[i] - *truth[i]) * (*imputed[i] - *truth[i]);
    }
    return std::sqrt(acc / static_cast<double>(indices.size()));
}

double oracle_mape(const TimeSeries& imputed, const TimeSeries& truth,
                   const std::vector<std::size_t>& indices) {
    double acc = 0.0;
    for (std::size_t k = indices.size(); k-- > 0;) {
        const std::size_t i = indices[k];
        acc += std::abs(*imputed[i] - *truth[i]) / std::abs(*truth[i]);
    }
    return acc / static_cast<double>(indices.size());
}

}  // namespace

TEST_SUITE("metrics") {

TEST_CASE("hand-computed examples") {
    const TimeSeries truth = make_series(std::vector<double>{5.0, 4.0, 7.0}, 1);

    SUBCASE("identical series score zero") {
        const std::vector<std::size_t> indices = {0, 1, 2};
        CHECK(rmse(truth, truth, indices) == 0.0);
        CHECK(mape(truth, truth, indices) == 0.0);
    }
    SUBCASE("single index") {
        const TimeSeries imputed = make_series(std::vector<double>{3.0, 2.0, 7.0}, 1);
        const std::vector<std::size_t> index = {0};
        CHECK(rmse(imputed, truth, index) == 2.0);
        CHECK(mape(imputed, truth, std::vector<std::size_t>{1}) == 0.5);
    }
    SUBCASE("two indices with diffs 3 and 4") {
        const TimeSeries imputed = make_series(std::vector<double>{8.0, 8.0, 7.0}, 1);
        const std::vector<std::size_t> indices = {0, 1};
        CHECK(rmse(imputed, truth, indices) ==
              doctest::Approx(std::sqrt(25.0 / 2.0)).epsilon(1e-12));
    }
}

TEST_CASE("error cases") {
    const TimeSeries a = make_series(std::vector<double>{1.0, 2.0}, 1);
    const TimeSeries b = make_series(std::vector<double>{1.0, 2.0, 3.0}, 1);
    const TimeSeries zero = make_series(std::vector<double>{0.0, 2.0}, 1);
    const std::vector<std::size_t> indices = {0};

    CHECK_THROWS_AS((void)rmse(a, b, indices), Error);
    CHECK_THROWS_AS((void)rmse(a, a, std::vector<std::size_t>{}), Error);
    CHECK_THROWS_AS((void)rmse(a, a, std::vector<std::size_t>{5}), Error);
    try {
        (void)mape(a, zero, indices);
        FAIL("expected ZeroTruthValue");
    } catch (const Error& error) {
        CHECK(error.code() == Errc::zero_truth_value);
    }
}

TEST_CASE("matches the naive oracle on random cases") {
    Rng rng(101);
    for (int round = 0; round < 1000; ++round) {
        const std::size_t n = 2 + rng.below(40);
        const TimeSeries truth = random_series(n, 1, rng, 5.0, 2.0);
        const TimeSeries imputed = random_series(n, 1, rng, 5.0, 2.0);
        std::vector<std::size_t> indices;
        for (std::size_t i = 0; i < n; ++i) {
            if (rng.uniform() < 0.4) indices.push_back(i);
        }
        if (indices.empty()) indices.push_back(rng.below(n));

        CHECK(rmse(imputed, truth, indices) ==
              doctest::Approx(oracle_rmse(imputed, truth, indices)).epsilon(1e-12));
        bool truth_has_zero = false;
        for (std::size_t i : indices) truth_has_zero |= (*truth[i] == 0.0);
        if (!truth_has_zero) {
            CHECK(mape(imputed, truth, indices) ==
                  doctest::Approx(oracle_mape(imputed, truth, indices)).epsilon(1e-12));
        }
    }
}

TEST_CASE("scale behaviour and permutation invariance") {
    Rng rng(202);
    for (int round = 0; round < 50; ++round) {
        const std::size_t n = 5 + rng.below(30);
        const TimeSeries truth = random_series(n, 1, rng, 10.0, 3.0);
        const TimeSeries imputed = random_series(n, 1, rng, 10.0, 3.0);
        const double c = rng.uniform() * 4.0 - 2.0;
        if (c == 0.0) continue;

        std::vector<double> scaled_truth(n);
        std::vector<double> scaled_imputed(n);
        for (std::size_t i = 0; i < n; ++i) {
            scaled_truth[i] = c * *truth[i];
            scaled_imputed[i] = c * *imputed[i];
        }
        const TimeSeries struth = make_series(scaled_truth, 1);
        const TimeSeries simputed = make_series(scaled_imputed, 1);

        std::vector<std::size_t> indices = {0, n / 2, n - 1};
        std::vector<std::size_t> shuffled = {n - 1, 0, n / 2};

        CHECK(rmse(simputed, struth, indices) ==
              doctest::Approx(std::abs(c) * rmse(imputed, truth, indices)).epsilon(1e-12));
        CHECK(mape(simputed, struth, indices) ==
              doctest::Approx(mape(imputed, truth, indices)).epsilon(1e-12));
        CHECK(rmse(imputed, truth, indices) ==
              doctest::Approx(rmse(imputed, truth, shuffled)).epsilon(1e-15));
        CHECK(mape(imputed, truth, indices) ==
              doctest::Approx(mape(imputed, truth, shuffled)).epsilon(1e-15));
    }
}

TEST_CASE("evaluate bundles both metrics with the count") {
    const TimeSeries truth = make_series(std::vector<double>{2.0, 4.0}, 1);
    const TimeSeries imputed = make_series(std::vector<double>{1.0, 6.0}, 1);
    const std::vector<std::size_t> indices = {0, 1};
    const ErrorReport report = evaluate(imputed, truth, indices);
    CHECK(report.count == 2);
    CHECK(report.rmse == doctest::Approx(std::sqrt(2.5)).epsilon(1e-12));
    CHECK(report.mape == doctest::Approx(0.5).epsilon(1e-12));
}

}  // TEST_SUITE
