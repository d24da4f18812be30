#include <doctest.h>

#include <cmath>

#include "support.hpp"
#include "tsimpute/series.hpp"

using namespace tsimpute;
using test_support::random_series;

namespace {

bool throws_with(Errc expected, const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& error) {
        return error.code() == expected;
    }
    return false;
}

}  // namespace

TEST_SUITE("series") {

TEST_CASE("make_series basic construction") {
    const std::vector<double> working_hours = {8.2, 8.2, 7.9, 8.3, 7.2,
                                               8.2, 8.5, 7.2, 8.7, 7.1};
    const TimeSeries series = make_series(working_hours, 5);
    CHECK(series.size() == 10);
    CHECK(series.frequency() == 5);
    CHECK(series.is_complete());
    CHECK(*series[3] == 8.3);

    const TimeSeries single = make_series(std::vector<double>{1.0}, 1);
    CHECK(single.size() == 1);

    CHECK(throws_with(Errc::empty_series, [] { make_series(std::vector<double>{}, 1); }));
    CHECK(throws_with(Errc::invalid_frequency,
                      [] { make_series(std::vector<double>{1.0}, 0); }));
}

TEST_CASE("make_series copies its input") {
    std::vector<Obs> values = {1.0, std::nullopt, 3.0};
    const TimeSeries series = make_series(values, 1);
    values[0] = 99.0;
    CHECK(*series[0] == 1.0);
    CHECK(!series[1].has_value());
    CHECK(series.observed_count() == 2);
    CHECK(series.missing_positions() == std::vector<std::size_t>{1});
}

TEST_CASE("acf lag zero is exactly one") {
    Rng rng(7);
    const AcfResult result = acf(random_series(50, 1, rng), 10);
    CHECK(result.coefficients[0] == 1.0);
    CHECK(result.n == 50);
    CHECK(result.significance_bound == doctest::Approx(1.96 / std::sqrt(50.0)).epsilon(1e-12));
}

TEST_CASE("acf of an alternating series at lag one") {
    // +1,-1,+1,... has mean 0, so the biased estimator gives -(n-1)/n.
    std::vector<double> values(100);
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = i % 2 == 0 ? 1.0 : -1.0;
    const AcfResult result = acf(make_series(values, 1), 1);
    CHECK(result.coefficients[1] == doctest::Approx(-0.99).epsilon(1e-12));
}

TEST_CASE("acf of white noise stays inside the significance bound") {
    // Aggregated over 25 seeds so the 90% requirement is far from the
    // binomial noise floor.
    std::size_t within = 0;
    std::size_t total = 0;
    for (std::uint64_t seed = 1; seed <= 25; ++seed) {
        Rng rng(seed);
        const AcfResult result = acf(random_series(1000, 1, rng), 20);
        for (std::size_t lag = 1; lag <= 20; ++lag) {
            within += std::abs(result.coefficients[lag]) <= result.significance_bound ? 1 : 0;
            ++total;
        }
    }
    CHECK(static_cast<double>(within) / static_cast<double>(total) >= 0.9);
}

TEST_CASE("acf error cases") {
    CHECK(throws_with(Errc::missing_values_present, [] {
        acf(make_series(std::vector<Obs>{1.0, std::nullopt, 3.0}, 1), 1);
    }));
    CHECK(throws_with(Errc::lag_out_of_range, [] {
        acf(make_series(std::vector<double>{1.0, 2.0, 3.0}, 1), 3);
    }));
    CHECK(throws_with(Errc::zero_variance, [] {
        acf(make_series(std::vector<double>{5.0, 5.0, 5.0, 5.0}, 1), 2);
    }));
}

TEST_CASE("acf symmetry and shift invariance") {
    Rng rng(11);
    for (int round = 0; round < 10; ++round) {
        const std::vector<double> values = test_support::random_values(60, rng, 2.0, 3.0);
        std::vector<double> negated(values.size());
        std::vector<double> shifted(values.size());
        for (std::size_t i = 0; i < values.size(); ++i) {
            negated[i] = -values[i];
            shifted[i] = values[i] + 17.5;
        }
        const AcfResult base = acf(make_series(values, 1), 12);
        const AcfResult flip = acf(make_series(negated, 1), 12);
        const AcfResult shift = acf(make_series(shifted, 1), 12);
        for (std::size_t lag = 0; lag <= 12; ++lag) {
            CHECK(base.coefficients[lag] == flip.coefficients[lag]);
            CHECK(base.coefficients[lag] ==
                  doctest::Approx(shift.coefficients[lag]).epsilon(1e-12));
            CHECK(std::abs(base.coefficients[lag]) <= 1.0 + 1e-12);
        }
    }
}

TEST_CASE("create_lags hand-traced example") {
    const TimeSeries series = make_series(std::vector<double>{1, 2, 3, 4, 5}, 1);
    const LagMatrix matrix = create_lags(series, 2);
    CHECK(matrix.rows() == 3);
    CHECK(matrix.columns() == 3);
    CHECK(LagMatrix::column_name(0) == "x");
    CHECK(LagMatrix::column_name(2) == "lag_2");

    const double expected_x[] = {3, 4, 5};
    const double expected_lag1[] = {2, 3, 4};
    const double expected_lag2[] = {1, 2, 3};
    for (std::size_t row = 0; row < 3; ++row) {
        CHECK(*matrix.cell(row, 0) == expected_x[row]);
        CHECK(*matrix.cell(row, 1) == expected_lag1[row]);
        CHECK(*matrix.cell(row, 2) == expected_lag2[row]);
    }
}

TEST_CASE("create_lags minimal and error cases") {
    const LagMatrix minimal = create_lags(make_series(std::vector<double>{1, 2}, 1), 1);
    CHECK(minimal.rows() == 1);
    CHECK(*minimal.cell(0, 0) == 2.0);
    CHECK(*minimal.cell(0, 1) == 1.0);

    CHECK(throws_with(Errc::lag_out_of_range, [] {
        create_lags(make_series(std::vector<double>{1, 2, 3}, 1), 3);
    }));
    CHECK(throws_with(Errc::lag_out_of_range, [] {
        create_lags(make_series(std::vector<double>{1, 2, 3}, 1), 0);
    }));
}

TEST_CASE("create_lags maps every cell back to the source index") {
    Rng rng(23);
    for (int round = 0; round < 20; ++round) {
        const std::size_t n = 5 + rng.below(46);
        const std::size_t lags = 1 + rng.below(std::min<std::size_t>(10, n - 1));
        const TimeSeries complete = random_series(n, 1, rng);
        const TimeSeries series = test_support::amputate_bernoulli(complete, 0.2, rng, 1);
        const LagMatrix matrix = create_lags(series, lags);
        REQUIRE(matrix.rows() == n - lags);
        for (std::size_t row = 0; row < matrix.rows(); ++row) {
            for (std::size_t col = 0; col < matrix.columns(); ++col) {
                const Obs& expected = series[lags + row - col];
                CHECK(matrix.cell(row, col) == expected);
            }
        }
    }
}

}  // TEST_SUITE
