#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace tsimpute {

/// One code per contract failure the library can signal, grouped by module.
enum class Errc {
    // series
    empty_series,
    invalid_frequency,
    missing_values_present,
    lag_out_of_range,
    zero_variance,
    // decomposition
    frequency_too_low,
    series_too_short,
    neighborhood_too_small,
    non_increasing_x,
    // missing-data simulation
    already_missing,
    negative_rate,
    // imputation
    all_missing,
    empty_phase,
    // state space
    degenerate_innovation,
    optimization_failed,
    // metrics
    length_mismatch,
    empty_index_set,
    index_out_of_range,
    zero_truth_value,
    // io / benchmark
    file_not_found,
    parse_error,
    empty_file,
    io_error,
    incomplete_dataset,
    no_plottable_records,
};

std::string_view to_string(Errc code);

/// All library errors are thrown as this type; `code()` identifies the
/// contract that was violated, the message carries specifics.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void raise(Errc code, const std::string& message) {
    throw Error(code, message);
}

/// Process exit code the CLI uses for a given failure:
/// 2 = bad input data, 3 = internal numeric failure.
int exit_code(Errc code);

}  // namespace tsimpute
