#include "tsimpute/errors.hpp"

namespace tsimpute {

std::string_view to_string(Errc code) {
    switch (code) {
        case Errc::empty_series: return "EmptySeries";
        case Errc::invalid_frequency: return "InvalidFrequency";
        case Errc::missing_values_present: return "MissingValuesPresent";
        case Errc::lag_out_of_range: return "LagOutOfRange";
        case Errc::zero_variance: return "ZeroVariance";
        case Errc::frequency_too_low: return "FrequencyTooLow";
        case Errc::series_too_short: return "SeriesTooShort";
        case Errc::neighborhood_too_small: return "NeighborhoodTooSmall";
        case Errc::non_increasing_x: return "NonIncreasingX";
        case Errc::already_missing: return "AlreadyMissing";
        case Errc::negative_rate: return "NegativeRate";
        case Errc::all_missing: return "AllMissing";
        case Errc::empty_phase: return "EmptyPhase";
        case Errc::degenerate_innovation: return "DegenerateInnovation";
        case Errc::optimization_failed: return "OptimizationFailed";
        case Errc::length_mismatch: return "LengthMismatch";
        case Errc::empty_index_set: return "EmptyIndexSet";
        case Errc::index_out_of_range: return "IndexOutOfRange";
        case Errc::zero_truth_value: return "ZeroTruthValue";
        case Errc::file_not_found: return "FileNotFound";
        case Errc::parse_error: return "ParseError";
        case Errc::empty_file: return "EmptyFile";
        case Errc::io_error: return "IoError";
        case Errc::incomplete_dataset: return "IncompleteDataset";
        case Errc::no_plottable_records: return "NoPlottableRecords";
    }
    return "UnknownError";
}

int exit_code(Errc code) {
    switch (code) {
        case Errc::degenerate_innovation:
        case Errc::optimization_failed:
            return 3;
        default:
            return 2;
    }
}

}  // namespace tsimpute
