#pragma once

#include <filesystem>
#include <span>
#include <vector>

#include "tsimpute/bench.hpp"
#include "tsimpute/series.hpp"

namespace tsimpute {

/**
 * Reads a `time,value` CSV into a series. Empty cells and the literal
 * token NA mark missing values; rows are taken as consecutive (the time
 * column is advisory and only its first entry is used, as the start
 * index). Parse failures name the offending line, counting the header as
 * line 1.
 */
TimeSeries load_csv(const std::filesystem::path& path, int frequency);

/// Writes a `time,value` CSV; missing entries become NA.
void write_series_csv(const TimeSeries& series, const std::filesystem::path& path);

/// Writes `dataset,algorithm,rate,seed,rmse,mape,runtime_seconds,n_missing`
/// with 17 significant digits on the numeric columns, so finite values
/// round-trip exactly. NaN is written as the token NaN.
void emit_results_csv(std::span<const RunRecord> records, const std::filesystem::path& path);

std::vector<RunRecord> read_results_csv(const std::filesystem::path& path);

enum class PlotMetric { rmse, mape, runtime };

std::string_view to_string(PlotMetric metric);

/**
 * Static SVG strip plot: one circle per record, x = algorithm category
 * (with a deterministic horizontal jitter), y = the chosen metric, color
 * keyed by missingness rate. Records with a NaN metric are skipped. A
 * sibling long-format CSV of the plotted points is written next to the
 * SVG (same name, .csv extension).
 */
void emit_strip_plot(std::span<const RunRecord> records, PlotMetric metric,
                     const std::filesystem::path& path);

}  // namespace tsimpute
