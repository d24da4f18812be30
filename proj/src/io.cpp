#include "tsimpute/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "tsimpute/random.hpp"

namespace tsimpute {

namespace {

std::string format_double(double value) {
    if (std::isnan(value)) return "NaN";
    char buffer[64];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

bool parse_double(const std::string& token, double& out) {
    if (token == "NaN") {
        out = std::numeric_limits<double>::quiet_NaN();
        return true;
    }
    try {
        std::size_t consumed = 0;
        out = std::stod(token, &consumed);
        return consumed == token.size();
    } catch (...) {
        return false;
    }
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream stream(line);
    while (std::getline(stream, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

std::string trimmed(std::string s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.pop_back();
    std::size_t begin = 0;
    while (begin < s.size() && (s[begin] == ' ' || s[begin] == '\t')) ++begin;
    return s.substr(begin);
}

}  // namespace

TimeSeries load_csv(const std::filesystem::path& path, int frequency) {
    std::ifstream file(path);
    if (!file) {
        raise(Errc::file_not_found, "cannot open '" + path.string() + "'");
    }
    std::string line;
    if (!std::getline(file, line)) {
        raise(Errc::empty_file, "'" + path.string() + "' is empty");
    }
    if (trimmed(line) != "time,value") {
        raise(Errc::parse_error,
              "line 1 of '" + path.string() + "': expected header 'time,value'");
    }

    std::vector<Obs> values;
    double start = 1.0;
    bool have_start = false;
    std::size_t line_number = 1;  // the header is line 1
    while (std::getline(file, line)) {
        ++line_number;
        const std::string stripped = trimmed(line);
        if (stripped.empty()) continue;
        const std::vector<std::string> fields = split_csv_line(stripped);
        if (fields.size() != 2) {
            raise(Errc::parse_error, "line " + std::to_string(line_number) + " of '" +
                                         path.string() + "': expected 2 columns, got " +
                                         std::to_string(fields.size()));
        }
        if (!have_start) {
            // The time column is advisory; only the first entry matters,
            // as the start index.
            double t = 1.0;
            if (parse_double(trimmed(fields[0]), t)) start = t;
            have_start = true;
        }
        const std::string value_token = trimmed(fields[1]);
        if (value_token.empty() || value_token == "NA") {
            values.push_back(std::nullopt);
        } else {
            double value = 0.0;
            if (!parse_double(value_token, value) || std::isnan(value)) {
                raise(Errc::parse_error, "line " + std::to_string(line_number) + " of '" +
                                             path.string() + "': bad value '" + value_token +
                                             "'");
            }
            values.push_back(value);
        }
    }
    if (values.empty()) {
        raise(Errc::empty_file, "'" + path.string() + "' contains no data rows");
    }
    return TimeSeries(std::move(values), frequency, start);
}

void write_series_csv(const TimeSeries& series, const std::filesystem::path& path) {
    std::ofstream file(path);
    if (!file) {
        raise(Errc::io_error, "cannot write '" + path.string() + "'");
    }
    file << "time,value\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        file << format_double(series.time_at(i)) << ',';
        if (series[i]) {
            file << format_double(*series[i]);
        } else {
            file << "NA";
        }
        file << '\n';
    }
    if (!file) {
        raise(Errc::io_error, "failed writing '" + path.string() + "'");
    }
}

void emit_results_csv(std::span<const RunRecord> records, const std::filesystem::path& path) {
    std::ofstream file(path);
    if (!file) {
        raise(Errc::io_error, "cannot write '" + path.string() + "'");
    }
    file << "dataset,algorithm,rate,seed,rmse,mape,runtime_seconds,n_missing\n";
    for (const RunRecord& record : records) {
        file << record.dataset << ',' << to_string(record.algorithm) << ','
             << format_double(record.rate) << ',' << record.seed << ','
             << format_double(record.rmse) << ',' << format_double(record.mape) << ','
             << format_double(record.runtime_seconds) << ',' << record.n_missing << '\n';
    }
    if (!file) {
        raise(Errc::io_error, "failed writing '" + path.string() + "'");
    }
}

std::vector<RunRecord> read_results_csv(const std::filesystem::path& path) {
    std::ifstream file(path);
    if (!file) {
        raise(Errc::file_not_found, "cannot open '" + path.string() + "'");
    }
    std::string line;
    if (!std::getline(file, line)) {
        raise(Errc::empty_file, "'" + path.string() + "' is empty");
    }
    std::vector<RunRecord> records;
    std::size_t line_number = 1;
    while (std::getline(file, line)) {
        ++line_number;
        const std::string stripped = trimmed(line);
        if (stripped.empty()) continue;
        const std::vector<std::string> fields = split_csv_line(stripped);
        const auto fail = [&](const std::string& what) {
            raise(Errc::parse_error,
                  "line " + std::to_string(line_number) + " of '" + path.string() +
                      "': " + what);
        };
        if (fields.size() != 8) fail("expected 8 columns");
        RunRecord record;
        record.dataset = trimmed(fields[0]);
        record.algorithm = algorithm_from_string(trimmed(fields[1]));
        double rate = 0.0, rmse_value = 0.0, mape_value = 0.0, runtime = 0.0, seed = 0.0,
               n_missing = 0.0;
        if (!parse_double(trimmed(fields[2]), rate)) fail("bad rate");
        if (!parse_double(trimmed(fields[3]), seed)) fail("bad seed");
        if (!parse_double(trimmed(fields[4]), rmse_value)) fail("bad rmse");
        if (!parse_double(trimmed(fields[5]), mape_value)) fail("bad mape");
        if (!parse_double(trimmed(fields[6]), runtime)) fail("bad runtime");
        if (!parse_double(trimmed(fields[7]), n_missing)) fail("bad n_missing");
        record.rate = rate;
        record.seed = static_cast<std::uint64_t>(seed);
        record.rmse = rmse_value;
        record.mape = mape_value;
        record.runtime_seconds = runtime;
        record.n_missing = static_cast<std::size_t>(n_missing);
        records.push_back(std::move(record));
    }
    return records;
}

std::string_view to_string(PlotMetric metric) {
    switch (metric) {
        case PlotMetric::rmse: return "rmse";
        case PlotMetric::mape: return "mape";
        case PlotMetric::runtime: return "runtime";
    }
    return "unknown";
}

namespace {

double metric_value(const RunRecord& record, PlotMetric metric) {
    switch (metric) {
        case PlotMetric::rmse: return record.rmse;
        case PlotMetric::mape: return record.mape;
        case PlotMetric::runtime: return record.runtime_seconds;
    }
    return 0.0;
}

const char* kPalette[] = {"#1b9e77", "#d95f02", "#7570b3", "#e7298a",
                          "#66a61e", "#e6ab02", "#a6761d", "#666666"};

}  // namespace

void emit_strip_plot(std::span<const RunRecord> records, PlotMetric metric,
                     const std::filesystem::path& path) {
    struct Point {
        const RunRecord* record;
        double value;
    };
    std::vector<Point> points;
    for (const RunRecord& record : records) {
        const double value = metric_value(record, metric);
        if (!std::isnan(value)) points.push_back({&record, value});
    }
    if (points.empty()) {
        raise(Errc::no_plottable_records, "every record has a NaN " +
                                              std::string(to_string(metric)) + " value");
    }

    std::vector<std::string> categories;
    std::vector<double> rates;
    for (const Point& point : points) {
        const std::string label(to_string(point.record->algorithm));
        if (std::find(categories.begin(), categories.end(), label) == categories.end()) {
            categories.push_back(label);
        }
        if (std::find(rates.begin(), rates.end(), point.record->rate) == rates.end()) {
            rates.push_back(point.record->rate);
        }
    }
    std::sort(categories.begin(), categories.end());
    std::sort(rates.begin(), rates.end());

    double lo = points.front().value;
    double hi = lo;
    for (const Point& point : points) {
        lo = std::min(lo, point.value);
        hi = std::max(hi, point.value);
    }
    if (hi - lo < 1e-12) {
        hi += 1.0;
        lo -= 1.0;
    }
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;

    const double width = 960.0, height = 600.0;
    const double left = 80.0, right = width - 160.0, top = 50.0, bottom = height - 70.0;
    const double slot = (right - left) / static_cast<double>(categories.size());
    const auto y_of = [&](double v) {
        return bottom - (v - lo) / (hi - lo) * (bottom - top);
    };

    std::ofstream svg(path);
    if (!svg) {
        raise(Errc::io_error, "cannot write '" + path.string() + "'");
    }
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << width / 2 << "\" y=\"28\" text-anchor=\"middle\" "
        << "font-family=\"sans-serif\" font-size=\"18\">" << to_string(metric)
        << " by algorithm</text>\n";

    // Axes and ticks.
    svg << "<line x1=\"" << left << "\" y1=\"" << bottom << "\" x2=\"" << right << "\" y2=\""
        << bottom << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
        << bottom << "\" stroke=\"black\"/>\n";
    for (int tick = 0; tick <= 5; ++tick) {
        const double value = lo + (hi - lo) * tick / 5.0;
        const double y = y_of(value);
        char label[32];
        std::snprintf(label, sizeof(label), "%.4g", value);
        svg << "<line x1=\"" << left - 5 << "\" y1=\"" << y << "\" x2=\"" << left
            << "\" y2=\"" << y << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << left - 10 << "\" y=\"" << y + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" << label
            << "</text>\n";
    }
    for (std::size_t c = 0; c < categories.size(); ++c) {
        const double x = left + slot * (static_cast<double>(c) + 0.5);
        svg << "<text x=\"" << x << "\" y=\"" << bottom + 20
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
            << categories[c] << "</text>\n";
    }

    // Points, deterministically jittered inside their category slot.
    for (const Point& point : points) {
        const std::string label(to_string(point.record->algorithm));
        const std::size_t c = static_cast<std::size_t>(
            std::find(categories.begin(), categories.end(), label) - categories.begin());
        const std::size_t rate_index = static_cast<std::size_t>(
            std::find(rates.begin(), rates.end(), point.record->rate) - rates.begin());
        Rng jitter(point.record->seed * 1315423911ull + rate_index * 2654435761ull + c);
        const double offset = (jitter.uniform() - 0.5) * slot * 0.6;
        const double x = left + slot * (static_cast<double>(c) + 0.5) + offset;
        svg << "<circle class=\"pt\" cx=\"" << x << "\" cy=\"" << y_of(point.value)
            << "\" r=\"2.5\" fill=\"" << kPalette[rate_index % 8]
            << "\" fill-opacity=\"0.7\"/>\n";
    }

    // Rate legend.
    for (std::size_t r = 0; r < rates.size(); ++r) {
        const double y = top + 20.0 * static_cast<double>(r);
        svg << "<circle cx=\"" << right + 20 << "\" cy=\"" << y << "\" r=\"4\" fill=\""
            << kPalette[r % 8] << "\"/>\n";
        char label[32];
        std::snprintf(label, sizeof(label), "rate %.3g", rates[r]);
        svg << "<text x=\"" << right + 30 << "\" y=\"" << y + 4
            << "\" font-family=\"sans-serif\" font-size=\"12\">" << label << "</text>\n";
    }
    svg << "</svg>\n";
    if (!svg) {
        raise(Errc::io_error, "failed writing '" + path.string() + "'");
    }

    // Long-format sibling CSV of the plotted points.
    std::filesystem::path csv_path = path;
    csv_path.replace_extension(".csv");
    std::ofstream csv(csv_path);
    if (!csv) {
        raise(Errc::io_error, "cannot write '" + csv_path.string() + "'");
    }
    csv << "dataset,algorithm,rate,seed,metric,value\n";
    for (const Point& point : points) {
        csv << point.record->dataset << ',' << to_string(point.record->algorithm) << ','
            << format_double(point.record->rate) << ',' << point.record->seed << ','
            << to_string(metric) << ',' << format_double(point.value) << '\n';
    }
}

}  // namespace tsimpute
