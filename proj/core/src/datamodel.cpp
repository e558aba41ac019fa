#include "relaq/datamodel.hpp"

#include "relaq/error.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <set>

namespace relaq {

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) {
        s.remove_prefix(1);
    }
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

// Splits into lines (LF or CRLF), dropping a UTF-8 BOM and trailing blank lines.
std::vector<std::string_view> split_lines(std::string_view text)
{
    if (text.starts_with("\xEF\xBB\xBF")) {
        text.remove_prefix(3);
    }
    std::vector<std::string_view> lines;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto nl = text.find('\n', pos);
        if (nl == std::string_view::npos) {
            nl = text.size();
        }
        auto line = text.substr(pos, nl - pos);
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        lines.push_back(line);
        pos = nl + 1;
    }
    while (!lines.empty() && trim(lines.back()).empty()) {
        lines.pop_back();
    }
    return lines;
}

std::vector<std::string_view> split_cells(std::string_view line)
{
    std::vector<std::string_view> cells;
    std::size_t pos = 0;
    while (true) {
        auto comma = line.find(',', pos);
        if (comma == std::string_view::npos) {
            cells.push_back(trim(line.substr(pos)));
            break;
        }
        cells.push_back(trim(line.substr(pos, comma - pos)));
        pos = comma + 1;
    }
    return cells;
}

std::optional<double> parse_number(std::string_view s)
{
    if (s.empty()) {
        return std::nullopt;
    }
    if (s.front() == '+') {
        s.remove_prefix(1);
    }
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(value)) {
        return std::nullopt;
    }
    return value;
}

// ISO-8601 "YYYY-MM-DD", optionally followed by ' ' or 'T' and "HH:MM[:SS[.fff]]"
// and an optional trailing 'Z'. Returns seconds since the Unix epoch.
std::optional<double> parse_datetime(std::string_view s)
{
    if (s.size() < 10 || s[4] != '-' || s[7] != '-') {
        return std::nullopt;
    }
    auto field = [&](std::size_t off, std::size_t len) -> std::optional<int> {
        int v = 0;
        auto [ptr, ec] = std::from_chars(s.data() + off, s.data() + off + len, v);
        if (ec != std::errc{} || ptr != s.data() + off + len) {
            return std::nullopt;
        }
        return v;
    };
    auto y = field(0, 4);
    auto mo = field(5, 2);
    auto d = field(8, 2);
    if (!y || !mo || !d) {
        return std::nullopt;
    }
    using namespace std::chrono;
    year_month_day ymd{year{*y}, month{static_cast<unsigned>(*mo)}, day{static_cast<unsigned>(*d)}};
    if (!ymd.ok()) {
        return std::nullopt;
    }
    double seconds = static_cast<double>(sys_days{ymd}.time_since_epoch().count()) * 86400.0;
    std::string_view rest = s.substr(10);
    if (rest.empty()) {
        return seconds;
    }
    if (rest.back() == 'Z') {
        rest.remove_suffix(1);
    }
    if (rest.size() < 6 || (rest[0] != ' ' && rest[0] != 'T') || rest[3] != ':') {
        return std::nullopt;
    }
    auto hh = field(11, 2);
    auto mm = field(14, 2);
    if (!hh || !mm || *hh > 23 || *mm > 59) {
        return std::nullopt;
    }
    seconds += *hh * 3600.0 + *mm * 60.0;
    if (rest.size() > 6) {
        if (rest[6] != ':') {
            return std::nullopt;
        }
        auto ss = parse_number(rest.substr(7));
        if (!ss || *ss < 0.0 || *ss >= 61.0) {
            return std::nullopt;
        }
        seconds += *ss;
    }
    return seconds;
}

std::optional<double> parse_time(std::string_view s)
{
    if (auto n = parse_number(s)) {
        return n;
    }
    return parse_datetime(s);
}

void check_name(std::string_view name, std::size_t column)
{
    if (name.empty()) {
        throw Error(Errc::EmptySeriesName, "column " + std::to_string(column) + " has an empty header");
    }
    if (name.find_first_of(",\n\r") != std::string_view::npos) {
        throw Error(Errc::EmptySeriesName, "series name contains a comma or newline");
    }
}

} // namespace

Dataset::Dataset(std::vector<std::string> timestamps,
                 std::vector<std::string> names,
                 std::vector<std::vector<double>> series,
                 std::string time_column)
    : timestamps_(std::move(timestamps))
    , names_(std::move(names))
    , series_(std::move(series))
    , time_column_(std::move(time_column))
{
    if (names_.empty() || timestamps_.empty()) {
        throw Error(Errc::EmptyDataset, "dataset needs at least one series and one row");
    }
    if (names_.size() != series_.size()) {
        throw Error(Errc::RaggedRows, "series name count does not match column count");
    }
    if (timestamps_.size() < 2) {
        throw Error(Errc::EmptyDataset, "series length must be at least 2");
    }
    for (std::size_t i = 0; i < names_.size(); ++i) {
        check_name(names_[i], i + 1);
        if (!index_.emplace(names_[i], i).second) {
            throw Error(Errc::DuplicateSeriesName, "duplicate series '" + names_[i] + "'");
        }
        if (series_[i].size() != timestamps_.size()) {
            throw Error(Errc::RaggedRows, "series '" + names_[i] + "' has "
                + std::to_string(series_[i].size()) + " values, expected "
                + std::to_string(timestamps_.size()));
        }
        for (std::size_t r = 0; r < series_[i].size(); ++r) {
            if (!std::isfinite(series_[i][r])) {
                throw Error(Errc::NonNumericCell, "non-finite value in '" + names_[i] + "'", r + 1);
            }
        }
    }

    time_values_.reserve(timestamps_.size());
    for (std::size_t r = 0; r < timestamps_.size(); ++r) {
        auto t = parse_time(timestamps_[r]);
        if (!t) {
            throw Error(Errc::NonNumericCell, "unparseable timestamp '" + timestamps_[r] + "'", r + 1);
        }
        if (r > 0 && *t <= time_values_.back()) {
            throw Error(Errc::NonMonotonicTime, "timestamp does not increase", r + 1);
        }
        time_values_.push_back(*t);
    }
    step_ = time_values_[1] - time_values_[0];
    const double tol = 1e-9 * std::max(1.0, std::abs(step_));
    for (std::size_t r = 2; r < time_values_.size(); ++r) {
        if (std::abs((time_values_[r] - time_values_[r - 1]) - step_) > tol) {
            throw Error(Errc::NonUniformStep, "time step differs from the first step", r + 1);
        }
    }
}

Dataset Dataset::with_index_time(std::vector<std::string> names, std::vector<std::vector<double>> series)
{
    std::size_t m = series.empty() ? 0 : series.front().size();
    std::vector<std::string> ts;
    ts.reserve(m);
    for (std::size_t i = 0; i < m; ++i) {
        ts.push_back(std::to_string(i));
    }
    return Dataset(std::move(ts), std::move(names), std::move(series));
}

std::optional<std::size_t> Dataset::index_of(std::string_view name) const
{
    auto it = index_.find(std::string(name));
    if (it == index_.end()) {
        return std::nullopt;
    }
    return it->second;
}

bool MetaLabels::has_key(std::string_view key) const
{
    return std::find(keys.begin(), keys.end(), key) != keys.end();
}

std::optional<std::string> MetaLabels::get(std::string_view series, std::string_view key) const
{
    auto row = labels.find(std::string(series));
    if (row == labels.end()) {
        return std::nullopt;
    }
    auto cell = row->second.find(std::string(key));
    if (cell == row->second.end()) {
        return std::nullopt;
    }
    return cell->second;
}

int PreprocessParams::window_symbols() const
{
    return static_cast<int>(std::lround(static_cast<double>(box_length) / sampling_length));
}

void PreprocessParams::validate() const
{
    if (sampling_length < 1) {
        throw Error(Errc::InvalidParams, "sampling_length must be positive");
    }
    if (box_length < 1) {
        throw Error(Errc::InvalidParams, "box_length must be positive");
    }
    if (box_length < sampling_length) {
        throw Error(Errc::InvalidParams, "box_length must be at least sampling_length");
    }
    if (alphabet_size != 4) {
        throw Error(Errc::InvalidParams, "alphabet_size is fixed at 4");
    }
}

Dataset parse_dataset(std::string_view csv_text)
{
    auto lines = split_lines(csv_text);
    if (lines.empty()) {
        throw Error(Errc::EmptyDataset, "file is empty");
    }
    auto header = split_cells(lines.front());
    if (header.size() < 2) {
        throw Error(Errc::EmptyDataset, "header needs a timestamp column and at least one series");
    }
    if (lines.size() < 2) {
        throw Error(Errc::EmptyDataset, "no data rows");
    }
    std::vector<std::string> names;
    for (std::size_t c = 1; c < header.size(); ++c) {
        check_name(header[c], c);
        names.emplace_back(header[c]);
    }
    std::vector<std::string> timestamps;
    std::vector<std::vector<double>> series(names.size());
    timestamps.reserve(lines.size() - 1);
    for (auto& col : series) {
        col.reserve(lines.size() - 1);
    }
    for (std::size_t r = 1; r < lines.size(); ++r) {
        auto cells = split_cells(lines[r]);
        if (cells.size() != header.size()) {
            throw Error(Errc::RaggedRows, "expected " + std::to_string(header.size()) + " cells, found "
                + std::to_string(cells.size()), r);
        }
        timestamps.emplace_back(cells[0]);
        for (std::size_t c = 1; c < cells.size(); ++c) {
            auto v = parse_number(cells[c]);
            if (!v) {
                throw Error(Errc::NonNumericCell, "column '" + names[c - 1] + "' has '"
                    + std::string(cells[c]) + "'", r);
            }
            series[c - 1].push_back(*v);
        }
    }
    return Dataset(std::move(timestamps), std::move(names), std::move(series), std::string(header[0]));
}

MetaLabels parse_config(std::string_view csv_text)
{
    MetaLabels out;
    auto lines = split_lines(csv_text);
    std::size_t first = 0;
    while (first < lines.size() && trim(lines[first]).starts_with('#')) {
        auto directive = trim(lines[first]).substr(1);
        if (directive.starts_with("step_unit=")) {
            out.step_unit = std::string(trim(directive.substr(10)));
        }
        ++first;
    }
    if (first >= lines.size()) {
        return out;
    }
    auto header = split_cells(lines[first]);
    if (header.empty() || header[0] != "name") {
        throw Error(Errc::MissingNameColumn, "config header must start with 'name'");
    }
    for (std::size_t c = 1; c < header.size(); ++c) {
        out.keys.emplace_back(header[c]);
    }
    for (std::size_t r = first + 1; r < lines.size(); ++r) {
        if (trim(lines[r]).empty()) {
            continue;
        }
        auto cells = split_cells(lines[r]);
        if (cells.size() > header.size()) {
            throw Error(Errc::RaggedRows, "too many cells in config row", r - first);
        }
        std::string name{cells[0]};
        if (name.empty()) {
            throw Error(Errc::EmptySeriesName, "config row without a series name", r - first);
        }
        if (out.labels.contains(name)) {
            throw Error(Errc::DuplicateSeriesRow, "series '" + name + "' listed twice", r - first);
        }
        auto& row = out.labels[name];
        for (std::size_t c = 1; c < cells.size(); ++c) {
            if (!cells[c].empty()) {
                row.emplace(out.keys[c - 1], std::string(cells[c]));
            }
        }
    }
    return out;
}

std::vector<Diagnostic> validate(const Dataset& dataset, const MetaLabels& labels)
{
    std::vector<Diagnostic> out;
    for (const auto& [name, row] : labels.labels) {
        if (!dataset.index_of(name)) {
            out.push_back({Severity::Error, "UnknownSeries", name,
                "config labels series '" + name + "' which is not in the dataset"});
        }
    }
    if (!labels.empty()) {
        for (const auto& name : dataset.names()) {
            if (!labels.labels.contains(name)) {
                out.push_back({Severity::Warning, "UnlabeledSeries", name,
                    "series '" + name + "' has no config row"});
            }
        }
    }
    return out;
}

std::string format_double(double value)
{
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, ptr);
}

std::string serialize_dataset(const Dataset& dataset)
{
    std::string out = dataset.time_column();
    for (const auto& n : dataset.names()) {
        out += ',';
        out += n;
    }
    out += '\n';
    for (std::size_t r = 0; r < dataset.length(); ++r) {
        out += dataset.timestamps()[r];
        for (std::size_t i = 0; i < dataset.series_count(); ++i) {
            out += ',';
            out += format_double(dataset.values(i)[r]);
        }
        out += '\n';
    }
    return out;
}

std::string serialize_config(const MetaLabels& labels)
{
    std::string out;
    if (!labels.step_unit.empty()) {
        out += "#step_unit=" + labels.step_unit + "\n";
    }
    out += "name";
    for (const auto& k : labels.keys) {
        out += ',';
        out += k;
    }
    out += '\n';
    for (const auto& [name, row] : labels.labels) {
        out += name;
        for (const auto& k : labels.keys) {
            out += ',';
            if (auto it = row.find(k); it != row.end()) {
                out += it->second;
            }
        }
        out += '\n';
    }
    return out;
}

} // namespace relaq
