#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace relaq {

// Uniform-step multiple time series. All series share one timeline of
// length M >= 2; the object is validated on construction and immutable.
class Dataset {
public:
    Dataset() = default;

    // timestamps: as written in the source file. Each must parse as a number
    // or an ISO-8601 date/time; they must be strictly increasing with a
    // constant step.
    Dataset(std::vector<std::string> timestamps,
            std::vector<std::string> names,
            std::vector<std::vector<double>> series,
            std::string time_column = "timestamp");

    // Convenience for synthetic data: timestamps 0, 1, ..., M-1.
    static Dataset with_index_time(std::vector<std::string> names,
                                   std::vector<std::vector<double>> series);

    [[nodiscard]] std::size_t series_count() const noexcept { return names_.size(); }
    [[nodiscard]] std::size_t length() const noexcept { return timestamps_.size(); }

    [[nodiscard]] const std::vector<std::string>& names() const noexcept { return names_; }
    [[nodiscard]] const std::string& name(std::size_t i) const { return names_.at(i); }
    [[nodiscard]] std::optional<std::size_t> index_of(std::string_view name) const;

    [[nodiscard]] std::span<const double> values(std::size_t i) const { return series_.at(i); }
    [[nodiscard]] const std::vector<std::vector<double>>& columns() const noexcept { return series_; }

    [[nodiscard]] const std::vector<std::string>& timestamps() const noexcept { return timestamps_; }
    [[nodiscard]] const std::vector<double>& time_values() const noexcept { return time_values_; }
    [[nodiscard]] double step() const noexcept { return step_; }
    [[nodiscard]] const std::string& time_column() const noexcept { return time_column_; }

    friend bool operator==(const Dataset& a, const Dataset& b)
    {
        return a.timestamps_ == b.timestamps_ && a.names_ == b.names_ && a.series_ == b.series_
            && a.time_column_ == b.time_column_;
    }

private:
    std::vector<std::string> timestamps_;
    std::vector<double> time_values_;
    std::vector<std::string> names_;
    std::vector<std::vector<double>> series_;
    std::unordered_map<std::string, std::size_t> index_;
    std::string time_column_ = "timestamp";
    double step_ = 1.0;
};

// Per-series semantic labels from the configuration file.
struct MetaLabels {
    std::vector<std::string> keys;
    // series name -> key -> value; empty cells are absent
    std::map<std::string, std::map<std::string, std::string>> labels;
    // from an optional leading "#step_unit=<unit>" line
    std::string step_unit;

    [[nodiscard]] bool has_key(std::string_view key) const;
    [[nodiscard]] std::optional<std::string> get(std::string_view series, std::string_view key) const;
    [[nodiscard]] bool empty() const noexcept { return labels.empty(); }

    friend bool operator==(const MetaLabels&, const MetaLabels&) = default;
};

struct PreprocessParams {
    int sampling_length = 1;
    int box_length = 1;
    int alphabet_size = 4;

    // round(box_length / sampling_length), half away from zero
    [[nodiscard]] int window_symbols() const;
    // throws Error(InvalidParams)
    void validate() const;

    friend bool operator==(const PreprocessParams&, const PreprocessParams&) = default;
};

enum class Severity { Warning, Error };

struct Diagnostic {
    Severity severity = Severity::Error;
    std::string code;
    std::string subject;
    std::string message;

    friend bool operator==(const Diagnostic&, const Diagnostic&) = default;
};

Dataset parse_dataset(std::string_view csv_text);
MetaLabels parse_config(std::string_view csv_text);
std::vector<Diagnostic> validate(const Dataset& dataset, const MetaLabels& labels);

std::string serialize_dataset(const Dataset& dataset);
std::string serialize_config(const MetaLabels& labels);

// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

} // namespace relaq
