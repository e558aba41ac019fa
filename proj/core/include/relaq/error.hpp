#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace relaq {

enum class Errc {
    // ingestion
    RaggedRows,
    NonMonotonicTime,
    NonUniformStep,
    EmptyDataset,
    NonNumericCell,
    DuplicateSeriesName,
    EmptySeriesName,
    DuplicateSeriesRow,
    MissingNameColumn,
    // preprocessing
    InvalidParams,
    WindowTooLong,
    StaleArtifacts,
    ArtifactIo,
    // relation kernels
    LengthMismatch,
    TooShort,
    UnknownKey,
    // queries
    SchemaViolation,
    InvalidQuery,
    DegenerateSketch,
    IndexUnavailable,
    FocusUnresolved,
    UnknownSeries,
};

std::string_view to_string(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, std::string detail);
    Error(Errc code, std::string detail, std::size_t row);
    Error(Errc code, std::string detail, std::string path);

    [[nodiscard]] Errc code() const noexcept { return code_; }
    [[nodiscard]] std::string_view name() const noexcept { return to_string(code_); }
    [[nodiscard]] const std::string& detail() const noexcept { return detail_; }
    // 1-based data row for ingestion errors
    [[nodiscard]] std::optional<std::size_t> row() const noexcept { return row_; }
    // JSON pointer for schema violations
    [[nodiscard]] const std::string& path() const noexcept { return path_; }

private:
    Errc code_;
    std::string detail_;
    std::optional<std::size_t> row_;
    std::string path_;
};

} // namespace relaq
