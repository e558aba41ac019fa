#include "relaq/error.hpp"

namespace relaq {

std::string_view to_string(Errc code) noexcept
{
    switch (code) {
    case Errc::RaggedRows: return "RaggedRows";
    case Errc::NonMonotonicTime: return "NonMonotonicTime";
    case Errc::NonUniformStep: return "NonUniformStep";
    case Errc::EmptyDataset: return "EmptyDataset";
    case Errc::NonNumericCell: return "NonNumericCell";
    case Errc::DuplicateSeriesName: return "DuplicateSeriesName";
    case Errc::EmptySeriesName: return "EmptySeriesName";
    case Errc::DuplicateSeriesRow: return "DuplicateSeriesRow";
    case Errc::MissingNameColumn: return "MissingNameColumn";
    case Errc::InvalidParams: return "InvalidParams";
    case Errc::WindowTooLong: return "WindowTooLong";
    case Errc::StaleArtifacts: return "StaleArtifacts";
    case Errc::ArtifactIo: return "ArtifactIo";
    case Errc::LengthMismatch: return "LengthMismatch";
    case Errc::TooShort: return "TooShort";
    case Errc::UnknownKey: return "UnknownKey";
    case Errc::SchemaViolation: return "SchemaViolation";
    case Errc::InvalidQuery: return "InvalidQuery";
    case Errc::DegenerateSketch: return "DegenerateSketch";
    case Errc::IndexUnavailable: return "IndexUnavailable";
    case Errc::FocusUnresolved: return "FocusUnresolved";
    case Errc::UnknownSeries: return "UnknownSeries";
    }
    return "Unknown";
}

namespace {

std::string compose(Errc code, const std::string& detail)
{
    std::string msg{to_string(code)};
    if (!detail.empty()) {
        msg += ": ";
        msg += detail;
    }
    return msg;
}

} // namespace

Error::Error(Errc code, std::string detail)
    : std::runtime_error(compose(code, detail))
    , code_(code)
    , detail_(std::move(detail))
{
}

Error::Error(Errc code, std::string detail, std::size_t row)
    : std::runtime_error(compose(code, detail + " (row " + std::to_string(row) + ")"))
    , code_(code)
    , detail_(std::move(detail))
    , row_(row)
{
}

Error::Error(Errc code, std::string detail, std::string path)
    : std::runtime_error(compose(code, detail + " at " + path))
    , code_(code)
    , detail_(std::move(detail))
    , path_(std::move(path))
{
}

} // namespace relaq
