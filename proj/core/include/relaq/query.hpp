#pragma once

#include "relaq/datamodel.hpp"
#include "relaq/relations.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace relaq {

class Artifacts;

enum class MatchMode { Strict, Fuzzy };

std::string_view to_string(MatchMode mode) noexcept;

// Point of a sketched polyline in box coordinates: x along the box width,
// y in [0, 1] from the bottom to the top of the box.
struct SketchPoint {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const SketchPoint&, const SketchPoint&) = default;
};

struct ValueBounds {
    double lo = 0.0;
    double hi = 0.0;

    friend bool operator==(const ValueBounds&, const ValueBounds&) = default;
};

struct Timebox {
    std::string id;
    // absent for a default timebox
    std::optional<std::string> name;
    std::vector<SketchPoint> sketch;
    std::optional<ValueBounds> value_bounds;
    // original samples, relative to the earliest timebox
    long offset = 0;

    [[nodiscard]] bool is_default() const noexcept { return !name.has_value(); }
    [[nodiscard]] bool has_sketch() const noexcept { return !sketch.empty(); }

    friend bool operator==(const Timebox&, const Timebox&) = default;
};

struct Threshold {
    double lo = 0.0;
    double hi = 1.0;

    [[nodiscard]] bool contains(double v) const noexcept { return v >= lo && v <= hi; }

    friend bool operator==(const Threshold&, const Threshold&) = default;
};

struct Relalink {
    std::string id;
    RelationKind kind = RelationKind::Correlation;
    // cause -> effect for causality; otherwise only the lag sign depends on it
    std::string source;
    std::string target;
    Threshold threshold;
    std::optional<std::string> meta_key;
    std::optional<ArithmeticSpec> arithmetic;

    friend bool operator==(const Relalink&, const Relalink&) = default;
};

struct QueryGraph {
    MatchMode mode = MatchMode::Strict;
    PreprocessParams params;
    std::vector<Timebox> timeboxes;
    std::vector<Relalink> relalinks;
    // Granger lag for causality links, in compressed samples
    int max_lag = 4;
    // relative tolerance of the arithmetic "=" comparator
    double tolerance = 1e-6;

    [[nodiscard]] std::optional<std::size_t> box_index(std::string_view id) const;
    [[nodiscard]] const Timebox& box(std::string_view id) const;
    [[nodiscard]] std::size_t source_index(const Relalink& link) const { return *box_index(link.source); }
    [[nodiscard]] std::size_t target_index(const Relalink& link) const { return *box_index(link.target); }
    // offset(target) - offset(source), in original samples
    [[nodiscard]] long required_lag(const Relalink& link) const;

    friend bool operator==(const QueryGraph&, const QueryGraph&) = default;
};

// Structural checks only: ids, endpoints, thresholds, sketches, connectivity.
std::vector<Diagnostic> validate_query(const QueryGraph& query);
// Adds dataset checks: series and label keys exist, parameters match the
// artifacts, the window fits the series and each relation's minimum length.
std::vector<Diagnostic> validate_query(const QueryGraph& query, const Artifacts& artifacts);

// Timebox ids ascending by offset, ties by id.
std::vector<std::string> temporal_order(const QueryGraph& query);
std::vector<std::size_t> temporal_order_indices(const QueryGraph& query);

// throws Error(SchemaViolation) with a JSON pointer to the offending value
QueryGraph parse_query(std::string_view json_text);
std::string serialize_query(const QueryGraph& query);

} // namespace relaq
