#pragma once

#include "relaq/artifacts.hpp"
#include "relaq/matcher.hpp"
#include "relaq/query.hpp"

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace relaq {

inline constexpr std::array<RelationKind, 3> kRecommendedKinds{
    RelationKind::Similarity, RelationKind::Correlation, RelationKind::Causality};
inline constexpr std::size_t kMaxGuidanceRows = 20;

// Strength an evaluation must reach to count towards confidence.
// Correlation is compared by absolute value.
struct PassThresholds {
    double correlation = 0.8;
    double similarity = 0.8;
    double causality = 0.95;

    [[nodiscard]] bool passes(RelationKind kind, double strength) const;
};

// Compressed-sample shifts of the candidate fragment relative to the focus fragment.
struct LagRange {
    long lo = 0;
    long hi = 0;
};

struct Recommendation {
    std::string series;
    RelationKind kind = RelationKind::Correlation;
    // original samples
    long best_lag = 0;
    double mean_strength = 0.0;
    double confidence = 0.0;
    // passing (fragment, lag) evaluations over the whole lag range
    std::size_t passes = 0;
    std::size_t evaluations = 0;
};

struct GuidanceRow {
    std::string series;
    // one slot per GuidanceMatrix::columns entry; empty when the kind cannot be evaluated
    std::array<std::optional<Recommendation>, 3> cells;

    [[nodiscard]] double max_confidence() const noexcept;
};

struct GuidanceMatrix {
    std::string focus;
    std::array<RelationKind, 3> columns = kRecommendedKinds;
    std::vector<GuidanceRow> rows;
    // distinct fragments the focus box was matched to
    std::size_t focus_fragments = 0;
    LagRange lag_range;

    // Stable sort of the rows by one column's confidence, non-increasing
    // (non-decreasing when ascending). Rows without that cell go last.
    void sort_by(RelationKind kind, bool ascending = false);
    [[nodiscard]] static std::size_t column_of(RelationKind kind);
};

struct RecommendOptions {
    std::optional<LagRange> lag_range;
    PassThresholds thresholds;
    std::size_t max_rows = kMaxGuidanceRows;
    ExecuteOptions execute;
};

// Fragments the focus box is matched to: those assigned to it across the
// query results, or every admissible fragment of a named focus series when
// the query has no results. throws FocusUnresolved for a default focus box
// without results
std::vector<FragmentNode> focus_fragments(const QueryGraph& query, std::size_t focus, const Artifacts& artifacts,
                                          const ExecuteOptions& execute = {});

// cell passes / sum of passes over every cell of the matrix; 0 when nothing passes
void assign_confidence(GuidanceMatrix& matrix);

// throws InvalidQuery, FocusUnresolved, IndexUnavailable
GuidanceMatrix recommend(const QueryGraph& query, std::string_view focus, const Artifacts& artifacts,
                         const RecommendOptions& options = {});

// The query with one cell applied: a new named timebox for the recommended
// series, offset by the best lag from the focus box, and a relalink from the
// focus box whose threshold starts 0.05 below the mean strength.
struct QueryDelta {
    Timebox timebox;
    Relalink relalink;
};

QueryDelta query_delta(const QueryGraph& query, std::string_view focus, const Recommendation& cell);
QueryGraph apply_delta(QueryGraph query, const QueryDelta& delta);

} // namespace relaq
