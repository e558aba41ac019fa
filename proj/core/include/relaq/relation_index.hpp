#pragma once

#include "relaq/relations.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace relaq {

struct RankedSeries {
    std::string name;
    double strength = 0.0;

    friend bool operator==(const RankedSeries&, const RankedSeries&) = default;
};

// Whole-length pairwise strengths of one relation kind, with every series'
// partners listed in descending strength (ties by name). For causality the
// lists are keyed by the cause.
class RelationIndex {
public:
    RelationIndex() = default;
    // strengths: row-major N x N, strengths[from * N + to]; the diagonal is ignored
    RelationIndex(RelationKind kind, std::vector<std::string> names, std::vector<double> strengths);

    [[nodiscard]] RelationKind kind() const noexcept { return kind_; }
    [[nodiscard]] const std::vector<std::string>& names() const noexcept { return names_; }
    [[nodiscard]] std::size_t size() const noexcept { return names_.size(); }

    [[nodiscard]] const std::vector<RankedSeries>& order(std::string_view series) const;
    [[nodiscard]] const std::vector<RankedSeries>& order(std::size_t series) const { return order_.at(series); }
    // Series ranked by their strength towards `series` (differs from order() only for causality).
    [[nodiscard]] std::vector<RankedSeries> incoming(std::string_view series) const;
    [[nodiscard]] double strength(std::size_t from, std::size_t to) const { return strengths_.at(from * names_.size() + to); }
    [[nodiscard]] std::size_t position(std::string_view series) const;

    // First n partners of `series` (outgoing, or incoming for causality effects).
    [[nodiscard]] std::vector<std::string> top(std::string_view series, std::size_t n, bool incoming = false) const;

    friend bool operator==(const RelationIndex& a, const RelationIndex& b)
    {
        return a.kind_ == b.kind_ && a.names_ == b.names_ && a.order_ == b.order_;
    }

private:
    std::vector<RankedSeries> rank(std::size_t series, bool incoming) const;

    RelationKind kind_ = RelationKind::Correlation;
    std::vector<std::string> names_;
    std::vector<double> strengths_;
    std::vector<std::vector<RankedSeries>> order_;
};

// Pairwise strengths on whole compressed series: correlation and causality on
// the raw compressed values, similarity on the min-max normalized ones.
// Causality uses the largest lag <= max_lag the length supports.
RelationIndex build_relation_index(RelationKind kind, std::vector<std::string> names,
                                   std::span<const std::vector<double>> raw,
                                   std::span<const std::vector<double>> minmax, int max_lag = 4);

inline constexpr std::size_t kDefaultCandidateCount = 20;

} // namespace relaq
