#pragma once

#include "relaq/artifacts.hpp"
#include "relaq/query.hpp"

#include <atomic>
#include <chrono>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace relaq {

// Trend-match admission threshold for sketched timeboxes.
inline constexpr double kTrendThreshold = 0.7;
inline constexpr std::size_t kDefaultResultCap = 10000;

// One sliding-window fragment. `start` is in compressed samples; the fragment
// covers window_symbols compressed samples.
struct FragmentNode {
    std::uint32_t series = 0;
    std::uint32_t start = 0;
    double degree = 1.0;

    friend bool operator==(const FragmentNode&, const FragmentNode&) = default;
};

struct LinkInstance {
    double strength = 0.0;
    // original samples, start(target) - start(source)
    long lag = 0;
    bool satisfied = false;

    friend bool operator==(const LinkInstance&, const LinkInstance&) = default;
};

// assignment[i] belongs to query.timeboxes[i]; links[k] to query.relalinks[k].
struct ResultGraph {
    std::vector<FragmentNode> assignment;
    std::vector<LinkInstance> links;
    double score = 0.0;

    friend bool operator==(const ResultGraph&, const ResultGraph&) = default;
};

// Y_k: the node pairs of X_source x X_target that pass the lag check, with
// their strength. In strict mode only pairs inside the threshold are kept; in
// fuzzy mode pairs outside it are kept too, flagged unsatisfied.
struct LinkSet {
    struct Edge {
        std::uint32_t source = 0;
        std::uint32_t target = 0;
        LinkInstance instance;
    };

    std::size_t source_box = 0;
    std::size_t target_box = 0;
    std::vector<Edge> edges;
    std::vector<std::vector<std::uint32_t>> by_source;
    std::vector<std::vector<std::uint32_t>> by_target;
    std::unordered_map<std::uint64_t, std::uint32_t> lookup;

    [[nodiscard]] const Edge* find(std::uint32_t source, std::uint32_t target) const;
};

struct DatasetGraph {
    // X_i per timebox, in query order
    std::vector<std::vector<FragmentNode>> nodes;
    // Y_k per relalink, in query order
    std::vector<LinkSet> links;
};

// Candidate starts 0 .. compressed_length - window_symbols.
// throws WindowTooLong
std::vector<FragmentNode> enumerate_fragments(std::size_t compressed_length, int window_symbols,
                                              std::uint32_t series = 0);

// Samples the polyline at window_symbols equally spaced x positions across its
// own x span. Fuzzy mode z-normalizes the samples. throws DegenerateSketch
std::vector<double> rasterize_sketch(std::span<const SketchPoint> sketch, int window_symbols, MatchMode mode);

// Strict: both inputs are already in normalized box coordinates,
// d = max(0, 1 - ED / sqrt(L)). Fuzzy: both are z-normalized first,
// d = max(0, 1 - ED / (2 sqrt(L))). throws LengthMismatch
double trend_match_degree(std::span<const double> fragment, std::span<const double> raster, MatchMode mode);

// Degree of one fragment against a timebox sketch. Strict mode compares the
// min-max normalized fragment with the sketch mapped through the box's value
// bounds; fuzzy mode takes the better of the strict and shape-only degrees.
double fragment_degree(const Artifacts& artifacts, const Timebox& box, std::uint32_t series, std::uint32_t start,
                       MatchMode mode);

// Series a timebox may be matched against: its own series if named, otherwise
// the top candidates of the relation index of the relalink joining it to the
// nearest named timebox.
std::vector<std::uint32_t> candidate_series(const QueryGraph& query, std::size_t box, const Artifacts& artifacts);

// X_i: fragments of the candidate series passing the trend (>= 0.7) and value
// bound filters.
std::vector<FragmentNode> filter_nodes(const QueryGraph& query, std::size_t box, const Artifacts& artifacts);

bool lag_accepted(long realized, long required, int sampling_length, MatchMode mode) noexcept;

LinkSet build_links(const QueryGraph& query, std::size_t link, const DatasetGraph& graph, const Artifacts& artifacts);

DatasetGraph build_dataset_graph(const QueryGraph& query, const Artifacts& artifacts);

// Values of a fragment, as handed to the relation kernels.
FragmentView fragment_view(const Artifacts& artifacts, const FragmentNode& node);

// Sum of degrees plus |strength| of satisfied links.
double score(const ResultGraph& g);

// Number of relalinks allowed to be unsatisfied in a result.
int unsatisfied_budget(MatchMode mode) noexcept;

struct SearchOptions {
    std::size_t cap = kDefaultResultCap;
    bool memoize = true;
    const std::atomic<bool>* cancel = nullptr;
    std::optional<std::chrono::steady_clock::time_point> deadline;
    // strict weak order placing better results first; defaults to score only
    std::function<bool(const ResultGraph&, const ResultGraph&)> better;
};

struct SearchOutcome {
    std::vector<ResultGraph> results;
    std::size_t found = 0;
    bool truncated = false;
    bool cancelled = false;
    std::size_t expansions = 0;
    std::size_t memo_hits = 0;
};

// Depth-first search over timeboxes in temporal order. Partial assignments are
// extended only through link sets; dead-end states keyed by (depth, nodes of
// the still-linked prefix boxes, remaining unsatisfied budget) are memoized.
SearchOutcome search(const QueryGraph& query, const DatasetGraph& graph, const SearchOptions& options = {});

struct Histogram {
    double lo = 0.0;
    double hi = 1.0;
    std::vector<std::size_t> counts;
    double mean = 0.0;
    double min = 0.0;
    double max = 0.0;
    std::size_t n = 0;
};

struct ColumnSummary {
    std::string id;
    // "fragment" or the relation kind
    std::string type;
    Histogram distribution;
};

struct Alternative {
    std::string series;
    double mean_score = 0.0;
    // mean_score divided by the best mean_score of the list
    double opacity = 0.0;
    std::size_t count = 0;
};

struct LinkStats {
    std::string id;
    RelationKind kind = RelationKind::Correlation;
    double mean_strength = 0.0;
    std::size_t satisfied = 0;
    // realized lag (original samples) -> number of results
    std::map<long, std::size_t> lags;
};

struct QuerySummary {
    std::vector<ColumnSummary> columns;
    // per original time step, the number of result fragments covering it
    std::vector<std::size_t> occurrence;
    // default timebox id -> series completing it
    std::map<std::string, std::vector<Alternative>> alternatives;
    std::vector<LinkStats> links;
};

struct QueryResult {
    std::vector<ResultGraph> results;
    QuerySummary summary;
    std::size_t found = 0;
    bool truncated = false;
    bool cancelled = false;
};

struct ExecuteOptions {
    std::size_t cap = kDefaultResultCap;
    bool memoize = true;
    const std::atomic<bool>* cancel = nullptr;
    std::optional<std::chrono::milliseconds> timeout;
};

// Ranking: score descending, then fragment starts in temporal order, then
// series names in temporal order.
bool ranks_before(const QueryGraph& query, const Artifacts& artifacts, const ResultGraph& a, const ResultGraph& b);

QuerySummary summarize(const QueryGraph& query, const Artifacts& artifacts, std::span<const ResultGraph> results);

// throws InvalidQuery (with the diagnostics) when validation fails,
// IndexUnavailable when a needed relation index failed to build
QueryResult execute_query(const QueryGraph& query, const Artifacts& artifacts, const ExecuteOptions& options = {});

} // namespace relaq
