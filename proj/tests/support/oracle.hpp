#pragma once

#include "relaq/artifacts.hpp"
#include "relaq/matcher.hpp"
#include "relaq/query.hpp"

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace relaq::testkit {

// Exhaustive enumeration of query matches, written without the matcher's
// node/link sets, temporal ordering or memoization. Only valid for datasets of
// at most 20 series, where every relation-index top list is the full set of
// other series.
struct OracleMatch {
    // (series, start) per timebox, in query order
    std::vector<std::pair<std::uint32_t, std::uint32_t>> assignment;
    std::vector<double> degrees;
    std::vector<LinkInstance> links;
    double score = 0.0;
};

// nullopt when more than `limit` matches exist
std::optional<std::vector<OracleMatch>> brute_force(const QueryGraph& query, const Artifacts& artifacts,
                                                    std::size_t limit);

std::vector<double> oracle_raster(const std::vector<SketchPoint>& sketch, int window);

// Empty string when equal; otherwise a description of the first difference.
std::string compare_with_oracle(const std::vector<ResultGraph>& matcher, std::vector<OracleMatch> oracle,
                                double score_tol = 1e-12);

struct Instance {
    unsigned seed = 0;
    std::shared_ptr<const Artifacts> artifacts;
    QueryGraph query;
};

// Random dataset (2..8 series, 30..200 samples, sampling 2..5, window 4..8
// symbols) and a connected query of 1..4 timeboxes and up to 4 relalinks over
// correlation, similarity, causality, meta and arithmetic.
Instance random_instance(unsigned seed);

std::string describe(const Instance& instance);

} // namespace relaq::testkit
