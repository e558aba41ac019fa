#pragma once

#include "relaq/artifacts.hpp"
#include "relaq/error.hpp"
#include "relaq/matcher.hpp"
#include "relaq/recommender.hpp"
#include "relaq/trend_trie.hpp"

#include <span>
#include <string>
#include <string_view>

// Wire formats shared by the CLI and the HTTP service. Fragment starts and
// lengths are reported in original samples.
namespace relaq {

std::string results_json(const QueryGraph& query, const Artifacts& artifacts, const QueryResult& result);

// One row per (result, timebox): result,score,box,series,start,length,degree,start_time,end_time
std::string results_csv(const QueryGraph& query, const Artifacts& artifacts, const QueryResult& result);

std::string guidance_json(const QueryGraph& query, const GuidanceMatrix& matrix);

std::string status_json(const Artifacts& artifacts);

// {id, params, status}
std::string handle_json(const Artifacts& artifacts);

std::string suggestions_json(std::string_view series, std::string_view prefix, std::span<const SymbolRatio> next);

// {error, detail, path?, row?}
std::string error_json(const Error& error);
std::string error_json(std::string_view code, std::string_view detail);

// {error, detail, diagnostics: [{severity, code, subject, message}]}
std::string diagnostics_json(std::span<const Diagnostic> diagnostics, std::string_view error = "InvalidQuery");

struct GuidanceRequest {
    QueryGraph query;
    std::string focus;
    std::optional<LagRange> lag_range;
};

// {"query": {...}, "focus": "id", "lag_range": [lo, hi]}
// throws Error(SchemaViolation) with a JSON pointer
GuidanceRequest parse_guidance_request(std::string_view json_text);

// {"sampling_length": n, "box_length": n}; throws Error(SchemaViolation)
PreprocessParams parse_params(std::string_view json_text);

} // namespace relaq
