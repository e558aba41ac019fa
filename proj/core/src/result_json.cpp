#include "relaq/result_json.hpp"

#include "json.hpp"

#include <algorithm>
#include <sstream>

namespace relaq {

namespace {

using nlohmann::json;
using ordered = nlohmann::ordered_json;

struct Span {
    std::size_t start = 0;
    std::size_t length = 0;
    std::string start_time;
    std::string end_time;
};

Span original_span(const Artifacts& artifacts, const FragmentNode& node)
{
    const auto& ds = artifacts.dataset();
    const auto s = static_cast<std::size_t>(artifacts.params().sampling_length);
    const auto w = static_cast<std::size_t>(artifacts.window_symbols());
    Span out;
    out.start = std::min(ds.length() - 1, node.start * s);
    const std::size_t end = std::min(ds.length(), (node.start + w) * s);
    out.length = end - out.start;
    out.start_time = ds.timestamps()[out.start];
    out.end_time = ds.timestamps()[end - 1];
    return out;
}

ordered histogram_json(const Histogram& h)
{
    return ordered{{"lo", h.lo}, {"hi", h.hi}, {"counts", h.counts}, {"n", h.n}, {"mean", h.mean},
        {"min", h.min}, {"max", h.max}};
}

ordered timebox_json(const Timebox& b)
{
    ordered j{{"id", b.id}};
    if (b.name) {
        j["name"] = *b.name;
    }
    j["offset"] = b.offset;
    if (b.has_sketch()) {
        ordered pts = ordered::array();
        for (const auto& p : b.sketch) {
            pts.push_back(ordered{{"x", p.x}, {"y", p.y}});
        }
        j["sketch"] = std::move(pts);
    }
    if (b.value_bounds) {
        j["value_bounds"] = {b.value_bounds->lo, b.value_bounds->hi};
    }
    return j;
}

ordered relalink_json(const Relalink& l)
{
    ordered j{{"id", l.id}, {"kind", to_string(l.kind)}, {"source", l.source}, {"target", l.target},
        {"threshold", {l.threshold.lo, l.threshold.hi}}};
    if (l.meta_key) {
        j["meta_key"] = *l.meta_key;
    }
    if (l.arithmetic) {
        j["arithmetic"] = ordered{{"op", to_string(l.arithmetic->op)}, {"cmp", to_string(l.arithmetic->cmp)}};
    }
    return j;
}

std::string csv_field(std::string_view v)
{
    if (v.find_first_of(",\"\n\r") == std::string_view::npos) {
        return std::string(v);
    }
    std::string out = "\"";
    for (char c : v) {
        if (c == '"') {
            out += '"';
        }
        out += c;
    }
    return out + "\"";
}

[[noreturn]] void violation(const std::string& path, const std::string& what)
{
    throw Error(Errc::SchemaViolation, what, path);
}

} // namespace

std::string results_json(const QueryGraph& query, const Artifacts& artifacts, const QueryResult& result)
{
    const auto& ds = artifacts.dataset();
    ordered results = ordered::array();
    for (const auto& r : result.results) {
        ordered fragments = ordered::object();
        for (std::size_t i = 0; i < query.timeboxes.size(); ++i) {
            const auto& node = r.assignment[i];
            const auto span = original_span(artifacts, node);
            fragments[query.timeboxes[i].id] = ordered{{"series", ds.name(node.series)}, {"start", span.start},
                {"length", span.length}, {"degree", node.degree}, {"start_time", span.start_time},
                {"end_time", span.end_time}};
        }
        ordered links = ordered::array();
        for (std::size_t k = 0; k < query.relalinks.size(); ++k) {
            const auto& inst = r.links[k];
            links.push_back(ordered{{"id", query.relalinks[k].id}, {"kind", to_string(query.relalinks[k].kind)},
                {"strength", inst.strength}, {"lag", inst.lag}, {"satisfied", inst.satisfied}});
        }
        results.push_back(ordered{{"score", r.score}, {"fragments", std::move(fragments)}, {"links", std::move(links)}});
    }

    const auto& sm = result.summary;
    ordered columns = ordered::array();
    for (const auto& c : sm.columns) {
        columns.push_back(ordered{{"id", c.id}, {"type", c.type}, {"distribution", histogram_json(c.distribution)}});
    }
    ordered alternatives = ordered::object();
    for (const auto& [box, list] : sm.alternatives) {
        ordered items = ordered::array();
        for (const auto& a : list) {
            items.push_back(ordered{{"series", a.series}, {"mean_score", a.mean_score}, {"opacity", a.opacity},
                {"count", a.count}});
        }
        alternatives[box] = std::move(items);
    }
    ordered link_stats = ordered::array();
    for (const auto& l : sm.links) {
        ordered lags = ordered::array();
        for (const auto& [lag, count] : l.lags) {
            lags.push_back({lag, count});
        }
        link_stats.push_back(ordered{{"id", l.id}, {"kind", to_string(l.kind)}, {"mean_strength", l.mean_strength},
            {"satisfied", l.satisfied}, {"lags", std::move(lags)}});
    }
    ordered out{{"dataset", artifacts.id()},
        {"mode", to_string(query.mode)},
        {"results", std::move(results)},
        {"found", result.found},
        {"truncated", result.truncated},
        {"summary", ordered{{"columns", std::move(columns)}, {"occurrence", sm.occurrence},
                        {"alternatives", std::move(alternatives)}, {"linkStats", std::move(link_stats)}}}};
    return out.dump(2) + "\n";
}

std::string results_csv(const QueryGraph& query, const Artifacts& artifacts, const QueryResult& result)
{
    const auto& ds = artifacts.dataset();
    std::ostringstream out;
    out << "result,score,box,series,start,length,degree,start_time,end_time\n";
    for (std::size_t r = 0; r < result.results.size(); ++r) {
        const auto& g = result.results[r];
        for (std::size_t i = 0; i < query.timeboxes.size(); ++i) {
            const auto span = original_span(artifacts, g.assignment[i]);
            out << r + 1 << ',' << format_double(g.score) << ',' << csv_field(query.timeboxes[i].id) << ','
                << csv_field(ds.name(g.assignment[i].series)) << ',' << span.start << ',' << span.length << ','
                << format_double(g.assignment[i].degree) << ',' << csv_field(span.start_time) << ','
                << csv_field(span.end_time) << '\n';
        }
    }
    return out.str();
}

std::string guidance_json(const QueryGraph& query, const GuidanceMatrix& matrix)
{
    ordered columns = ordered::array();
    for (auto kind : matrix.columns) {
        columns.push_back(to_string(kind));
    }
    ordered rows = ordered::array();
    for (const auto& row : matrix.rows) {
        ordered cells = ordered::object();
        for (std::size_t c = 0; c < matrix.columns.size(); ++c) {
            const auto& cell = row.cells[c];
            if (!cell) {
                cells[std::string(to_string(matrix.columns[c]))] = nullptr;
                continue;
            }
            const auto delta = query_delta(query, matrix.focus, *cell);
            cells[std::string(to_string(matrix.columns[c]))] = ordered{{"series", cell->series},
                {"kind", to_string(cell->kind)}, {"best_lag", cell->best_lag},
                {"mean_strength", cell->mean_strength}, {"confidence", cell->confidence}, {"passes", cell->passes},
                {"evaluations", cell->evaluations},
                {"delta", ordered{{"timebox", timebox_json(delta.timebox)},
                              {"relalink", relalink_json(delta.relalink)}}}};
        }
        rows.push_back(ordered{{"series", row.series}, {"cells", std::move(cells)}});
    }
    ordered out{{"focus", matrix.focus},
        {"focus_fragments", matrix.focus_fragments},
        {"lag_range", {matrix.lag_range.lo, matrix.lag_range.hi}},
        {"columns", std::move(columns)},
        {"rows", std::move(rows)}};
    return out.dump(2) + "\n";
}

std::string status_json(const Artifacts& artifacts)
{
    const auto status = artifacts.status();
    ordered states = ordered::object();
    ordered elapsed = ordered::object();
    for (const auto& a : status.artifacts) {
        states[a.artifact] = to_string(a.state);
        elapsed[a.artifact] = a.elapsed.count();
    }
    ordered out{{"id", artifacts.id()}, {"ready", status.all_ready()}, {"artifacts", std::move(states)},
        {"elapsed_ms", std::move(elapsed)}};
    return out.dump(2) + "\n";
}

std::string handle_json(const Artifacts& artifacts)
{
    const auto status = artifacts.status();
    ordered states = ordered::object();
    for (const auto& a : status.artifacts) {
        states[a.artifact] = to_string(a.state);
    }
    const auto& ds = artifacts.dataset();
    ordered out{{"id", artifacts.id()},
        {"params", ordered{{"sampling_length", artifacts.params().sampling_length},
                       {"box_length", artifacts.params().box_length},
                       {"alphabet_size", artifacts.params().alphabet_size}}},
        {"series", ds.names()},
        {"length", ds.length()},
        {"step_unit", artifacts.step_unit()},
        {"status", std::move(states)}};
    return out.dump(2) + "\n";
}

std::string suggestions_json(std::string_view series, std::string_view prefix, std::span<const SymbolRatio> next)
{
    ordered list = ordered::array();
    for (const auto& s : next) {
        list.push_back(ordered{{"symbol", std::string(1, s.symbol)}, {"ratio", s.ratio}});
    }
    ordered out{{"series", series}, {"prefix", prefix}, {"suggestions", std::move(list)}};
    return out.dump(2) + "\n";
}

std::string error_json(const Error& error)
{
    ordered out{{"error", error.name()}, {"detail", error.detail()}};
    if (!error.path().empty()) {
        out["path"] = error.path();
    }
    if (error.row()) {
        out["row"] = *error.row();
    }
    return out.dump() + "\n";
}

std::string error_json(std::string_view code, std::string_view detail)
{
    return ordered{{"error", code}, {"detail", detail}}.dump() + "\n";
}

std::string diagnostics_json(std::span<const Diagnostic> diagnostics, std::string_view error)
{
    ordered list = ordered::array();
    std::string detail;
    for (const auto& d : diagnostics) {
        list.push_back(ordered{{"severity", d.severity == Severity::Error ? "error" : "warning"}, {"code", d.code},
            {"subject", d.subject}, {"message", d.message}});
        if (d.severity == Severity::Error && detail.empty()) {
            detail = d.code + ": " + d.message;
        }
    }
    ordered out{{"error", error}, {"detail", detail}, {"diagnostics", std::move(list)}};
    return out.dump() + "\n";
}

GuidanceRequest parse_guidance_request(std::string_view json_text)
{
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        violation("/", std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) {
        violation("/", "guidance request must be a JSON object");
    }
    for (const auto& [key, value] : j.items()) {
        if (key != "query" && key != "focus" && key != "lag_range") {
            violation("/" + key, "unknown field '" + key + "'");
        }
    }
    GuidanceRequest out;
    auto q = j.find("query");
    if (q == j.end()) {
        violation("/query", "missing required field 'query'");
    }
    try {
        out.query = parse_query(q->dump());
    } catch (const Error& e) {
        const std::string inner = e.path() == "/" ? "" : e.path();
        throw Error(Errc::SchemaViolation, e.detail(), "/query" + inner);
    }
    auto f = j.find("focus");
    if (f == j.end()) {
        violation("/focus", "missing required field 'focus'");
    }
    if (f->is_string()) {
        out.focus = f->get<std::string>();
    } else if (f->is_number_integer()) {
        out.focus = std::to_string(f->get<long>());
    } else {
        violation("/focus", "expected a timebox id");
    }
    if (auto r = j.find("lag_range"); r != j.end()) {
        if (!r->is_array() || r->size() != 2 || !(*r)[0].is_number_integer() || !(*r)[1].is_number_integer()) {
            violation("/lag_range", "expected [lo, hi] integers");
        }
        out.lag_range = LagRange{(*r)[0].get<long>(), (*r)[1].get<long>()};
    }
    return out;
}

PreprocessParams parse_params(std::string_view json_text)
{
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        violation("/", std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) {
        violation("/", "params must be a JSON object");
    }
    PreprocessParams p;
    for (const auto& [key, value] : j.items()) {
        if (key != "sampling_length" && key != "box_length") {
            violation("/" + key, "unknown field '" + key + "'");
        }
        if (!value.is_number_integer()) {
            violation("/" + key, "expected an integer");
        }
    }
    if (!j.contains("sampling_length") || !j.contains("box_length")) {
        violation(j.contains("sampling_length") ? "/box_length" : "/sampling_length", "missing required field");
    }
    p.sampling_length = j.at("sampling_length").get<int>();
    p.box_length = j.at("box_length").get<int>();
    return p;
}

} // namespace relaq
