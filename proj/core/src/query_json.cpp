#include "relaq/error.hpp"
#include "relaq/query.hpp"

#include "json.hpp"

#include <cmath>

namespace relaq {

namespace {

using nlohmann::json;

[[noreturn]] void violation(const std::string& path, const std::string& what)
{
    throw Error(Errc::SchemaViolation, what, path.empty() ? std::string("/") : path);
}

const json& member(const json& obj, const char* key, const std::string& path)
{
    auto it = obj.find(key);
    if (it == obj.end()) {
        violation(path + "/" + key, std::string("missing required field '") + key + "'");
    }
    return *it;
}

double number(const json& v, const std::string& path)
{
    if (!v.is_number()) {
        violation(path, "expected a number");
    }
    const double d = v.get<double>();
    if (!std::isfinite(d)) {
        violation(path, "expected a finite number");
    }
    return d;
}

long integer(const json& v, const std::string& path)
{
    if (v.is_number_integer()) {
        return v.get<long>();
    }
    if (v.is_number_float()) {
        const double d = v.get<double>();
        if (std::floor(d) == d && std::abs(d) < 1e15) {
            return static_cast<long>(d);
        }
    }
    violation(path, "expected an integer");
}

std::string text(const json& v, const std::string& path)
{
    if (!v.is_string()) {
        violation(path, "expected a string");
    }
    return v.get<std::string>();
}

std::string identifier(const json& v, const std::string& path)
{
    if (v.is_string()) {
        return v.get<std::string>();
    }
    if (v.is_number_integer()) {
        return std::to_string(v.get<long>());
    }
    violation(path, "expected a string or integer id");
}

std::pair<double, double> pair_of_numbers(const json& v, const std::string& path)
{
    if (!v.is_array() || v.size() != 2) {
        violation(path, "expected [lo, hi]");
    }
    return {number(v[0], path + "/0"), number(v[1], path + "/1")};
}

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed, const std::string& path)
{
    for (const auto& [key, value] : obj.items()) {
        bool ok = false;
        for (const char* a : allowed) {
            ok = ok || key == a;
        }
        if (!ok) {
            violation(path + "/" + key, "unknown field '" + key + "'");
        }
    }
}

Timebox parse_timebox(const json& j, const std::string& path)
{
    if (!j.is_object()) {
        violation(path, "expected an object");
    }
    reject_unknown(j, {"id", "name", "offset", "sketch", "value_bounds"}, path);
    Timebox b;
    b.id = identifier(member(j, "id", path), path + "/id");
    if (auto it = j.find("name"); it != j.end() && !it->is_null()) {
        b.name = text(*it, path + "/name");
    }
    if (auto it = j.find("offset"); it != j.end()) {
        b.offset = integer(*it, path + "/offset");
    }
    if (auto it = j.find("sketch"); it != j.end() && !it->is_null()) {
        if (!it->is_array()) {
            violation(path + "/sketch", "expected an array of points");
        }
        for (std::size_t i = 0; i < it->size(); ++i) {
            const auto p = path + "/sketch/" + std::to_string(i);
            const auto& pt = (*it)[i];
            if (!pt.is_object()) {
                violation(p, "expected {x, y}");
            }
            b.sketch.push_back({number(member(pt, "x", p), p + "/x"), number(member(pt, "y", p), p + "/y")});
        }
    }
    if (auto it = j.find("value_bounds"); it != j.end() && !it->is_null()) {
        auto [lo, hi] = pair_of_numbers(*it, path + "/value_bounds");
        b.value_bounds = ValueBounds{lo, hi};
    }
    return b;
}

Relalink parse_relalink(const json& j, const std::string& path)
{
    if (!j.is_object()) {
        violation(path, "expected an object");
    }
    reject_unknown(j, {"id", "kind", "source", "target", "threshold", "meta_key", "arithmetic"}, path);
    Relalink l;
    l.id = identifier(member(j, "id", path), path + "/id");
    const auto kind_text = text(member(j, "kind", path), path + "/kind");
    auto kind = parse_relation_kind(kind_text);
    if (!kind || *kind == RelationKind::Lag) {
        violation(path + "/kind", "unknown relation kind '" + kind_text + "'");
    }
    l.kind = *kind;
    l.source = identifier(member(j, "source", path), path + "/source");
    l.target = identifier(member(j, "target", path), path + "/target");
    auto [lo, hi] = pair_of_numbers(member(j, "threshold", path), path + "/threshold");
    l.threshold = {lo, hi};
    if (auto it = j.find("meta_key"); it != j.end() && !it->is_null()) {
        l.meta_key = text(*it, path + "/meta_key");
    }
    if (auto it = j.find("arithmetic"); it != j.end() && !it->is_null()) {
        const auto p = path + "/arithmetic";
        if (!it->is_object()) {
            violation(p, "expected {op, cmp}");
        }
        const auto op_text = text(member(*it, "op", p), p + "/op");
        const auto cmp_text = text(member(*it, "cmp", p), p + "/cmp");
        auto op = parse_arithmetic_op(op_text);
        auto cmp = parse_comparator(cmp_text);
        if (!op) {
            violation(p + "/op", "unknown operator '" + op_text + "'");
        }
        if (!cmp) {
            violation(p + "/cmp", "unknown comparator '" + cmp_text + "'");
        }
        l.arithmetic = ArithmeticSpec{*op, *cmp};
    }
    return l;
}

} // namespace

QueryGraph parse_query(std::string_view json_text)
{
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        violation("", std::string("invalid JSON: ") + e.what());
    }
    if (!j.is_object()) {
        violation("", "query must be a JSON object");
    }
    reject_unknown(j, {"mode", "sampling_length", "box_length", "timeboxes", "relalinks", "max_lag", "tolerance"}, "");

    QueryGraph q;
    if (auto it = j.find("mode"); it != j.end()) {
        const auto mode = text(*it, "/mode");
        if (mode == "strict") {
            q.mode = MatchMode::Strict;
        } else if (mode == "fuzzy") {
            q.mode = MatchMode::Fuzzy;
        } else {
            violation("/mode", "mode must be 'strict' or 'fuzzy'");
        }
    }
    q.params.sampling_length = static_cast<int>(integer(member(j, "sampling_length", ""), "/sampling_length"));
    q.params.box_length = static_cast<int>(integer(member(j, "box_length", ""), "/box_length"));
    if (auto it = j.find("max_lag"); it != j.end()) {
        q.max_lag = static_cast<int>(integer(*it, "/max_lag"));
    }
    if (auto it = j.find("tolerance"); it != j.end()) {
        q.tolerance = number(*it, "/tolerance");
    }

    const auto& boxes = member(j, "timeboxes", "");
    if (!boxes.is_array()) {
        violation("/timeboxes", "expected an array");
    }
    for (std::size_t i = 0; i < boxes.size(); ++i) {
        q.timeboxes.push_back(parse_timebox(boxes[i], "/timeboxes/" + std::to_string(i)));
    }
    if (auto it = j.find("relalinks"); it != j.end()) {
        if (!it->is_array()) {
            violation("/relalinks", "expected an array");
        }
        for (std::size_t i = 0; i < it->size(); ++i) {
            q.relalinks.push_back(parse_relalink((*it)[i], "/relalinks/" + std::to_string(i)));
        }
    }
    return q;
}

std::string serialize_query(const QueryGraph& q)
{
    json boxes = json::array();
    for (const auto& b : q.timeboxes) {
        json jb{{"id", b.id}, {"offset", b.offset}};
        if (b.name) {
            jb["name"] = *b.name;
        }
        if (b.has_sketch()) {
            json pts = json::array();
            for (const auto& p : b.sketch) {
                pts.push_back({{"x", p.x}, {"y", p.y}});
            }
            jb["sketch"] = std::move(pts);
        }
        if (b.value_bounds) {
            jb["value_bounds"] = {b.value_bounds->lo, b.value_bounds->hi};
        }
        boxes.push_back(std::move(jb));
    }
    json links = json::array();
    for (const auto& l : q.relalinks) {
        json jl{{"id", l.id}, {"kind", to_string(l.kind)}, {"source", l.source}, {"target", l.target},
            {"threshold", {l.threshold.lo, l.threshold.hi}}};
        if (l.meta_key) {
            jl["meta_key"] = *l.meta_key;
        }
        if (l.arithmetic) {
            jl["arithmetic"] = {{"op", to_string(l.arithmetic->op)}, {"cmp", to_string(l.arithmetic->cmp)}};
        }
        links.push_back(std::move(jl));
    }
    json j{{"mode", to_string(q.mode)},
        {"sampling_length", q.params.sampling_length},
        {"box_length", q.params.box_length},
        {"max_lag", q.max_lag},
        {"tolerance", q.tolerance},
        {"timeboxes", std::move(boxes)},
        {"relalinks", std::move(links)}};
    return j.dump(2);
}

} // namespace relaq
