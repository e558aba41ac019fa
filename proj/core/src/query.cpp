#include "relaq/query.hpp"

#include "relaq/artifacts.hpp"
#include "relaq/error.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <set>

namespace relaq {

std::string_view to_string(MatchMode mode) noexcept
{
    return mode == MatchMode::Fuzzy ? "fuzzy" : "strict";
}

std::optional<std::size_t> QueryGraph::box_index(std::string_view id) const
{
    for (std::size_t i = 0; i < timeboxes.size(); ++i) {
        if (timeboxes[i].id == id) {
            return i;
        }
    }
    return std::nullopt;
}

const Timebox& QueryGraph::box(std::string_view id) const
{
    auto i = box_index(id);
    if (!i) {
        throw Error(Errc::InvalidQuery, "no timebox '" + std::string(id) + "'");
    }
    return timeboxes[*i];
}

long QueryGraph::required_lag(const Relalink& link) const
{
    return box(link.target).offset - box(link.source).offset;
}

namespace {

void add(std::vector<Diagnostic>& out, std::string code, std::string subject, std::string message)
{
    out.push_back({Severity::Error, std::move(code), std::move(subject), std::move(message)});
}

bool connected(const QueryGraph& q)
{
    const std::size_t n = q.timeboxes.size();
    if (n <= 1) {
        return true;
    }
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t x) {
        while (parent[x] != x) {
            x = parent[x] = parent[parent[x]];
        }
        return x;
    };
    for (const auto& l : q.relalinks) {
        auto a = q.box_index(l.source);
        auto b = q.box_index(l.target);
        if (a && b) {
            parent[find(*a)] = find(*b);
        }
    }
    const auto root = find(0);
    for (std::size_t i = 1; i < n; ++i) {
        if (find(i) != root) {
            return false;
        }
    }
    return true;
}

// Shortest fragment (in compressed samples) each relation can be evaluated on.
std::size_t min_fragment_length(const QueryGraph& q, RelationKind kind)
{
    switch (kind) {
    case RelationKind::Correlation: return 2;
    case RelationKind::Causality: return q.max_lag < 1 ? std::numeric_limits<std::size_t>::max() : 5;
    default: return 1;
    }
}

} // namespace

std::vector<Diagnostic> validate_query(const QueryGraph& q)
{
    std::vector<Diagnostic> out;
    if (q.timeboxes.empty()) {
        add(out, "NoTimeboxes", "", "a query needs at least one timebox");
    }
    try {
        q.params.validate();
    } catch (const Error& e) {
        add(out, "InvalidParams", "", e.detail());
    }
    if (q.max_lag < 1) {
        add(out, "InvalidParams", "max_lag", "max_lag must be positive");
    }

    std::set<std::string> ids;
    for (const auto& b : q.timeboxes) {
        if (b.id.empty()) {
            add(out, "EmptyId", "", "timebox without an id");
        }
        if (!ids.insert(b.id).second) {
            add(out, "DuplicateId", b.id, "timebox id '" + b.id + "' is used twice");
        }
        if (b.offset < 0) {
            add(out, "NegativeOffset", b.id, "offset must be >= 0");
        }
        if (b.name && b.name->empty()) {
            add(out, "UnknownSeries", b.id, "empty series name");
        }
        if (b.value_bounds && !(b.value_bounds->lo <= b.value_bounds->hi)) {
            add(out, "BadValueBounds", b.id, "value bounds need lo <= hi");
        }
        if (b.has_sketch()) {
            if (b.sketch.size() < 2) {
                add(out, "DegenerateSketch", b.id, "a sketch needs at least two points");
            }
            for (std::size_t i = 0; i < b.sketch.size(); ++i) {
                if (i > 0 && !(b.sketch[i].x > b.sketch[i - 1].x)) {
                    add(out, "DegenerateSketch", b.id, "sketch x coordinates must strictly increase");
                    break;
                }
            }
            for (const auto& p : b.sketch) {
                if (!(p.y >= 0.0 && p.y <= 1.0)) {
                    add(out, "BadSketch", b.id, "sketch y coordinates must lie in [0, 1]");
                    break;
                }
            }
        }
    }

    std::set<std::string> link_ids;
    for (const auto& l : q.relalinks) {
        if (!link_ids.insert(l.id).second || ids.contains(l.id)) {
            add(out, "DuplicateId", l.id, "relalink id '" + l.id + "' is not unique");
        }
        if (l.kind == RelationKind::Lag) {
            add(out, "LagNotALink", l.id, "lag is expressed by timebox offsets, not a relalink");
            continue;
        }
        if (!q.box_index(l.source) || !q.box_index(l.target)) {
            add(out, "DanglingEndpoint", l.id, "relalink endpoint does not name a timebox");
        } else if (l.source == l.target) {
            add(out, "SelfLink", l.id, "relalink endpoints must differ");
        }
        const auto dom = strength_domain(l.kind);
        if (!(l.threshold.lo <= l.threshold.hi)) {
            add(out, "EmptyThreshold", l.id, "threshold interval is empty");
        } else if (!dom.contains(l.threshold.lo) || !dom.contains(l.threshold.hi)) {
            add(out, "ThresholdOutOfDomain", l.id, "threshold lies outside the " + std::string(to_string(l.kind))
                + " domain");
        }
        if ((l.kind == RelationKind::Meta) != l.meta_key.has_value()) {
            add(out, l.meta_key ? "UnexpectedMetaKey" : "MissingMetaKey", l.id,
                "meta_key is required for meta relalinks and only for them");
        }
        if ((l.kind == RelationKind::Arithmetic) != l.arithmetic.has_value()) {
            add(out, l.arithmetic ? "UnexpectedArithmetic" : "MissingArithmetic", l.id,
                "arithmetic spec is required for arithmetic relalinks and only for them");
        }
    }
    if (!q.timeboxes.empty() && !connected(q)) {
        add(out, "Disconnected", "", "every timebox must be reachable through relalinks");
    }
    return out;
}

std::vector<Diagnostic> validate_query(const QueryGraph& q, const Artifacts& artifacts)
{
    auto out = validate_query(q);
    const auto& ds = artifacts.dataset();
    if (q.params.sampling_length != artifacts.params().sampling_length
        || q.params.box_length != artifacts.params().box_length) {
        add(out, "ParamsMismatch", "", "query sampling/box length differ from the preprocessed dataset ("
            + std::to_string(artifacts.params().sampling_length) + "/"
            + std::to_string(artifacts.params().box_length) + ")");
    }
    for (const auto& b : q.timeboxes) {
        if (b.name && !b.name->empty() && !ds.index_of(*b.name)) {
            add(out, "UnknownSeries", b.id, "series '" + *b.name + "' is not in the dataset");
        }
    }
    const auto window = static_cast<std::size_t>(std::max(1, artifacts.window_symbols()));
    if (window > artifacts.compressed_length()) {
        add(out, "WindowTooLong", "", "box length exceeds the series length");
    }
    for (const auto& l : q.relalinks) {
        if (l.kind == RelationKind::Lag) {
            continue;
        }
        if (window < min_fragment_length(q, l.kind)) {
            add(out, "FragmentTooShort", l.id, std::string(to_string(l.kind)) + " needs fragments of at least "
                + std::to_string(min_fragment_length(q, l.kind)) + " compressed samples");
        }
        if (l.kind == RelationKind::Meta && l.meta_key && !artifacts.labels().has_key(*l.meta_key)) {
            add(out, "UnknownKey", l.id, "label key '" + *l.meta_key + "' is not in the config");
        }
    }
    return out;
}

std::vector<std::size_t> temporal_order_indices(const QueryGraph& q)
{
    std::vector<std::size_t> idx(q.timeboxes.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        const auto& x = q.timeboxes[a];
        const auto& y = q.timeboxes[b];
        if (x.offset != y.offset) {
            return x.offset < y.offset;
        }
        return x.id < y.id;
    });
    return idx;
}

std::vector<std::string> temporal_order(const QueryGraph& q)
{
    std::vector<std::string> out;
    for (auto i : temporal_order_indices(q)) {
        out.push_back(q.timeboxes[i].id);
    }
    return out;
}

} // namespace relaq
