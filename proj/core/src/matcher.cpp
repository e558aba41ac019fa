#include "relaq/matcher.hpp"

#include "relaq/error.hpp"
#include "relaq/normalize.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <set>

namespace relaq {

const LinkSet::Edge* LinkSet::find(std::uint32_t source, std::uint32_t target) const
{
    auto it = lookup.find((static_cast<std::uint64_t>(source) << 32) | target);
    return it == lookup.end() ? nullptr : &edges[it->second];
}

std::vector<FragmentNode> enumerate_fragments(std::size_t compressed_length, int window_symbols, std::uint32_t series)
{
    if (window_symbols < 1 || static_cast<std::size_t>(window_symbols) > compressed_length) {
        throw Error(Errc::WindowTooLong, "window of " + std::to_string(window_symbols)
            + " compressed samples does not fit a series of " + std::to_string(compressed_length));
    }
    const std::size_t count = compressed_length - static_cast<std::size_t>(window_symbols) + 1;
    std::vector<FragmentNode> out;
    out.reserve(count);
    for (std::size_t start = 0; start < count; ++start) {
        out.push_back({series, static_cast<std::uint32_t>(start), 1.0});
    }
    return out;
}

std::vector<double> rasterize_sketch(std::span<const SketchPoint> sketch, int window_symbols, MatchMode mode)
{
    if (sketch.size() < 2 || !(sketch.back().x > sketch.front().x)) {
        throw Error(Errc::DegenerateSketch, "sketch has no horizontal extent");
    }
    if (window_symbols < 1) {
        throw Error(Errc::InvalidParams, "window must hold at least one symbol");
    }
    const double x0 = sketch.front().x;
    const double span = sketch.back().x - x0;
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(window_symbols));
    std::size_t seg = 0;
    for (int k = 0; k < window_symbols; ++k) {
        const double x = window_symbols == 1 ? x0 + span / 2.0
                                             : x0 + span * static_cast<double>(k) / (window_symbols - 1);
        while (seg + 2 < sketch.size() && x > sketch[seg + 1].x) {
            ++seg;
        }
        const auto& p = sketch[seg];
        const auto& q = sketch[seg + 1];
        if (k == window_symbols - 1 && window_symbols > 1) {
            out.push_back(sketch.back().y);
            continue;
        }
        const double t = (x - p.x) / (q.x - p.x);
        out.push_back(p.y + t * (q.y - p.y));
    }
    if (mode == MatchMode::Fuzzy) {
        return z_normalize(out);
    }
    return out;
}

double trend_match_degree(std::span<const double> fragment, std::span<const double> raster, MatchMode mode)
{
    if (fragment.size() != raster.size()) {
        throw Error(Errc::LengthMismatch, std::to_string(fragment.size()) + " vs " + std::to_string(raster.size()));
    }
    if (fragment.empty()) {
        throw Error(Errc::TooShort, "empty fragment");
    }
    const double root_len = std::sqrt(static_cast<double>(fragment.size()));
    auto distance = [](std::span<const double> a, std::span<const double> b) {
        double ss = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) {
            ss += (a[i] - b[i]) * (a[i] - b[i]);
        }
        return std::sqrt(ss);
    };
    if (mode == MatchMode::Strict) {
        return std::max(0.0, 1.0 - distance(fragment, raster) / root_len);
    }
    const auto zf = z_normalize(fragment);
    const auto zr = z_normalize(raster);
    return std::max(0.0, 1.0 - distance(zf, zr) / (2.0 * root_len));
}

namespace {

// Raster of a timebox sketch in box coordinates (strict) and z-normalized (shape).
struct BoxRaster {
    std::vector<double> box;
    std::vector<double> shape;
};

BoxRaster make_raster(const Timebox& box, int window)
{
    return {rasterize_sketch(box.sketch, window, MatchMode::Strict),
        rasterize_sketch(box.sketch, window, MatchMode::Fuzzy)};
}

double degree_with(const Artifacts& artifacts, const Timebox& box, const BoxRaster& raster, std::uint32_t series,
                   std::uint32_t start, MatchMode mode, std::vector<double>& scratch)
{
    const auto& s = artifacts.series(series);
    const auto w = static_cast<std::size_t>(artifacts.window_symbols());
    std::span<const double> norm(s.minmax.data() + start, w);

    std::span<const double> target = raster.box;
    if (box.value_bounds) {
        // sketch drawn inside the value bounds, expressed in the series' normalized units
        const double range = s.compressed_max - s.compressed_min;
        scratch.resize(w);
        for (std::size_t k = 0; k < w; ++k) {
            const double v = box.value_bounds->lo + raster.box[k] * (box.value_bounds->hi - box.value_bounds->lo);
            scratch[k] = range > 0.0 ? (v - s.compressed_min) / range : 0.5;
        }
        target = scratch;
    }
    double d = trend_match_degree(norm, target, MatchMode::Strict);
    if (mode == MatchMode::Fuzzy) {
        std::span<const double> raw(s.compressed.data() + start, w);
        d = std::max(d, trend_match_degree(raw, raster.shape, MatchMode::Fuzzy));
    }
    return d;
}

bool within_bounds(const Artifacts& artifacts, const ValueBounds& bounds, std::uint32_t series, std::uint32_t start)
{
    const auto values = artifacts.dataset().values(series);
    const auto s = static_cast<std::size_t>(artifacts.params().sampling_length);
    const auto w = static_cast<std::size_t>(artifacts.window_symbols());
    const std::size_t begin = start * s;
    const std::size_t end = std::min(values.size(), (start + w) * s);
    for (std::size_t i = begin; i < end; ++i) {
        if (values[i] < bounds.lo || values[i] > bounds.hi) {
            return false;
        }
    }
    return true;
}

const RelationIndex& seeding_index(RelationKind kind, const Artifacts& artifacts)
{
    switch (kind) {
    case RelationKind::Similarity:
    case RelationKind::Causality: return artifacts.index(kind);
    default: return artifacts.index(RelationKind::Correlation);
    }
}

} // namespace

double fragment_degree(const Artifacts& artifacts, const Timebox& box, std::uint32_t series, std::uint32_t start,
                       MatchMode mode)
{
    if (!box.has_sketch()) {
        return 1.0;
    }
    std::vector<double> scratch;
    return degree_with(artifacts, box, make_raster(box, artifacts.window_symbols()), series, start, mode, scratch);
}

std::vector<std::uint32_t> candidate_series(const QueryGraph& q, std::size_t box, const Artifacts& artifacts)
{
    const auto& ds = artifacts.dataset();
    const auto& tb = q.timeboxes.at(box);
    if (tb.name) {
        auto idx = ds.index_of(*tb.name);
        if (!idx) {
            throw Error(Errc::UnknownSeries, "series '" + *tb.name + "' is not in the dataset");
        }
        return {static_cast<std::uint32_t>(*idx)};
    }

    // breadth-first distances from the default box over the undirected link graph
    const std::size_t n = q.timeboxes.size();
    std::vector<std::size_t> dist(n, std::numeric_limits<std::size_t>::max());
    dist[box] = 0;
    std::deque<std::size_t> frontier{box};
    while (!frontier.empty()) {
        const auto cur = frontier.front();
        frontier.pop_front();
        for (const auto& l : q.relalinks) {
            auto a = q.box_index(l.source);
            auto b = q.box_index(l.target);
            if (!a || !b) {
                continue;
            }
            const std::size_t other = *a == cur ? *b : (*b == cur ? *a : n);
            if (other < n && dist[other] == std::numeric_limits<std::size_t>::max()) {
                dist[other] = dist[cur] + 1;
                frontier.push_back(other);
            }
        }
    }
    std::size_t nearest = std::numeric_limits<std::size_t>::max();
    for (std::size_t i = 0; i < n; ++i) {
        if (!q.timeboxes[i].is_default() && dist[i] < nearest) {
            nearest = dist[i];
        }
    }

    std::set<std::uint32_t> out;
    if (nearest == std::numeric_limits<std::size_t>::max()) {
        // no named box anywhere: first series by name
        std::vector<std::size_t> by_name(ds.series_count());
        for (std::size_t i = 0; i < by_name.size(); ++i) {
            by_name[i] = i;
        }
        std::sort(by_name.begin(), by_name.end(), [&](auto a, auto b) { return ds.name(a) < ds.name(b); });
        for (std::size_t i = 0; i < by_name.size() && i < kDefaultCandidateCount; ++i) {
            out.insert(static_cast<std::uint32_t>(by_name[i]));
        }
        return {out.begin(), out.end()};
    }

    // (named box, seeding relalink) pairs; the relalink is the smallest-id link
    // leaving the named box along a shortest path to the default box
    std::vector<std::pair<std::size_t, const Relalink*>> seeds;
    for (std::size_t i = 0; i < n; ++i) {
        if (q.timeboxes[i].is_default() || dist[i] != nearest) {
            continue;
        }
        const Relalink* best = nullptr;
        for (const auto& l : q.relalinks) {
            auto a = q.box_index(l.source);
            auto b = q.box_index(l.target);
            if (!a || !b || (*a != i && *b != i)) {
                continue;
            }
            const std::size_t other = *a == i ? *b : *a;
            if (dist[other] + 1 == nearest && (best == nullptr || l.id < best->id)) {
                best = &l;
            }
        }
        if (best != nullptr) {
            seeds.emplace_back(i, best);
        }
    }
    if (nearest == 1 && seeds.size() > 1) {
        auto smallest = std::min_element(seeds.begin(), seeds.end(),
            [](const auto& a, const auto& b) { return a.second->id < b.second->id; });
        seeds = {*smallest};
    }
    for (const auto& [named, link] : seeds) {
        const auto& series_name = *q.timeboxes[named].name;
        const auto& index = seeding_index(link->kind, artifacts);
        const bool named_is_effect = link->kind == RelationKind::Causality && q.box_index(link->target) == named;
        for (const auto& s : index.top(series_name, kDefaultCandidateCount, named_is_effect)) {
            out.insert(static_cast<std::uint32_t>(*ds.index_of(s)));
        }
    }
    return {out.begin(), out.end()};
}

std::vector<FragmentNode> filter_nodes(const QueryGraph& q, std::size_t box, const Artifacts& artifacts)
{
    const auto& tb = q.timeboxes.at(box);
    const int window = artifacts.window_symbols();
    std::optional<BoxRaster> raster;
    if (tb.has_sketch()) {
        raster = make_raster(tb, window);
    }
    std::vector<double> scratch;
    std::vector<FragmentNode> out;
    for (auto series : candidate_series(q, box, artifacts)) {
        for (auto node : enumerate_fragments(artifacts.compressed_length(), window, series)) {
            if (tb.value_bounds && !within_bounds(artifacts, *tb.value_bounds, series, node.start)) {
                continue;
            }
            if (raster) {
                node.degree = degree_with(artifacts, tb, *raster, series, node.start, q.mode, scratch);
                if (node.degree < kTrendThreshold) {
                    continue;
                }
            }
            out.push_back(node);
        }
    }
    return out;
}

bool lag_accepted(long realized, long required, int sampling_length, MatchMode mode) noexcept
{
    if (mode == MatchMode::Strict) {
        return realized == required;
    }
    return std::abs(realized - required) <= sampling_length;
}

FragmentView fragment_view(const Artifacts& artifacts, const FragmentNode& node)
{
    const auto& s = artifacts.series(node.series);
    const auto w = static_cast<std::size_t>(artifacts.window_symbols());
    return {artifacts.dataset().name(node.series),
        std::span<const double>(s.compressed.data() + node.start, w),
        std::span<const double>(s.minmax.data() + node.start, w)};
}

LinkSet build_links(const QueryGraph& q, std::size_t link, const DatasetGraph& graph, const Artifacts& artifacts)
{
    const auto& rel = q.relalinks.at(link);
    LinkSet out;
    out.source_box = q.source_index(rel);
    out.target_box = q.target_index(rel);
    const auto& xs = graph.nodes.at(out.source_box);
    const auto& xt = graph.nodes.at(out.target_box);
    out.by_source.resize(xs.size());
    out.by_target.resize(xt.size());

    const int s = artifacts.params().sampling_length;
    const long required = q.required_lag(rel);
    const long c = static_cast<long>(artifacts.compressed_length());

    std::vector<std::vector<std::uint32_t>> at_start(static_cast<std::size_t>(c));
    for (std::uint32_t v = 0; v < xt.size(); ++v) {
        at_start[xt[v].start].push_back(v);
    }

    StrengthContext ctx;
    ctx.labels = &artifacts.labels();
    ctx.meta_key = rel.meta_key.value_or("");
    ctx.arithmetic = rel.arithmetic.value_or(ArithmeticSpec{});
    ctx.tolerance = q.tolerance;
    ctx.max_lag = q.max_lag;

    // candidate start shifts (compressed samples) around the required lag
    const long centre = required >= 0 ? required / s : -((-required + s - 1) / s);
    std::vector<long> shifts;
    for (long d = centre - 2; d <= centre + 2; ++d) {
        if (lag_accepted(d * s, required, s, q.mode)) {
            shifts.push_back(d);
        }
    }

    for (std::uint32_t u = 0; u < xs.size(); ++u) {
        const auto from = fragment_view(artifacts, xs[u]);
        for (long d : shifts) {
            const long start = static_cast<long>(xs[u].start) + d;
            if (start < 0 || start >= c) {
                continue;
            }
            for (auto v : at_start[static_cast<std::size_t>(start)]) {
                const double value = strength(rel.kind, from, fragment_view(artifacts, xt[v]), ctx);
                const bool ok = rel.threshold.contains(value);
                if (!ok && q.mode == MatchMode::Strict) {
                    continue;
                }
                const auto e = static_cast<std::uint32_t>(out.edges.size());
                out.edges.push_back({u, v, {value, d * s, ok}});
                out.by_source[u].push_back(e);
                out.by_target[v].push_back(e);
                out.lookup.emplace((static_cast<std::uint64_t>(u) << 32) | v, e);
            }
        }
    }
    return out;
}

DatasetGraph build_dataset_graph(const QueryGraph& q, const Artifacts& artifacts)
{
    DatasetGraph g;
    g.nodes.reserve(q.timeboxes.size());
    for (std::size_t i = 0; i < q.timeboxes.size(); ++i) {
        g.nodes.push_back(filter_nodes(q, i, artifacts));
    }
    g.links.reserve(q.relalinks.size());
    for (std::size_t k = 0; k < q.relalinks.size(); ++k) {
        g.links.push_back(build_links(q, k, g, artifacts));
    }
    return g;
}

double score(const ResultGraph& g)
{
    double total = 0.0;
    for (const auto& node : g.assignment) {
        total += node.degree;
    }
    for (const auto& link : g.links) {
        if (link.satisfied) {
            total += std::abs(link.strength);
        }
    }
    return total;
}

int unsatisfied_budget(MatchMode mode) noexcept
{
    return mode == MatchMode::Fuzzy ? 1 : 0;
}

} // namespace relaq
