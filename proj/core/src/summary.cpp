#include "relaq/error.hpp"
#include "relaq/matcher.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace relaq {

namespace {

constexpr std::size_t kBins = 10;

Histogram histogram(double lo, double hi, const std::vector<double>& values)
{
    Histogram h;
    h.lo = lo;
    h.hi = hi;
    h.counts.assign(kBins, 0);
    h.n = values.size();
    if (values.empty()) {
        return h;
    }
    h.min = std::numeric_limits<double>::infinity();
    h.max = -std::numeric_limits<double>::infinity();
    double sum = 0.0;
    for (double v : values) {
        sum += v;
        h.min = std::min(h.min, v);
        h.max = std::max(h.max, v);
        auto bin = static_cast<long>(std::floor((v - lo) / (hi - lo) * static_cast<double>(kBins)));
        bin = std::clamp(bin, 0L, static_cast<long>(kBins) - 1);
        ++h.counts[static_cast<std::size_t>(bin)];
    }
    h.mean = sum / static_cast<double>(values.size());
    return h;
}

bool ranks_before_in(const std::vector<std::size_t>& order, const Dataset& ds, const ResultGraph& a,
                     const ResultGraph& b)
{
    if (a.score != b.score) {
        return a.score > b.score;
    }
    for (auto i : order) {
        if (a.assignment[i].start != b.assignment[i].start) {
            return a.assignment[i].start < b.assignment[i].start;
        }
    }
    for (auto i : order) {
        if (a.assignment[i].series != b.assignment[i].series) {
            return ds.name(a.assignment[i].series) < ds.name(b.assignment[i].series);
        }
    }
    return false;
}

} // namespace

bool ranks_before(const QueryGraph& query, const Artifacts& artifacts, const ResultGraph& a, const ResultGraph& b)
{
    return ranks_before_in(temporal_order_indices(query), artifacts.dataset(), a, b);
}

QuerySummary summarize(const QueryGraph& query, const Artifacts& artifacts, std::span<const ResultGraph> results)
{
    QuerySummary out;
    const auto& ds = artifacts.dataset();

    for (std::size_t i = 0; i < query.timeboxes.size(); ++i) {
        std::vector<double> degrees;
        degrees.reserve(results.size());
        for (const auto& r : results) {
            degrees.push_back(r.assignment[i].degree);
        }
        out.columns.push_back({query.timeboxes[i].id, "fragment", histogram(0.0, 1.0, degrees)});
    }
    for (std::size_t k = 0; k < query.relalinks.size(); ++k) {
        const auto& link = query.relalinks[k];
        std::vector<double> values;
        LinkStats stats;
        stats.id = link.id;
        stats.kind = link.kind;
        double satisfied_sum = 0.0;
        for (const auto& r : results) {
            const auto& inst = r.links[k];
            values.push_back(inst.strength);
            ++stats.lags[inst.lag];
            if (inst.satisfied) {
                satisfied_sum += inst.strength;
                ++stats.satisfied;
            }
        }
        stats.mean_strength = stats.satisfied > 0 ? satisfied_sum / static_cast<double>(stats.satisfied) : 0.0;
        const auto dom = strength_domain(link.kind);
        out.columns.push_back({link.id, std::string(to_string(link.kind)), histogram(dom.lo, dom.hi, values)});
        out.links.push_back(std::move(stats));
    }

    // difference array over original time steps
    const std::size_t m = ds.length();
    const auto s = static_cast<std::size_t>(artifacts.params().sampling_length);
    const auto w = static_cast<std::size_t>(artifacts.window_symbols());
    std::vector<long> diff(m + 1, 0);
    for (const auto& r : results) {
        for (const auto& node : r.assignment) {
            const std::size_t begin = std::min(m, node.start * s);
            const std::size_t end = std::min(m, (node.start + w) * s);
            ++diff[begin];
            --diff[end];
        }
    }
    out.occurrence.assign(m, 0);
    long running = 0;
    for (std::size_t t = 0; t < m; ++t) {
        running += diff[t];
        out.occurrence[t] = static_cast<std::size_t>(running);
    }

    for (std::size_t i = 0; i < query.timeboxes.size(); ++i) {
        if (!query.timeboxes[i].is_default()) {
            continue;
        }
        std::map<std::uint32_t, std::pair<double, std::size_t>> per_series;
        for (const auto& r : results) {
            auto& acc = per_series[r.assignment[i].series];
            acc.first += r.score;
            ++acc.second;
        }
        std::vector<Alternative> list;
        double best = 0.0;
        for (const auto& [series, acc] : per_series) {
            Alternative a;
            a.series = ds.name(series);
            a.count = acc.second;
            a.mean_score = acc.first / static_cast<double>(acc.second);
            best = std::max(best, a.mean_score);
            list.push_back(std::move(a));
        }
        for (auto& a : list) {
            a.opacity = best > 0.0 ? a.mean_score / best : 0.0;
        }
        std::stable_sort(list.begin(), list.end(), [](const Alternative& a, const Alternative& b) {
            if (a.mean_score != b.mean_score) {
                return a.mean_score > b.mean_score;
            }
            return a.series < b.series;
        });
        out.alternatives.emplace(query.timeboxes[i].id, std::move(list));
    }
    return out;
}

QueryResult execute_query(const QueryGraph& query, const Artifacts& artifacts, const ExecuteOptions& options)
{
    const auto diagnostics = validate_query(query, artifacts);
    std::string problems;
    for (const auto& d : diagnostics) {
        if (d.severity != Severity::Error) {
            continue;
        }
        if (!problems.empty()) {
            problems += "; ";
        }
        problems += d.code + (d.subject.empty() ? "" : " (" + d.subject + ")") + ": " + d.message;
    }
    if (!problems.empty()) {
        throw Error(Errc::InvalidQuery, problems);
    }

    const auto graph = build_dataset_graph(query, artifacts);
    SearchOptions so;
    so.cap = options.cap;
    so.memoize = options.memoize;
    so.cancel = options.cancel;
    if (options.timeout) {
        so.deadline = std::chrono::steady_clock::now() + *options.timeout;
    }
    const auto order = temporal_order_indices(query);
    so.better = [&](const ResultGraph& a, const ResultGraph& b) {
        return ranks_before_in(order, artifacts.dataset(), a, b);
    };
    auto outcome = search(query, graph, so);

    QueryResult out;
    out.summary = summarize(query, artifacts, outcome.results);
    out.results = std::move(outcome.results);
    out.found = outcome.found;
    out.truncated = outcome.truncated;
    out.cancelled = outcome.cancelled;
    return out;
}

} // namespace relaq
