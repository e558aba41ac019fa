#include "relaq/recommender.hpp"

#include "relaq/error.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace relaq {

bool PassThresholds::passes(RelationKind kind, double strength) const
{
    switch (kind) {
    case RelationKind::Correlation: return std::abs(strength) >= correlation;
    case RelationKind::Similarity: return strength >= similarity;
    case RelationKind::Causality: return strength >= causality;
    default: return false;
    }
}

double GuidanceRow::max_confidence() const noexcept
{
    double best = 0.0;
    for (const auto& c : cells) {
        if (c) {
            best = std::max(best, c->confidence);
        }
    }
    return best;
}

std::size_t GuidanceMatrix::column_of(RelationKind kind)
{
    for (std::size_t i = 0; i < kRecommendedKinds.size(); ++i) {
        if (kRecommendedKinds[i] == kind) {
            return i;
        }
    }
    throw Error(Errc::InvalidQuery, std::string(to_string(kind)) + " relations are not recommended");
}

void GuidanceMatrix::sort_by(RelationKind kind, bool ascending)
{
    const auto col = column_of(kind);
    std::stable_sort(rows.begin(), rows.end(), [&](const GuidanceRow& a, const GuidanceRow& b) {
        const auto& x = a.cells[col];
        const auto& y = b.cells[col];
        if (!x || !y) {
            return x.has_value() && !y.has_value();
        }
        return ascending ? x->confidence < y->confidence : x->confidence > y->confidence;
    });
}

std::vector<FragmentNode> focus_fragments(const QueryGraph& query, std::size_t focus, const Artifacts& artifacts,
                                          const ExecuteOptions& execute)
{
    const auto result = execute_query(query, artifacts, execute);
    std::set<std::pair<std::uint32_t, std::uint32_t>> seen;
    std::vector<FragmentNode> out;
    for (const auto& r : result.results) {
        const auto& node = r.assignment[focus];
        if (seen.emplace(node.series, node.start).second) {
            out.push_back(node);
        }
    }
    if (!out.empty()) {
        std::sort(out.begin(), out.end(), [](const FragmentNode& a, const FragmentNode& b) {
            return a.series != b.series ? a.series < b.series : a.start < b.start;
        });
        return out;
    }
    const auto& box = query.timeboxes[focus];
    if (box.is_default()) {
        throw Error(Errc::FocusUnresolved, "default timebox '" + box.id + "' has no matched series yet");
    }
    return filter_nodes(query, focus, artifacts);
}

void assign_confidence(GuidanceMatrix& matrix)
{
    std::size_t total = 0;
    for (const auto& row : matrix.rows) {
        for (const auto& c : row.cells) {
            if (c) {
                total += c->passes;
            }
        }
    }
    for (auto& row : matrix.rows) {
        for (auto& c : row.cells) {
            if (c) {
                c->confidence = total > 0 ? static_cast<double>(c->passes) / static_cast<double>(total) : 0.0;
            }
        }
    }
}

namespace {

std::optional<Recommendation> evaluate_cell(const Artifacts& artifacts, RelationKind kind, std::uint32_t candidate,
                                            const std::vector<FragmentNode>& focus, LagRange lags, int max_lag,
                                            const PassThresholds& thresholds)
{
    const auto w = static_cast<long>(artifacts.window_symbols());
    const auto c = static_cast<long>(artifacts.compressed_length());
    if (kind == RelationKind::Causality && supported_granger_lag(static_cast<std::size_t>(w), max_lag) == 0) {
        return std::nullopt;
    }
    StrengthContext ctx;
    ctx.max_lag = max_lag;

    Recommendation rec;
    rec.series = artifacts.dataset().name(candidate);
    rec.kind = kind;
    double best_abs = -1.0;
    for (long lag = lags.lo; lag <= lags.hi; ++lag) {
        double sum = 0.0;
        double abs_sum = 0.0;
        std::size_t n = 0;
        for (const auto& f : focus) {
            const long start = static_cast<long>(f.start) + lag;
            if (start < 0 || start + w > c) {
                continue;
            }
            const FragmentNode other{candidate, static_cast<std::uint32_t>(start), 1.0};
            const double v = strength(kind, fragment_view(artifacts, f), fragment_view(artifacts, other), ctx);
            sum += v;
            abs_sum += std::abs(v);
            ++n;
            if (thresholds.passes(kind, v)) {
                ++rec.passes;
            }
        }
        rec.evaluations += n;
        if (n == 0) {
            continue;
        }
        const double mean_abs = abs_sum / static_cast<double>(n);
        if (mean_abs > best_abs) {
            best_abs = mean_abs;
            rec.best_lag = lag * artifacts.params().sampling_length;
            rec.mean_strength = sum / static_cast<double>(n);
        }
    }
    if (rec.evaluations == 0) {
        return std::nullopt;
    }
    return rec;
}

} // namespace

GuidanceMatrix recommend(const QueryGraph& query, std::string_view focus, const Artifacts& artifacts,
                         const RecommendOptions& options)
{
    const auto focus_index = query.box_index(focus);
    if (!focus_index) {
        throw Error(Errc::InvalidQuery, "focus '" + std::string(focus) + "' is not a timebox of the query");
    }
    GuidanceMatrix matrix;
    matrix.focus = std::string(focus);
    matrix.lag_range = options.lag_range.value_or(LagRange{0, artifacts.window_symbols()});
    if (matrix.lag_range.lo < 0 || matrix.lag_range.lo > matrix.lag_range.hi) {
        throw Error(Errc::InvalidParams, "lag range must satisfy 0 <= lo <= hi");
    }

    const auto fragments = focus_fragments(query, *focus_index, artifacts, options.execute);
    matrix.focus_fragments = fragments.size();

    std::set<std::uint32_t> focus_series;
    for (const auto& f : fragments) {
        focus_series.insert(f.series);
    }
    const auto& ds = artifacts.dataset();
    std::set<std::uint32_t> candidates;
    for (auto kind : kRecommendedKinds) {
        const auto& index = artifacts.index(kind);
        for (auto s : focus_series) {
            for (const auto& name : index.top(ds.name(s), kDefaultCandidateCount)) {
                candidates.insert(static_cast<std::uint32_t>(*ds.index_of(name)));
            }
        }
    }
    for (auto s : focus_series) {
        candidates.erase(s);
    }

    for (auto candidate : candidates) {
        GuidanceRow row;
        row.series = ds.name(candidate);
        bool any = false;
        for (std::size_t col = 0; col < kRecommendedKinds.size(); ++col) {
            row.cells[col] = evaluate_cell(artifacts, kRecommendedKinds[col], candidate, fragments,
                matrix.lag_range, query.max_lag, options.thresholds);
            any = any || row.cells[col].has_value();
        }
        if (any) {
            matrix.rows.push_back(std::move(row));
        }
    }

    // rank by the best cell; confidence shares one denominator, so passes order the same way
    auto max_passes = [](const GuidanceRow& r) {
        std::size_t best = 0;
        for (const auto& c : r.cells) {
            if (c) {
                best = std::max(best, c->passes);
            }
        }
        return best;
    };
    auto max_mean = [](const GuidanceRow& r) {
        double best = 0.0;
        for (const auto& c : r.cells) {
            if (c) {
                best = std::max(best, std::abs(c->mean_strength));
            }
        }
        return best;
    };
    std::stable_sort(matrix.rows.begin(), matrix.rows.end(), [&](const GuidanceRow& a, const GuidanceRow& b) {
        const auto pa = max_passes(a);
        const auto pb = max_passes(b);
        if (pa != pb) {
            return pa > pb;
        }
        const auto ma = max_mean(a);
        const auto mb = max_mean(b);
        if (ma != mb) {
            return ma > mb;
        }
        return a.series < b.series;
    });
    if (matrix.rows.size() > options.max_rows) {
        matrix.rows.resize(options.max_rows);
    }
    assign_confidence(matrix);
    return matrix;
}

QueryDelta query_delta(const QueryGraph& query, std::string_view focus, const Recommendation& cell)
{
    const auto& box = query.box(focus);
    auto fresh = [&](const std::string& stem) {
        for (std::size_t n = query.timeboxes.size() + query.relalinks.size();; ++n) {
            auto id = stem + std::to_string(n);
            bool used = query.box_index(id).has_value();
            for (const auto& l : query.relalinks) {
                used = used || l.id == id;
            }
            if (!used) {
                return id;
            }
        }
    };
    QueryDelta delta;
    delta.timebox.id = fresh("box");
    delta.timebox.name = cell.series;
    delta.timebox.offset = box.offset + cell.best_lag;

    delta.relalink.id = fresh("link");
    delta.relalink.kind = cell.kind;
    delta.relalink.source = box.id;
    delta.relalink.target = delta.timebox.id;
    const auto dom = strength_domain(cell.kind);
    if (cell.mean_strength >= 0.0) {
        delta.relalink.threshold = {std::clamp(cell.mean_strength - 0.05, dom.lo, dom.hi), dom.hi};
    } else {
        // negatively correlated partner: mirror the interval
        delta.relalink.threshold = {dom.lo, std::clamp(cell.mean_strength + 0.05, dom.lo, dom.hi)};
    }
    return delta;
}

QueryGraph apply_delta(QueryGraph query, const QueryDelta& delta)
{
    query.timeboxes.push_back(delta.timebox);
    query.relalinks.push_back(delta.relalink);
    return query;
}

} // namespace relaq
