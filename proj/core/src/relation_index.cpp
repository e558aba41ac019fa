#include "relaq/relation_index.hpp"

#include "relaq/error.hpp"

#include <algorithm>

namespace relaq {

RelationIndex::RelationIndex(RelationKind kind, std::vector<std::string> names, std::vector<double> strengths)
    : kind_(kind)
    , names_(std::move(names))
    , strengths_(std::move(strengths))
{
    if (strengths_.size() != names_.size() * names_.size()) {
        throw Error(Errc::InvalidParams, "relation matrix does not match series count");
    }
    order_.reserve(names_.size());
    for (std::size_t i = 0; i < names_.size(); ++i) {
        order_.push_back(rank(i, false));
    }
}

std::vector<RankedSeries> RelationIndex::rank(std::size_t series, bool incoming) const
{
    const std::size_t n = names_.size();
    std::vector<RankedSeries> list;
    list.reserve(n == 0 ? 0 : n - 1);
    for (std::size_t j = 0; j < n; ++j) {
        if (j != series) {
            list.push_back({names_[j], incoming ? strengths_[j * n + series] : strengths_[series * n + j]});
        }
    }
    std::stable_sort(list.begin(), list.end(), [](const RankedSeries& a, const RankedSeries& b) {
        if (a.strength != b.strength) {
            return a.strength > b.strength;
        }
        return a.name < b.name;
    });
    return list;
}

std::size_t RelationIndex::position(std::string_view series) const
{
    auto it = std::find(names_.begin(), names_.end(), series);
    if (it == names_.end()) {
        throw Error(Errc::UnknownSeries, "series '" + std::string(series) + "' is not indexed");
    }
    return static_cast<std::size_t>(it - names_.begin());
}

const std::vector<RankedSeries>& RelationIndex::order(std::string_view series) const
{
    return order_[position(series)];
}

std::vector<RankedSeries> RelationIndex::incoming(std::string_view series) const
{
    return rank(position(series), true);
}

std::vector<std::string> RelationIndex::top(std::string_view series, std::size_t n, bool incoming) const
{
    const auto list = incoming ? this->incoming(series) : order(series);
    std::vector<std::string> out;
    for (std::size_t i = 0; i < list.size() && i < n; ++i) {
        out.push_back(list[i].name);
    }
    return out;
}

RelationIndex build_relation_index(RelationKind kind, std::vector<std::string> names,
                                   std::span<const std::vector<double>> raw,
                                   std::span<const std::vector<double>> minmax, int max_lag)
{
    const std::size_t n = names.size();
    if (raw.size() != n || minmax.size() != n) {
        throw Error(Errc::InvalidParams, "series data does not match name count");
    }
    std::vector<double> s(n * n, 0.0);
    switch (kind) {
    case RelationKind::Correlation:
    case RelationKind::Similarity:
        for (std::size_t i = 0; i < n; ++i) {
            s[i * n + i] = 1.0;
            for (std::size_t j = i + 1; j < n; ++j) {
                const double v = kind == RelationKind::Correlation ? pearson_strength(raw[i], raw[j])
                                                                   : similarity_strength(minmax[i], minmax[j]);
                s[i * n + j] = v;
                s[j * n + i] = v;
            }
        }
        break;
    case RelationKind::Causality: {
        const int lag = n == 0 ? 0 : supported_granger_lag(raw[0].size(), max_lag);
        if (lag >= 1) {
            for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t j = 0; j < n; ++j) {
                    if (i != j) {
                        s[i * n + j] = granger_strength(raw[i], raw[j], lag);
                    }
                }
            }
        }
        break;
    }
    default:
        throw Error(Errc::InvalidParams, "no relation index for kind " + std::string(to_string(kind)));
    }
    return RelationIndex(kind, std::move(names), std::move(s));
}

} // namespace relaq
