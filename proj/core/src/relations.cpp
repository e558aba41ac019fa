#include "relaq/relations.hpp"

#include "relaq/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace relaq {

std::string_view to_string(RelationKind kind) noexcept
{
    switch (kind) {
    case RelationKind::Correlation: return "correlation";
    case RelationKind::Similarity: return "similarity";
    case RelationKind::Causality: return "causality";
    case RelationKind::Lag: return "lag";
    case RelationKind::Meta: return "meta";
    case RelationKind::Arithmetic: return "arithmetic";
    }
    return "?";
}

std::optional<RelationKind> parse_relation_kind(std::string_view text) noexcept
{
    for (auto k : {RelationKind::Correlation, RelationKind::Similarity, RelationKind::Causality,
             RelationKind::Lag, RelationKind::Meta, RelationKind::Arithmetic}) {
        if (to_string(k) == text) {
            return k;
        }
    }
    return std::nullopt;
}

StrengthDomain strength_domain(RelationKind kind)
{
    switch (kind) {
    case RelationKind::Correlation: return {-1.0, 1.0, false};
    case RelationKind::Similarity:
    case RelationKind::Causality: return {0.0, 1.0, false};
    case RelationKind::Meta:
    case RelationKind::Arithmetic: return {0.0, 1.0, true};
    case RelationKind::Lag: break;
    }
    throw Error(Errc::InvalidQuery, "lag has no strength domain");
}

std::string_view to_string(ArithmeticOp op) noexcept
{
    switch (op) {
    case ArithmeticOp::Sum: return "sum";
    case ArithmeticOp::Avg: return "avg";
    case ArithmeticOp::Var: return "var";
    case ArithmeticOp::Min: return "min";
    case ArithmeticOp::Max: return "max";
    }
    return "?";
}

std::string_view to_string(Comparator cmp) noexcept
{
    switch (cmp) {
    case Comparator::Ge: return ">=";
    case Comparator::Le: return "<=";
    case Comparator::Eq: return "=";
    }
    return "?";
}

std::optional<ArithmeticOp> parse_arithmetic_op(std::string_view text) noexcept
{
    for (auto op : {ArithmeticOp::Sum, ArithmeticOp::Avg, ArithmeticOp::Var, ArithmeticOp::Min, ArithmeticOp::Max}) {
        if (to_string(op) == text) {
            return op;
        }
    }
    return std::nullopt;
}

std::optional<Comparator> parse_comparator(std::string_view text) noexcept
{
    for (auto c : {Comparator::Ge, Comparator::Le, Comparator::Eq}) {
        if (to_string(c) == text) {
            return c;
        }
    }
    if (text == "==") {
        return Comparator::Eq;
    }
    return std::nullopt;
}

namespace {

void require_same_length(std::span<const double> a, std::span<const double> b)
{
    if (a.size() != b.size()) {
        throw Error(Errc::LengthMismatch, std::to_string(a.size()) + " vs " + std::to_string(b.size()));
    }
}

double mean(std::span<const double> v)
{
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

} // namespace

double pearson_strength(std::span<const double> a, std::span<const double> b)
{
    require_same_length(a, b);
    if (a.size() < 2) {
        throw Error(Errc::TooShort, "correlation needs at least 2 points");
    }
    const double ma = mean(a);
    const double mb = mean(b);
    double sab = 0.0;
    double saa = 0.0;
    double sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double da = a[i] - ma;
        const double db = b[i] - mb;
        sab += da * db;
        saa += da * da;
        sbb += db * db;
    }
    if (saa == 0.0 || sbb == 0.0) {
        return 0.0;
    }
    return std::clamp(sab / std::sqrt(saa * sbb), -1.0, 1.0);
}

double similarity_strength(std::span<const double> a, std::span<const double> b)
{
    require_same_length(a, b);
    if (a.empty()) {
        throw Error(Errc::TooShort, "similarity needs at least 1 point");
    }
    double ss = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        ss += d * d;
    }
    return std::clamp(1.0 - std::sqrt(ss) / std::sqrt(static_cast<double>(a.size())), 0.0, 1.0);
}

double granger_strength(std::span<const double> cause, std::span<const double> effect, int max_lag)
{
    return granger_test(cause, effect, max_lag).strength();
}

double meta_strength(const MetaLabels& labels, std::string_view series_a, std::string_view series_b,
                     std::string_view key)
{
    if (!labels.has_key(key)) {
        throw Error(Errc::UnknownKey, "label key '" + std::string(key) + "' is not in the config");
    }
    auto va = labels.get(series_a, key);
    auto vb = labels.get(series_b, key);
    return (va && vb && *va == *vb) ? 1.0 : 0.0;
}

double arithmetic_value(std::span<const double> values, ArithmeticOp op)
{
    if (values.empty()) {
        throw Error(Errc::TooShort, "arithmetic relation needs a non-empty fragment");
    }
    switch (op) {
    case ArithmeticOp::Sum: return std::accumulate(values.begin(), values.end(), 0.0);
    case ArithmeticOp::Avg: return mean(values);
    case ArithmeticOp::Var: {
        const double m = mean(values);
        double ss = 0.0;
        for (double v : values) {
            ss += (v - m) * (v - m);
        }
        return ss / static_cast<double>(values.size());
    }
    case ArithmeticOp::Min: return *std::min_element(values.begin(), values.end());
    case ArithmeticOp::Max: return *std::max_element(values.begin(), values.end());
    }
    return 0.0;
}

double arithmetic_strength(std::span<const double> a, std::span<const double> b, ArithmeticSpec spec, double tol)
{
    const double x = arithmetic_value(a, spec.op);
    const double y = arithmetic_value(b, spec.op);
    switch (spec.cmp) {
    case Comparator::Ge: return x >= y ? 1.0 : 0.0;
    case Comparator::Le: return x <= y ? 1.0 : 0.0;
    case Comparator::Eq: return std::abs(x - y) <= tol * std::max(std::abs(x), std::abs(y)) ? 1.0 : 0.0;
    }
    return 0.0;
}

double strength(RelationKind kind, const FragmentView& a, const FragmentView& b, const StrengthContext& ctx)
{
    switch (kind) {
    case RelationKind::Correlation: return pearson_strength(a.raw, b.raw);
    case RelationKind::Similarity: return similarity_strength(a.minmax, b.minmax);
    case RelationKind::Causality: {
        require_same_length(a.raw, b.raw);
        const int lag = supported_granger_lag(a.raw.size(), ctx.max_lag);
        if (lag < 1) {
            throw Error(Errc::TooShort, "fragment of " + std::to_string(a.raw.size())
                + " points is too short for a causality test");
        }
        return granger_strength(a.raw, b.raw, lag);
    }
    case RelationKind::Meta:
        if (ctx.labels == nullptr) {
            throw Error(Errc::UnknownKey, "no labels loaded for meta relation");
        }
        return meta_strength(*ctx.labels, a.series, b.series, ctx.meta_key);
    case RelationKind::Arithmetic: return arithmetic_strength(a.raw, b.raw, ctx.arithmetic, ctx.tolerance);
    case RelationKind::Lag: break;
    }
    throw Error(Errc::InvalidQuery, "lag is not a scored relation");
}

} // namespace relaq
