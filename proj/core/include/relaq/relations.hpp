#pragma once

#include "relaq/datamodel.hpp"

#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace relaq {

// Lag is never scored on its own; it is carried by every pairwise evaluation.
enum class RelationKind { Correlation, Similarity, Causality, Lag, Meta, Arithmetic };

std::string_view to_string(RelationKind kind) noexcept;
std::optional<RelationKind> parse_relation_kind(std::string_view text) noexcept;

struct StrengthDomain {
    double lo = 0.0;
    double hi = 1.0;
    bool binary = false;

    [[nodiscard]] bool contains(double v) const noexcept { return v >= lo && v <= hi; }
};

StrengthDomain strength_domain(RelationKind kind);

enum class ArithmeticOp { Sum, Avg, Var, Min, Max };
enum class Comparator { Ge, Le, Eq };

struct ArithmeticSpec {
    ArithmeticOp op = ArithmeticOp::Avg;
    Comparator cmp = Comparator::Ge;

    friend bool operator==(const ArithmeticSpec&, const ArithmeticSpec&) = default;
};

std::string_view to_string(ArithmeticOp op) noexcept;
std::string_view to_string(Comparator cmp) noexcept;
std::optional<ArithmeticOp> parse_arithmetic_op(std::string_view text) noexcept;
std::optional<Comparator> parse_comparator(std::string_view text) noexcept;

// Sample Pearson correlation in [-1, 1]; 0 if either side is constant.
// throws LengthMismatch, TooShort (fewer than 2 points)
double pearson_strength(std::span<const double> a, std::span<const double> b);

// 1 - ED(a, b) / sqrt(L) for inputs already min-max normalized to [0, 1].
double similarity_strength(std::span<const double> a, std::span<const double> b);

struct GrangerResult {
    double f_stat = 0.0;
    double p_value = 1.0;
    int lag = 0;
    int df_num = 0;
    int df_denom = 0;
    // a design matrix was rank deficient; strength is reported as 0
    bool singular = false;

    [[nodiscard]] double strength() const noexcept;
};

// F-test of "effect ~ own lags" against "effect ~ own lags + cause lags",
// both with an intercept, using exactly `lag` lags.
// throws TooShort unless length >= 3 * lag + 2, LengthMismatch
GrangerResult granger_test(std::span<const double> cause, std::span<const double> effect, int lag);

// 1 - p of granger_test, clamped to [0, 1].
double granger_strength(std::span<const double> cause, std::span<const double> effect, int max_lag);

// Largest lag <= max_lag the series length supports, or 0 when none does.
int supported_granger_lag(std::size_t length, int max_lag) noexcept;

// 1 iff both series carry `key` with equal values. throws UnknownKey
double meta_strength(const MetaLabels& labels, std::string_view series_a, std::string_view series_b,
                     std::string_view key);

double arithmetic_value(std::span<const double> values, ArithmeticOp op);

// 1 iff op(a) cmp op(b); "=" compares with relative tolerance `tol`.
double arithmetic_strength(std::span<const double> a, std::span<const double> b, ArithmeticSpec spec,
                           double tol = 1e-6);

// One side of a pairwise evaluation.
struct FragmentView {
    std::string_view series;
    // values in original units (compressed)
    std::span<const double> raw;
    // the same window of the min-max normalized compressed series
    std::span<const double> minmax;
};

struct StrengthContext {
    const MetaLabels* labels = nullptr;
    std::string meta_key;
    ArithmeticSpec arithmetic;
    double tolerance = 1e-6;
    int max_lag = 4;
};

// Dispatch over the relation kinds; `a` is the cause for causality.
// throws InvalidQuery for kind == Lag
double strength(RelationKind kind, const FragmentView& a, const FragmentView& b, const StrengthContext& ctx);

} // namespace relaq
