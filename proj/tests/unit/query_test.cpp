#include "fixtures.hpp"

#include "relaq/error.hpp"
#include "relaq/query.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>

using namespace relaq;

namespace {

// SF rising within [25, 35], correlated (>= 0.8) with a default box two hours later.
const char* kCityQuery = R"({
  "mode": "strict",
  "sampling_length": 1,
  "box_length": 6,
  "timeboxes": [
    {"id": "sf", "name": "SF", "offset": 0, "sketch": [{"x": 0, "y": 0}, {"x": 6, "y": 1}], "value_bounds": [25, 35]},
    {"id": "other", "offset": 2}
  ],
  "relalinks": [
    {"id": "c", "kind": "correlation", "source": "sf", "target": "other", "threshold": [0.8, 1]}
  ]
})";

std::vector<std::string> codes(const std::vector<Diagnostic>& diags)
{
    std::vector<std::string> out;
    for (const auto& d : diags) {
        out.push_back(d.code);
    }
    return out;
}

bool has(const std::vector<Diagnostic>& diags, std::string_view code)
{
    return std::any_of(diags.begin(), diags.end(), [&](const Diagnostic& d) { return d.code == code; });
}

std::string violation_path(std::string_view json)
{
    try {
        parse_query(json);
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::SchemaViolation);
        return e.path();
    }
    return "<none>";
}

std::shared_ptr<const Artifacts> cities()
{
    std::mt19937_64 rng(21);
    std::vector<std::vector<double>> s;
    for (int i = 0; i < 3; ++i) {
        auto v = testkit::random_walk(rng, 48);
        for (auto& x : v) {
            x += 30.0;
        }
        s.push_back(v);
    }
    return testkit::make_artifacts({"SF", "LA", "SD"}, s, {1, 6, 4}, parse_config("name,State\nSF,CA\nLA,CA\nSD,CA\n"));
}

} // namespace

TEST(QueryJson, CityQueryIsValid)
{
    auto q = parse_query(kCityQuery);
    EXPECT_EQ(q.timeboxes.size(), 2u);
    EXPECT_EQ(q.required_lag(q.relalinks[0]), 2);
    EXPECT_TRUE(validate_query(q).empty()) << ::testing::PrintToString(codes(validate_query(q)));
    auto a = cities();
    EXPECT_TRUE(validate_query(q, *a).empty()) << ::testing::PrintToString(codes(validate_query(q, *a)));
}

TEST(QueryJson, RoundTrip)
{
    auto q = parse_query(kCityQuery);
    EXPECT_EQ(parse_query(serialize_query(q)), q);

    QueryGraph full = q;
    full.mode = MatchMode::Fuzzy;
    full.max_lag = 2;
    full.tolerance = 1e-3;
    Relalink meta;
    meta.id = "m";
    meta.kind = RelationKind::Meta;
    meta.source = "sf";
    meta.target = "other";
    meta.meta_key = "State";
    meta.threshold = {1, 1};
    Relalink arith;
    arith.id = "a";
    arith.kind = RelationKind::Arithmetic;
    arith.source = "other";
    arith.target = "sf";
    arith.arithmetic = ArithmeticSpec{ArithmeticOp::Var, Comparator::Le};
    arith.threshold = {1, 1};
    full.relalinks.push_back(meta);
    full.relalinks.push_back(arith);
    full.timeboxes[0].sketch.push_back({7.5, 0.25});
    EXPECT_EQ(parse_query(serialize_query(full)), full);
}

TEST(QueryJson, SchemaViolations)
{
    std::string unknown_kind = kCityQuery;
    unknown_kind.replace(unknown_kind.find("correlation"), 11, "cooccurrence");
    EXPECT_EQ(violation_path(unknown_kind), "/relalinks/0/kind");
    EXPECT_EQ(violation_path("{}"), "/sampling_length");
    EXPECT_EQ(violation_path("not json"), "/");
    EXPECT_EQ(violation_path(R"({"sampling_length":1,"box_length":2,"timeboxes":[{"offset":0}]})"), "/timeboxes/0/id");
    EXPECT_EQ(violation_path(R"({"sampling_length":1,"box_length":2,"mode":"loose","timeboxes":[]})"), "/mode");
    EXPECT_EQ(violation_path(R"({"sampling_length":1,"box_length":2,"timeboxes":[{"id":"a","sketch":[{"x":0}]}]})"),
        "/timeboxes/0/sketch/0/y");
    EXPECT_EQ(violation_path(R"({"sampling_length":1,"box_length":2,"timeboxes":[{"id":"a"}],
        "relalinks":[{"id":"r","kind":"correlation","source":"a","target":"a","threshold":[0]}]})"),
        "/relalinks/0/threshold");
}

TEST(QueryJson, MissingModeMeansStrict)
{
    auto q = parse_query(R"({"sampling_length":1,"box_length":2,"timeboxes":[{"id":"a","name":"SF"}]})");
    EXPECT_EQ(q.mode, MatchMode::Strict);
    EXPECT_EQ(q.relalinks.size(), 0u);
}

TEST(ValidateQuery, Structural)
{
    auto q = parse_query(kCityQuery);
    auto dangling = q;
    dangling.relalinks[0].target = "nowhere";
    EXPECT_TRUE(has(validate_query(dangling), "DanglingEndpoint"));

    auto out_of_domain = q;
    out_of_domain.relalinks[0].threshold = {1.2, 1.5};
    EXPECT_EQ(codes(validate_query(out_of_domain)), std::vector<std::string>{"ThresholdOutOfDomain"});

    auto empty_threshold = q;
    empty_threshold.relalinks[0].threshold = {0.9, 0.8};
    EXPECT_TRUE(has(validate_query(empty_threshold), "EmptyThreshold"));

    auto self = q;
    self.relalinks[0].target = "sf";
    EXPECT_TRUE(has(validate_query(self), "SelfLink"));

    auto disconnected = q;
    disconnected.relalinks.clear();
    EXPECT_TRUE(has(validate_query(disconnected), "Disconnected"));

    auto lag = q;
    lag.relalinks[0].kind = RelationKind::Lag;
    EXPECT_TRUE(has(validate_query(lag), "LagNotALink"));

    auto meta = q;
    meta.relalinks[0].kind = RelationKind::Meta;
    meta.relalinks[0].threshold = {1, 1};
    EXPECT_TRUE(has(validate_query(meta), "MissingMetaKey"));

    auto sketch = q;
    sketch.timeboxes[0].sketch = {{1, 0}, {1, 1}};
    EXPECT_TRUE(has(validate_query(sketch), "DegenerateSketch"));

    auto bounds = q;
    bounds.timeboxes[0].value_bounds = ValueBounds{5, 1};
    EXPECT_TRUE(has(validate_query(bounds), "BadValueBounds"));

    auto dup = q;
    dup.timeboxes[1].id = "sf";
    EXPECT_TRUE(has(validate_query(dup), "DuplicateId"));

    EXPECT_TRUE(has(validate_query(QueryGraph{}), "NoTimeboxes"));
}

TEST(ValidateQuery, AgainstDataset)
{
    auto a = cities();
    auto q = parse_query(kCityQuery);

    auto unknown = q;
    unknown.timeboxes[0].name = "NYC";
    EXPECT_TRUE(has(validate_query(unknown, *a), "UnknownSeries"));

    auto params = q;
    params.params.box_length = 8;
    EXPECT_TRUE(has(validate_query(params, *a), "ParamsMismatch"));

    auto key = q;
    key.relalinks[0].kind = RelationKind::Meta;
    key.relalinks[0].meta_key = "Coast";
    key.relalinks[0].threshold = {1, 1};
    EXPECT_TRUE(has(validate_query(key, *a), "UnknownKey"));

    auto causality = q;
    causality.relalinks[0].kind = RelationKind::Causality;
    causality.relalinks[0].threshold = {0.5, 1};
    EXPECT_TRUE(validate_query(causality, *a).empty());

    auto short_window = testkit::make_artifacts({"SF", "LA"}, {std::vector<double>(12, 1.0), std::vector<double>(12, 2.0)},
        {1, 4, 4});
    causality.params = {1, 4, 4};
    EXPECT_TRUE(has(validate_query(causality, *short_window), "FragmentTooShort"));
}

TEST(TemporalOrder, OffsetsThenIds)
{
    auto q = parse_query(kCityQuery);
    EXPECT_EQ(temporal_order(q), (std::vector<std::string>{"sf", "other"}));
    q.timeboxes[1].offset = 0;
    EXPECT_EQ(temporal_order(q), (std::vector<std::string>{"other", "sf"}));
    q.timeboxes.pop_back();
    EXPECT_EQ(temporal_order(q), (std::vector<std::string>{"sf"}));

    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        QueryGraph r;
        for (int i = 0; i < 6; ++i) {
            Timebox b;
            b.id = std::string(1, static_cast<char>('a' + std::uniform_int_distribution<int>(0, 25)(rng)))
                + std::to_string(i);
            b.offset = std::uniform_int_distribution<int>(0, 3)(rng);
            r.timeboxes.push_back(b);
        }
        auto order = temporal_order(r);
        EXPECT_EQ(order, temporal_order(r));
        std::vector<std::string> ids;
        for (const auto& b : r.timeboxes) {
            ids.push_back(b.id);
        }
        auto sorted_order = order;
        std::sort(sorted_order.begin(), sorted_order.end());
        std::sort(ids.begin(), ids.end());
        EXPECT_EQ(sorted_order, ids);
        for (std::size_t k = 1; k < order.size(); ++k) {
            const auto& prev = r.box(order[k - 1]);
            const auto& cur = r.box(order[k]);
            EXPECT_TRUE(prev.offset < cur.offset || (prev.offset == cur.offset && prev.id < cur.id));
        }
    }
}
