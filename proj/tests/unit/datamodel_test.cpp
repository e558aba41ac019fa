#include "fixtures.hpp"

#include "relaq/datamodel.hpp"
#include "relaq/error.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

using namespace relaq;

namespace {

Errc code_of(auto&& fn)
{
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "no error thrown";
    return Errc::InvalidParams;
}

std::optional<std::size_t> row_of(std::string_view csv)
{
    try {
        parse_dataset(csv);
    } catch (const Error& e) {
        return e.row();
    }
    return std::nullopt;
}

} // namespace

TEST(ParseDataset, MinimalFile)
{
    auto ds = parse_dataset("t,SF,LA\n0,1,2\n1,3,4\n2,5,6\n");
    EXPECT_EQ(ds.series_count(), 2u);
    EXPECT_EQ(ds.length(), 3u);
    EXPECT_EQ(ds.name(0), "SF");
    EXPECT_EQ(ds.values(1)[2], 6.0);
    EXPECT_EQ(ds.time_column(), "t");
}

TEST(ParseDataset, BackwardsTimestampNamesTheRow)
{
    const char* csv = "t,a\n0,1\n1,1\n2,1\n3,1\n2,1\n";
    EXPECT_EQ(code_of([&] { parse_dataset(csv); }), Errc::NonMonotonicTime);
    EXPECT_EQ(row_of(csv), 5u);
}

TEST(ParseDataset, RaggedAndEmpty)
{
    EXPECT_EQ(code_of([] { parse_dataset("t,a,b\n0,1,2\n1,3\n"); }), Errc::RaggedRows);
    EXPECT_EQ(row_of("t,a,b\n0,1,2\n1,3\n"), 2u);
    EXPECT_EQ(code_of([] { parse_dataset(""); }), Errc::EmptyDataset);
    EXPECT_EQ(code_of([] { parse_dataset("t,a\n"); }), Errc::EmptyDataset);
    EXPECT_EQ(code_of([] { parse_dataset("t\n0\n1\n"); }), Errc::EmptyDataset);
    EXPECT_EQ(code_of([] { parse_dataset("t,a\n0,1\n"); }), Errc::EmptyDataset);
}

TEST(ParseDataset, RejectsGapsAndBadCells)
{
    EXPECT_EQ(code_of([] { parse_dataset("t,a\n0,1\n1,\n2,3\n"); }), Errc::NonNumericCell);
    EXPECT_EQ(code_of([] { parse_dataset("t,a\n0,1\n1,x\n"); }), Errc::NonNumericCell);
    EXPECT_EQ(code_of([] { parse_dataset("t,a\n0,1\n1,nan\n"); }), Errc::NonNumericCell);
    EXPECT_EQ(code_of([] { parse_dataset("t,a\n0,1\n1,2\n3,3\n"); }), Errc::NonUniformStep);
    EXPECT_EQ(code_of([] { parse_dataset("t,a,a\n0,1,1\n1,2,2\n"); }), Errc::DuplicateSeriesName);
    EXPECT_EQ(code_of([] { parse_dataset("t,a,\n0,1,1\n1,2,2\n"); }), Errc::EmptySeriesName);
}

TEST(ParseDataset, IsoTimestampsAndCrlf)
{
    auto ds = parse_dataset("date,x\r\n2020-01-01 00:00,1\r\n2020-01-01 01:00,2\r\n2020-01-01T02:00:00Z,3\r\n");
    EXPECT_EQ(ds.length(), 3u);
    EXPECT_DOUBLE_EQ(ds.step(), 3600.0);
    EXPECT_EQ(code_of([] { parse_dataset("d,x\n2020-01-01,1\n2020-01-03,2\n2020-01-04,3\n"); }),
        Errc::NonUniformStep);
}

TEST(ParseDataset, UtfNames)
{
    auto ds = parse_dataset("t,Zürich,北京\n0,1,2\n1,2,3\n");
    EXPECT_EQ(ds.name(1), "北京");
}

// Column and row counts of the EEG-style fixture, counted without the parser.
TEST(ParseDataset, EegFixtureShape)
{
    const auto text = testkit::read_fixture("eeg_sample.csv");
    std::istringstream in(text);
    std::string line;
    std::size_t lines = 0;
    std::size_t columns = 0;
    while (std::getline(in, line)) {
        if (lines == 0) {
            columns = static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
        }
        ++lines;
    }
    ASSERT_EQ(columns, 5u);
    ASSERT_EQ(lines, 257u);

    auto ds = parse_dataset(text);
    EXPECT_EQ(ds.series_count(), columns - 1);
    EXPECT_EQ(ds.length(), lines - 1);
    EXPECT_EQ(ds.series_count(), 4u);
    EXPECT_EQ(ds.length(), 256u);

    auto labels = parse_config(testkit::read_fixture("eeg_sample_config.csv"));
    EXPECT_EQ(labels.step_unit, "sample");
    EXPECT_TRUE(validate(ds, labels).empty());
}

TEST(ParseDataset, RoundTrip)
{
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<std::string> names;
        std::vector<std::vector<double>> series;
        const auto n = 1 + trial % 5;
        for (int i = 0; i < n; ++i) {
            names.push_back("s" + std::to_string(i));
            series.push_back(testkit::random_walk(rng, 10 + static_cast<std::size_t>(trial)));
        }
        auto ds = Dataset::with_index_time(names, series);
        EXPECT_EQ(parse_dataset(serialize_dataset(ds)), ds);
    }
}

TEST(ParseConfig, Labels)
{
    auto labels = parse_config("name,State\nSF,CA\nLA,CA");
    EXPECT_EQ(labels.keys, std::vector<std::string>{"State"});
    EXPECT_EQ(labels.get("SF", "State"), "CA");
    EXPECT_EQ(labels.get("LA", "State"), "CA");
    EXPECT_EQ(labels.get("SD", "State"), std::nullopt);
}

TEST(ParseConfig, EmptyAndMissingCells)
{
    EXPECT_TRUE(parse_config("").empty());
    auto labels = parse_config("name,State,Coast\nSF,CA,\nDEN,,no\n");
    EXPECT_EQ(labels.get("SF", "Coast"), std::nullopt);
    EXPECT_EQ(labels.get("DEN", "Coast"), "no");
    EXPECT_EQ(labels.get("DEN", "State"), std::nullopt);
}

TEST(ParseConfig, Errors)
{
    EXPECT_EQ(code_of([] { parse_config("series,State\nSF,CA\n"); }), Errc::MissingNameColumn);
    EXPECT_EQ(code_of([] { parse_config("name,State\nSF,CA\nSF,NY\n"); }), Errc::DuplicateSeriesRow);
}

TEST(ParseConfig, RoundTrip)
{
    auto labels = parse_config("#step_unit=hour\nname,State,Coast\nLA,CA,west\nSF,CA,\n");
    EXPECT_EQ(parse_config(serialize_config(labels)), labels);
}

TEST(Validate, CrossReferences)
{
    auto ds = parse_dataset("t,SF,LA\n0,1,2\n1,3,4\n");
    EXPECT_TRUE(validate(ds, parse_config("name,State\nSF,CA\nLA,CA\n")).empty());

    auto unknown = validate(ds, parse_config("name,State\nSF,CA\nLA,CA\nSD,CA\n"));
    ASSERT_EQ(unknown.size(), 1u);
    EXPECT_EQ(unknown[0].code, "UnknownSeries");
    EXPECT_EQ(unknown[0].subject, "SD");
    EXPECT_EQ(unknown[0].severity, Severity::Error);

    auto unlabeled = validate(ds, parse_config("name,State\nLA,CA\n"));
    ASSERT_EQ(unlabeled.size(), 1u);
    EXPECT_EQ(unlabeled[0].code, "UnlabeledSeries");
    EXPECT_EQ(unlabeled[0].subject, "SF");
    EXPECT_EQ(unlabeled[0].severity, Severity::Warning);

    EXPECT_TRUE(validate(ds, MetaLabels{}).empty());
}

TEST(PreprocessParams, WindowSymbols)
{
    EXPECT_EQ((PreprocessParams{4, 8, 4}).window_symbols(), 2);
    EXPECT_EQ((PreprocessParams{5, 100, 4}).window_symbols(), 20);
    EXPECT_EQ((PreprocessParams{4, 10, 4}).window_symbols(), 3);
    EXPECT_EQ((PreprocessParams{4, 9, 4}).window_symbols(), 2);
    EXPECT_EQ(code_of([] { PreprocessParams{0, 4, 4}.validate(); }), Errc::InvalidParams);
    EXPECT_EQ(code_of([] { PreprocessParams{4, 2, 4}.validate(); }), Errc::InvalidParams);
    EXPECT_EQ(code_of([] { PreprocessParams{1, 2, 5}.validate(); }), Errc::InvalidParams);
}
