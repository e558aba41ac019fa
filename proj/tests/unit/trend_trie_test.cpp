#include "relaq/error.hpp"
#include "relaq/trend_trie.hpp"

#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>

using namespace relaq;

namespace {

TrendTrie abab()
{
    std::vector<std::string> seqs{"abab"};
    return build_trend_trie({"s"}, seqs, 2);
}

} // namespace

TEST(TrendTrie, HandCountedRatios)
{
    auto trie = abab();
    EXPECT_EQ(trie.window_count(), 3u);
    auto root = suggest_next_symbols(trie, "");
    ASSERT_EQ(root.size(), 2u);
    EXPECT_EQ(root[0].symbol, 'a');
    EXPECT_DOUBLE_EQ(root[0].ratio, 2.0 / 3.0);
    EXPECT_EQ(root[1].symbol, 'b');
    EXPECT_DOUBLE_EQ(root[1].ratio, 1.0 / 3.0);

    auto after_a = suggest_next_symbols(trie, "a");
    ASSERT_EQ(after_a.size(), 1u);
    EXPECT_EQ(after_a[0].symbol, 'b');
    EXPECT_EQ(after_a[0].ratio, 1.0);

    EXPECT_TRUE(suggest_next_symbols(trie, "d").empty());
    EXPECT_TRUE(suggest_next_symbols(trie, "ab").empty());
    EXPECT_TRUE(suggest_next_symbols(trie, "ax").empty());
}

TEST(TrendTrie, LeafOccurrences)
{
    auto trie = abab();
    auto ab = trie.occurrences("ab");
    ASSERT_EQ(ab.size(), 2u);
    EXPECT_EQ(ab[0].start, 0u);
    EXPECT_EQ(ab[1].start, 2u);
    EXPECT_EQ(trie.occurrences("ba").size(), 1u);
    EXPECT_TRUE(trie.occurrences("cc").empty());
}

TEST(TrendTrie, TiesOrderedBySymbol)
{
    std::vector<std::string> seqs{"dcba"};
    auto trie = build_trend_trie({"s"}, seqs, 1);
    auto root = suggest_next_symbols(trie, "");
    ASSERT_EQ(root.size(), 4u);
    EXPECT_EQ(root[0].symbol, 'a');
    EXPECT_EQ(root[3].symbol, 'd');
}

TEST(TrendTrie, WindowTooLong)
{
    std::vector<std::string> seqs{"abcd", "ab"};
    try {
        build_trend_trie({"x", "y"}, seqs, 3);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), Errc::WindowTooLong);
    }
}

TEST(TrendTrie, RandomCorpusCompleteness)
{
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 30; ++trial) {
        const int window = 1 + trial % 6;
        const int n = 1 + trial % 5;
        std::vector<std::string> names;
        std::vector<std::string> seqs;
        std::size_t expected = 0;
        // independent count of every (window text -> occurrences)
        std::map<std::string, std::set<std::pair<std::uint32_t, std::uint32_t>>> windows;
        for (int i = 0; i < n; ++i) {
            const auto len = static_cast<std::size_t>(window + std::uniform_int_distribution<int>(0, 60)(rng));
            std::string s;
            for (std::size_t k = 0; k < len; ++k) {
                s.push_back(static_cast<char>('a' + std::uniform_int_distribution<int>(0, trial % 2 ? 1 : 3)(rng)));
            }
            for (std::size_t k = 0; k + static_cast<std::size_t>(window) <= len; ++k) {
                windows[s.substr(k, static_cast<std::size_t>(window))].emplace(i, k);
            }
            expected += len - static_cast<std::size_t>(window) + 1;
            names.push_back("s" + std::to_string(i));
            seqs.push_back(s);
        }
        auto trie = build_trend_trie(names, seqs, window);
        EXPECT_EQ(trie.depth(), window);

        std::size_t leaf_total = 0;
        for (std::size_t l = 0; l < trie.leaf_count(); ++l) {
            leaf_total += trie.leaf_occurrences(static_cast<std::int32_t>(l)).size();
        }
        EXPECT_EQ(leaf_total, expected);
        EXPECT_EQ(trie.window_count(), expected);

        for (const auto& [text, occ] : windows) {
            auto got = trie.occurrences(text);
            std::set<std::pair<std::uint32_t, std::uint32_t>> found;
            for (const auto& o : got) {
                found.emplace(o.series, o.start);
            }
            EXPECT_EQ(found, occ) << text;
            EXPECT_EQ(got.size(), occ.size());
        }

        for (const auto& node : trie.nodes()) {
            double sum = 0.0;
            bool internal = false;
            for (auto child : node.children) {
                if (child >= 0) {
                    internal = true;
                    sum += static_cast<double>(trie.nodes()[static_cast<std::size_t>(child)].count)
                        / static_cast<double>(node.count);
                }
            }
            if (internal) {
                EXPECT_NEAR(sum, 1.0, 1e-9);
            }
        }
        // ratios reported by the suggestion API sum to one for every inserted prefix
        for (const auto& [text, occ] : windows) {
            for (int len = 0; len < window; ++len) {
                double sum = 0.0;
                for (const auto& sr : suggest_next_symbols(trie, text.substr(0, static_cast<std::size_t>(len)))) {
                    sum += sr.ratio;
                }
                EXPECT_NEAR(sum, 1.0, 1e-9);
            }
        }
    }
}
