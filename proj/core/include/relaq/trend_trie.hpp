#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace relaq {

struct Occurrence {
    std::uint32_t series = 0;
    // in compressed samples
    std::uint32_t start = 0;

    friend bool operator==(const Occurrence&, const Occurrence&) = default;
};

struct SymbolRatio {
    char symbol = 'a';
    double ratio = 0.0;

    friend bool operator==(const SymbolRatio&, const SymbolRatio&) = default;
};

// Prefix tree over every sliding window (step one symbol) of a set of
// symbolic sequences. Each node counts the windows passing through it, so the
// occurrence ratio of a child is child.count / parent.count. Leaves sit at
// depth window_symbols and list the window starts.
class TrendTrie {
public:
    struct Node {
        std::array<std::int32_t, 4> children{-1, -1, -1, -1};
        std::uint64_t count = 0;
        std::int32_t leaf = -1;
    };

    TrendTrie() = default;

    // throws Error(WindowTooLong) if any sequence is shorter than the window
    TrendTrie(std::vector<std::string> names, std::span<const std::string> sequences, int window_symbols);

    [[nodiscard]] int depth() const noexcept { return depth_; }
    [[nodiscard]] const std::vector<std::string>& names() const noexcept { return names_; }
    [[nodiscard]] const std::vector<Node>& nodes() const noexcept { return nodes_; }
    [[nodiscard]] const Node& root() const { return nodes_.front(); }
    [[nodiscard]] std::uint64_t window_count() const noexcept { return nodes_.empty() ? 0 : nodes_.front().count; }

    // node index reached by walking the prefix, or -1
    [[nodiscard]] std::int32_t walk(std::string_view prefix) const;

    // Occurrences of a full-length window; empty if never inserted.
    [[nodiscard]] std::span<const Occurrence> occurrences(std::string_view window) const;
    [[nodiscard]] std::span<const Occurrence> leaf_occurrences(std::int32_t leaf) const;
    [[nodiscard]] std::size_t leaf_count() const noexcept { return leaves_.size(); }

private:
    std::vector<std::string> names_;
    std::vector<Node> nodes_;
    std::vector<std::vector<Occurrence>> leaves_;
    int depth_ = 0;
};

TrendTrie build_trend_trie(std::vector<std::string> names, std::span<const std::string> sequences,
                           int window_symbols);

// Children of the prefix node, descending by ratio (ties by symbol). Unknown
// prefixes and prefixes at or beyond the trie depth yield an empty list.
std::vector<SymbolRatio> suggest_next_symbols(const TrendTrie& trie, std::string_view prefix);

} // namespace relaq
