#include "relaq/trend_trie.hpp"

#include "relaq/error.hpp"

#include <algorithm>

namespace relaq {

namespace {

int symbol_slot(char c) noexcept
{
    return (c >= 'a' && c <= 'd') ? c - 'a' : -1;
}

} // namespace

TrendTrie::TrendTrie(std::vector<std::string> names, std::span<const std::string> sequences, int window_symbols)
    : names_(std::move(names))
    , depth_(window_symbols)
{
    if (window_symbols < 1) {
        throw Error(Errc::InvalidParams, "window must hold at least one symbol");
    }
    const auto window = static_cast<std::size_t>(window_symbols);
    for (std::size_t s = 0; s < sequences.size(); ++s) {
        if (sequences[s].size() < window) {
            throw Error(Errc::WindowTooLong, "window of " + std::to_string(window)
                + " symbols exceeds sequence length " + std::to_string(sequences[s].size()));
        }
    }

    nodes_.emplace_back();
    for (std::size_t s = 0; s < sequences.size(); ++s) {
        const auto& seq = sequences[s];
        for (std::size_t start = 0; start + window <= seq.size(); ++start) {
            std::int32_t node = 0;
            ++nodes_[0].count;
            for (std::size_t k = 0; k < window; ++k) {
                const int slot = symbol_slot(seq[start + k]);
                if (slot < 0) {
                    throw Error(Errc::InvalidParams, std::string("symbol outside a..d: ") + seq[start + k]);
                }
                auto child = nodes_[node].children[slot];
                if (child < 0) {
                    child = static_cast<std::int32_t>(nodes_.size());
                    nodes_[node].children[slot] = child;
                    nodes_.emplace_back();
                }
                node = child;
                ++nodes_[node].count;
            }
            if (nodes_[node].leaf < 0) {
                nodes_[node].leaf = static_cast<std::int32_t>(leaves_.size());
                leaves_.emplace_back();
            }
            leaves_[nodes_[node].leaf].push_back(
                {static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(start)});
        }
    }
}

std::int32_t TrendTrie::walk(std::string_view prefix) const
{
    if (nodes_.empty()) {
        return -1;
    }
    std::int32_t node = 0;
    for (char c : prefix) {
        const int slot = symbol_slot(c);
        if (slot < 0) {
            return -1;
        }
        node = nodes_[node].children[slot];
        if (node < 0) {
            return -1;
        }
    }
    return node;
}

std::span<const Occurrence> TrendTrie::occurrences(std::string_view window) const
{
    if (static_cast<int>(window.size()) != depth_) {
        return {};
    }
    const auto node = walk(window);
    if (node < 0 || nodes_[node].leaf < 0) {
        return {};
    }
    return leaves_[nodes_[node].leaf];
}

std::span<const Occurrence> TrendTrie::leaf_occurrences(std::int32_t leaf) const
{
    return leaves_.at(static_cast<std::size_t>(leaf));
}

TrendTrie build_trend_trie(std::vector<std::string> names, std::span<const std::string> sequences,
                           int window_symbols)
{
    return TrendTrie(std::move(names), sequences, window_symbols);
}

std::vector<SymbolRatio> suggest_next_symbols(const TrendTrie& trie, std::string_view prefix)
{
    std::vector<SymbolRatio> out;
    if (static_cast<int>(prefix.size()) >= trie.depth()) {
        return out;
    }
    const auto node = trie.walk(prefix);
    if (node < 0) {
        return out;
    }
    const auto& parent = trie.nodes()[node];
    for (int slot = 0; slot < 4; ++slot) {
        const auto child = parent.children[slot];
        if (child >= 0) {
            out.push_back({static_cast<char>('a' + slot),
                static_cast<double>(trie.nodes()[child].count) / static_cast<double>(parent.count)});
        }
    }
    std::stable_sort(out.begin(), out.end(),
        [](const SymbolRatio& a, const SymbolRatio& b) { return a.ratio > b.ratio; });
    return out;
}

} // namespace relaq
