#include "relaq/matcher.hpp"

#include <algorithm>
#include <unordered_set>

namespace relaq {

namespace {

struct BackLink {
    std::size_t link = 0;
    std::size_t other = 0;
    // the box being placed is the link's target
    bool placing_target = false;
};

struct KeyHash {
    std::size_t operator()(const std::vector<std::uint32_t>& key) const noexcept
    {
        std::size_t h = 1469598103934665603ull;
        for (auto v : key) {
            h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        }
        return h;
    }
};

class Search {
public:
    Search(const QueryGraph& q, const DatasetGraph& g, const SearchOptions& opt)
        : q_(q), g_(g), opt_(opt), order_(temporal_order_indices(q))
    {
        const std::size_t n = order_.size();
        std::vector<std::size_t> pos(n);
        for (std::size_t k = 0; k < n; ++k) {
            pos[order_[k]] = k;
        }
        back_.resize(n);
        frontier_.resize(n + 1);
        for (std::size_t l = 0; l < q.relalinks.size(); ++l) {
            const auto s = g.links[l].source_box;
            const auto t = g.links[l].target_box;
            if (pos[s] < pos[t]) {
                back_[pos[t]].push_back({l, s, true});
            } else {
                back_[pos[s]].push_back({l, t, false});
            }
        }
        for (std::size_t k = 0; k <= n; ++k) {
            for (std::size_t j = 0; j < k; ++j) {
                const auto box = order_[j];
                bool open = false;
                for (std::size_t l = 0; l < q.relalinks.size() && !open; ++l) {
                    const auto s = g.links[l].source_box;
                    const auto t = g.links[l].target_box;
                    open = (s == box && pos[t] >= k) || (t == box && pos[s] >= k);
                }
                if (open) {
                    frontier_[k].push_back(box);
                }
            }
        }
        dead_.resize(n + 1);
        assign_.assign(n, kUnassigned);
        better_ = opt.better ? opt.better : [](const ResultGraph& a, const ResultGraph& b) { return a.score > b.score; };
    }

    SearchOutcome run()
    {
        if (!order_.empty()) {
            dfs(0, unsatisfied_budget(q_.mode));
        }
        compact(opt_.cap);
        out_.truncated = out_.truncated || out_.found > out_.results.size();
        return std::move(out_);
    }

private:
    static constexpr std::uint32_t kUnassigned = 0xffffffffu;

    bool stopped()
    {
        if (stop_) {
            return true;
        }
        if ((out_.expansions & 1023u) == 1) {
            if ((opt_.cancel != nullptr && opt_.cancel->load(std::memory_order_relaxed))
                || (opt_.deadline && std::chrono::steady_clock::now() >= *opt_.deadline)) {
                stop_ = true;
                out_.cancelled = true;
                out_.truncated = true;
            }
        }
        return stop_;
    }

    std::vector<std::uint32_t> key(std::size_t k, int budget) const
    {
        std::vector<std::uint32_t> out;
        out.reserve(frontier_[k].size() + 1);
        for (auto box : frontier_[k]) {
            out.push_back(assign_[box]);
        }
        out.push_back(static_cast<std::uint32_t>(budget));
        return out;
    }

    bool dfs(std::size_t k, int budget)
    {
        if (k == order_.size()) {
            emit();
            return true;
        }
        std::vector<std::uint32_t> memo_key;
        if (opt_.memoize) {
            memo_key = key(k, budget);
            if (dead_[k].contains(memo_key)) {
                ++out_.memo_hits;
                return false;
            }
        }

        const auto box = order_[k];
        const auto& backs = back_[k];
        bool found = false;
        auto attempt = [&](std::uint32_t v) {
            ++out_.expansions;
            if (stopped()) {
                return;
            }
            int used = 0;
            for (const auto& b : backs) {
                const auto& set = g_.links[b.link];
                const auto* e = b.placing_target ? set.find(assign_[b.other], v) : set.find(v, assign_[b.other]);
                if (e == nullptr) {
                    return;
                }
                if (!e->instance.satisfied) {
                    ++used;
                }
            }
            if (used > budget) {
                return;
            }
            assign_[box] = v;
            if (dfs(k + 1, budget - used)) {
                found = true;
            }
            assign_[box] = kUnassigned;
        };

        if (backs.empty()) {
            const auto count = static_cast<std::uint32_t>(g_.nodes[box].size());
            for (std::uint32_t v = 0; v < count && !stop_; ++v) {
                attempt(v);
            }
        } else {
            const auto& first = backs.front();
            const auto& set = g_.links[first.link];
            const auto u = assign_[first.other];
            const auto& adjacent = first.placing_target ? set.by_source[u] : set.by_target[u];
            for (auto e : adjacent) {
                if (stop_) {
                    break;
                }
                attempt(first.placing_target ? set.edges[e].target : set.edges[e].source);
            }
        }

        if (opt_.memoize && !found && !stop_) {
            dead_[k].insert(std::move(memo_key));
        }
        return found;
    }

    void emit()
    {
        ResultGraph r;
        r.assignment.reserve(assign_.size());
        for (std::size_t i = 0; i < assign_.size(); ++i) {
            r.assignment.push_back(g_.nodes[i][assign_[i]]);
        }
        r.links.reserve(g_.links.size());
        for (const auto& set : g_.links) {
            r.links.push_back(set.find(assign_[set.source_box], assign_[set.target_box])->instance);
        }
        r.score = score(r);
        out_.results.push_back(std::move(r));
        ++out_.found;
        if (out_.results.size() >= 2 * std::max<std::size_t>(opt_.cap, 1)) {
            compact(opt_.cap);
        }
    }

    void compact(std::size_t cap)
    {
        std::stable_sort(out_.results.begin(), out_.results.end(), better_);
        if (out_.results.size() > cap) {
            out_.results.resize(cap);
            out_.truncated = true;
        }
    }

    const QueryGraph& q_;
    const DatasetGraph& g_;
    const SearchOptions& opt_;
    std::vector<std::size_t> order_;
    std::vector<std::vector<BackLink>> back_;
    std::vector<std::vector<std::size_t>> frontier_;
    std::vector<std::unordered_set<std::vector<std::uint32_t>, KeyHash>> dead_;
    std::vector<std::uint32_t> assign_;
    std::function<bool(const ResultGraph&, const ResultGraph&)> better_;
    SearchOutcome out_;
    bool stop_ = false;
};

} // namespace

SearchOutcome search(const QueryGraph& query, const DatasetGraph& graph, const SearchOptions& options)
{
    return Search(query, graph, options).run();
}

} // namespace relaq
