// One PASS/FAIL line per acceptance criterion; exits nonzero on any FAIL.
#include "fixtures.hpp"
#include "oracle.hpp"

#include "relaq/artifacts.hpp"
#include "relaq/matcher.hpp"
#include "relaq/normalize.hpp"
#include "relaq/query.hpp"
#include "relaq/recommender.hpp"
#include "relaq/relations.hpp"
#include "relaq/result_json.hpp"
#include "relaq/trend_trie.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <functional>
#include <future>
#include <iostream>
#include <map>
#include <mutex>
#include <random>
#include <set>
#include <sstream>
#include <thread>

using namespace relaq;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int precision = 6)
{
    std::ostringstream s;
    s.precision(precision);
    s << v;
    return s.str();
}

Outcome oracle_equivalence()
{
    constexpr std::size_t kLimit = 20000;
    const auto t0 = Clock::now();
    int compared = 0;
    int skipped = 0;
    int strict = 0;
    std::set<RelationKind> kinds;
    bool lagged = false;
    for (unsigned seed = 50000; compared < 200; ++seed) {
        auto inst = testkit::random_instance(seed);
        if (!validate_query(inst.query, *inst.artifacts).empty()) {
            return {false, "generator produced an invalid query: " + testkit::describe(inst)};
        }
        auto oracle = testkit::brute_force(inst.query, *inst.artifacts, kLimit);
        if (!oracle) {
            ++skipped;
            continue;
        }
        ExecuteOptions opt;
        opt.cap = kLimit + 1;
        auto res = execute_query(inst.query, *inst.artifacts, opt);
        auto diff = testkit::compare_with_oracle(res.results, *oracle);
        if (!diff.empty()) {
            return {false, "seed " + std::to_string(seed) + ": " + diff};
        }
        ++compared;
        strict += inst.query.mode == MatchMode::Strict ? 1 : 0;
        for (const auto& l : inst.query.relalinks) {
            kinds.insert(l.kind);
        }
        for (std::size_t i = 1; i < inst.query.timeboxes.size(); ++i) {
            lagged = lagged || inst.query.timeboxes[i].offset != inst.query.timeboxes[0].offset;
        }
    }
    const double elapsed = seconds_since(t0);
    const bool pass = elapsed < 120.0 && kinds.size() == 5 && lagged && strict > 0 && strict < compared;
    return {pass, std::to_string(compared) + "/200 agree, " + std::to_string(strict) + " strict, " +
                      std::to_string(kinds.size()) + " link kinds + offset lags, " + std::to_string(skipped) +
                      " over the enumeration limit redrawn, " + fmt(elapsed, 3) + " s"};
}

Outcome worked_example()
{
    auto cities = testkit::make_three_cities();
    auto res = execute_query(cities.query, *cities.artifacts);
    if (res.results.size() != 2) {
        return {false, std::to_string(res.results.size()) + " results"};
    }
    const double a = res.results[0].score;
    const double b = res.results[1].score;
    const auto& ds = cities.artifacts->dataset();
    const bool pass = std::abs(a - 2.94) <= 1e-9 && std::abs(b - 2.93) <= 1e-9
        && ds.name(res.results[0].assignment[1].series) == "LA" && ds.name(res.results[1].assignment[1].series) == "SD";
    return {pass, "scores " + fmt(a, 12) + ", " + fmt(b, 12)};
}

Outcome relation_kernels()
{
    std::mt19937_64 rng(7);
    double worst_pearson = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        auto x = testkit::white_noise(rng, 50);
        std::vector<double> y(x.size());
        const double slope = trial % 2 == 0 ? 2.5 : -0.7;
        for (std::size_t i = 0; i < x.size(); ++i) {
            y[i] = slope * x[i] + 3.0;
        }
        worst_pearson = std::max(worst_pearson, std::abs(pearson_strength(x, y) - (slope > 0 ? 1.0 : -1.0)));
    }
    std::vector<double> a{0.0, 0.5, 1.0, 0.25};
    const double same = similarity_strength(a, a);
    const double apart = similarity_strength(std::vector<double>(6, 0.0), std::vector<double>(6, 1.0));

    auto doc = nlohmann::json::parse(testkit::read_fixture("granger_reference.json"));
    double worst_p = 0.0;
    for (const auto& c : doc["cases"]) {
        const auto res = granger_test(c["cause"].get<std::vector<double>>(), c["effect"].get<std::vector<double>>(),
            c["max_lag"].get<int>());
        worst_p = std::max(worst_p, std::abs(res.p_value - c["p_value"].get<double>()));
    }
    const auto& fwd = doc["cases"][0];
    const auto x = fwd["cause"].get<std::vector<double>>();
    const auto y = fwd["effect"].get<std::vector<double>>();
    const double forward = granger_strength(x, y, 4);
    const double backward = granger_strength(y, x, 4);

    const bool pass = worst_pearson <= 1e-12 && std::abs(same - 1.0) <= 1e-12 && std::abs(apart) <= 1e-12
        && forward > 0.99 && backward < forward && worst_p <= 1e-6 && x.size() == 400;
    return {pass, "pearson err " + fmt(worst_pearson, 3) + ", similarity " + fmt(same) + "/" + fmt(apart) +
                      ", granger forward " + fmt(forward) + " backward " + fmt(backward) + ", max |dp| " +
                      fmt(worst_p, 3) + " over " + std::to_string(doc["cases"].size()) + " reference cases"};
}

Outcome sax_equiprobable()
{
    std::mt19937_64 rng(20);
    std::normal_distribution<double> dist;
    std::map<char, std::size_t> counts;
    const std::size_t n = 1000000;
    for (std::size_t i = 0; i < n; ++i) {
        ++counts[sax_symbol(dist(rng))];
    }
    bool pass = counts.size() == 4;
    std::string detail;
    for (auto [s, c] : counts) {
        const double f = static_cast<double>(c) / static_cast<double>(n);
        pass = pass && std::abs(f - 0.25) <= 0.02;
        detail += std::string(1, s) + "=" + fmt(f, 4) + " ";
    }
    return {pass, detail};
}

Outcome trie_completeness()
{
    std::mt19937_64 rng(31);
    std::size_t corpora = 0;
    for (int trial = 0; trial < 50; ++trial, ++corpora) {
        const int window = 2 + trial % 6;
        const std::size_t count = 1 + static_cast<std::size_t>(trial % 7);
        std::vector<std::string> names;
        std::vector<std::string> seqs;
        std::uniform_int_distribution<int> sym(0, 3);
        std::uniform_int_distribution<std::size_t> len(static_cast<std::size_t>(window), 60);
        std::uint64_t expected = 0;
        for (std::size_t i = 0; i < count; ++i) {
            names.push_back("s" + std::to_string(i));
            std::string s(len(rng), 'a');
            for (auto& ch : s) {
                ch = static_cast<char>('a' + sym(rng));
            }
            expected += s.size() - static_cast<std::size_t>(window) + 1;
            seqs.push_back(s);
        }
        TrendTrie trie(names, seqs, window);
        std::uint64_t leaf_total = 0;
        for (std::size_t l = 0; l < trie.leaf_count(); ++l) {
            leaf_total += trie.leaf_occurrences(static_cast<std::int32_t>(l)).size();
        }
        if (leaf_total != expected || trie.window_count() != expected) {
            return {false, "occurrence total " + std::to_string(leaf_total) + " != " + std::to_string(expected)};
        }
        for (std::size_t i = 0; i < seqs.size(); ++i) {
            for (std::size_t st = 0; st + static_cast<std::size_t>(window) <= seqs[i].size(); ++st) {
                const auto occ = trie.occurrences(std::string_view(seqs[i]).substr(st, static_cast<std::size_t>(window)));
                bool found = false;
                for (const auto& o : occ) {
                    found = found || (o.series == i && o.start == st);
                }
                if (!found) {
                    return {false, "window " + std::to_string(i) + "@" + std::to_string(st) + " not retrievable"};
                }
            }
        }
        for (const auto& node : trie.nodes()) {
            std::uint64_t child_sum = 0;
            bool inner = false;
            for (auto c : node.children) {
                if (c >= 0) {
                    child_sum += trie.nodes()[static_cast<std::size_t>(c)].count;
                    inner = true;
                }
            }
            if (inner && std::abs(static_cast<double>(child_sum) / static_cast<double>(node.count) - 1.0) > 1e-9) {
                return {false, "child ratios do not sum to 1"};
            }
        }
    }
    return {true, std::to_string(corpora) + " random corpora"};
}

double confidence_sum(const GuidanceMatrix& m)
{
    double sum = 0.0;
    for (const auto& row : m.rows) {
        for (const auto& c : row.cells) {
            if (c) {
                sum += c->confidence;
            }
        }
    }
    return sum;
}

bool only_recommendable(const GuidanceMatrix& m)
{
    for (const auto& row : m.rows) {
        for (const auto& c : row.cells) {
            if (c && (c->kind == RelationKind::Meta || c->kind == RelationKind::Arithmetic || c->kind == RelationKind::Lag)) {
                return false;
            }
        }
    }
    return true;
}

Outcome recommendation_properties()
{
    int dominant_first = 0;
    double worst_sum = 0.0;
    bool kinds_ok = true;
    for (unsigned seed = 11; seed < 16; ++seed) {
        auto d = testkit::make_dominance(seed);
        auto m = recommend(d.query, d.focus, *d.artifacts);
        dominant_first += !m.rows.empty() && m.rows.front().series == d.dominant ? 1 : 0;
        worst_sum = std::max(worst_sum, std::abs(confidence_sum(m) - 1.0));
        kinds_ok = kinds_ok && only_recommendable(m);
    }

    std::mt19937_64 rng(40);
    auto factor = testkit::random_walk(rng, 200);
    std::vector<std::string> names;
    std::vector<std::vector<double>> series;
    for (int i = 0; i < 30; ++i) {
        auto v = testkit::white_noise(rng, 200, 0.5 + 0.1 * i);
        for (std::size_t t = 0; t < v.size(); ++t) {
            v[t] += factor[t];
        }
        names.push_back("s" + std::to_string(i));
        series.push_back(v);
    }
    MetaLabels labels = parse_config("name,group\ns0,x\ns1,x\ns2,y\n");
    auto a = testkit::make_artifacts(names, series, {4, 24, 4}, labels);
    QueryGraph q;
    q.params = {4, 24, 4};
    Timebox f;
    f.id = "f";
    f.name = "s0";
    q.timeboxes = {f};
    auto wide = recommend(q, "f", *a);
    worst_sum = std::max(worst_sum, std::abs(confidence_sum(wide) - 1.0));
    kinds_ok = kinds_ok && only_recommendable(wide);

    const bool pass = dominant_first == 5 && worst_sum <= 1e-9 && kinds_ok && wide.rows.size() <= kMaxGuidanceRows;
    return {pass, "dominant first in " + std::to_string(dominant_first) + "/5, " + std::to_string(wide.rows.size()) +
                      " rows from 29 candidates, max |sum-1| " + fmt(worst_sum, 3)};
}

Outcome performance()
{
    std::mt19937_64 rng(142);
    const std::size_t n = 142;
    const std::size_t m = 5000;
    std::vector<std::string> names;
    std::vector<std::vector<double>> series;
    std::vector<std::vector<double>> factors;
    for (int k = 0; k < 8; ++k) {
        factors.push_back(testkit::random_walk(rng, m));
    }
    for (std::size_t i = 0; i < n; ++i) {
        auto v = testkit::white_noise(rng, m, 2.0);
        const auto& fct = factors[i % factors.size()];
        for (std::size_t t = 0; t < m; ++t) {
            v[t] += fct[t];
        }
        names.push_back("s" + std::to_string(i));
        series.push_back(std::move(v));
    }
    const auto t_pre = Clock::now();
    auto artifacts = testkit::make_artifacts(names, series, {10, 200, 4});
    const double pre = seconds_since(t_pre);

    QueryGraph q;
    q.params = {10, 200, 4};
    Timebox a;
    a.id = "a";
    a.name = "s0";
    a.sketch = {{0, 0.0}, {100, 1.0}, {200, 0.2}};
    Timebox b;
    b.id = "b";
    q.timeboxes = {a, b};
    Relalink l;
    l.id = "ab";
    l.source = "a";
    l.target = "b";
    l.threshold = {0.8, 1.0};
    q.relalinks = {l};
    const auto body = serialize_query(q);

    const auto t0 = Clock::now();
    const auto parsed = parse_query(body);
    const auto diagnostics = validate_query(parsed, *artifacts);
    const auto result = execute_query(parsed, *artifacts);
    const auto json = results_json(parsed, *artifacts, result);
    const double elapsed = seconds_since(t0);
    const bool pass = diagnostics.empty() && !result.results.empty() && elapsed < 2.0;
    return {pass, "142x5000, medium query " + fmt(elapsed, 3) + " s for " + std::to_string(result.found) +
                      " matches (preprocessing " + fmt(pre, 3) + " s, not part of the query)"};
}

Outcome backgrounding()
{
    std::mutex mutex;
    std::vector<std::pair<RelationKind, BuildState>> transitions;
    std::promise<void> release;
    std::shared_future<void> opened = release.get_future().share();

    PreprocessOptions opt;
    opt.budget = std::chrono::milliseconds(100);
    opt.hooks.before_build = [&](RelationKind kind) {
        if (kind == RelationKind::Correlation) {
            opened.wait();
        }
    };
    opt.hooks.on_transition = [&](RelationKind kind, BuildState state) {
        std::lock_guard lock(mutex);
        transitions.emplace_back(kind, state);
    };
    std::mt19937_64 rng(8);
    std::vector<std::string> names;
    std::vector<std::vector<double>> series;
    for (int i = 0; i < 4; ++i) {
        names.push_back("s" + std::to_string(i));
        series.push_back(testkit::random_walk(rng, 80));
    }
    const auto t0 = Clock::now();
    auto a = preprocess(Dataset::with_index_time(names, series), {}, {2, 8, 4}, opt);
    const double returned_after = seconds_since(t0);
    const bool deferred = a->status().state("causality") == BuildState::Pending
        && a->status().state("correlation") == BuildState::Building;

    // a query needing causality promotes it ahead of similarity
    auto waiter = std::async(std::launch::async, [&] { return a->index(RelationKind::Causality).kind(); });
    for (int i = 0; i < 400 && a->builder().pending_order().front() != RelationKind::Causality; ++i) {
        std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
    release.set_value();
    const bool got = waiter.get() == RelationKind::Causality;
    a->builder().wait_all();

    bool sequences = true;
    for (auto kind : {RelationKind::Correlation, RelationKind::Similarity, RelationKind::Causality}) {
        std::vector<BuildState> seen;
        std::lock_guard lock(mutex);
        for (auto [k, s] : transitions) {
            if (k == kind) {
                seen.push_back(s);
            }
        }
        sequences = sequences
            && seen == std::vector<BuildState>{BuildState::Pending, BuildState::Building, BuildState::Ready};
    }
    const auto order = a->builder().completion_order();
    const bool promoted = order
        == std::vector<RelationKind>{RelationKind::Correlation, RelationKind::Causality, RelationKind::Similarity};
    const bool pass = deferred && got && sequences && promoted && a->status().all_ready();
    return {pass, "returned after " + fmt(returned_after * 1000.0, 4) + " ms; pending->building->ready " +
                      (sequences ? "observed" : "missing") + "; causality built " +
                      (promoted ? "before similarity" : "out of order")};
}

} // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"oracle-equivalence", oracle_equivalence},
        {"worked-example-scores", worked_example},
        {"relation-kernels", relation_kernels},
        {"sax-equiprobability", sax_equiprobable},
        {"trie-completeness", trie_completeness},
        {"recommendation-properties", recommendation_properties},
        {"performance-142x5000", performance},
        {"backgrounding", backgrounding},
    };
    int failures = 0;
    for (const auto& [name, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        failures += o.pass ? 0 : 1;
        std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
    }
    std::cout << "NOTE case-study-narratives: human-study outcomes and the private dataset are not reproducible; "
                 "covered by the property checks above, EEG-style file used only as a parsing fixture"
              << std::endl;
    return failures == 0 ? 0 : 1;
}
