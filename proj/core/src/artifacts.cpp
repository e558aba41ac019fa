#include "relaq/artifacts.hpp"

#include "digest.hpp"
#include "relaq/error.hpp"
#include "relaq/normalize.hpp"

#include <algorithm>

namespace relaq {

std::string dataset_id(const Dataset& dataset, const MetaLabels& labels, const PreprocessParams& params)
{
    std::string canonical = serialize_dataset(dataset);
    canonical += '\x1e';
    canonical += serialize_config(labels);
    canonical += '\x1e';
    canonical += std::to_string(params.sampling_length) + "," + std::to_string(params.box_length) + ","
        + std::to_string(params.alphabet_size);
    return detail::sha256_hex(canonical).substr(0, 16);
}

Artifacts::Artifacts(Dataset dataset, MetaLabels labels, PreprocessParams params)
    : dataset_(std::move(dataset))
    , labels_(std::move(labels))
    , params_(params)
{
    params_.validate();
    const auto start = std::chrono::steady_clock::now();
    id_ = dataset_id(dataset_, labels_, params_);
    step_unit_ = labels_.step_unit.empty() ? "sample" : labels_.step_unit;

    series_.reserve(dataset_.series_count());
    std::vector<std::string> sequences;
    sequences.reserve(dataset_.series_count());
    for (std::size_t i = 0; i < dataset_.series_count(); ++i) {
        SeriesArtifacts s;
        s.compressed = paa_compress(dataset_.values(i), params_.sampling_length);
        s.minmax = minmax_normalize(s.compressed);
        s.zscore = z_normalize(s.compressed);
        s.symbols = sax_symbolize(s.zscore);
        auto [lo, hi] = std::minmax_element(s.compressed.begin(), s.compressed.end());
        s.compressed_min = *lo;
        s.compressed_max = *hi;
        sequences.push_back(s.symbols);
        series_.push_back(std::move(s));
    }

    const int window = params_.window_symbols();
    if (static_cast<std::size_t>(window) > compressed_length()) {
        throw Error(Errc::WindowTooLong, "window of " + std::to_string(window) + " compressed samples exceeds "
            + std::to_string(compressed_length()));
    }
    trie_ = TrendTrie(dataset_.names(), sequences, window);
    series_tries_.reserve(sequences.size());
    for (std::size_t i = 0; i < sequences.size(); ++i) {
        series_tries_.emplace_back(std::vector<std::string>{dataset_.name(i)},
            std::span<const std::string>(&sequences[i], 1), window);
    }
    sync_elapsed_ = std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start);
}

std::size_t Artifacts::compressed_length() const noexcept
{
    return series_.empty() ? 0 : series_.front().compressed.size();
}

void Artifacts::start_index_builds(const PreprocessOptions& options)
{
    std::vector<std::pair<RelationKind, IndexBuilder::Job>> jobs;
    for (auto kind : {RelationKind::Correlation, RelationKind::Similarity, RelationKind::Causality}) {
        jobs.emplace_back(kind, [this, kind, lag = options.causality_max_lag] {
            std::vector<std::vector<double>> raw;
            std::vector<std::vector<double>> minmax;
            raw.reserve(series_.size());
            minmax.reserve(series_.size());
            for (const auto& s : series_) {
                raw.push_back(s.compressed);
                minmax.push_back(s.minmax);
            }
            return build_relation_index(kind, dataset_.names(), raw, minmax, lag);
        });
    }
    builder_ = std::make_unique<IndexBuilder>(std::move(jobs), options.hooks);
}

void Artifacts::adopt_indexes(std::vector<RelationIndex> ready)
{
    builder_ = std::make_unique<IndexBuilder>(std::move(ready));
}

const RelationIndex& Artifacts::index(RelationKind kind) const
{
    if (!builder_) {
        throw Error(Errc::IndexUnavailable, "relation indexes were never started");
    }
    return builder_->require(kind);
}

BuildStatus Artifacts::status() const
{
    BuildStatus out;
    for (const char* name : {"compressed", "symbolic", "trend_trie"}) {
        out.artifacts.push_back({name, BuildState::Ready, sync_elapsed_});
    }
    if (builder_) {
        for (auto& s : builder_->status()) {
            out.artifacts.push_back(std::move(s));
        }
    }
    return out;
}

std::shared_ptr<const Artifacts> preprocess(Dataset dataset, MetaLabels labels, PreprocessParams params,
                                            const PreprocessOptions& options)
{
    auto artifacts = std::make_shared<Artifacts>(std::move(dataset), std::move(labels), params);
    artifacts->start_index_builds(options);
    artifacts->builder().wait_all_for(options.budget);
    return artifacts;
}

} // namespace relaq
