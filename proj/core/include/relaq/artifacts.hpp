#pragma once

#include "relaq/datamodel.hpp"
#include "relaq/index_builder.hpp"
#include "relaq/relation_index.hpp"
#include "relaq/trend_trie.hpp"

#include <chrono>
#include <filesystem>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace relaq {

// Derived data for one series, all in compressed samples.
struct SeriesArtifacts {
    std::vector<double> compressed;
    std::vector<double> minmax;
    std::vector<double> zscore;
    std::string symbols;
    double compressed_min = 0.0;
    double compressed_max = 0.0;
};

struct PreprocessOptions {
    // relation index builds still running after this long continue in the background
    std::chrono::milliseconds budget{std::chrono::minutes(2)};
    int causality_max_lag = 4;
    IndexBuilder::Hooks hooks;
};

// Everything a query consumes. Immutable once constructed except for the
// relation indexes, which may still be building in the background.
class Artifacts {
public:
    Artifacts(Dataset dataset, MetaLabels labels, PreprocessParams params);

    [[nodiscard]] const Dataset& dataset() const noexcept { return dataset_; }
    [[nodiscard]] const MetaLabels& labels() const noexcept { return labels_; }
    [[nodiscard]] const PreprocessParams& params() const noexcept { return params_; }
    [[nodiscard]] const std::string& id() const noexcept { return id_; }
    [[nodiscard]] const std::string& step_unit() const noexcept { return step_unit_; }

    [[nodiscard]] std::size_t series_count() const noexcept { return series_.size(); }
    [[nodiscard]] const SeriesArtifacts& series(std::size_t i) const { return series_.at(i); }
    [[nodiscard]] std::size_t compressed_length() const noexcept;
    [[nodiscard]] int window_symbols() const { return params_.window_symbols(); }

    [[nodiscard]] const TrendTrie& trie() const noexcept { return trie_; }
    [[nodiscard]] const TrendTrie& series_trie(std::size_t i) const { return series_tries_.at(i); }

    // Blocks until the index is ready, moving it to the front of the build queue.
    [[nodiscard]] const RelationIndex& index(RelationKind kind) const;
    [[nodiscard]] BuildStatus status() const;
    [[nodiscard]] IndexBuilder& builder() const { return *builder_; }

    void start_index_builds(const PreprocessOptions& options);
    void adopt_indexes(std::vector<RelationIndex> ready);

private:
    Dataset dataset_;
    MetaLabels labels_;
    PreprocessParams params_;
    std::string id_;
    std::string step_unit_;
    std::vector<SeriesArtifacts> series_;
    TrendTrie trie_;
    std::vector<TrendTrie> series_tries_;
    std::chrono::milliseconds sync_elapsed_{0};
    // declared last: its worker reads the members above and must stop first
    std::unique_ptr<IndexBuilder> builder_;
};

// Canonical content hash of a dataset, its labels and the parameters.
std::string dataset_id(const Dataset& dataset, const MetaLabels& labels, const PreprocessParams& params);

// Compression, symbolization and tries are built before returning; relation
// indexes are handed to a background builder and waited on for at most
// options.budget. throws WindowTooLong, InvalidParams
std::shared_ptr<const Artifacts> preprocess(Dataset dataset, MetaLabels labels, PreprocessParams params,
                                            const PreprocessOptions& options = {});

// Directory layout: manifest.json, timestamps.json, labels.json, raw.f64,
// compressed.f64, symbols.u8 and index_<kind>.json. Waits for all indexes.
void save_artifacts(const Artifacts& artifacts, const std::filesystem::path& dir);
// throws StaleArtifacts on checksum or parameter mismatch, ArtifactIo
std::shared_ptr<const Artifacts> load_artifacts(const std::filesystem::path& dir);

} // namespace relaq
