#include "digest.hpp"
#include "relaq/artifacts.hpp"
#include "relaq/error.hpp"

#include "json.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

namespace relaq {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

constexpr int kFormatVersion = 1;

static_assert(std::endian::native == std::endian::little, "artifact files are little-endian");

std::string read_file(const fs::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(Errc::ArtifactIo, "cannot open " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& path, std::string_view bytes)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(Errc::ArtifactIo, "cannot write " + path.string());
    }
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) {
        throw Error(Errc::ArtifactIo, "short write to " + path.string());
    }
}

std::string pack_doubles(const std::vector<std::vector<double>>& columns)
{
    std::string bytes;
    for (const auto& col : columns) {
        const auto* p = reinterpret_cast<const char*>(col.data());
        bytes.append(p, col.size() * sizeof(double));
    }
    return bytes;
}

std::vector<std::vector<double>> unpack_doubles(std::string_view bytes, std::size_t columns, std::size_t rows)
{
    if (bytes.size() != columns * rows * sizeof(double)) {
        throw Error(Errc::StaleArtifacts, "binary column file has unexpected size");
    }
    std::vector<std::vector<double>> out(columns, std::vector<double>(rows));
    for (std::size_t c = 0; c < columns; ++c) {
        std::memcpy(out[c].data(), bytes.data() + c * rows * sizeof(double), rows * sizeof(double));
    }
    return out;
}

json index_to_json(const RelationIndex& index)
{
    json order = json::object();
    for (std::size_t i = 0; i < index.size(); ++i) {
        json list = json::array();
        for (const auto& r : index.order(i)) {
            list.push_back(json::array({r.name, r.strength}));
        }
        order[index.names()[i]] = std::move(list);
    }
    return json{{"kind", to_string(index.kind())}, {"series", index.names()}, {"order", std::move(order)}};
}

RelationIndex index_from_json(const json& j)
{
    auto kind = parse_relation_kind(j.at("kind").get<std::string>());
    if (!kind) {
        throw Error(Errc::StaleArtifacts, "unknown index kind");
    }
    auto names = j.at("series").get<std::vector<std::string>>();
    const std::size_t n = names.size();
    std::vector<double> strengths(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (*kind != RelationKind::Causality) {
            strengths[i * n + i] = 1.0;
        }
        for (const auto& entry : j.at("order").at(names[i])) {
            const auto other = entry.at(0).get<std::string>();
            auto it = std::find(names.begin(), names.end(), other);
            if (it == names.end()) {
                throw Error(Errc::StaleArtifacts, "index references unknown series " + other);
            }
            strengths[i * n + static_cast<std::size_t>(it - names.begin())] = entry.at(1).get<double>();
        }
    }
    return RelationIndex(*kind, std::move(names), std::move(strengths));
}

} // namespace

void save_artifacts(const Artifacts& artifacts, const fs::path& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw Error(Errc::ArtifactIo, "cannot create " + dir.string() + ": " + ec.message());
    }
    const auto& ds = artifacts.dataset();

    std::vector<std::pair<std::string, std::string>> files;
    files.emplace_back("timestamps.json", json(ds.timestamps()).dump());
    {
        json labels{{"keys", artifacts.labels().keys}, {"labels", artifacts.labels().labels},
            {"step_unit", artifacts.labels().step_unit}};
        files.emplace_back("labels.json", labels.dump());
    }
    files.emplace_back("raw.f64", pack_doubles(ds.columns()));
    {
        std::vector<std::vector<double>> compressed;
        std::string symbols;
        for (std::size_t i = 0; i < artifacts.series_count(); ++i) {
            compressed.push_back(artifacts.series(i).compressed);
            symbols += artifacts.series(i).symbols;
        }
        files.emplace_back("compressed.f64", pack_doubles(compressed));
        files.emplace_back("symbols.u8", std::move(symbols));
    }
    artifacts.builder().wait_all();
    for (auto kind : artifacts.builder().kinds()) {
        const auto& index = artifacts.index(kind);
        files.emplace_back("index_" + std::string(to_string(kind)) + ".json", index_to_json(index).dump(1));
    }

    json manifest{
        {"format", "relaq-artifacts"},
        {"version", kFormatVersion},
        {"id", artifacts.id()},
        {"params", {{"sampling_length", artifacts.params().sampling_length},
                       {"box_length", artifacts.params().box_length},
                       {"alphabet_size", artifacts.params().alphabet_size}}},
        {"time_column", ds.time_column()},
        {"step_unit", artifacts.step_unit()},
        {"series", ds.names()},
        {"length", ds.length()},
        {"compressed_length", artifacts.compressed_length()},
        {"window_symbols", artifacts.window_symbols()},
    };
    json listing = json::object();
    for (const auto& [name, bytes] : files) {
        write_file(dir / name, bytes);
        listing[name] = {{"sha256", detail::sha256_hex(bytes)}, {"bytes", bytes.size()}};
    }
    manifest["files"] = std::move(listing);
    write_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

std::shared_ptr<const Artifacts> load_artifacts(const fs::path& dir)
{
    json manifest;
    try {
        manifest = json::parse(read_file(dir / "manifest.json"));
    } catch (const json::exception& e) {
        throw Error(Errc::ArtifactIo, std::string("bad manifest: ") + e.what());
    }
    try {
        if (manifest.at("format") != "relaq-artifacts" || manifest.at("version") != kFormatVersion) {
            throw Error(Errc::StaleArtifacts, "unsupported artifact format");
        }
        std::map<std::string, std::string> files;
        for (const auto& [name, meta] : manifest.at("files").items()) {
            auto bytes = read_file(dir / name);
            if (detail::sha256_hex(bytes) != meta.at("sha256").get<std::string>()) {
                throw Error(Errc::StaleArtifacts, "checksum mismatch for " + name);
            }
            files.emplace(name, std::move(bytes));
        }
        auto need = [&](const std::string& name) -> const std::string& {
            auto it = files.find(name);
            if (it == files.end()) {
                throw Error(Errc::StaleArtifacts, "manifest lacks " + name);
            }
            return it->second;
        };

        PreprocessParams params;
        params.sampling_length = manifest.at("params").at("sampling_length").get<int>();
        params.box_length = manifest.at("params").at("box_length").get<int>();
        params.alphabet_size = manifest.at("params").at("alphabet_size").get<int>();

        auto names = manifest.at("series").get<std::vector<std::string>>();
        const auto m = manifest.at("length").get<std::size_t>();
        auto timestamps = json::parse(need("timestamps.json")).get<std::vector<std::string>>();
        auto raw = unpack_doubles(need("raw.f64"), names.size(), m);
        Dataset ds(std::move(timestamps), std::move(names), std::move(raw),
            manifest.at("time_column").get<std::string>());

        MetaLabels labels;
        {
            auto j = json::parse(need("labels.json"));
            labels.keys = j.at("keys").get<std::vector<std::string>>();
            labels.labels = j.at("labels").get<std::map<std::string, std::map<std::string, std::string>>>();
            labels.step_unit = j.at("step_unit").get<std::string>();
        }

        auto artifacts = std::make_shared<Artifacts>(std::move(ds), std::move(labels), params);
        if (artifacts->id() != manifest.at("id").get<std::string>()) {
            throw Error(Errc::StaleArtifacts, "content hash does not match manifest id");
        }
        const auto c = manifest.at("compressed_length").get<std::size_t>();
        auto compressed = unpack_doubles(need("compressed.f64"), artifacts->series_count(), c);
        const auto& symbols = need("symbols.u8");
        if (symbols.size() != artifacts->series_count() * c) {
            throw Error(Errc::StaleArtifacts, "symbol file has unexpected size");
        }
        for (std::size_t i = 0; i < artifacts->series_count(); ++i) {
            if (compressed[i] != artifacts->series(i).compressed
                || symbols.compare(i * c, c, artifacts->series(i).symbols) != 0) {
                throw Error(Errc::StaleArtifacts, "stored compression differs from a rebuild");
            }
        }

        std::vector<RelationIndex> indexes;
        for (auto kind : {RelationKind::Correlation, RelationKind::Similarity, RelationKind::Causality}) {
            indexes.push_back(index_from_json(json::parse(need("index_" + std::string(to_string(kind)) + ".json"))));
        }
        artifacts->adopt_indexes(std::move(indexes));
        return artifacts;
    } catch (const json::exception& e) {
        throw Error(Errc::StaleArtifacts, std::string("malformed artifact file: ") + e.what());
    }
}

} // namespace relaq
