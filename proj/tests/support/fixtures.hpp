#pragma once

#include "relaq/artifacts.hpp"
#include "relaq/query.hpp"

#include <filesystem>
#include <memory>
#include <random>
#include <string>
#include <vector>

namespace relaq::testkit {

std::filesystem::path fixture_dir();
std::string read_fixture(const std::string& name);

// Preprocess with every index built before returning.
std::shared_ptr<const Artifacts> make_artifacts(std::vector<std::string> names, std::vector<std::vector<double>> series,
                                                PreprocessParams params, MetaLabels labels = {});

// Three cities. SF holds exactly one rising window (start 4, box length 4,
// sampling 1) whose distance to the rising sketch gives degree 0.95; LA and SD
// carry windows at the same start with Pearson 0.99 and 0.98 to it.
struct ThreeCities {
    std::shared_ptr<const Artifacts> artifacts;
    QueryGraph query;
    std::uint32_t start = 4;
    std::vector<double> sf_fragment;
};
ThreeCities make_three_cities();
std::vector<std::vector<double>> three_city_series();
QueryGraph three_city_query();

// Five cities. Beijing is a noisy 12-sample cycle, Yantai a lightly perturbed
// copy of it, Zhangjiakou a heavily perturbed one, the rest unrelated noise.
struct Dominance {
    std::shared_ptr<const Artifacts> artifacts;
    QueryGraph query;
    std::string focus;
    std::string dominant;
};
Dominance make_dominance(unsigned seed = 11);

std::vector<double> random_walk(std::mt19937_64& rng, std::size_t n, double step = 1.0);
std::vector<double> white_noise(std::mt19937_64& rng, std::size_t n, double sigma = 1.0);

// Writes a dataset and config CSV pair into a fresh temporary directory.
struct TempDir {
    TempDir();
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    std::filesystem::path path;
};

void write_file(const std::filesystem::path& path, const std::string& text);
std::string read_file(const std::filesystem::path& path);

} // namespace relaq::testkit
