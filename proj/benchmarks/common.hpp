#pragma once

#include "relaq/artifacts.hpp"

#include <random>
#include <string>
#include <vector>

namespace relaq::bench {

// n series of length m sharing a handful of latent random walks
inline Dataset factor_dataset(std::size_t n, std::size_t m, unsigned seed = 1)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist;
    std::vector<std::vector<double>> factors(8, std::vector<double>(m));
    for (auto& f : factors) {
        double v = 0.0;
        for (auto& x : f) {
            v += dist(rng);
            x = v;
        }
    }
    std::vector<std::string> names;
    std::vector<std::vector<double>> series;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> s(m);
        for (std::size_t t = 0; t < m; ++t) {
            s[t] = factors[i % factors.size()][t] + 2.0 * dist(rng);
        }
        names.push_back("s" + std::to_string(i));
        series.push_back(std::move(s));
    }
    return Dataset::with_index_time(std::move(names), std::move(series));
}

inline std::vector<double> noise(std::size_t n, unsigned seed)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist;
    std::vector<double> out(n);
    for (auto& x : out) {
        x = dist(rng);
    }
    return out;
}

} // namespace relaq::bench
