#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

namespace relaq {

// (x - min) / (max - min); a constant input maps to 0.5 everywhere.
std::vector<double> minmax_normalize(std::span<const double> values);

// (x - mean) / stdev with the population stdev; a constant input maps to 0.
std::vector<double> z_normalize(std::span<const double> values);

// Piecewise aggregate approximation: means of consecutive blocks of
// sampling_length values. A partial tail block is averaged over its actual
// length, so the output has ceil(M / sampling_length) values.
std::vector<double> paa_compress(std::span<const double> values, int sampling_length);

// Gaussian equi-probable breakpoints for a 4-letter alphabet.
inline constexpr std::array<double, 3> kSaxBreakpoints{-0.6744897501960817, 0.0, 0.6744897501960817};
inline constexpr int kAlphabetSize = 4;

char sax_symbol(double z) noexcept;

// Symbols 'a'..'d' for z-normalized compressed values.
std::string sax_symbolize(std::span<const double> z_values);

} // namespace relaq
