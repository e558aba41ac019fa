#include "relaq/normalize.hpp"

#include "relaq/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace relaq {

std::vector<double> minmax_normalize(std::span<const double> values)
{
    std::vector<double> out(values.size());
    if (values.empty()) {
        return out;
    }
    auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    const double min = *lo;
    const double range = *hi - min;
    if (range == 0.0) {
        std::fill(out.begin(), out.end(), 0.5);
        return out;
    }
    std::transform(values.begin(), values.end(), out.begin(),
        [&](double v) { return (v - min) / range; });
    return out;
}

std::vector<double> z_normalize(std::span<const double> values)
{
    std::vector<double> out(values.size(), 0.0);
    if (values.empty()) {
        return out;
    }
    const double n = static_cast<double>(values.size());
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : values) {
        ss += (v - mean) * (v - mean);
    }
    const double sd = std::sqrt(ss / n);
    if (sd == 0.0 || !std::isfinite(sd)) {
        return out;
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        out[i] = (values[i] - mean) / sd;
    }
    return out;
}

std::vector<double> paa_compress(std::span<const double> values, int sampling_length)
{
    if (sampling_length < 1) {
        throw Error(Errc::InvalidParams, "sampling_length must be positive");
    }
    const auto step = static_cast<std::size_t>(sampling_length);
    std::vector<double> out;
    out.reserve((values.size() + step - 1) / step);
    for (std::size_t begin = 0; begin < values.size(); begin += step) {
        const std::size_t end = std::min(values.size(), begin + step);
        double sum = 0.0;
        for (std::size_t i = begin; i < end; ++i) {
            sum += values[i];
        }
        out.push_back(sum / static_cast<double>(end - begin));
    }
    return out;
}

char sax_symbol(double z) noexcept
{
    char symbol = 'a';
    for (double bp : kSaxBreakpoints) {
        if (z >= bp) {
            ++symbol;
        }
    }
    return symbol;
}

std::string sax_symbolize(std::span<const double> z_values)
{
    std::string out;
    out.reserve(z_values.size());
    for (double z : z_values) {
        out.push_back(sax_symbol(z));
    }
    return out;
}

} // namespace relaq
