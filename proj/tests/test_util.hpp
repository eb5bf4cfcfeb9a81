#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <vector>

namespace ppfl::test {

// Chi-square statistic of byte frequencies against uniform. 255 degrees of
// freedom; the 0.999 quantile is ~330.5, so stat < 331 means p > 0.001.
inline double byte_chi2(std::span<const std::uint64_t> values) {
    std::vector<double> bins(256, 0.0);
    for (const std::uint64_t v : values)
        for (int b = 0; b < 8; ++b) bins[(v >> (8 * b)) & 0xff] += 1.0;
    const double expected = static_cast<double>(values.size() * 8) / 256.0;
    double stat = 0;
    for (const double o : bins) stat += (o - expected) * (o - expected) / expected;
    return stat;
}

constexpr double kChi2Df255P999 = 331.0;

inline double mean(std::span<const double> xs) {
    double m = 0;
    for (const double x : xs) m += x;
    return m / static_cast<double>(xs.size());
}

inline double sample_variance(std::span<const double> xs) {
    const double m = mean(xs);
    double v = 0;
    for (const double x : xs) v += (x - m) * (x - m);
    return v / static_cast<double>(xs.size() - 1);
}

}  // namespace ppfl::test
