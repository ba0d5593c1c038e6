#pragma once

#include <array>
#include <cstdint>

#include "mammotex/image.hpp"

namespace mammotex {

/// Gray-level occurrence counts over the fixed range [0, 255].
struct Histogram {
  std::array<std::uint64_t, 256> counts{};
  std::uint64_t total = 0;

  double prob(int level) const {
    return static_cast<double>(counts[level]) / static_cast<double>(total);
  }
};

Histogram histogram(const GrayImage& image);

/// Histogram moments plus Shannon entropy (base 2, 0*log0 = 0). Kurtosis is
/// the excess form. When the histogram has zero variance, skewness and
/// kurtosis are undefined: both are reported as 0 with `degenerate` set.
struct FirstOrderFeatures {
  double mean = 0.0;
  double variance = 0.0;
  double skewness = 0.0;
  double kurtosis = 0.0;
  double entropy = 0.0;
  bool degenerate = false;

  std::array<double, 5> ordered() const {
    return {mean, variance, skewness, kurtosis, entropy};
  }
};

FirstOrderFeatures first_order_features(const Histogram& hist);

}  // namespace mammotex
