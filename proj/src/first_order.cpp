#include "mammotex/first_order.hpp"

#include <cmath>

#include "mammotex/error.hpp"

namespace mammotex {

Histogram histogram(const GrayImage& image) {
  if (image.empty()) raise(Errc::empty_image, "histogram of empty image");
  Histogram h;
  for (std::uint8_t v : image.pixels) ++h.counts[v];
  h.total = image.pixel_count();
  return h;
}

FirstOrderFeatures first_order_features(const Histogram& hist) {
  if (hist.total == 0) raise(Errc::empty_image, "histogram has no samples");
  FirstOrderFeatures f;
  for (int v = 0; v < 256; ++v) f.mean += v * hist.prob(v);
  for (int v = 0; v < 256; ++v) {
    const double d = v - f.mean;
    f.variance += d * d * hist.prob(v);
  }
  for (int v = 0; v < 256; ++v) {
    const double p = hist.prob(v);
    if (p > 0.0) f.entropy -= p * std::log2(p);
  }
  if (f.variance == 0.0) {
    f.degenerate = true;  // skewness/kurtosis undefined; reported as 0
    return f;
  }
  const double sigma = std::sqrt(f.variance);
  double m3 = 0.0, m4 = 0.0;
  for (int v = 0; v < 256; ++v) {
    const double d = v - f.mean;
    const double p = hist.prob(v);
    m3 += d * d * d * p;
    m4 += d * d * d * d * p;
  }
  f.skewness = m3 / (sigma * sigma * sigma);
  f.kurtosis = m4 / (f.variance * f.variance) - 3.0;
  return f;
}

}  // namespace mammotex
