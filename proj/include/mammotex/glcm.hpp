#pragma once

#include <array>
#include <cstddef>
#include <map>
#include <vector>

#include "mammotex/image.hpp"

namespace mammotex {

enum class Direction { deg0, deg45, deg90, deg135 };

constexpr std::array<Direction, 4> kAllDirections{
    Direction::deg0, Direction::deg45, Direction::deg90, Direction::deg135};

int direction_degrees(Direction d);

/// Pixel offset (dcol, drow) for a direction at the given distance; row
/// indices grow downward, so 45 degrees points up-right.
std::pair<int, int> direction_offset(Direction d, int distance);

enum class GlcmVariant { canonical, as_printed };

struct GlcmConfig {
  int levels = 256;  // gray-level count after quantization
  int distance = 1;
  bool symmetric = true;
  GlcmVariant variant = GlcmVariant::canonical;
};

/// Normalized co-occurrence matrix for one (distance, direction) pair.
struct Glcm {
  int levels = 0;
  Direction direction = Direction::deg0;
  GlcmConfig config;
  std::vector<double> p;  // levels x levels, row-major, sums to 1

  double at(int i, int j) const {
    return p[static_cast<std::size_t>(i) * levels + j];
  }
};

/// Counts ordered level pairs at the direction offset (plus the transpose when
/// symmetric) and normalizes. Pixel values are quantized by floor(v*G/256).
/// Throws no_valid_pairs when the image holds no pair at that offset.
Glcm compute_glcm(const GrayImage& image, Direction direction,
                  const GlcmConfig& config);

/// The six co-occurrence features. Within a feature vector the order is
/// ASM, contrast, correlation, variance, IDM, entropy.
///
/// The canonical variant uses the standard definitions; as_printed keeps
/// entropy/contrast/correlation and swaps in the literal alternative forms:
/// ASM becomes sum P/(1+|i-j|), IDM becomes the off-diagonal sum P^2/|i-j|,
/// and variance duplicates the entropy value.
///
/// Correlation is undefined when a marginal variance vanishes; it is then
/// reported as 0 with zero_marginal_variance set.
struct GlcmFeatures {
  double angular_second_moment = 0.0;
  double contrast = 0.0;
  double correlation = 0.0;
  double variance = 0.0;
  double inverse_difference_moment = 0.0;
  double entropy = 0.0;
  double mu_i = 0.0, mu_j = 0.0;
  double sigma_i = 0.0, sigma_j = 0.0;
  bool zero_marginal_variance = false;

  std::array<double, 6> ordered() const {
    return {angular_second_moment, contrast,                  correlation,
            variance,              inverse_difference_moment, entropy};
  }
};

GlcmFeatures glcm_features(const Glcm& glcm);

/// One feature set per direction, fixed order 0, 45, 90, 135.
std::map<Direction, GlcmFeatures> directional_feature_set(const GrayImage& image,
                                                          const GlcmConfig& config);

/// Component-wise arithmetic mean over the four directions. Throws
/// missing_direction unless all four are present.
GlcmFeatures mean_over_directions(const std::map<Direction, GlcmFeatures>& sets);

}  // namespace mammotex
