#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "mammotex/first_order.hpp"
#include "mammotex/glcm.hpp"
#include "mammotex/image.hpp"

namespace mammotex {

enum class Label { benign, malignant };

std::string_view label_name(Label label);
/// Case-insensitive; throws unknown_label otherwise.
Label parse_label(std::string_view text);

/// One of the nine fixed descriptor-group layouts.
struct DescriptorGroup {
  int id;  // 1..9
  std::string_view name;
  int dimension;
};

const std::array<DescriptorGroup, 9>& descriptor_groups();
const DescriptorGroup& descriptor_group(int id);

/// Ordered feature values for one image under one group.
struct DescriptorVector {
  int group_id = 1;
  std::vector<double> values;
  Label label = Label::benign;
  std::string source_id;
  /// True when any undefined component (skewness/kurtosis at zero variance,
  /// correlation at zero marginal variance) was substituted with 0.
  bool degenerate_substituted = false;
};

/// Everything the nine groups are assembled from, computed once per image.
struct ImageFeatures {
  FirstOrderFeatures first_order;
  std::map<Direction, GlcmFeatures> directional;
  GlcmFeatures direction_mean;
};

ImageFeatures compute_image_features(const GrayImage& image, const GlcmConfig& config);

DescriptorVector assemble_group(const ImageFeatures& features, int group_id);

DescriptorVector extract_group(const GrayImage& image, int group_id,
                               const GlcmConfig& config);

/// Per-feature min/max bounds mapping training values onto [-1, 1].
struct Scaler {
  std::vector<double> min;
  std::vector<double> max;
  std::size_t dimension() const { return min.size(); }
};

/// Throws empty_dataset for fewer than two rows, mixed_groups when rows do
/// not share a group. A constant feature gets the bounds (min, min+1).
Scaler fit_scaler(const std::vector<DescriptorVector>& rows);

/// Affine map v -> 2(v-min)/(max-min) - 1, clamped to [-1.5, 1.5].
std::vector<double> apply_scaler(const Scaler& scaler, const std::vector<double>& values);

/// Dataset CSV: header `source_id,label,f1..fK`, one row per image, feature
/// values serialized with 17 significant digits.
void write_dataset(const std::vector<DescriptorVector>& rows, std::ostream& out);
void write_dataset(const std::vector<DescriptorVector>& rows,
                   const std::filesystem::path& path);

/// `expected_group` = 0 infers the group from the column count (lowest id on
/// ties); a nonzero id additionally validates the width. `group_out`, when
/// given, receives the resolved group id even for row-less datasets.
std::vector<DescriptorVector> read_dataset(std::istream& in, int expected_group = 0,
                                           int* group_out = nullptr);
std::vector<DescriptorVector> read_dataset(const std::filesystem::path& path,
                                           int expected_group = 0,
                                           int* group_out = nullptr);

}  // namespace mammotex
