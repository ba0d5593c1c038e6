#include "mammotex/descriptors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "mammotex/error.hpp"

namespace mammotex {

std::string_view label_name(Label label) {
  return label == Label::benign ? "benign" : "malignant";
}

Label parse_label(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "benign") return Label::benign;
  if (lower == "malignant") return Label::malignant;
  raise(Errc::unknown_label, "unknown class label '" + std::string(text) + "'");
}

const std::array<DescriptorGroup, 9>& descriptor_groups() {
  static const std::array<DescriptorGroup, 9> groups{{
      {1, "first_order", 5},
      {2, "second_order_mean", 6},
      {3, "second_order_combination", 24},
      {4, "second_order_0", 6},
      {5, "second_order_45", 6},
      {6, "second_order_90", 6},
      {7, "second_order_135", 6},
      {8, "first_and_second_mean", 11},
      {9, "first_and_second_combination", 29},
  }};
  return groups;
}

const DescriptorGroup& descriptor_group(int id) {
  if (id < 1 || id > 9)
    raise(Errc::invalid_params, "descriptor group id must lie in 1..9");
  return descriptor_groups()[id - 1];
}

ImageFeatures compute_image_features(const GrayImage& image, const GlcmConfig& config) {
  ImageFeatures f;
  f.first_order = first_order_features(histogram(image));
  f.directional = directional_feature_set(image, config);
  f.direction_mean = mean_over_directions(f.directional);
  return f;
}

namespace {

void append_glcm(std::vector<double>& out, const GlcmFeatures& f) {
  const auto v = f.ordered();
  out.insert(out.end(), v.begin(), v.end());
}

}  // namespace

DescriptorVector assemble_group(const ImageFeatures& features, int group_id) {
  const DescriptorGroup& group = descriptor_group(group_id);
  DescriptorVector row;
  row.group_id = group_id;
  row.values.reserve(group.dimension);

  const bool any_dir_flag = std::any_of(
      features.directional.begin(), features.directional.end(),
      [](const auto& kv) { return kv.second.zero_marginal_variance; });

  auto append_first_order = [&] {
    const auto v = features.first_order.ordered();
    row.values.insert(row.values.end(), v.begin(), v.end());
    row.degenerate_substituted |= features.first_order.degenerate;
  };
  auto append_all_directions = [&] {
    for (Direction d : kAllDirections) append_glcm(row.values, features.directional.at(d));
    row.degenerate_substituted |= any_dir_flag;
  };
  auto append_direction = [&](Direction d) {
    const GlcmFeatures& f = features.directional.at(d);
    append_glcm(row.values, f);
    row.degenerate_substituted |= f.zero_marginal_variance;
  };

  switch (group_id) {
    case 1: append_first_order(); break;
    case 2:
      append_glcm(row.values, features.direction_mean);
      row.degenerate_substituted |= features.direction_mean.zero_marginal_variance;
      break;
    case 3: append_all_directions(); break;
    case 4: append_direction(Direction::deg0); break;
    case 5: append_direction(Direction::deg45); break;
    case 6: append_direction(Direction::deg90); break;
    case 7: append_direction(Direction::deg135); break;
    case 8:
      append_first_order();
      append_glcm(row.values, features.direction_mean);
      row.degenerate_substituted |= features.direction_mean.zero_marginal_variance;
      break;
    case 9:
      append_first_order();
      append_all_directions();
      break;
  }
  return row;
}

DescriptorVector extract_group(const GrayImage& image, int group_id,
                               const GlcmConfig& config) {
  return assemble_group(compute_image_features(image, config), group_id);
}

Scaler fit_scaler(const std::vector<DescriptorVector>& rows) {
  if (rows.size() < 2)
    raise(Errc::empty_dataset, "scaler needs at least two rows");
  const int group_id = rows.front().group_id;
  const std::size_t width = rows.front().values.size();
  Scaler s;
  s.min.assign(width, 0.0);
  s.max.assign(width, 0.0);
  for (std::size_t k = 0; k < width; ++k) {
    s.min[k] = s.max[k] = rows.front().values[k];
  }
  for (const DescriptorVector& row : rows) {
    if (row.group_id != group_id)
      raise(Errc::mixed_groups, "rows span more than one descriptor group");
    if (row.values.size() != width)
      raise(Errc::inconsistent_width, "row width differs within dataset");
    for (std::size_t k = 0; k < width; ++k) {
      s.min[k] = std::min(s.min[k], row.values[k]);
      s.max[k] = std::max(s.max[k], row.values[k]);
    }
  }
  for (std::size_t k = 0; k < width; ++k)
    if (s.max[k] == s.min[k]) s.max[k] = s.min[k] + 1.0;  // constant feature
  return s;
}

std::vector<double> apply_scaler(const Scaler& scaler, const std::vector<double>& values) {
  if (values.size() != scaler.dimension())
    raise(Errc::dimension_mismatch, "row width does not match scaler");
  std::vector<double> out(values.size());
  for (std::size_t k = 0; k < values.size(); ++k) {
    const double scaled =
        2.0 * (values[k] - scaler.min[k]) / (scaler.max[k] - scaler.min[k]) - 1.0;
    out[k] = std::clamp(scaled, -1.5, 1.5);
  }
  return out;
}

namespace {

std::string format_value(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

}  // namespace

void write_dataset(const std::vector<DescriptorVector>& rows, std::ostream& out) {
  if (rows.empty()) raise(Errc::empty_dataset, "nothing to write");
  const std::size_t width = rows.front().values.size();
  out << "source_id,label";
  for (std::size_t k = 1; k <= width; ++k) out << ",f" << k;
  out << "\n";
  for (const DescriptorVector& row : rows) {
    if (row.values.size() != width)
      raise(Errc::inconsistent_width, "row width differs within dataset");
    out << row.source_id << ',' << label_name(row.label);
    for (double v : row.values) out << ',' << format_value(v);
    out << "\n";
  }
}

void write_dataset(const std::vector<DescriptorVector>& rows,
                   const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) raise(Errc::io_failure, "cannot open " + path.string() + " for writing");
  write_dataset(rows, out);
  if (!out) raise(Errc::io_failure, "write failed for " + path.string());
}

std::vector<DescriptorVector> read_dataset(std::istream& in, int expected_group,
                                           int* group_out) {
  std::string line;
  if (!std::getline(in, line)) raise(Errc::empty_dataset, "dataset is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const std::vector<std::string> header = split_csv(line);
  if (header.size() < 3 || header[0] != "source_id" || header[1] != "label")
    raise(Errc::malformed_row, "expected header source_id,label,f1..fK");
  const std::size_t width = header.size() - 2;
  for (std::size_t k = 0; k < width; ++k)
    if (header[k + 2] != "f" + std::to_string(k + 1))
      raise(Errc::malformed_row, "feature columns must be named f1..fK");

  int group_id = expected_group;
  if (group_id != 0) {
    if (static_cast<std::size_t>(descriptor_group(group_id).dimension) != width)
      raise(Errc::inconsistent_width,
            "dataset width " + std::to_string(width) + " does not match group " +
                std::to_string(group_id));
  } else {
    for (const DescriptorGroup& g : descriptor_groups()) {
      if (static_cast<std::size_t>(g.dimension) == width) {
        group_id = g.id;
        break;
      }
    }
    if (group_id == 0)
      raise(Errc::inconsistent_width,
            "width " + std::to_string(width) + " matches no descriptor group");
  }
  if (group_out) *group_out = group_id;

  std::vector<DescriptorVector> rows;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::vector<std::string> fields = split_csv(line);
    if (fields.size() != width + 2)
      raise(Errc::inconsistent_width,
            "line " + std::to_string(lineno) + ": expected " +
                std::to_string(width + 2) + " fields, got " +
                std::to_string(fields.size()));
    DescriptorVector row;
    row.group_id = group_id;
    row.source_id = fields[0];
    row.label = parse_label(fields[1]);
    row.values.reserve(width);
    for (std::size_t k = 0; k < width; ++k) {
      const std::string& tok = fields[k + 2];
      char* end = nullptr;
      const double v = std::strtod(tok.c_str(), &end);
      if (tok.empty() || end != tok.c_str() + tok.size() || !std::isfinite(v))
        raise(Errc::malformed_row,
              "line " + std::to_string(lineno) + ": bad value '" + tok + "'");
      row.values.push_back(v);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<DescriptorVector> read_dataset(const std::filesystem::path& path,
                                           int expected_group, int* group_out) {
  std::ifstream in(path);
  if (!in) raise(Errc::io_failure, "cannot open " + path.string());
  return read_dataset(in, expected_group, group_out);
}

}  // namespace mammotex
