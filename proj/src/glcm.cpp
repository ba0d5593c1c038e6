#include "mammotex/glcm.hpp"

#include <cmath>
#include <cstdint>

#include "mammotex/error.hpp"

namespace mammotex {

int direction_degrees(Direction d) {
  switch (d) {
    case Direction::deg0: return 0;
    case Direction::deg45: return 45;
    case Direction::deg90: return 90;
    case Direction::deg135: return 135;
  }
  return 0;
}

std::pair<int, int> direction_offset(Direction d, int distance) {
  switch (d) {
    case Direction::deg0: return {distance, 0};
    case Direction::deg45: return {distance, -distance};
    case Direction::deg90: return {0, -distance};
    case Direction::deg135: return {-distance, -distance};
  }
  return {distance, 0};
}

namespace {

void validate_config(const GlcmConfig& config) {
  if (config.levels < 2 || config.levels > 256)
    raise(Errc::invalid_params, "levels must lie in [2, 256]");
  if (config.distance < 1)
    raise(Errc::invalid_params, "distance must be at least 1");
}

}  // namespace

Glcm compute_glcm(const GrayImage& image, Direction direction,
                  const GlcmConfig& config) {
  if (image.empty()) raise(Errc::empty_image, "glcm of empty image");
  validate_config(config);
  const int levels = config.levels;
  const auto [dx, dy] = direction_offset(direction, config.distance);

  std::vector<std::uint64_t> counts(static_cast<std::size_t>(levels) * levels, 0);
  std::uint64_t total = 0;
  for (int y = 0; y < image.height; ++y) {
    const int ny = y + dy;
    if (ny < 0 || ny >= image.height) continue;
    for (int x = 0; x < image.width; ++x) {
      const int nx = x + dx;
      if (nx < 0 || nx >= image.width) continue;
      const int a = image.at(x, y) * levels / 256;
      const int b = image.at(nx, ny) * levels / 256;
      ++counts[static_cast<std::size_t>(a) * levels + b];
      ++total;
      if (config.symmetric) {
        ++counts[static_cast<std::size_t>(b) * levels + a];
        ++total;
      }
    }
  }
  if (total == 0)
    raise(Errc::no_valid_pairs,
          "image holds no pixel pair at distance " + std::to_string(config.distance));

  Glcm g;
  g.levels = levels;
  g.direction = direction;
  g.config = config;
  g.p.resize(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i)
    g.p[i] = static_cast<double>(counts[i]) / static_cast<double>(total);
  return g;
}

GlcmFeatures glcm_features(const Glcm& glcm) {
  const int n = glcm.levels;
  GlcmFeatures f;

  std::vector<double> pi(n, 0.0), pj(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double p = glcm.at(i, j);
      pi[i] += p;
      pj[j] += p;
    }
  for (int i = 0; i < n; ++i) {
    f.mu_i += i * pi[i];
    f.mu_j += i * pj[i];
  }
  double var_i = 0.0, var_j = 0.0;
  for (int i = 0; i < n; ++i) {
    var_i += (i - f.mu_i) * (i - f.mu_i) * pi[i];
    var_j += (i - f.mu_j) * (i - f.mu_j) * pj[i];
  }
  f.sigma_i = std::sqrt(var_i);
  f.sigma_j = std::sqrt(var_j);

  double asm_canonical = 0.0, idm_canonical = 0.0;
  double asm_printed = 0.0, idm_printed = 0.0;
  double cov = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double p = glcm.at(i, j);
      const int d = i - j;
      if (p > 0.0) f.entropy -= p * std::log2(p);
      f.contrast += static_cast<double>(d) * d * p;
      cov += (i - f.mu_i) * (j - f.mu_j) * p;
      asm_canonical += p * p;
      idm_canonical += p / (1.0 + static_cast<double>(d) * d);
      asm_printed += p / (1.0 + std::abs(d));
      if (d != 0) idm_printed += p * p / std::abs(d);
    }
  }

  if (f.sigma_i == 0.0 || f.sigma_j == 0.0) {
    f.zero_marginal_variance = true;  // correlation undefined; reported as 0
    f.correlation = 0.0;
  } else {
    f.correlation = cov / (f.sigma_i * f.sigma_j);
  }

  if (glcm.config.variant == GlcmVariant::canonical) {
    f.angular_second_moment = asm_canonical;
    f.inverse_difference_moment = idm_canonical;
    f.variance = var_i;
  } else {
    f.angular_second_moment = asm_printed;
    f.inverse_difference_moment = idm_printed;
    f.variance = f.entropy;
  }
  return f;
}

std::map<Direction, GlcmFeatures> directional_feature_set(const GrayImage& image,
                                                          const GlcmConfig& config) {
  std::map<Direction, GlcmFeatures> out;
  for (Direction d : kAllDirections)
    out.emplace(d, glcm_features(compute_glcm(image, d, config)));
  return out;
}

GlcmFeatures mean_over_directions(const std::map<Direction, GlcmFeatures>& sets) {
  GlcmFeatures mean;
  for (Direction d : kAllDirections) {
    const auto it = sets.find(d);
    if (it == sets.end())
      raise(Errc::missing_direction,
            "feature set lacks direction " + std::to_string(direction_degrees(d)));
    const GlcmFeatures& f = it->second;
    mean.angular_second_moment += f.angular_second_moment;
    mean.contrast += f.contrast;
    mean.correlation += f.correlation;
    mean.variance += f.variance;
    mean.inverse_difference_moment += f.inverse_difference_moment;
    mean.entropy += f.entropy;
    mean.mu_i += f.mu_i;
    mean.mu_j += f.mu_j;
    mean.sigma_i += f.sigma_i;
    mean.sigma_j += f.sigma_j;
    mean.zero_marginal_variance |= f.zero_marginal_variance;
  }
  mean.angular_second_moment /= 4.0;
  mean.contrast /= 4.0;
  mean.correlation /= 4.0;
  mean.variance /= 4.0;
  mean.inverse_difference_moment /= 4.0;
  mean.entropy /= 4.0;
  mean.mu_i /= 4.0;
  mean.mu_j /= 4.0;
  mean.sigma_i /= 4.0;
  mean.sigma_j /= 4.0;
  return mean;
}

}  // namespace mammotex
