#include "mammotex/preprocess.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>

#include "mammotex/error.hpp"

namespace mammotex {

GrayImage crop(const GrayImage& image, const CropRect& rect) {
  if (rect.width < 1 || rect.height < 1)
    raise(Errc::out_of_bounds, "crop rectangle must be at least 1x1");
  if (rect.x < 0 || rect.y < 0 || rect.x + rect.width > image.width ||
      rect.y + rect.height > image.height)
    raise(Errc::out_of_bounds, "crop rectangle exceeds image bounds");
  GrayImage out(rect.width, rect.height);
  for (int y = 0; y < rect.height; ++y)
    for (int x = 0; x < rect.width; ++x)
      out.at(x, y) = image.at(rect.x + x, rect.y + y);
  return out;
}

GrayImage resize_to(const GrayImage& image, int width, int height) {
  if (width < 1 || height < 1)
    raise(Errc::invalid_params, "resize target must be at least 1x1");
  if (image.empty()) raise(Errc::empty_image, "resize of empty image");
  GrayImage out(width, height);
  const double sx = static_cast<double>(image.width) / width;
  const double sy = static_cast<double>(image.height) / height;
  for (int oy = 0; oy < height; ++oy) {
    double fy = (oy + 0.5) * sy - 0.5;
    fy = std::clamp(fy, 0.0, static_cast<double>(image.height - 1));
    const int y0 = static_cast<int>(fy);
    const int y1 = std::min(y0 + 1, image.height - 1);
    const double ay = fy - y0;
    for (int ox = 0; ox < width; ++ox) {
      double fx = (ox + 0.5) * sx - 0.5;
      fx = std::clamp(fx, 0.0, static_cast<double>(image.width - 1));
      const int x0 = static_cast<int>(fx);
      const int x1 = std::min(x0 + 1, image.width - 1);
      const double ax = fx - x0;
      const double top = (1.0 - ax) * image.at(x0, y0) + ax * image.at(x1, y0);
      const double bot = (1.0 - ax) * image.at(x0, y1) + ax * image.at(x1, y1);
      const double v = (1.0 - ay) * top + ay * bot;
      out.at(ox, oy) =
          static_cast<std::uint8_t>(std::clamp<long>(std::lround(v), 0, 255));
    }
  }
  return out;
}

std::optional<int> otsu_threshold(const GrayImage& image) {
  if (image.empty()) raise(Errc::empty_image, "otsu on empty image");
  std::array<std::uint64_t, 256> hist{};
  for (std::uint8_t v : image.pixels) ++hist[v];
  const double total = static_cast<double>(image.pixel_count());
  double sum_all = 0.0;
  for (int v = 0; v < 256; ++v) sum_all += static_cast<double>(v) * hist[v];

  double w0 = 0.0, sum0 = 0.0, best = -1.0;
  std::optional<int> best_t;
  for (int t = 0; t < 255; ++t) {
    w0 += static_cast<double>(hist[t]);
    sum0 += static_cast<double>(t) * hist[t];
    const double w1 = total - w0;
    if (w0 == 0.0 || w1 == 0.0) continue;
    const double mu0 = sum0 / w0;
    const double mu1 = (sum_all - sum0) / w1;
    const double between = w0 * w1 * (mu0 - mu1) * (mu0 - mu1);
    if (between > best) {
      best = between;
      best_t = t;
    }
  }
  return best_t;  // nullopt when a single gray level holds all mass
}

namespace {

// Largest 4-connected component of `mask`, ties broken by scan order.
std::vector<std::uint8_t> largest_component(const GrayImage& image,
                                            const std::vector<std::uint8_t>& mask) {
  const int w = image.width, h = image.height;
  std::vector<int> label(static_cast<std::size_t>(w) * h, -1);
  std::vector<std::size_t> stack;
  int best_label = -1;
  std::size_t best_size = 0;
  int next = 0;
  for (std::size_t start = 0; start < label.size(); ++start) {
    if (!mask[start] || label[start] != -1) continue;
    const int cur = next++;
    std::size_t size = 0;
    stack.push_back(start);
    label[start] = cur;
    while (!stack.empty()) {
      const std::size_t p = stack.back();
      stack.pop_back();
      ++size;
      const int x = static_cast<int>(p % w);
      const int y = static_cast<int>(p / w);
      const std::array<std::pair<int, int>, 4> nbr{
          {{x - 1, y}, {x + 1, y}, {x, y - 1}, {x, y + 1}}};
      for (auto [nx, ny] : nbr) {
        if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
        const std::size_t q = static_cast<std::size_t>(ny) * w + nx;
        if (mask[q] && label[q] == -1) {
          label[q] = cur;
          stack.push_back(q);
        }
      }
    }
    if (size > best_size) {
      best_size = size;
      best_label = cur;
    }
  }
  std::vector<std::uint8_t> in_largest(label.size(), 0);
  for (std::size_t i = 0; i < label.size(); ++i)
    in_largest[i] = label[i] == best_label ? 1 : 0;
  return in_largest;
}

}  // namespace

BackgroundResult remove_background(const GrayImage& image) {
  if (image.empty()) raise(Errc::empty_image, "remove_background on empty image");
  const std::optional<int> t = otsu_threshold(image);
  if (!t) return BackgroundResult{image, true, -1};

  const int w = image.width, h = image.height;
  std::vector<std::uint8_t> mask(image.pixel_count());
  for (std::size_t i = 0; i < mask.size(); ++i)
    mask[i] = image.pixels[i] > *t ? 1 : 0;
  const std::vector<std::uint8_t> keep = largest_component(image, mask);

  // Background = cells outside the kept component that can reach the image
  // border without crossing it. Holes enclosed by the component stay intact.
  std::vector<std::uint8_t> outside(image.pixel_count(), 0);
  std::vector<std::size_t> stack;
  auto seed = [&](int x, int y) {
    const std::size_t p = static_cast<std::size_t>(y) * w + x;
    if (!keep[p] && !outside[p]) {
      outside[p] = 1;
      stack.push_back(p);
    }
  };
  for (int x = 0; x < w; ++x) {
    seed(x, 0);
    seed(x, h - 1);
  }
  for (int y = 0; y < h; ++y) {
    seed(0, y);
    seed(w - 1, y);
  }
  while (!stack.empty()) {
    const std::size_t p = stack.back();
    stack.pop_back();
    const int x = static_cast<int>(p % w);
    const int y = static_cast<int>(p / w);
    const std::array<std::pair<int, int>, 4> nbr{
        {{x - 1, y}, {x + 1, y}, {x, y - 1}, {x, y + 1}}};
    for (auto [nx, ny] : nbr) {
      if (nx < 0 || ny < 0 || nx >= w || ny >= h) continue;
      const std::size_t q = static_cast<std::size_t>(ny) * w + nx;
      if (!keep[q] && !outside[q]) {
        outside[q] = 1;
        stack.push_back(q);
      }
    }
  }

  BackgroundResult result{image, false, *t};
  for (std::size_t i = 0; i < result.image.pixels.size(); ++i)
    if (result.image.pixels[i] <= *t && outside[i]) result.image.pixels[i] = 0;
  return result;
}

GrayImage median_filter3(const GrayImage& image) {
  if (image.empty()) raise(Errc::empty_image, "median filter on empty image");
  GrayImage out(image.width, image.height);
  std::array<std::uint8_t, 9> window;
  for (int y = 0; y < image.height; ++y) {
    for (int x = 0; x < image.width; ++x) {
      int n = 0;
      for (int dy = -1; dy <= 1; ++dy) {
        const int sy = std::clamp(y + dy, 0, image.height - 1);
        for (int dx = -1; dx <= 1; ++dx) {
          const int sx = std::clamp(x + dx, 0, image.width - 1);
          window[n++] = image.at(sx, sy);
        }
      }
      std::nth_element(window.begin(), window.begin() + 4, window.end());
      out.at(x, y) = window[4];
    }
  }
  return out;
}

namespace {

void validate_clahe(const GrayImage& image, const ClaheParams& p) {
  if (p.tiles_x < 1 || p.tiles_y < 1)
    raise(Errc::invalid_params, "tile grid counts must be at least 1");
  if (p.clip_limit <= 0.0 || p.clip_limit > 1.0)
    raise(Errc::invalid_params, "clip_limit must lie in (0, 1]");
  if (p.bins < 2 || p.bins > 256)
    raise(Errc::invalid_params, "bins must lie in [2, 256]");
  if (p.tiles_x > image.width || p.tiles_y > image.height)
    raise(Errc::invalid_params, "tile grid exceeds image dimensions");
}

}  // namespace

ClaheTiles compute_clahe_tiles(const GrayImage& image, const ClaheParams& params) {
  if (image.empty()) raise(Errc::empty_image, "clahe on empty image");
  validate_clahe(image, params);
  const int bins = params.bins;
  ClaheTiles grid;
  grid.tiles_x = params.tiles_x;
  grid.tiles_y = params.tiles_y;
  grid.bins = bins;
  grid.tiles.resize(static_cast<std::size_t>(params.tiles_x) * params.tiles_y);

  const int base_w = image.width / params.tiles_x;
  const int base_h = image.height / params.tiles_y;
  for (int ty = 0; ty < params.tiles_y; ++ty) {
    for (int tx = 0; tx < params.tiles_x; ++tx) {
      ClaheTile& tile = grid.tiles[static_cast<std::size_t>(ty) * params.tiles_x + tx];
      tile.x0 = tx * base_w;
      tile.y0 = ty * base_h;
      // edge tiles absorb the remainder pixels
      tile.x1 = tx == params.tiles_x - 1 ? image.width : (tx + 1) * base_w;
      tile.y1 = ty == params.tiles_y - 1 ? image.height : (ty + 1) * base_h;
      const long npix = static_cast<long>(tile.x1 - tile.x0) * (tile.y1 - tile.y0);

      tile.hist.assign(bins, 0);
      for (int y = tile.y0; y < tile.y1; ++y)
        for (int x = tile.x0; x < tile.x1; ++x)
          ++tile.hist[image.at(x, y) * bins / 256];

      tile.clip_threshold =
          std::max<long>(1, static_cast<long>(std::floor(params.clip_limit * npix + 1e-9)));

      // Clip, then hand the excess back uniformly: every bin receives
      // excess/bins, and the remainder goes one count each to the first bins.
      long excess = 0;
      for (long& b : tile.hist) {
        if (b > tile.clip_threshold) {
          excess += b - tile.clip_threshold;
          b = tile.clip_threshold;
        }
      }
      const long incr = excess / bins;
      const long rem = excess % bins;
      for (int b = 0; b < bins; ++b) tile.hist[b] += incr + (b < rem ? 1 : 0);

      tile.mapping.resize(bins);
      long cum = 0;
      for (int b = 0; b < bins; ++b) {
        cum += tile.hist[b];
        const long level = std::lround(255.0 * static_cast<double>(cum) / npix);
        tile.mapping[b] = static_cast<std::uint8_t>(std::clamp<long>(level, 0, 255));
      }
    }
  }
  return grid;
}

GrayImage apply_clahe_tiles(const GrayImage& image, const ClaheTiles& grid) {
  GrayImage out(image.width, image.height);
  const int tx_n = grid.tiles_x, ty_n = grid.tiles_y;
  std::vector<double> cx(tx_n), cy(ty_n);
  for (int i = 0; i < tx_n; ++i) {
    const ClaheTile& t = grid.tile(i, 0);
    cx[i] = (t.x0 + t.x1 - 1) / 2.0;
  }
  for (int j = 0; j < ty_n; ++j) {
    const ClaheTile& t = grid.tile(0, j);
    cy[j] = (t.y0 + t.y1 - 1) / 2.0;
  }
  // Locates the tile pair bracketing coordinate v and the blend weight.
  auto locate = [](const std::vector<double>& centers, double v) {
    const int n = static_cast<int>(centers.size());
    if (n == 1 || v <= centers[0]) return std::pair<int, double>{0, 0.0};
    if (v >= centers[n - 1]) return std::pair<int, double>{n - 2, 1.0};
    int i = 0;
    while (v >= centers[i + 1]) ++i;
    return std::pair<int, double>{i, (v - centers[i]) / (centers[i + 1] - centers[i])};
  };

  for (int y = 0; y < image.height; ++y) {
    const auto [j, wy] = locate(cy, y);
    const int j1 = std::min(j + 1, ty_n - 1);
    for (int x = 0; x < image.width; ++x) {
      const auto [i, wx] = locate(cx, x);
      const int i1 = std::min(i + 1, tx_n - 1);
      const int bin = image.at(x, y) * grid.bins / 256;
      const double m00 = grid.tile(i, j).mapping[bin];
      const double m10 = grid.tile(i1, j).mapping[bin];
      const double m01 = grid.tile(i, j1).mapping[bin];
      const double m11 = grid.tile(i1, j1).mapping[bin];
      const double top = (1.0 - wx) * m00 + wx * m10;
      const double bot = (1.0 - wx) * m01 + wx * m11;
      const double v = (1.0 - wy) * top + wy * bot;
      out.at(x, y) =
          static_cast<std::uint8_t>(std::clamp<long>(std::lround(v), 0, 255));
    }
  }
  return out;
}

GrayImage clahe(const GrayImage& image, const ClaheParams& params) {
  return apply_clahe_tiles(image, compute_clahe_tiles(image, params));
}

PreprocessResult preprocess_chain(const GrayImage& image,
                                  const std::optional<CropRect>& roi,
                                  int resize_width, int resize_height,
                                  const ClaheParams& clahe_params) {
  GrayImage stage = roi ? crop(image, *roi) : image;
  stage = resize_to(stage, resize_width, resize_height);
  BackgroundResult bg = remove_background(stage);
  stage = median_filter3(bg.image);
  stage = clahe(stage, clahe_params);
  return PreprocessResult{std::move(stage), bg.degenerate};
}

std::map<std::string, CropRect> load_roi_sidecar(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) raise(Errc::io_failure, "cannot open RoI sidecar " + path.string());
  std::map<std::string, CropRect> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string name, xs, ys, ws, hs;
    if (!std::getline(ss, name, ',') || !std::getline(ss, xs, ',') ||
        !std::getline(ss, ys, ',') || !std::getline(ss, ws, ',') ||
        !std::getline(ss, hs, ','))
      raise(Errc::malformed_row,
            "RoI sidecar line " + std::to_string(lineno) + ": expected filename,x,y,w,h");
    try {
      out[name] = CropRect{std::stoi(xs), std::stoi(ys), std::stoi(ws), std::stoi(hs)};
    } catch (const std::exception&) {
      raise(Errc::malformed_row,
            "RoI sidecar line " + std::to_string(lineno) + ": non-integer field");
    }
  }
  return out;
}

}  // namespace mammotex
