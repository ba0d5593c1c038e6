#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mammotex/image.hpp"

namespace mammotex {

struct CropRect {
  int x = 0;
  int y = 0;
  int width = 0;
  int height = 0;
};

struct ClaheParams {
  int tiles_x = 8;
  int tiles_y = 8;
  double clip_limit = 0.01;  // fraction of the tile pixel count
  int bins = 256;
};

/// Copies the rectangle out of the image. Throws out_of_bounds if the
/// rectangle does not lie fully inside the source.
GrayImage crop(const GrayImage& image, const CropRect& rect);

/// Bilinear resize with half-pixel-center coordinate mapping; outputs are
/// rounded to nearest and clamped to [0, 255].
GrayImage resize_to(const GrayImage& image, int width, int height);

/// Otsu threshold over the 256-level histogram, smallest maximizer on ties.
/// Returns nullopt when every pixel has the same value.
std::optional<int> otsu_threshold(const GrayImage& image);

struct BackgroundResult {
  GrayImage image;
  bool degenerate = false;  // set when no threshold separates two classes
  int threshold = -1;       // Otsu threshold actually used, -1 when degenerate
};

/// Zeroes below-threshold pixels that are outside the filled extent of the
/// largest above-threshold 4-connected component. Above-threshold pixels and
/// below-threshold pixels enclosed by that component are left unchanged.
BackgroundResult remove_background(const GrayImage& image);

/// 3x3 median filter with edge replication at the borders.
GrayImage median_filter3(const GrayImage& image);

struct ClaheTile {
  int x0 = 0, y0 = 0, x1 = 0, y1 = 0;  // pixel span [x0,x1) x [y0,y1)
  long clip_threshold = 0;
  std::vector<long> hist;               // clipped histogram after redistribution
  std::vector<std::uint8_t> mapping;    // bin -> output level, monotone
};

struct ClaheTiles {
  int tiles_x = 0;
  int tiles_y = 0;
  int bins = 0;
  std::vector<ClaheTile> tiles;  // row-major tile grid
  const ClaheTile& tile(int tx, int ty) const {
    return tiles[static_cast<std::size_t>(ty) * tiles_x + tx];
  }
};

/// Builds the per-tile clipped histograms and cumulative mappings.
ClaheTiles compute_clahe_tiles(const GrayImage& image, const ClaheParams& params);

/// Applies tile mappings with bilinear interpolation between tile centers.
GrayImage apply_clahe_tiles(const GrayImage& image, const ClaheTiles& tiles);

GrayImage clahe(const GrayImage& image, const ClaheParams& params);

struct PreprocessResult {
  GrayImage image;
  bool background_degenerate = false;
};

/// Full chain in fixed order: crop (when given) -> resize -> background
/// removal -> median filter -> CLAHE.
PreprocessResult preprocess_chain(const GrayImage& image,
                                  const std::optional<CropRect>& roi,
                                  int resize_width, int resize_height,
                                  const ClaheParams& clahe_params);

/// RoI sidecar: one `filename,x,y,w,h` line per image. Blank lines and `#`
/// comments are skipped.
std::map<std::string, CropRect> load_roi_sidecar(const std::filesystem::path& path);

}  // namespace mammotex
