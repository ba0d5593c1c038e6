#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace mammotex {

/// 8-bit grayscale image, row-major storage, values in [0, 255].
struct GrayImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;

  GrayImage() = default;
  GrayImage(int w, int h, std::uint8_t fill = 0)
      : width(w), height(h), pixels(static_cast<std::size_t>(w) * h, fill) {}

  std::uint8_t at(int x, int y) const {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }
  std::uint8_t& at(int x, int y) {
    return pixels[static_cast<std::size_t>(y) * width + x];
  }
  std::size_t pixel_count() const { return pixels.size(); }
  bool empty() const { return pixels.empty(); }

  bool operator==(const GrayImage&) const = default;
};

}  // namespace mammotex
