#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "mammotex/image.hpp"

namespace mammotex {

/// Parses a netpbm PGM image (ASCII "P2" or binary "P5", maxval <= 255).
/// Header comments (`#` to end of line) are allowed wherever whitespace is.
/// Throws Error with one of: unsupported_magic, unsupported_depth,
/// truncated_data, malformed_header.
GrayImage parse_pgm(std::span<const std::uint8_t> bytes);

/// Serializes to PGM; binary selects P5, otherwise P2. Maxval is always 255.
/// P2 output wraps lines at 70 columns and ends with a newline.
std::vector<std::uint8_t> encode_pgm(const GrayImage& image, bool binary);

GrayImage read_pgm_file(const std::filesystem::path& path);
void write_pgm_file(const GrayImage& image, const std::filesystem::path& path,
                    bool binary = true);

}  // namespace mammotex
