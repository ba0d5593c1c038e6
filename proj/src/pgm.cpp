#include "mammotex/pgm.hpp"

#include <cstdio>
#include <fstream>
#include <string>

#include "mammotex/error.hpp"

namespace mammotex {

namespace {

struct Cursor {
  const std::uint8_t* p;
  const std::uint8_t* end;
};

bool is_pgm_space(std::uint8_t c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' || c == '\f';
}

bool is_digit(std::uint8_t c) { return c >= '0' && c <= '9'; }

// Skips whitespace and '#' comments (comment runs to end of line).
void skip_space(Cursor& c) {
  for (;;) {
    while (c.p < c.end && is_pgm_space(*c.p)) ++c.p;
    if (c.p < c.end && *c.p == '#') {
      while (c.p < c.end && *c.p != '\n') ++c.p;
      continue;
    }
    return;
  }
}

// Reads one unsigned decimal token. Values are clamped at 10^15 so grossly
// oversized tokens still parse without overflow and fail range checks later.
std::uint64_t parse_uint(Cursor& c, const char* what) {
  skip_space(c);
  if (c.p >= c.end)
    raise(Errc::truncated_data, std::string("missing ") + what);
  if (!is_digit(*c.p))
    raise(Errc::malformed_header, std::string("non-integer token for ") + what);
  constexpr std::uint64_t kCap = 1000000000000000ull;
  std::uint64_t v = 0;
  while (c.p < c.end && is_digit(*c.p)) {
    if (v < kCap) v = v * 10 + (*c.p - '0');
    ++c.p;
  }
  return v;
}

}  // namespace

GrayImage parse_pgm(std::span<const std::uint8_t> bytes) {
  Cursor c{bytes.data(), bytes.data() + bytes.size()};
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5'))
    raise(Errc::unsupported_magic, "expected P2 or P5");
  const bool binary = bytes[1] == '5';
  c.p += 2;

  const std::uint64_t width = parse_uint(c, "width");
  const std::uint64_t height = parse_uint(c, "height");
  if (width == 0 || height == 0)
    raise(Errc::malformed_header, "zero image dimension");
  const std::uint64_t maxval = parse_uint(c, "maxval");
  if (maxval == 0) raise(Errc::malformed_header, "maxval must be positive");
  if (maxval > 255) raise(Errc::unsupported_depth, "maxval exceeds 255");

  // Overflow-safe pixel count; compared against the remaining byte budget
  // before any allocation happens.
  if (height != 0 && width > UINT64_MAX / height)
    raise(Errc::truncated_data, "raster larger than input");
  const std::uint64_t npix = width * height;

  GrayImage img;
  img.width = static_cast<int>(width);
  img.height = static_cast<int>(height);

  if (binary) {
    if (c.p >= c.end) raise(Errc::truncated_data, "missing raster");
    if (!is_pgm_space(*c.p))
      raise(Errc::malformed_header, "missing whitespace before raster");
    ++c.p;  // raster starts after exactly one whitespace byte
    if (static_cast<std::uint64_t>(c.end - c.p) < npix)
      raise(Errc::truncated_data, "raster shorter than width*height");
    img.pixels.assign(c.p, c.p + npix);
  } else {
    // Lower bound: n single-digit samples need at least 2n-1 bytes. The
    // first comparison also keeps the arithmetic below overflow-free.
    const std::uint64_t remaining = static_cast<std::uint64_t>(c.end - c.p);
    if (remaining < npix || remaining < 2 * npix - 1)
      raise(Errc::truncated_data, "raster shorter than width*height");
    img.pixels.reserve(npix);
    for (std::uint64_t i = 0; i < npix; ++i) {
      const std::uint64_t v = parse_uint(c, "sample");
      if (v > 255) raise(Errc::malformed_header, "sample value exceeds 255");
      img.pixels.push_back(static_cast<std::uint8_t>(v));
    }
  }
  return img;
}

std::vector<std::uint8_t> encode_pgm(const GrayImage& image, bool binary) {
  std::string header = binary ? "P5\n" : "P2\n";
  header += std::to_string(image.width) + " " + std::to_string(image.height) +
            "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  if (binary) {
    out.insert(out.end(), image.pixels.begin(), image.pixels.end());
    return out;
  }
  // ASCII raster, wrapped at 70 columns.
  std::string line;
  for (std::size_t i = 0; i < image.pixels.size(); ++i) {
    const std::string tok = std::to_string(image.pixels[i]);
    if (line.empty()) {
      line = tok;
    } else if (line.size() + 1 + tok.size() > 70) {
      line += '\n';
      out.insert(out.end(), line.begin(), line.end());
      line = tok;
    } else {
      line += ' ';
      line += tok;
    }
  }
  line += '\n';
  out.insert(out.end(), line.begin(), line.end());
  return out;
}

GrayImage read_pgm_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(Errc::io_failure, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return parse_pgm(bytes);
}

void write_pgm_file(const GrayImage& image, const std::filesystem::path& path,
                    bool binary) {
  const std::vector<std::uint8_t> bytes = encode_pgm(image, binary);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) raise(Errc::io_failure, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) raise(Errc::io_failure, "write failed for " + path.string());
}

}  // namespace mammotex
