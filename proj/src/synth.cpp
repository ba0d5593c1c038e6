#include <algorithm>
#include <cmath>
#include <cstdio>

#include "mammotex/error.hpp"
#include "mammotex/experiment.hpp"
#include "mammotex/pgm.hpp"
#include "mammotex/rng.hpp"

namespace mammotex {

namespace {

constexpr double kPi = 3.14159265358979323846;

std::uint8_t to_pixel(double v) {
  return static_cast<std::uint8_t>(std::clamp<long>(std::lround(v), 0, 255));
}

// Smooth texture: a soft base gradient plus a few broad Gaussian bumps and
// low-amplitude noise.
GrayImage smooth_blobs(int size, Rng& rng) {
  std::vector<double> field(static_cast<std::size_t>(size) * size, 90.0);
  const int n_bumps = rng.uniform_int(2, 4);
  for (int b = 0; b < n_bumps; ++b) {
    const double cx = rng.uniform(0.2, 0.8) * size;
    const double cy = rng.uniform(0.2, 0.8) * size;
    const double sigma = rng.uniform(size / 6.0, size / 3.0);
    const double amp = rng.uniform(30.0, 70.0);
    for (int y = 0; y < size; ++y)
      for (int x = 0; x < size; ++x) {
        const double d2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
        field[static_cast<std::size_t>(y) * size + x] +=
            amp * std::exp(-d2 / (2.0 * sigma * sigma));
      }
  }
  GrayImage img(size, size);
  for (std::size_t i = 0; i < field.size(); ++i)
    img.pixels[i] = to_pixel(field[i] + rng.uniform(-3.0, 3.0));
  return img;
}

// Directional texture: horizontal stripes (varying along rows) with speckle.
GrayImage stripes_with_speckle(int size, Rng& rng) {
  const double period = rng.uniform(4.0, 8.0);
  const double phase = rng.uniform(0.0, 2.0 * kPi);
  const double amp = rng.uniform(45.0, 65.0);
  GrayImage img(size, size);
  for (int y = 0; y < size; ++y) {
    const double stripe = 110.0 + amp * std::sin(2.0 * kPi * y / period + phase);
    for (int x = 0; x < size; ++x) {
      double v = stripe + rng.uniform(-6.0, 6.0);
      if (rng.uniform01() < 0.06) v += rng.uniform(0.0, 1.0) < 0.5
                                           ? -rng.uniform(30.0, 70.0)
                                           : rng.uniform(30.0, 70.0);
      img.at(x, y) = to_pixel(v);
    }
  }
  return img;
}

}  // namespace

SynthResult generate_synthetic_corpus(int n_images, int size, std::uint64_t seed,
                                      const std::filesystem::path& out_dir) {
  if (n_images < 10 || n_images % 2 != 0)
    raise(Errc::invalid_params, "image count must be even and at least 10");
  if (size < 8) raise(Errc::invalid_params, "image size must be at least 8");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) raise(Errc::io_failure, "cannot create " + out_dir.string());

  SynthResult result;
  std::vector<ManifestEntry> manifest;
  for (int i = 0; i < n_images; ++i) {
    Rng rng(mix_seed(seed, static_cast<std::uint64_t>(i)));
    const bool malignant = i % 2 == 1;
    const GrayImage img = malignant ? stripes_with_speckle(size, rng)
                                    : smooth_blobs(size, rng);
    char name[32];
    std::snprintf(name, sizeof(name), "synthetic_%04d.pgm", i);
    write_pgm_file(img, out_dir / name, /*binary=*/true);
    result.files.emplace_back(name);
    manifest.push_back({name, malignant ? Label::malignant : Label::benign, {}});
  }
  const std::filesystem::path manifest_path = out_dir / "manifest.csv";
  write_manifest(manifest, manifest_path);
  result.manifest_path = manifest_path.string();
  return result;
}

}  // namespace mammotex
