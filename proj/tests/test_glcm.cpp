#include <cmath>

#include "doctest.h"
#include "mammotex/error.hpp"
#include "mammotex/glcm.hpp"
#include "support/oracles.hpp"
#include "support/test_util.hpp"

using namespace mammotex;

namespace {

GrayImage rotate90_cw(const GrayImage& img) {
  GrayImage out(img.height, img.width);
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x)
      out.at(img.height - 1 - y, x) = img.at(x, y);
  return out;
}

}  // namespace

TEST_CASE("constant image concentrates all mass on the diagonal cell") {
  const GrayImage img(4, 4, 100);
  for (Direction d : kAllDirections) {
    const Glcm g = compute_glcm(img, d, GlcmConfig{});
    const int k = 100;  // levels=256 keeps the gray value as the level index
    CHECK(g.at(k, k) == 1.0);
  }
}

TEST_CASE("1x2 image at 0 degrees symmetric splits mass over the pair") {
  GrayImage img(2, 1);
  img.pixels = {0, 255};
  const Glcm g = compute_glcm(img, Direction::deg0, GlcmConfig{});
  CHECK(g.at(0, 255) == 0.5);
  CHECK(g.at(255, 0) == 0.5);
}

TEST_CASE("matrices equal the naive pair counter exactly") {
  Rng rng(77);
  GlcmConfig cfg;
  cfg.levels = 8;
  for (int i = 0; i < 50; ++i) {
    const GrayImage img = testutil::random_image(rng, 16, 16);
    for (Direction d : kAllDirections) {
      const auto [dx, dy] = direction_offset(d, cfg.distance);
      const Glcm got = compute_glcm(img, d, cfg);
      const std::vector<double> want =
          oracle::glcm_normalized(img, cfg.levels, dx, dy, cfg.symmetric);
      REQUIRE(got.p.size() == want.size());
      for (std::size_t k = 0; k < want.size(); ++k) CHECK(got.p[k] == want[k]);
    }
  }
}

TEST_CASE("normalization and symmetry invariants") {
  Rng rng(13);
  GlcmConfig cfg;
  cfg.levels = 16;
  for (int i = 0; i < 20; ++i) {
    const GrayImage img = testutil::random_image(rng, 12, 9);
    const Glcm g = compute_glcm(img, Direction::deg45, cfg);
    double sum = 0.0;
    for (double p : g.p) sum += p;
    CHECK(std::abs(sum - 1.0) < 1e-12);
    for (int a = 0; a < cfg.levels; ++a)
      for (int b = 0; b < cfg.levels; ++b) CHECK(g.at(a, b) == g.at(b, a));
  }
}

TEST_CASE("checkerboard features at two levels") {
  GrayImage board(6, 6);
  for (int y = 0; y < 6; ++y)
    for (int x = 0; x < 6; ++x) board.at(x, y) = (x + y) % 2 ? 255 : 0;
  GlcmConfig cfg;
  cfg.levels = 2;
  const GlcmFeatures f = glcm_features(compute_glcm(board, Direction::deg0, cfg));
  CHECK(f.contrast == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(f.correlation == doctest::Approx(-1.0).epsilon(1e-12));
  CHECK_FALSE(f.zero_marginal_variance);
}

TEST_CASE("canonical features match direct double-sum evaluation") {
  Rng rng(55);
  GlcmConfig cfg;
  cfg.levels = 8;
  for (int i = 0; i < 50; ++i) {
    const GrayImage img = testutil::random_image(rng, 16, 16);
    for (Direction d : kAllDirections) {
      const Glcm g = compute_glcm(img, d, cfg);
      const GlcmFeatures got = glcm_features(g);
      const oracle::GlcmFeatureRef want = oracle::glcm_features_direct(g.p, cfg.levels);
      CHECK(oracle::rel_err(got.entropy, want.entropy) < 1e-12);
      CHECK(oracle::rel_err(got.contrast, want.contrast) < 1e-12);
      CHECK(oracle::rel_err(got.correlation, want.correlation) < 1e-12);
      CHECK(oracle::rel_err(got.angular_second_moment, want.asm_value) < 1e-12);
      CHECK(oracle::rel_err(got.inverse_difference_moment, want.idm) < 1e-12);
      CHECK(oracle::rel_err(got.variance, want.variance) < 1e-12);
    }
  }
}

TEST_CASE("as-printed variant swaps in the literal formulas") {
  Rng rng(56);
  GlcmConfig printed;
  printed.levels = 8;
  printed.variant = GlcmVariant::as_printed;
  for (int i = 0; i < 30; ++i) {
    const GrayImage img = testutil::random_image(rng, 16, 16);
    const Glcm g = compute_glcm(img, Direction::deg90, printed);
    const GlcmFeatures got = glcm_features(g);
    const oracle::GlcmFeatureRef want = oracle::glcm_features_direct(g.p, printed.levels);
    CHECK(oracle::rel_err(got.angular_second_moment, want.asm_printed) < 1e-12);
    CHECK(oracle::rel_err(got.inverse_difference_moment, want.idm_printed) < 1e-12);
    CHECK(oracle::rel_err(got.variance, want.variance_printed) < 1e-12);
    CHECK(got.variance == got.entropy);  // the printed variance duplicates entropy
    CHECK(oracle::rel_err(got.contrast, want.contrast) < 1e-12);
    CHECK(oracle::rel_err(got.correlation, want.correlation) < 1e-12);
  }
}

TEST_CASE("constant-image features and the zero-variance flag") {
  const Glcm g = compute_glcm(GrayImage(4, 4, 100), Direction::deg0, GlcmConfig{});
  const GlcmFeatures f = glcm_features(g);
  CHECK(f.entropy == 0.0);
  CHECK(f.contrast == 0.0);
  CHECK(f.angular_second_moment == 1.0);
  CHECK(f.inverse_difference_moment == 1.0);
  CHECK(f.zero_marginal_variance);
  CHECK(f.correlation == 0.0);
}

TEST_CASE("no valid pairs on a too-small image") {
  CHECK_THROWS_AS(compute_glcm(GrayImage(1, 1, 0), Direction::deg0, GlcmConfig{}),
                  Error);
  GlcmConfig far;
  far.distance = 5;
  CHECK_THROWS_AS(compute_glcm(GrayImage(3, 3, 0), Direction::deg45, far), Error);
}

TEST_CASE("directional set has fixed cardinality and stripe anisotropy") {
  GrayImage stripes(16, 16);
  for (int y = 0; y < 16; ++y)
    for (int x = 0; x < 16; ++x) stripes.at(x, y) = y % 2 ? 200 : 40;
  const auto sets = directional_feature_set(stripes, GlcmConfig{});
  REQUIRE(sets.size() == 4);
  // horizontal stripes: no variation along rows, full swing across them
  CHECK(sets.at(Direction::deg0).contrast < sets.at(Direction::deg90).contrast);

  // a constant image is isotropic: the four sets are identical
  const auto constant_sets = directional_feature_set(GrayImage(8, 8, 10), GlcmConfig{});
  for (Direction d : kAllDirections) {
    CHECK(constant_sets.at(d).zero_marginal_variance);
    CHECK(constant_sets.at(d).ordered() == constant_sets.at(Direction::deg0).ordered());
  }
}

TEST_CASE("rotating the image by 90 degrees permutes the directional features") {
  Rng rng(91);
  const GrayImage img = testutil::random_image(rng, 12, 12);
  const auto orig = directional_feature_set(img, GlcmConfig{});
  const auto rot = directional_feature_set(rotate90_cw(img), GlcmConfig{});
  auto same = [](const GlcmFeatures& a, const GlcmFeatures& b) {
    const auto va = a.ordered(), vb = b.ordered();
    for (int k = 0; k < 6; ++k)
      if (oracle::rel_err(va[k], vb[k]) > 1e-12) return false;
    return true;
  };
  CHECK(same(rot.at(Direction::deg90), orig.at(Direction::deg0)));
  CHECK(same(rot.at(Direction::deg0), orig.at(Direction::deg90)));
  CHECK(same(rot.at(Direction::deg45), orig.at(Direction::deg135)));
  CHECK(same(rot.at(Direction::deg135), orig.at(Direction::deg45)));
}

TEST_CASE("mean over directions") {
  Rng rng(15);
  const GrayImage img = testutil::random_image(rng, 10, 10);
  auto sets = directional_feature_set(img, GlcmConfig{});
  const GlcmFeatures mean = mean_over_directions(sets);

  GlcmFeatures expect{};
  for (Direction d : kAllDirections) {
    const auto v = sets.at(d).ordered();
    expect.angular_second_moment += v[0] / 4.0;
    expect.contrast += v[1] / 4.0;
    expect.correlation += v[2] / 4.0;
    expect.variance += v[3] / 4.0;
    expect.inverse_difference_moment += v[4] / 4.0;
    expect.entropy += v[5] / 4.0;
  }
  CHECK(oracle::rel_err(mean.contrast, expect.contrast) < 1e-12);
  CHECK(oracle::rel_err(mean.entropy, expect.entropy) < 1e-12);
  CHECK(oracle::rel_err(mean.angular_second_moment, expect.angular_second_moment) < 1e-12);

  // four identical sets average to themselves
  std::map<Direction, GlcmFeatures> equal;
  for (Direction d : kAllDirections) equal[d] = sets.at(Direction::deg0);
  const GlcmFeatures same = mean_over_directions(equal);
  CHECK(same.contrast == doctest::Approx(sets.at(Direction::deg0).contrast));

  // contrasts {1,2,3,4} average to 2.5
  std::map<Direction, GlcmFeatures> ramp;
  double contrast = 1.0;
  for (Direction d : kAllDirections) {
    ramp[d] = GlcmFeatures{};
    ramp[d].contrast = contrast;
    contrast += 1.0;
  }
  CHECK(mean_over_directions(ramp).contrast == 2.5);

  sets.erase(Direction::deg45);
  CHECK_THROWS_AS(mean_over_directions(sets), Error);
}
