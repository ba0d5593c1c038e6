#include <sstream>

#include "doctest.h"
#include "mammotex/descriptors.hpp"
#include "mammotex/error.hpp"
#include "support/test_util.hpp"

using namespace mammotex;

namespace {

std::vector<DescriptorVector> random_rows(Rng& rng, int group_id, int n) {
  const int dim = descriptor_group(group_id).dimension;
  std::vector<DescriptorVector> rows;
  for (int i = 0; i < n; ++i) {
    DescriptorVector row;
    row.group_id = group_id;
    row.source_id = "img_" + std::to_string(i);
    row.label = i % 2 ? Label::malignant : Label::benign;
    for (int k = 0; k < dim; ++k) row.values.push_back(rng.uniform(-50.0, 50.0));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

TEST_CASE("group table matches the fixed dimensions") {
  const int want[9] = {5, 6, 24, 6, 6, 6, 6, 11, 29};
  for (int id = 1; id <= 9; ++id)
    CHECK(descriptor_group(id).dimension == want[id - 1]);
  CHECK(descriptor_group(3).name == "second_order_combination");
  CHECK_THROWS_AS(descriptor_group(0), Error);
  CHECK_THROWS_AS(descriptor_group(10), Error);
}

TEST_CASE("extract_group produces consistent slices and concatenations") {
  Rng rng(8);
  const GrayImage img = testutil::random_image(rng, 24, 24);
  const GlcmConfig cfg;

  std::vector<DescriptorVector> groups(10);
  for (int id = 1; id <= 9; ++id) {
    groups[id] = extract_group(img, id, cfg);
    CHECK(static_cast<int>(groups[id].values.size()) ==
          descriptor_group(id).dimension);
  }
  // groups 4..7 are the direction-ordered slices of group 3
  for (int d = 0; d < 4; ++d)
    for (int k = 0; k < 6; ++k)
      CHECK(groups[4 + d].values[k] == groups[3].values[d * 6 + k]);
  // group 8 = group 1 ++ group 2, group 9 = group 1 ++ group 3
  for (int k = 0; k < 5; ++k) {
    CHECK(groups[8].values[k] == groups[1].values[k]);
    CHECK(groups[9].values[k] == groups[1].values[k]);
  }
  for (int k = 0; k < 6; ++k) CHECK(groups[8].values[5 + k] == groups[2].values[k]);
  for (int k = 0; k < 24; ++k) CHECK(groups[9].values[5 + k] == groups[3].values[k]);

  // determinism
  CHECK(extract_group(img, 9, cfg).values == groups[9].values);
}

TEST_CASE("extraction propagates when no pixel pair exists at all") {
  CHECK_THROWS_WITH_AS(extract_group(GrayImage(1, 1, 5), 3, GlcmConfig{}),
                       doctest::Contains("NoValidPairs"), Error);
}

TEST_CASE("degenerate components are substituted with zero and flagged") {
  const GrayImage constant(8, 8, 50);
  const DescriptorVector g1 = extract_group(constant, 1, GlcmConfig{});
  CHECK(g1.degenerate_substituted);
  CHECK(g1.values[2] == 0.0);  // skewness
  CHECK(g1.values[3] == 0.0);  // kurtosis
  const DescriptorVector g3 = extract_group(constant, 3, GlcmConfig{});
  CHECK(g3.degenerate_substituted);
  for (int d = 0; d < 4; ++d) CHECK(g3.values[d * 6 + 2] == 0.0);  // correlations
}

TEST_CASE("scaler endpoints, midpoint, constants and clamping") {
  Rng rng(3);
  std::vector<DescriptorVector> rows = random_rows(rng, 1, 2);
  rows[0].values = {0.0, 5.0, 1.0, 1.0, -2.0};
  rows[1].values = {10.0, 5.0, 3.0, 2.0, 2.0};
  const Scaler s = fit_scaler(rows);
  CHECK(apply_scaler(s, rows[0].values)[0] == -1.0);
  CHECK(apply_scaler(s, rows[1].values)[0] == 1.0);
  CHECK(apply_scaler(s, {5.0, 5.0, 2.0, 1.5, 0.0})[0] == 0.0);
  // constant column maps to -1 everywhere
  CHECK(apply_scaler(s, rows[0].values)[1] == -1.0);
  CHECK(apply_scaler(s, rows[1].values)[1] == -1.0);
  // far out-of-range values clamp at +-1.5
  CHECK(apply_scaler(s, {110.0, 5.0, 2.0, 1.5, 0.0})[0] == 1.5);
  CHECK(apply_scaler(s, {-110.0, 5.0, 2.0, 1.5, 0.0})[0] == -1.5);

  CHECK_THROWS_AS(apply_scaler(s, {1.0, 2.0}), Error);
  CHECK_THROWS_AS(fit_scaler(std::vector<DescriptorVector>{rows[0]}), Error);
  std::vector<DescriptorVector> mixed = random_rows(rng, 2, 2);
  mixed[1].group_id = 4;  // same width, different group
  CHECK_THROWS_AS(fit_scaler(mixed), Error);
}

TEST_CASE("scaling its own training rows lands in [-1, 1] and is monotone") {
  Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const std::vector<DescriptorVector> rows = random_rows(rng, 2, 8);
    const Scaler s = fit_scaler(rows);
    for (const DescriptorVector& row : rows)
      for (double v : apply_scaler(s, row.values)) {
        CHECK(v >= -1.0);
        CHECK(v <= 1.0);
      }
    // order within a feature column is preserved
    for (std::size_t k = 0; k < 6; ++k) {
      for (std::size_t a = 0; a < rows.size(); ++a)
        for (std::size_t b = 0; b < rows.size(); ++b) {
          if (rows[a].values[k] < rows[b].values[k])
            CHECK(apply_scaler(s, rows[a].values)[k] <=
                  apply_scaler(s, rows[b].values)[k]);
        }
    }
  }
}

TEST_CASE("dataset CSV round trip is exact") {
  Rng rng(33);
  for (int group : {1, 3, 8}) {
    const std::vector<DescriptorVector> rows = random_rows(rng, group, 7);
    std::stringstream buf;
    write_dataset(rows, buf);
    const std::vector<DescriptorVector> back = read_dataset(buf);
    REQUIRE(back.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      CHECK(back[i].source_id == rows[i].source_id);
      CHECK(back[i].label == rows[i].label);
      CHECK(back[i].group_id == rows[i].group_id);
      REQUIRE(back[i].values.size() == rows[i].values.size());
      for (std::size_t k = 0; k < rows[i].values.size(); ++k)
        CHECK(back[i].values[k] == rows[i].values[k]);  // 17 digits round-trip
    }
  }
}

TEST_CASE("dataset CSV headers and labels are validated") {
  {
    std::stringstream buf("source_id,label,f1,f2,f3,f4,f5\n"
                          "a.pgm,Benign,1,2,3,4,5\n"
                          "b.pgm,MALIGNANT,1,2,3,4,5\n");
    const auto rows = read_dataset(buf);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].label == Label::benign);   // case-insensitive
    CHECK(rows[1].label == Label::malignant);
    CHECK(rows[0].group_id == 1);
  }
  {
    std::stringstream buf("source_id,label,f1,f2,f3,f4,f5\na,tumor,1,2,3,4,5\n");
    CHECK_THROWS_WITH_AS(read_dataset(buf), doctest::Contains("UnknownLabel"), Error);
  }
  {
    std::stringstream buf("source_id,label,f1,f2,f3,f4,f5\na,benign,1,2,3\n");
    CHECK_THROWS_WITH_AS(read_dataset(buf), doctest::Contains("InconsistentWidth"),
                         Error);
  }
  {
    std::stringstream buf("source_id,label,f1,f2,f3,f4,f5\na,benign,1,2,xx,4,5\n");
    CHECK_THROWS_WITH_AS(read_dataset(buf), doctest::Contains("MalformedRow"), Error);
  }
  {  // width 7 matches no group
    std::stringstream buf("source_id,label,f1,f2,f3,f4,f5,f6,f7\n");
    CHECK_THROWS_AS(read_dataset(buf), Error);
  }
  {  // explicit group mismatch
    std::stringstream buf("source_id,label,f1,f2,f3,f4,f5\n");
    CHECK_THROWS_AS(read_dataset(buf, 3), Error);
  }
}
