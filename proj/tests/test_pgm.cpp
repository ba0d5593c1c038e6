#include <string>
#include <vector>

#include "doctest.h"
#include "mammotex/error.hpp"
#include "mammotex/pgm.hpp"
#include "support/test_util.hpp"

using namespace mammotex;

namespace {

std::vector<std::uint8_t> bytes_of(const std::string& s) {
  return {s.begin(), s.end()};
}

Errc code_of(const std::vector<std::uint8_t>& data) {
  try {
    parse_pgm(data);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected a parse error");
  return Errc::io_failure;
}

}  // namespace

TEST_CASE("parse_pgm reads ASCII and binary rasters") {
  const GrayImage a = parse_pgm(bytes_of("P2\n2 2\n255\n0 0 0 0"));
  CHECK(a.width == 2);
  CHECK(a.height == 2);
  CHECK(a.pixels == std::vector<std::uint8_t>{0, 0, 0, 0});

  std::vector<std::uint8_t> p5 = bytes_of("P5\n1 1\n255\n");
  p5.push_back(0x7f);
  const GrayImage b = parse_pgm(p5);
  CHECK(b.width == 1);
  CHECK(b.height == 1);
  CHECK(b.pixels[0] == 127);
}

TEST_CASE("parse_pgm accepts comments between header tokens") {
  const auto data = bytes_of(
      "P2 # magic\n# a comment line\n 3 # width\n1\n# before maxval\n255\n7 8 9\n");
  const GrayImage img = parse_pgm(data);
  CHECK(img.width == 3);
  CHECK(img.height == 1);
  CHECK(img.pixels == std::vector<std::uint8_t>{7, 8, 9});
}

TEST_CASE("P2 and P5 encodings of the same pixels parse identically") {
  Rng rng(11);
  for (int i = 0; i < 20; ++i) {
    const GrayImage img = testutil::random_image(rng, rng.uniform_int(1, 17),
                                                 rng.uniform_int(1, 17));
    CHECK(parse_pgm(encode_pgm(img, false)) == parse_pgm(encode_pgm(img, true)));
  }
}

TEST_CASE("encode_pgm fixed single-pixel layout") {
  const GrayImage img(1, 1, 42);
  const auto out = encode_pgm(img, false);
  CHECK(std::string(out.begin(), out.end()) == "P2\n1 1\n255\n42\n");
}

TEST_CASE("round trip is pixel-exact and re-encoding is stable") {
  Rng rng(7);
  for (int i = 0; i < 100; ++i) {
    const GrayImage img = testutil::random_image(rng, rng.uniform_int(1, 24),
                                                 rng.uniform_int(1, 24));
    for (bool binary : {false, true}) {
      const auto encoded = encode_pgm(img, binary);
      const GrayImage back = parse_pgm(encoded);
      REQUIRE(back == img);
      CHECK(encode_pgm(back, binary) == encoded);
    }
  }
}

TEST_CASE("parse_pgm error taxonomy") {
  CHECK(code_of(bytes_of("P3\n1 1\n255\n0")) == Errc::unsupported_magic);
  CHECK(code_of(bytes_of("")) == Errc::unsupported_magic);
  CHECK(code_of(bytes_of("P2\n1 1\n65535\n0")) == Errc::unsupported_depth);
  CHECK(code_of(bytes_of("P2\n2 2\n255\n0 0 0")) == Errc::truncated_data);
  CHECK(code_of(bytes_of("P5\n2 2\n255\nab")) == Errc::truncated_data);
  CHECK(code_of(bytes_of("P2\nx 2\n255\n0 0")) == Errc::malformed_header);
  CHECK(code_of(bytes_of("P2\n0 2\n255\n")) == Errc::malformed_header);
  CHECK(code_of(bytes_of("P2\n1 1\n0\n0")) == Errc::malformed_header);
  CHECK(code_of(bytes_of("P2\n1 1\n255\n300")) == Errc::malformed_header);
  CHECK(code_of(bytes_of("P2\n1 1\n255\n!")) == Errc::malformed_header);
  // absurd dimensions fail before any allocation
  CHECK(code_of(bytes_of("P5\n999999999 999999999\n255\n\0")) == Errc::truncated_data);
  CHECK(code_of(bytes_of("P2\n99999999999999999999 2\n255\n0")) == Errc::truncated_data);
}

TEST_CASE("parser survives random byte soup") {
  Rng rng(99);
  for (int i = 0; i < 1000; ++i) {
    std::vector<std::uint8_t> junk(rng.uniform_int(0, 60));
    for (auto& b : junk) b = static_cast<std::uint8_t>(rng.uniform_int(0, 255));
    if (i % 3 == 0 && junk.size() >= 2) {
      junk[0] = 'P';
      junk[1] = i % 2 ? '2' : '5';
    }
    try {
      parse_pgm(junk);
    } catch (const Error&) {
      // any listed error is acceptable; anything else would escape and fail
    }
  }
}

TEST_CASE("file round trip") {
  testutil::TempDir tmp("pgm");
  Rng rng(3);
  const GrayImage img = testutil::random_image(rng, 9, 5);
  const auto path = tmp.path() / "img.pgm";
  write_pgm_file(img, path, true);
  CHECK(read_pgm_file(path) == img);
  CHECK_THROWS_AS(read_pgm_file(tmp.path() / "absent.pgm"), Error);
}

TEST_CASE("adversarial dimension products cannot trigger oversized allocation") {
  // width*height lands just above 2^63; the byte-budget check must reject it
  // before any allocation arithmetic runs
  CHECK(code_of(bytes_of("P2\n3037000500 3037000500\n255\n0 0 0")) ==
        Errc::truncated_data);
  CHECK(code_of(bytes_of("P5\n3037000500 3037000500\n255\n\n")) ==
        Errc::truncated_data);
}
