// Copyright 2026 The cdsdmm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstring>
#include <limits>
#include <random>
#include <sstream>

#include "cdsdmm/cdm_io.hpp"
#include "cdsdmm/error.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace cdsdmm;

TEST_CASE("CDM1 header and payload layout") {
  Image img(2, 3, Vector{1.0, -2.0, 0.5, 3.25, 0.0, -0.0});
  std::ostringstream out;
  write_cdm(out, img);
  const std::string bytes = out.str();
  const std::string header = "CDM1 2 3\n";
  REQUIRE(bytes.size() == header.size() + 6 * 8);
  CHECK(bytes.substr(0, header.size()) == header);
  // 1.0 little-endian: 00 00 00 00 00 00 f0 3f
  const unsigned char one[8] = {0, 0, 0, 0, 0, 0, 0xf0, 0x3f};
  CHECK(std::memcmp(bytes.data() + header.size(), one, 8) == 0);
}

TEST_CASE("CDM1 round trip preserves every bit") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t rows = 1 + rng() % 9;
    const std::size_t cols = 1 + rng() % 9;
    Image img = oracle::random_image(rows, cols, rng);
    img[0] = std::numeric_limits<double>::denorm_min();
    std::stringstream buf;
    write_cdm(buf, img);
    const Image back = read_cdm(buf);
    CHECK(back == img);
  }
}

TEST_CASE("CDM1 rejects malformed input") {
  SUBCASE("bad magic") {
    std::istringstream in("CDM2 1 1\n12345678");
    CHECK_THROWS_AS(read_cdm(in), IoError);
  }
  SUBCASE("zero dimension") {
    std::istringstream in("CDM1 0 4\n");
    CHECK_THROWS_AS(read_cdm(in), IoError);
  }
  SUBCASE("truncated payload") {
    std::istringstream in(std::string("CDM1 1 2\n") + std::string(12, '\0'));
    CHECK_THROWS_AS(read_cdm(in), IoError);
  }
  SUBCASE("trailing bytes") {
    std::istringstream in(std::string("CDM1 1 1\n") + std::string(9, '\0'));
    CHECK_THROWS_AS(read_cdm(in), IoError);
  }
}

TEST_CASE("Image construction checks the data length") {
  CHECK_THROWS_AS(Image(2, 2, Vector(3)), DimensionError);
  const Image col = as_column(Vector{1, 2, 3});
  CHECK(col.rows() == 3);
  CHECK(col.cols() == 1);
}
