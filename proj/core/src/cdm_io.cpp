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

#include "cdsdmm/cdm_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

#include "cdsdmm/error.hpp"

namespace cdsdmm {
namespace {

std::uint64_t byteswap64(std::uint64_t v) {
  std::uint64_t r = 0;
  for (int i = 0; i < 8; ++i) {
    r = (r << 8) | (v & 0xff);
    v >>= 8;
  }
  return r;
}

void put_le(std::ostream& out, double value) {
  auto bits = std::bit_cast<std::uint64_t>(value);
  if constexpr (std::endian::native == std::endian::big) bits = byteswap64(bits);
  char buf[8];
  std::memcpy(buf, &bits, 8);
  out.write(buf, 8);
}

}  // namespace

void write_cdm(std::ostream& out, const Image& img) {
  out << "CDM1 " << img.rows() << ' ' << img.cols() << '\n';
  for (double v : img.data()) put_le(out, v);
  if (!out) throw IoError("failed writing CDM1 stream");
}

Image read_cdm(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw IoError("CDM1: missing header");
  std::istringstream header(line);
  std::string magic;
  long long rows = -1;
  long long cols = -1;
  header >> magic >> rows >> cols;
  if (magic != "CDM1" || !header || rows <= 0 || cols <= 0) {
    throw IoError("CDM1: malformed header '" + line + "'");
  }
  std::string extra;
  if (header >> extra) throw IoError("CDM1: trailing header tokens");

  const auto n = static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols);
  Vector data(n);
  for (std::size_t i = 0; i < n; ++i) {
    char buf[8];
    if (!in.read(buf, 8)) throw IoError("CDM1: truncated payload");
    std::uint64_t bits = 0;
    std::memcpy(&bits, buf, 8);
    if constexpr (std::endian::native == std::endian::big) bits = byteswap64(bits);
    data[i] = std::bit_cast<double>(bits);
  }
  if (in.peek() != std::char_traits<char>::eof()) {
    throw IoError("CDM1: payload longer than header declares");
  }
  return Image(static_cast<std::size_t>(rows), static_cast<std::size_t>(cols),
               std::move(data));
}

void write_cdm(const std::filesystem::path& path, const Image& img) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  write_cdm(out, img);
}

Image read_cdm(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  return read_cdm(in);
}

Image as_column(const Vector& v) { return Image(v.size(), 1, v); }

}  // namespace cdsdmm
