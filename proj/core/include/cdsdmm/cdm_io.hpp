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

#pragma once

#include <filesystem>
#include <iosfwd>

#include "cdsdmm/image.hpp"

namespace cdsdmm {

// CDM1 matrix files: the ASCII line "CDM1 <rows> <cols>\n" followed by
// rows*cols little-endian IEEE-754 doubles in row-major order. Vectors are
// stored with cols = 1.

void write_cdm(std::ostream& out, const Image& img);
Image read_cdm(std::istream& in);

void write_cdm(const std::filesystem::path& path, const Image& img);
Image read_cdm(const std::filesystem::path& path);

/// Column-vector view of a plain vector, for writing measurements.
Image as_column(const Vector& v);

}  // namespace cdsdmm
