// Copyright 2026 The v1saliency Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "v1sal/float_map.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "v1sal/error.hpp"

namespace v1sal {

namespace {

static_assert(std::endian::native == std::endian::little, "float maps are written little-endian");

constexpr std::array<char, 4> kMagic{'V', '1', 'S', 'F'};
constexpr std::uint32_t kVersion = 1;

}  // namespace

void write_float_map(const Plane& p, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  const std::uint32_t header[3] = {kVersion, static_cast<std::uint32_t>(p.width()),
                                   static_cast<std::uint32_t>(p.height())};
  out.write(kMagic.data(), kMagic.size());
  out.write(reinterpret_cast<const char*>(header), sizeof header);
  std::vector<float> data(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) data[i] = static_cast<float>(p[i]);
  out.write(reinterpret_cast<const char*>(data.data()), static_cast<std::streamsize>(data.size() * sizeof(float)));
  if (!out) throw IoError("short write to '" + path + "'");
}

Plane read_float_map(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open float map '" + path + "'");
  std::array<char, 4> magic{};
  std::uint32_t header[3] = {};
  in.read(magic.data(), magic.size());
  in.read(reinterpret_cast<char*>(header), sizeof header);
  if (!in || magic != kMagic) throw IoError("'" + path + "' is not a float map");
  if (header[0] != kVersion) throw IoError("unsupported float map version in '" + path + "'");
  if (header[1] == 0 || header[2] == 0 || header[1] > 1u << 16 || header[2] > 1u << 16) {
    throw IoError("bad float map dimensions in '" + path + "'");
  }
  Plane p(static_cast<int>(header[1]), static_cast<int>(header[2]));
  std::vector<float> data(p.size());
  in.read(reinterpret_cast<char*>(data.data()), static_cast<std::streamsize>(data.size() * sizeof(float)));
  if (!in) throw IoError("truncated float map '" + path + "'");
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = data[i];
  return p;
}

}  // namespace v1sal
