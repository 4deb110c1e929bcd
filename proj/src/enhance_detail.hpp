// Copyright 2026 The Nightwatch Authors
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

// Pieces shared by the OpenMP and serial CLAHE kernels.

#ifndef NIGHTWATCH_SRC_ENHANCE_DETAIL_HPP_
#define NIGHTWATCH_SRC_ENHANCE_DETAIL_HPP_

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "nightwatch/enhance.hpp"
#include "nightwatch/errors.hpp"

namespace nightwatch::detail
{

inline void require_gray(const Frame & f, const char * what)
{
  if (f.empty() || f.channels() != 1) {
    throw ParamError(std::string(what) + " requires a 1-channel frame");
  }
}

inline void validate_clahe(const Frame & gray, const ClaheParams & p)
{
  require_gray(gray, "clahe");
  if (p.tiles_x < 1 || p.tiles_y < 1) {
    throw ParamError("clahe tile counts must be >= 1");
  }
  if (std::isnan(p.clip_limit) || p.clip_limit < 1.0) {
    throw ParamError("clahe clip_limit must be >= 1.0");
  }
  if (p.tiles_x > gray.width() || p.tiles_y > gray.height()) {
    throw ParamError("clahe tile grid exceeds frame dimensions");
  }
}

/// Tile i covers [begin(i), begin(i+1)). Integer division spreads the
/// remainder so every tile is non-empty when tiles <= extent.
inline int tile_begin(int i, int extent, int tiles)
{
  return static_cast<int>(static_cast<long long>(i) * extent / tiles);
}

/// Per-coordinate interpolation stencil along one axis.
struct AxisStencil
{
  std::vector<int> lo;
  std::vector<int> hi;
  std::vector<double> w;   // weight of `hi`
};

inline AxisStencil axis_stencil(int extent, int tiles)
{
  std::vector<double> centers(static_cast<std::size_t>(tiles));
  for (int i = 0; i < tiles; ++i) {
    centers[i] = 0.5 * (tile_begin(i, extent, tiles) + tile_begin(i + 1, extent, tiles) - 1);
  }
  AxisStencil s;
  s.lo.resize(static_cast<std::size_t>(extent));
  s.hi.resize(static_cast<std::size_t>(extent));
  s.w.resize(static_cast<std::size_t>(extent));
  int seg = 0;
  for (int x = 0; x < extent; ++x) {
    if (x <= centers.front()) {
      s.lo[x] = s.hi[x] = 0;
      s.w[x] = 0.0;
    } else if (x >= centers.back()) {
      s.lo[x] = s.hi[x] = tiles - 1;
      s.w[x] = 0.0;
    } else {
      while (centers[seg + 1] <= x) {
        ++seg;
      }
      s.lo[x] = seg;
      s.hi[x] = seg + 1;
      s.w[x] = (x - centers[seg]) / (centers[seg + 1] - centers[seg]);
    }
  }
  return s;
}

/// Clips `hist` at the contrast limit, spreads the excess uniformly (the
/// remainder of the integer division is dropped) and equalizes the result.
inline Lut clahe_tile_lut(const Histogram & hist, std::uint32_t tile_pixels, double clip_limit)
{
  int occupied = 0;
  for (auto c : hist) {
    occupied += c > 0 ? 1 : 0;
  }
  if (occupied <= 1) {
    Lut identity;
    for (int v = 0; v < 256; ++v) {
      identity[v] = static_cast<std::uint8_t>(v);
    }
    return identity;
  }
  Histogram clipped = hist;
  if (std::isfinite(clip_limit)) {
    const double raw = std::floor(clip_limit * tile_pixels / 256.0);
    const auto limit = static_cast<std::uint32_t>(std::max(1.0, std::min(raw, 4294967295.0)));
    std::uint64_t excess = 0;
    for (auto & c : clipped) {
      if (c > limit) {
        excess += c - limit;
        c = limit;
      }
    }
    const auto share = static_cast<std::uint32_t>(excess / 256);
    for (auto & c : clipped) {
      c += share;
    }
  }
  return equalization_lut(clipped);
}

inline std::uint8_t blend(
  const Lut & a, const Lut & b, const Lut & c, const Lut & d, std::uint8_t v, double wx, double wy)
{
  const double top = a[v] + wx * (b[v] - a[v]);
  const double bot = c[v] + wx * (d[v] - c[v]);
  const double out = top + wy * (bot - top);
  // out is a convex combination of LUT entries, so truncation is floor here.
  return static_cast<std::uint8_t>(std::clamp(static_cast<int>(out + 0.5), 0, 255));
}

}  // namespace nightwatch::detail

#endif  // NIGHTWATCH_SRC_ENHANCE_DETAIL_HPP_
