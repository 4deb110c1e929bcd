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

// Single-threaded reference versions of the point and tile kernels.

#include <vector>

#include "../enhance_detail.hpp"
#include "nightwatch/serial.hpp"
#include "nightwatch/errors.hpp"

namespace nightwatch::serial
{

Frame to_grayscale(const Frame & frame)
{
  if (frame.channels() == 1) {
    return frame;
  }
  Frame gray(frame.width(), frame.height(), 1);
  for (int y = 0; y < frame.height(); ++y) {
    for (int x = 0; x < frame.width(); ++x) {
      const std::uint32_t s =
        299u * frame.at(x, y, 0) + 587u * frame.at(x, y, 1) + 114u * frame.at(x, y, 2);
      gray.at(x, y) = static_cast<std::uint8_t>((s + 500u) / 1000u);
    }
  }
  return gray;
}

Frame gamma_correct(const Frame & frame, GammaParams params)
{
  const Lut lut = gamma_lut(params.gamma);
  Frame out = frame;
  for (auto & v : out.data()) {
    v = lut[v];
  }
  return out;
}

Histogram histogram(const Frame & gray)
{
  detail::require_gray(gray, "histogram");
  Histogram hist{};
  for (auto v : gray.data()) {
    ++hist[v];
  }
  return hist;
}

Frame hist_equalize(const Frame & gray)
{
  detail::require_gray(gray, "hist_equalize");
  const Lut lut = equalization_lut(serial::histogram(gray));
  Frame out = gray;
  for (auto & v : out.data()) {
    v = lut[v];
  }
  return out;
}

Frame clahe(const Frame & gray, const ClaheParams & params)
{
  detail::validate_clahe(gray, params);
  const int width = gray.width();
  const int height = gray.height();
  const int tx = params.tiles_x;
  const int ty = params.tiles_y;
  std::vector<Lut> luts;
  luts.reserve(static_cast<std::size_t>(tx) * ty);
  for (int j = 0; j < ty; ++j) {
    for (int i = 0; i < tx; ++i) {
      const int x0 = detail::tile_begin(i, width, tx);
      const int x1 = detail::tile_begin(i + 1, width, tx);
      const int y0 = detail::tile_begin(j, height, ty);
      const int y1 = detail::tile_begin(j + 1, height, ty);
      Histogram hist{};
      for (int y = y0; y < y1; ++y) {
        for (int x = x0; x < x1; ++x) {
          ++hist[gray.at(x, y)];
        }
      }
      luts.push_back(detail::clahe_tile_lut(
          hist, static_cast<std::uint32_t>((x1 - x0) * (y1 - y0)), params.clip_limit));
    }
  }
  const auto sx = detail::axis_stencil(width, tx);
  const auto sy = detail::axis_stencil(height, ty);
  Frame out(width, height, 1);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const auto & a = luts[static_cast<std::size_t>(sy.lo[y]) * tx + sx.lo[x]];
      const auto & b = luts[static_cast<std::size_t>(sy.lo[y]) * tx + sx.hi[x]];
      const auto & c = luts[static_cast<std::size_t>(sy.hi[y]) * tx + sx.lo[x]];
      const auto & d = luts[static_cast<std::size_t>(sy.hi[y]) * tx + sx.hi[x]];
      out.at(x, y) = detail::blend(a, b, c, d, gray.at(x, y), sx.w[x], sy.w[y]);
    }
  }
  return out;
}

Frame binary_threshold(const Frame & gray, int t)
{
  detail::require_gray(gray, "binary_threshold");
  if (t < 0 || t > 255) {
    throw ParamError("threshold must be in [0,255]");
  }
  Frame out = gray;
  for (auto & v : out.data()) {
    v = v >= t ? 255 : 0;
  }
  return out;
}

}  // namespace nightwatch::serial
