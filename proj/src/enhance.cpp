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

#include "nightwatch/enhance.hpp"

#include <cmath>
#include <vector>

#include "enhance_detail.hpp"
#include "nightwatch/errors.hpp"
#include "nightwatch/parallel.hpp"

namespace nightwatch
{

Lut gamma_lut(double gamma)
{
  if (!std::isfinite(gamma) || gamma <= 0.0) {
    throw ParamError("gamma must be finite and > 0");
  }
  Lut lut;
  const double exponent = 1.0 / gamma;
  for (int v = 0; v < 256; ++v) {
    const double out = 255.0 * std::pow(v / 255.0, exponent);
    lut[v] = static_cast<std::uint8_t>(std::clamp(std::floor(out + 0.5), 0.0, 255.0));
  }
  lut[0] = 0;
  lut[255] = 255;
  return lut;
}

Frame apply_lut(const Frame & frame, const Lut & lut)
{
  Frame out(frame.width(), frame.height(), frame.channels());
  const std::uint8_t * src = frame.data().data();
  std::uint8_t * dst = out.data().data();
  const auto n = static_cast<std::ptrdiff_t>(frame.data().size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    dst[i] = lut[src[i]];
  }
  return out;
}

Frame gamma_correct(const Frame & frame, GammaParams params)
{
  return apply_lut(frame, gamma_lut(params.gamma));
}

Histogram histogram(const Frame & gray)
{
  detail::require_gray(gray, "histogram");
  const std::uint8_t * src = gray.data().data();
  const auto n = static_cast<std::ptrdiff_t>(gray.pixel_count());
  const int teams = max_threads();
  std::vector<Histogram> partial(static_cast<std::size_t>(teams), Histogram{});
#pragma omp parallel
  {
    Histogram & local = partial[static_cast<std::size_t>(thread_id())];
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      ++local[src[i]];
    }
  }
  Histogram hist{};
  for (const auto & h : partial) {
    for (int v = 0; v < 256; ++v) {
      hist[v] += h[v];
    }
  }
  return hist;
}

Lut equalization_lut(const Histogram & hist)
{
  std::uint64_t total = 0;
  int first = -1;
  for (int v = 0; v < 256; ++v) {
    total += hist[v];
    if (first < 0 && hist[v] > 0) {
      first = v;
    }
  }
  Lut lut;
  const std::uint64_t cdf_min = first < 0 ? 0 : hist[first];
  if (first < 0 || total == cdf_min) {
    for (int v = 0; v < 256; ++v) {
      lut[v] = static_cast<std::uint8_t>(v);
    }
    return lut;
  }
  const std::uint64_t den = total - cdf_min;
  std::uint64_t cdf = 0;
  for (int v = 0; v < 256; ++v) {
    cdf += hist[v];
    if (cdf < cdf_min) {
      lut[v] = 0;
      continue;
    }
    // round half up of (cdf - cdf_min) * 255 / den in exact integers
    const std::uint64_t num = (cdf - cdf_min) * 255;
    lut[v] = static_cast<std::uint8_t>((2 * num + den) / (2 * den));
  }
  return lut;
}

Frame hist_equalize(const Frame & gray)
{
  detail::require_gray(gray, "hist_equalize");
  return apply_lut(gray, equalization_lut(histogram(gray)));
}

Frame clahe(const Frame & gray, const ClaheParams & params)
{
  detail::validate_clahe(gray, params);
  const int width = gray.width();
  const int height = gray.height();
  const int tx = params.tiles_x;
  const int ty = params.tiles_y;
  std::vector<Lut> luts(static_cast<std::size_t>(tx) * ty);

#pragma omp parallel for collapse(2) schedule(static)
  for (int j = 0; j < ty; ++j) {
    for (int i = 0; i < tx; ++i) {
      const int x0 = detail::tile_begin(i, width, tx);
      const int x1 = detail::tile_begin(i + 1, width, tx);
      const int y0 = detail::tile_begin(j, height, ty);
      const int y1 = detail::tile_begin(j + 1, height, ty);
      Histogram hist{};
      for (int y = y0; y < y1; ++y) {
        const auto row = gray.row(y);
        for (int x = x0; x < x1; ++x) {
          ++hist[row[x]];
        }
      }
      const auto pixels = static_cast<std::uint32_t>((x1 - x0) * (y1 - y0));
      luts[static_cast<std::size_t>(j) * tx + i] =
        detail::clahe_tile_lut(hist, pixels, params.clip_limit);
    }
  }

  const auto sx = detail::axis_stencil(width, tx);
  const auto sy = detail::axis_stencil(height, ty);
  Frame out(width, height, 1);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < height; ++y) {
    const auto src = gray.row(y);
    auto dst = out.row(y);
    const Lut * top = &luts[static_cast<std::size_t>(sy.lo[y]) * tx];
    const Lut * bot = &luts[static_cast<std::size_t>(sy.hi[y]) * tx];
    const double wy = sy.w[y];
    for (int x = 0; x < width; ++x) {
      dst[x] = detail::blend(
        top[sx.lo[x]], top[sx.hi[x]], bot[sx.lo[x]], bot[sx.hi[x]], src[x], sx.w[x], wy);
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
  Lut lut;
  for (int v = 0; v < 256; ++v) {
    lut[v] = v >= t ? 255 : 0;
  }
  return apply_lut(gray, lut);
}

}  // namespace nightwatch
