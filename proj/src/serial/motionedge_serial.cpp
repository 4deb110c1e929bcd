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

#include <algorithm>
#include <cmath>

#include "nightwatch/errors.hpp"
#include "nightwatch/serial.hpp"

namespace nightwatch::serial
{

namespace
{

template<typename T, typename Source>
Plane<T> blur(int width, int height, const Source & src, const std::vector<T> & taps)
{
  const int radius = static_cast<int>(taps.size() / 2);
  Plane<T> tmp(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      T acc = T(0);
      for (int t = -radius; t <= radius; ++t) {
        acc += taps[t + radius] * static_cast<T>(src(std::clamp(x + t, 0, width - 1), y));
      }
      tmp.at(x, y) = acc;
    }
  }
  Plane<T> out(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      T acc = T(0);
      for (int t = -radius; t <= radius; ++t) {
        acc += taps[t + radius] * tmp.clamped(x, y + t);
      }
      out.at(x, y) = acc;
    }
  }
  return out;
}

std::vector<double> double_taps(double sigma)
{
  if (!(sigma > 0.0)) {
    throw ParamError("gaussian sigma must be > 0");
  }
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> w(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    w[i + radius] = std::exp(-0.5 * i * i / (sigma * sigma));
    sum += w[i + radius];
  }
  for (double & v : w) {
    v /= sum;
  }
  return w;
}

}  // namespace

Plane<float> gaussian_blur(const Frame & gray, double sigma)
{
  const auto taps = gaussian_kernel(sigma);
  return blur<float>(gray.width(), gray.height(), [&](int x, int y) {return gray.at(x, y);}, taps);
}

Gradient sobel(const Plane<float> & p)
{
  Gradient g{Plane<float>(p.width, p.height), Plane<float>(p.width, p.height)};
  for (int y = 0; y < p.height; ++y) {
    for (int x = 0; x < p.width; ++x) {
      g.gx.at(x, y) = (p.clamped(x + 1, y - 1) + 2.0f * p.clamped(x + 1, y) + p.clamped(x + 1, y + 1)) -
        (p.clamped(x - 1, y - 1) + 2.0f * p.clamped(x - 1, y) + p.clamped(x - 1, y + 1));
      g.gy.at(x, y) = (p.clamped(x - 1, y + 1) + 2.0f * p.clamped(x, y + 1) + p.clamped(x + 1, y + 1)) -
        (p.clamped(x - 1, y - 1) + 2.0f * p.clamped(x, y - 1) + p.clamped(x + 1, y - 1));
    }
  }
  return g;
}

Plane<float> non_max_suppression(const Gradient & grad)
{
  const int width = grad.gx.width;
  const int height = grad.gx.height;
  auto mag = [&](int x, int y) -> float {
      if (x < 0 || y < 0 || x >= width || y >= height) {
        return 0.0f;
      }
      const float gx = grad.gx.at(x, y);
      const float gy = grad.gy.at(x, y);
      return std::sqrt(gx * gx + gy * gy);
    };
  Plane<float> out(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const float m = mag(x, y);
      if (m <= 0.0f) {
        continue;
      }
      const float gx = grad.gx.at(x, y);
      const float gy = grad.gy.at(x, y);
      const float ax = std::fabs(gx);
      const float ay = std::fabs(gy);
      int dx, dy;
      if (ay <= 0.41421356f * ax) {
        dx = 1;
        dy = 0;
      } else if (ay >= 2.41421356f * ax) {
        dx = 0;
        dy = 1;
      } else {
        dx = ((gx > 0) == (gy > 0)) ? 1 : -1;
        dy = 1;
      }
      if (m > mag(x - dx, y - dy) && m >= mag(x + dx, y + dy)) {
        out.at(x, y) = m;
      }
    }
  }
  return out;
}

Frame canny(const Frame & gray, const CannyParams & params)
{
  if (gray.channels() != 1) {
    throw ParamError("canny requires a 1-channel frame");
  }
  if (!(params.low >= 0.0) || !(params.low < params.high)) {
    throw ParamError("canny requires 0 <= low < high");
  }
  return hysteresis(
    serial::non_max_suppression(serial::sobel(serial::gaussian_blur(gray, params.sigma))),
    params.low, params.high);
}

Plane<double> harris_response(const Frame & gray, const HarrisParams & params)
{
  if (gray.channels() != 1) {
    throw ParamError("harris requires a 1-channel frame");
  }
  if (!(params.k > 0.0 && params.k < 0.25) || !(params.window_sigma > 0.0)) {
    throw ParamError("invalid harris parameters");
  }
  const int width = gray.width();
  const int height = gray.height();
  auto px = [&](int x, int y) -> double {
      return gray.at(std::clamp(x, 0, width - 1), std::clamp(y, 0, height - 1));
    };
  Plane<double> ixx(width, height), iyy(width, height), ixy(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double gx = (px(x + 1, y - 1) + 2.0 * px(x + 1, y) + px(x + 1, y + 1)) -
        (px(x - 1, y - 1) + 2.0 * px(x - 1, y) + px(x - 1, y + 1));
      const double gy = (px(x - 1, y + 1) + 2.0 * px(x, y + 1) + px(x + 1, y + 1)) -
        (px(x - 1, y - 1) + 2.0 * px(x, y - 1) + px(x + 1, y - 1));
      ixx.at(x, y) = gx * gx;
      iyy.at(x, y) = gy * gy;
      ixy.at(x, y) = gx * gy;
    }
  }
  const auto taps = double_taps(params.window_sigma);
  const auto sxx = blur<double>(width, height, [&](int x, int y) {return ixx.at(x, y);}, taps);
  const auto syy = blur<double>(width, height, [&](int x, int y) {return iyy.at(x, y);}, taps);
  const auto sxy = blur<double>(width, height, [&](int x, int y) {return ixy.at(x, y);}, taps);
  Plane<double> response(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double a = sxx.at(x, y);
      const double b = syy.at(x, y);
      const double c = sxy.at(x, y);
      const double trace = a + b;
      response.at(x, y) = (a * b - c * c) - params.k * trace * trace;
    }
  }
  return response;
}

Frame gmm_update(BackgroundModel & model, const Frame & gray)
{
  if (gray.channels() != 1 || gray.width() != model.width() || gray.height() != model.height()) {
    throw ParamError("frame dimensions do not match the background model");
  }
  Frame mask(gray.width(), gray.height(), 1);
  const bool first = model.frames_seen() == 0;
  for (int y = 0; y < gray.height(); ++y) {
    for (int x = 0; x < gray.width(); ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * gray.width() + x;
      mask.at(x, y) = detail::gmm_update_pixel(
        model.pixel_components(i), model.pixel_count(i), gray.at(x, y), first, model.params());
    }
  }
  model.advance();
  return mask;
}

}  // namespace nightwatch::serial
