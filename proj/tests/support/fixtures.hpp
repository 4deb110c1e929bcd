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


// Synthetic scenes and small helpers shared by the test programs.

#ifndef NIGHTWATCH_TESTS_FIXTURES_HPP_
#define NIGHTWATCH_TESTS_FIXTURES_HPP_

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <string>
#include <vector>

#include "nightwatch/frame.hpp"

namespace nwtest
{

using nightwatch::BoundingBox;
using nightwatch::Frame;

/// Fresh directory under the system temp dir, removed on scope exit.
class TempDir
{
public:
  TempDir()
  {
    std::random_device rd;
    std::mt19937_64 rng((static_cast<std::uint64_t>(rd()) << 32) ^ rd());
    const auto base = std::filesystem::temp_directory_path();
    for (;;) {
      path_ = base / ("nightwatch-test-" + std::to_string(rng() % 1000000000ULL));
      if (std::filesystem::create_directory(path_)) {
        break;
      }
    }
  }
  ~TempDir()
  {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir &) = delete;
  TempDir & operator=(const TempDir &) = delete;

  const std::filesystem::path & path() const { return path_; }
  std::filesystem::path operator/(const std::string & name) const { return path_ / name; }

private:
  std::filesystem::path path_;
};

inline std::vector<std::uint8_t> read_bytes(const std::filesystem::path & p)
{
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::string read_text(const std::filesystem::path & p)
{
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void write_text(const std::filesystem::path & p, const std::string & text)
{
  std::ofstream out(p, std::ios::binary);
  out << text;
}

inline std::size_t count_entries(const std::filesystem::path & dir)
{
  if (!std::filesystem::exists(dir)) {
    return 0;
  }
  return static_cast<std::size_t>(
    std::distance(std::filesystem::directory_iterator(dir), std::filesystem::directory_iterator()));
}

inline Frame random_frame(std::mt19937_64 & rng, int width, int height, int channels)
{
  std::uniform_int_distribution<int> byte(0, 255);
  Frame f(width, height, channels);
  for (auto & v : f.data()) {
    v = static_cast<std::uint8_t>(byte(rng));
  }
  return f;
}

/// {0,255} frame where each pixel is set with probability `density`.
inline Frame random_binary(std::mt19937_64 & rng, int width, int height, double density)
{
  std::bernoulli_distribution on(density);
  Frame f(width, height, 1);
  for (auto & v : f.data()) {
    v = on(rng) ? 255 : 0;
  }
  return f;
}

inline Frame constant_frame(int width, int height, int channels, std::uint8_t value)
{
  return Frame(width, height, channels,
    std::vector<std::uint8_t>(static_cast<std::size_t>(width) * height * channels, value));
}

inline void fill_rect(Frame & f, const BoundingBox & b, std::uint8_t value)
{
  for (int y = std::max(b.y, 0); y < std::min(b.bottom(), f.height()); ++y) {
    for (int x = std::max(b.x, 0); x < std::min(b.right(), f.width()); ++x) {
      for (int c = 0; c < f.channels(); ++c) {
        f.at(x, y, c) = value;
      }
    }
  }
}

inline std::uint8_t clamp_byte(double v)
{
  return static_cast<std::uint8_t>(std::clamp(static_cast<int>(std::lround(v)), 0, 255));
}

/// Dark street-like gray scene: vertical luminance falloff, two lamp glows,
/// a lane marking and per-pixel noise of +-3. `seed` drives only the noise.
inline Frame night_scene(int width, int height, std::uint64_t seed)
{
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> noise(-3, 3);
  Frame f(width, height, 1);
  const double lx1 = 0.2 * width, ly1 = 0.15 * height;
  const double lx2 = 0.8 * width, ly2 = 0.2 * height;
  const double r2 = 0.01 * width * width;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      double v = 18.0 + 14.0 * y / height;
      v += 50.0 * std::exp(-((x - lx1) * (x - lx1) + (y - ly1) * (y - ly1)) / r2);
      v += 40.0 * std::exp(-((x - lx2) * (x - lx2) + (y - ly2) * (y - ly2)) / r2);
      if (y > 0.85 * height && y < 0.85 * height + 3 && (x / 24) % 2 == 0) {
        v += 60.0;
      }
      f.at(x, y) = clamp_byte(v + noise(rng));
    }
  }
  return f;
}

/// RGB variant of night_scene with a bright rectangle that moves with `index`.
inline Frame night_scene_rgb(int width, int height, std::uint64_t seed, int index)
{
  const Frame gray = night_scene(width, height, seed * 7919 + static_cast<std::uint64_t>(index));
  Frame rgb(width, height, 3);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const int v = gray.at(x, y);
      rgb.at(x, y, 0) = static_cast<std::uint8_t>(std::min(v + 6, 255));
      rgb.at(x, y, 1) = static_cast<std::uint8_t>(v);
      rgb.at(x, y, 2) = static_cast<std::uint8_t>(std::max(v - 4, 0));
    }
  }
  const int bw = width / 16;
  const int bh = height / 6;
  const int x = (width / 8 + index * 3) % std::max(width - bw, 1);
  fill_rect(rgb, BoundingBox{x, height / 2, bw, bh}, 200);
  return rgb;
}

inline constexpr int kCropWidth = 64;
inline constexpr int kCropHeight = 128;

/// Bright pedestrian silhouette on a dark 64x128 window (head, torso, arms,
/// legs), shifted by (dx, dy). `seed` perturbs the noise only.
inline Frame pedestrian_crop(
  std::uint64_t seed, int dx = 0, int dy = 0, std::uint8_t body = 170, std::uint8_t ground = 28)
{
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> noise(-3, 3);
  Frame f(kCropWidth, kCropHeight, 1);
  auto inside = [dx, dy](int x, int y) {
      x -= dx;
      y -= dy;
      const double hx = x - 32.0, hy = y - 22.0;
      if (hx * hx + hy * hy <= 81.0) {
        return true;   // head
      }
      if (x >= 22 && x < 42 && y >= 32 && y < 78) {
        return true;   // torso
      }
      if ((x >= 16 && x < 21 && y >= 34 && y < 70) || (x >= 43 && x < 48 && y >= 34 && y < 70)) {
        return true;   // arms
      }
      return (x >= 23 && x < 30 && y >= 78 && y < 120) || (x >= 34 && x < 41 && y >= 78 && y < 120);
    };
  for (int y = 0; y < kCropHeight; ++y) {
    for (int x = 0; x < kCropWidth; ++x) {
      f.at(x, y) = clamp_byte((inside(x, y) ? body : ground) + noise(rng));
    }
  }
  return f;
}

/// Copies the silhouette pixels of `crop` (those brighter than `key`) into
/// `dst` at (x, y); the crop's dark surround is left out so the scene shows
/// through.
inline void composite(Frame & dst, const Frame & crop, int x, int y, int key = 100)
{
  for (int cy = 0; cy < crop.height(); ++cy) {
    for (int cx = 0; cx < crop.width(); ++cx) {
      const int tx = x + cx;
      const int ty = y + cy;
      if (tx < 0 || ty < 0 || tx >= dst.width() || ty >= dst.height() || crop.at(cx, cy) <= key) {
        continue;
      }
      for (int c = 0; c < dst.channels(); ++c) {
        dst.at(tx, ty, c) = crop.at(cx, cy);
      }
    }
  }
}

inline Frame crop_of(const Frame & src, const BoundingBox & b)
{
  Frame out(b.w, b.h, src.channels());
  for (int y = 0; y < b.h; ++y) {
    for (int x = 0; x < b.w; ++x) {
      for (int c = 0; c < src.channels(); ++c) {
        out.at(x, y, c) = src.at(b.x + x, b.y + y, c);
      }
    }
  }
  return out;
}

inline Frame transpose(const Frame & f)
{
  Frame out(f.height(), f.width(), f.channels());
  for (int y = 0; y < f.height(); ++y) {
    for (int x = 0; x < f.width(); ++x) {
      for (int c = 0; c < f.channels(); ++c) {
        out.at(y, x, c) = f.at(x, y, c);
      }
    }
  }
  return out;
}

}  // namespace nwtest

#endif  // NIGHTWATCH_TESTS_FIXTURES_HPP_
