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

#ifndef NIGHTWATCH_FRAME_HPP_
#define NIGHTWATCH_FRAME_HPP_

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace nightwatch
{

/// Row-major 8-bit raster with 1 (gray) or 3 (RGB) interleaved channels.
class Frame
{
public:
  Frame() = default;
  /// Zero-filled frame. Throws ParamError on non-positive size or channels not in {1,3}.
  Frame(int width, int height, int channels);
  /// Takes ownership of `data`; its size must be width*height*channels.
  Frame(int width, int height, int channels, std::vector<std::uint8_t> data);

  int width() const { return width_; }
  int height() const { return height_; }
  int channels() const { return channels_; }
  std::size_t pixel_count() const { return static_cast<std::size_t>(width_) * height_; }
  bool empty() const { return data_.empty(); }

  std::span<const std::uint8_t> data() const { return data_; }
  std::span<std::uint8_t> data() { return data_; }

  std::uint8_t at(int x, int y, int c = 0) const
  {
    return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
  }
  std::uint8_t & at(int x, int y, int c = 0)
  {
    return data_[(static_cast<std::size_t>(y) * width_ + x) * channels_ + c];
  }

  std::span<const std::uint8_t> row(int y) const
  {
    return std::span<const std::uint8_t>(data_).subspan(
      static_cast<std::size_t>(y) * width_ * channels_, static_cast<std::size_t>(width_) * channels_);
  }
  std::span<std::uint8_t> row(int y)
  {
    return std::span<std::uint8_t>(data_).subspan(
      static_cast<std::size_t>(y) * width_ * channels_, static_cast<std::size_t>(width_) * channels_);
  }

  bool operator==(const Frame &) const = default;

private:
  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<std::uint8_t> data_;
};

/// Axis-aligned pixel rectangle, top-left origin.
struct BoundingBox
{
  int x = 0;
  int y = 0;
  int w = 0;
  int h = 0;

  long long area() const { return static_cast<long long>(w) * h; }
  int right() const { return x + w; }    // exclusive
  int bottom() const { return y + h; }   // exclusive
  bool inside(int width, int height) const
  {
    return x >= 0 && y >= 0 && w > 0 && h > 0 && x + w <= width && y + h <= height;
  }
  bool operator==(const BoundingBox &) const = default;
};

struct SequenceMeta
{
  double fps = 24.0;
  std::size_t frame_count = 0;
  std::string source;
};

struct Sequence
{
  std::vector<Frame> frames;
  std::vector<std::filesystem::path> paths;
  SequenceMeta meta;
};

struct BoxAnnotation
{
  BoundingBox box;
  std::string label;
  double score = 0.0;
};

using Rgb = std::array<std::uint8_t, 3>;
inline constexpr Rgb kMarkerColor{255, 0, 0};

/// Reads binary PGM (P5) or PPM (P6) with maxval 255; PNG when built with libpng.
Frame load_frame(const std::filesystem::path & path);

/// Writes P5 for 1-channel frames and P6 for 3-channel frames.
void save_frame(const Frame & frame, const std::filesystem::path & path);

/// BT.601 luma, round half up. 1-channel input is returned unchanged.
Frame to_grayscale(const Frame & frame);

/// Expands a gray frame into 3 identical channels; RGB input is copied.
Frame to_rgb(const Frame & frame);

/// Integer value of the last digit run in `name`, or -1 when there is none.
long long frame_index_from_name(const std::string & name);

/// `pattern` is a directory (all .pgm/.ppm/.png files) or a path whose file
/// name contains `*` wildcards. Frames are ordered by the last integer run in
/// the filename, ties broken by name.
Sequence load_sequence(const std::filesystem::path & pattern, double fps = 24.0);

/// 3-channel copy with 1-px outlines (clipped to the frame) and text labels.
Frame draw_boxes(
  const Frame & frame, std::span<const BoxAnnotation> boxes, Rgb color = kMarkerColor);

/// Renders `text` with a 3x5 bitmap font at (x,y); unknown glyphs are skipped.
void draw_text(Frame & rgb, int x, int y, const std::string & text, Rgb color);

}  // namespace nightwatch

#endif  // NIGHTWATCH_FRAME_HPP_
