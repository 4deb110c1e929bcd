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

#include "nightwatch/frame.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iterator>
#include <string_view>

#ifdef NIGHTWATCH_HAVE_PNG
#include <png.h>
#endif

#include "nightwatch/errors.hpp"
#include "nightwatch/parallel.hpp"

namespace nightwatch
{

namespace fs = std::filesystem;

Frame::Frame(int width, int height, int channels)
: Frame(width, height, channels,
    std::vector<std::uint8_t>(
      width > 0 && height > 0 && channels > 0 ?
      static_cast<std::size_t>(width) * height * channels : 0))
{
}

Frame::Frame(int width, int height, int channels, std::vector<std::uint8_t> data)
: width_(width), height_(height), channels_(channels), data_(std::move(data))
{
  if (width <= 0 || height <= 0) {
    throw ParamError("frame dimensions must be positive");
  }
  if (channels != 1 && channels != 3) {
    throw ParamError("frame must have 1 or 3 channels");
  }
  if (data_.size() != static_cast<std::size_t>(width) * height * channels) {
    throw ParamError("frame data length does not match width*height*channels");
  }
}

namespace
{

class HeaderReader
{
public:
  explicit HeaderReader(std::string_view bytes)
  : bytes_(bytes) {}

  // Skips whitespace and '#' comments, then reads a decimal token.
  long long next_int()
  {
    skip_space();
    if (pos_ >= bytes_.size() || !std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
      throw FormatError("malformed header");
    }
    long long v = 0;
    while (pos_ < bytes_.size() && std::isdigit(static_cast<unsigned char>(bytes_[pos_]))) {
      v = v * 10 + (bytes_[pos_] - '0');
      if (v > (1LL << 40)) {
        throw FormatError("malformed header: value out of range");
      }
      ++pos_;
    }
    return v;
  }

  // Exactly one whitespace byte separates maxval from the raster.
  std::size_t raster_offset()
  {
    if (pos_ >= bytes_.size() || !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
      throw FormatError("malformed header");
    }
    return pos_ + 1;
  }

private:
  void skip_space()
  {
    while (pos_ < bytes_.size()) {
      const char c = bytes_[pos_];
      if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') {
          ++pos_;
        }
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  std::string_view bytes_;
  std::size_t pos_ = 2;
};

std::string read_file(const fs::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

Frame decode_pnm(const std::string & bytes, const fs::path & path)
{
  const int channels = bytes[1] == '5' ? 1 : 3;
  HeaderReader reader(bytes);
  const long long width = reader.next_int();
  const long long height = reader.next_int();
  const long long maxval = reader.next_int();
  if (width <= 0 || height <= 0 || width > (1 << 20) || height > (1 << 20)) {
    throw FormatError("malformed header: bad dimensions in " + path.string());
  }
  if (maxval != 255) {
    throw FormatError("unsupported maxval " + std::to_string(maxval) + " in " + path.string());
  }
  const std::size_t offset = reader.raster_offset();
  const std::size_t need = static_cast<std::size_t>(width * height * channels);
  if (bytes.size() < offset + need) {
    throw FormatError("truncated data in " + path.string());
  }
  std::vector<std::uint8_t> data(
    bytes.begin() + static_cast<std::ptrdiff_t>(offset),
    bytes.begin() + static_cast<std::ptrdiff_t>(offset + need));
  return Frame(static_cast<int>(width), static_cast<int>(height), channels, std::move(data));
}

#ifdef NIGHTWATCH_HAVE_PNG
Frame decode_png(const std::string & bytes, const fs::path & path)
{
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
    throw FormatError("malformed PNG " + path.string() + ": " + image.message);
  }
  const bool gray = (image.format & PNG_FORMAT_FLAG_COLOR) == 0;
  image.format = gray ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;
  const int channels = gray ? 1 : 3;
  std::vector<std::uint8_t> data(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, data.data(), 0, nullptr)) {
    png_image_free(&image);
    throw FormatError("truncated PNG " + path.string() + ": " + image.message);
  }
  return Frame(static_cast<int>(image.width), static_cast<int>(image.height), channels, std::move(data));
}
#endif

bool is_png(const std::string & bytes)
{
  return bytes.size() >= 8 && static_cast<unsigned char>(bytes[0]) == 0x89 && bytes.compare(1, 3, "PNG") == 0;
}

}  // namespace

Frame load_frame(const fs::path & path)
{
  if (!fs::exists(path)) {
    throw IoError("no such file " + path.string());
  }
  const std::string bytes = read_file(path);
  if (bytes.size() >= 2 && bytes[0] == 'P' && (bytes[1] == '5' || bytes[1] == '6')) {
    return decode_pnm(bytes, path);
  }
  if (is_png(bytes)) {
#ifdef NIGHTWATCH_HAVE_PNG
    return decode_png(bytes, path);
#else
    throw FormatError("PNG support not compiled in: " + path.string());
#endif
  }
  throw FormatError("malformed header: not a binary PGM/PPM file: " + path.string());
}

void save_frame(const Frame & frame, const fs::path & path)
{
  if (frame.empty()) {
    throw ParamError("cannot save an empty frame");
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot write " + path.string());
  }
  out << (frame.channels() == 1 ? "P5" : "P6") << '\n'
      << frame.width() << ' ' << frame.height() << '\n' << 255 << '\n';
  const auto data = frame.data();
  out.write(reinterpret_cast<const char *>(data.data()), static_cast<std::streamsize>(data.size()));
  if (!out) {
    throw IoError("write failed for " + path.string());
  }
}

namespace
{

#if defined(__GNUC__) && defined(__x86_64__)
__attribute__((target_clones("avx2", "default")))
#endif
void rgb_to_gray(const std::uint8_t * __restrict src, std::uint8_t * __restrict dst, std::ptrdiff_t n)
{
  // Exact 0.299/0.587/0.114 weighting in thousandths, +500 rounds half up.
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const std::uint32_t s = 299u * src[3 * i] + 587u * src[3 * i + 1] + 114u * src[3 * i + 2];
    dst[i] = static_cast<std::uint8_t>((s + 500u) / 1000u);
  }
}

}  // namespace

Frame to_grayscale(const Frame & frame)
{
  if (frame.channels() == 1) {
    return frame;
  }
  Frame gray(frame.width(), frame.height(), 1);
  const std::uint8_t * src = frame.data().data();
  std::uint8_t * dst = gray.data().data();
  const auto n = static_cast<std::ptrdiff_t>(frame.pixel_count());
#pragma omp parallel
  {
    const std::ptrdiff_t threads = max_threads_in_team();
    const std::ptrdiff_t id = thread_id();
    const std::ptrdiff_t begin = n * id / threads;
    const std::ptrdiff_t end = n * (id + 1) / threads;
    rgb_to_gray(src + 3 * begin, dst + begin, end - begin);
  }
  return gray;
}

Frame to_rgb(const Frame & frame)
{
  if (frame.channels() == 3) {
    return frame;
  }
  Frame rgb(frame.width(), frame.height(), 3);
  const auto src = frame.data();
  auto dst = rgb.data();
  for (std::size_t i = 0; i < src.size(); ++i) {
    dst[3 * i] = dst[3 * i + 1] = dst[3 * i + 2] = src[i];
  }
  return rgb;
}

long long frame_index_from_name(const std::string & name)
{
  const std::string stem = fs::path(name).stem().string();
  auto end = stem.size();
  while (end > 0 && !std::isdigit(static_cast<unsigned char>(stem[end - 1]))) {
    --end;
  }
  if (end == 0) {
    return -1;
  }
  auto begin = end;
  while (begin > 0 && std::isdigit(static_cast<unsigned char>(stem[begin - 1]))) {
    --begin;
  }
  const std::string digits = stem.substr(begin, std::min<std::size_t>(end - begin, 18));
  return std::stoll(digits);
}

namespace
{

bool glob_match(std::string_view pattern, std::string_view name)
{
  std::size_t p = 0, n = 0, star = std::string_view::npos, mark = 0;
  while (n < name.size()) {
    if (p < pattern.size() && (pattern[p] == '?' || pattern[p] == name[n])) {
      ++p;
      ++n;
    } else if (p < pattern.size() && pattern[p] == '*') {
      star = p++;
      mark = n;
    } else if (star != std::string_view::npos) {
      p = star + 1;
      n = ++mark;
    } else {
      return false;
    }
  }
  while (p < pattern.size() && pattern[p] == '*') {
    ++p;
  }
  return p == pattern.size();
}

bool is_frame_extension(const fs::path & p)
{
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
    [](unsigned char c) {return static_cast<char>(std::tolower(c));});
  return ext == ".pgm" || ext == ".ppm" || ext == ".png";
}

}  // namespace

Sequence load_sequence(const fs::path & pattern, double fps)
{
  if (!(fps > 0.0)) {
    throw ParamError("fps must be positive");
  }
  std::vector<fs::path> matches;
  if (fs::is_directory(pattern)) {
    for (const auto & entry : fs::directory_iterator(pattern)) {
      if (entry.is_regular_file() && is_frame_extension(entry.path())) {
        matches.push_back(entry.path());
      }
    }
  } else {
    const fs::path dir = pattern.has_parent_path() ? pattern.parent_path() : fs::path(".");
    const std::string file_pattern = pattern.filename().string();
    if (fs::is_directory(dir)) {
      for (const auto & entry : fs::directory_iterator(dir)) {
        if (entry.is_regular_file() && glob_match(file_pattern, entry.path().filename().string())) {
          matches.push_back(entry.path());
        }
      }
    }
  }
  if (matches.empty()) {
    throw IoError("no frames match " + pattern.string());
  }
  std::sort(matches.begin(), matches.end(), [](const fs::path & a, const fs::path & b) {
      const auto ia = frame_index_from_name(a.filename().string());
      const auto ib = frame_index_from_name(b.filename().string());
      if (ia != ib) {
        return ia < ib;
      }
      return a.filename().string() < b.filename().string();
    });

  Sequence seq;
  seq.frames.reserve(matches.size());
  for (const auto & path : matches) {
    Frame f = load_frame(path);
    if (!seq.frames.empty() &&
      (f.width() != seq.frames.front().width() || f.height() != seq.frames.front().height()))
    {
      throw FormatError("dimension mismatch: " + path.string());
    }
    seq.frames.push_back(std::move(f));
  }
  seq.paths = std::move(matches);
  seq.meta.fps = fps;
  seq.meta.frame_count = seq.frames.size();
  seq.meta.source = pattern.string();
  return seq;
}

namespace
{

// 3x5 glyphs, rows top to bottom, '1' = ink.
struct Glyph
{
  char c;
  const char * bits;
};

constexpr Glyph kFont[] = {
  {'0', "111101101101111"}, {'1', "010110010010111"}, {'2', "111001111100111"},
  {'3', "111001111001111"}, {'4', "101101111001001"}, {'5', "111100111001111"},
  {'6', "111100111101111"}, {'7', "111001001001001"}, {'8', "111101111101111"},
  {'9', "111101111001111"}, {'A', "010101111101101"}, {'B', "110101110101110"},
  {'C', "011100100100011"}, {'D', "110101101101110"}, {'E', "111100110100111"},
  {'F', "111100110100100"}, {'G', "011100101101011"}, {'H', "101101111101101"},
  {'I', "111010010010111"}, {'J', "001001001101010"}, {'K', "101101110101101"},
  {'L', "100100100100111"}, {'M', "101111111101101"}, {'N', "110101101101101"},
  {'O', "010101101101010"}, {'P', "110101110100100"}, {'Q', "010101101110011"},
  {'R', "110101110101101"}, {'S', "011100010001110"}, {'T', "111010010010010"},
  {'U', "101101101101111"}, {'V', "101101101101010"}, {'W', "101101111111101"},
  {'X', "101101010101101"}, {'Y', "101101010010010"}, {'Z', "111001010100111"},
  {'.', "000000000000010"}, {'-', "000000111000000"}, {':', "000010000010000"},
};

const char * glyph_bits(char c)
{
  const char up = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  for (const auto & g : kFont) {
    if (g.c == up) {
      return g.bits;
    }
  }
  return nullptr;
}

void put_pixel(Frame & rgb, int x, int y, Rgb color)
{
  if (x < 0 || y < 0 || x >= rgb.width() || y >= rgb.height()) {
    return;
  }
  for (int c = 0; c < 3; ++c) {
    rgb.at(x, y, c) = color[static_cast<std::size_t>(c)];
  }
}

}  // namespace

void draw_text(Frame & rgb, int x, int y, const std::string & text, Rgb color)
{
  int pen = x;
  for (char c : text) {
    if (const char * bits = glyph_bits(c)) {
      for (int r = 0; r < 5; ++r) {
        for (int col = 0; col < 3; ++col) {
          if (bits[r * 3 + col] == '1') {
            put_pixel(rgb, pen + col, y + r, color);
          }
        }
      }
    }
    pen += 4;
  }
}

Frame draw_boxes(const Frame & frame, std::span<const BoxAnnotation> boxes, Rgb color)
{
  Frame out = to_rgb(frame);
  const int width = out.width();
  const int height = out.height();
  for (const auto & ann : boxes) {
    const BoundingBox & b = ann.box;
    const int x0 = std::max(b.x, 0);
    const int y0 = std::max(b.y, 0);
    const int x1 = std::min(b.x + b.w, width) - 1;
    const int y1 = std::min(b.y + b.h, height) - 1;
    if (b.w <= 0 || b.h <= 0 || x0 > x1 || y0 > y1) {
      continue;
    }
    // Only edges that lie on the original (unclipped) outline are drawn.
    for (int x = x0; x <= x1; ++x) {
      if (b.y >= 0) {
        put_pixel(out, x, b.y, color);
      }
      if (b.y + b.h <= height) {
        put_pixel(out, x, b.y + b.h - 1, color);
      }
    }
    for (int y = y0; y <= y1; ++y) {
      if (b.x >= 0) {
        put_pixel(out, b.x, y, color);
      }
      if (b.x + b.w <= width) {
        put_pixel(out, b.x + b.w - 1, y, color);
      }
    }
    if (!ann.label.empty()) {
      const int ty = y0 >= 6 ? y0 - 6 : y0 + 2;
      draw_text(out, x0 + (y0 >= 6 ? 0 : 2), ty, ann.label, color);
    }
  }
  return out;
}

}  // namespace nightwatch
