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

#include "nightwatch/detect.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <numbers>
#include <random>

#include "detect_detail.hpp"
#include "nightwatch/errors.hpp"
#include "nightwatch/parallel.hpp"

#include "json.hpp"

namespace nightwatch
{

namespace fs = std::filesystem;

void validate(const HogParams & p)
{
  if (p.cell <= 0 || p.bins <= 0 || p.block_cells <= 0 || p.block_stride_cells <= 0) {
    throw ParamError("hog cell, bins and block sizes must be positive");
  }
  if (p.window_width <= 0 || p.window_height <= 0 ||
    p.window_width % p.cell != 0 || p.window_height % p.cell != 0)
  {
    throw ParamError("hog window must be a positive multiple of the cell size");
  }
  if (p.cells_x() < p.block_cells || p.cells_y() < p.block_cells ||
    (p.cells_x() - p.block_cells) % p.block_stride_cells != 0 ||
    (p.cells_y() - p.block_cells) % p.block_stride_cells != 0)
  {
    throw ParamError("hog blocks must tile the window exactly");
  }
  if (!(p.norm_clip > 0.0) || !(p.epsilon > 0.0)) {
    throw ParamError("hog norm_clip and epsilon must be positive");
  }
}

void validate(const PyramidParams & p)
{
  if (!(p.scale_step > 1.0) || !std::isfinite(p.scale_step)) {
    throw ParamError("pyramid scale_step must be > 1");
  }
  if (p.window_stride <= 0) {
    throw ParamError("pyramid window_stride must be positive");
  }
  if (!(p.nms_iou > 0.0 && p.nms_iou <= 1.0)) {
    throw ParamError("pyramid nms_iou must be in (0, 1]");
  }
  if (p.max_levels <= 0) {
    throw ParamError("pyramid max_levels must be positive");
  }
}

CellGrid hog_cell_histograms(const Frame & gray, const HogParams & params)
{
  if (gray.empty() || gray.channels() != 1) {
    throw ParamError("hog requires a 1-channel frame");
  }
  const int width = gray.width();
  const int height = gray.height();
  CellGrid grid;
  grid.cells_x = width / params.cell;
  grid.cells_y = height / params.cell;
  grid.bins = params.bins;
  grid.data.assign(static_cast<std::size_t>(grid.cells_x) * grid.cells_y * params.bins, 0.0);
  const double bin_width = 180.0 / params.bins;

#pragma omp parallel for schedule(static)
  for (int cy = 0; cy < grid.cells_y; ++cy) {
    for (int y = cy * params.cell; y < (cy + 1) * params.cell; ++y) {
      const auto up = gray.row(std::max(y - 1, 0));
      const auto dn = gray.row(std::min(y + 1, height - 1));
      const auto mid = gray.row(y);
      for (int cx = 0; cx < grid.cells_x; ++cx) {
        double * hist = &grid.data[(static_cast<std::size_t>(cy) * grid.cells_x + cx) * params.bins];
        for (int x = cx * params.cell; x < (cx + 1) * params.cell; ++x) {
          const double gx = static_cast<double>(mid[std::min(x + 1, width - 1)]) - mid[std::max(x - 1, 0)];
          const double gy = static_cast<double>(dn[x]) - up[x];
          const double mag = std::sqrt(gx * gx + gy * gy);
          if (mag == 0.0) {
            continue;
          }
          double angle = std::atan2(gy, gx) * (180.0 / std::numbers::pi);
          if (angle < 0.0) {
            angle += 180.0;
          }
          if (angle >= 180.0) {
            angle -= 180.0;
          }
          const double pos = angle / bin_width - 0.5;
          const double lo = std::floor(pos);
          const double frac = pos - lo;
          int b0 = static_cast<int>(lo);
          int b1 = b0 + 1;
          if (b0 < 0) {
            b0 += params.bins;
          }
          if (b1 >= params.bins) {
            b1 -= params.bins;
          }
          hist[b0] += mag * (1.0 - frac);
          hist[b1] += mag * frac;
        }
      }
    }
  }
  return grid;
}

namespace detail
{

BlockGrid normalize_blocks(const CellGrid & cells, const HogParams & params)
{
  BlockGrid blocks;
  blocks.stride_cells = params.block_stride_cells;
  blocks.blocks_x = cells.cells_x < params.block_cells ? 0 :
    (cells.cells_x - params.block_cells) / params.block_stride_cells + 1;
  blocks.blocks_y = cells.cells_y < params.block_cells ? 0 :
    (cells.cells_y - params.block_cells) / params.block_stride_cells + 1;
  blocks.length = params.block_length();
  blocks.data.assign(
    static_cast<std::size_t>(blocks.blocks_x) * blocks.blocks_y * blocks.length, 0.0);
  const double eps2 = params.epsilon * params.epsilon;

#pragma omp parallel for schedule(static)
  for (int by = 0; by < blocks.blocks_y; ++by) {
    for (int bx = 0; bx < blocks.blocks_x; ++bx) {
      double * v = &blocks.data[(static_cast<std::size_t>(by) * blocks.blocks_x + bx) * blocks.length];
      int k = 0;
      for (int j = 0; j < params.block_cells; ++j) {
        for (int i = 0; i < params.block_cells; ++i) {
          const auto cell = cells.cell(
            bx * params.block_stride_cells + i, by * params.block_stride_cells + j);
          for (double h : cell) {
            v[k++] = h;
          }
        }
      }
      // L2-Hys: normalize, clip, renormalize.
      double ss = 0.0;
      for (int t = 0; t < blocks.length; ++t) {
        ss += v[t] * v[t];
      }
      double scale = 1.0 / std::sqrt(ss + eps2);
      ss = 0.0;
      for (int t = 0; t < blocks.length; ++t) {
        v[t] = std::min(v[t] * scale, params.norm_clip);
        ss += v[t] * v[t];
      }
      scale = 1.0 / std::sqrt(ss + eps2);
      for (int t = 0; t < blocks.length; ++t) {
        v[t] *= scale;
      }
    }
  }
  return blocks;
}

void window_descriptor(
  const BlockGrid & blocks, int cell_x, int cell_y, const HogParams & params, double * out)
{
  const int bx0 = cell_x / params.block_stride_cells;
  const int by0 = cell_y / params.block_stride_cells;
  for (int by = 0; by < params.blocks_y(); ++by) {
    for (int bx = 0; bx < params.blocks_x(); ++bx) {
      const auto b = blocks.block(bx0 + bx, by0 + by);
      out = std::copy(b.begin(), b.end(), out);
    }
  }
}

double window_score(
  const BlockGrid & blocks, int cell_x, int cell_y, const HogParams & params, const LinearModel & model)
{
  const int bx0 = cell_x / params.block_stride_cells;
  const int by0 = cell_y / params.block_stride_cells;
  const double * w = model.weights.data();
  double acc = 0.0;
  for (int by = 0; by < params.blocks_y(); ++by) {
    for (int bx = 0; bx < params.blocks_x(); ++bx) {
      for (double v : blocks.block(bx0 + bx, by0 + by)) {
        acc += *w++ * v;
      }
    }
  }
  return acc + model.bias;
}

std::vector<PyramidLevel> pyramid_levels(int width, int height, const HogParams & hog, const PyramidParams & pyr)
{
  std::vector<PyramidLevel> levels;
  double scale = 1.0;
  for (int l = 0; l < pyr.max_levels; ++l) {
    const int w = l == 0 ? width : static_cast<int>(std::lround(width / scale));
    const int h = l == 0 ? height : static_cast<int>(std::lround(height / scale));
    if (w < hog.window_width || h < hog.window_height) {
      break;
    }
    levels.push_back({l, w, h, static_cast<double>(width) / w, static_cast<double>(height) / h});
    scale *= pyr.scale_step;
  }
  return levels;
}

std::vector<Detection> detect_level(
  const Frame & gray, const PyramidLevel & level, const LinearModel & model,
  const HogParams & hog, const PyramidParams & pyr)
{
  std::vector<Detection> found;
  const Frame image = level.index == 0 ? gray : resize_bilinear(gray, level.width, level.height);
  auto emit = [&](int px, int py, double score) {
      BoundingBox box;
      box.x = static_cast<int>(std::lround(px * level.scale_x));
      box.y = static_cast<int>(std::lround(py * level.scale_y));
      box.w = std::min(static_cast<int>(std::lround(hog.window_width * level.scale_x)), gray.width() - box.x);
      box.h = std::min(static_cast<int>(std::lround(hog.window_height * level.scale_y)), gray.height() - box.y);
      Detection d;
      d.bbox = box;
      d.score = score;
      found.push_back(std::move(d));
    };

  const int block_px = hog.cell * hog.block_stride_cells;
  if (pyr.window_stride % block_px == 0) {
    const BlockGrid blocks = normalize_blocks(hog_cell_histograms(image, hog), hog);
    const int step = pyr.window_stride / hog.cell;
    const int cells_w = image.width() / hog.cell;
    const int cells_h = image.height() / hog.cell;
    for (int cy = 0; cy + hog.cells_y() <= cells_h; cy += step) {
      for (int cx = 0; cx + hog.cells_x() <= cells_w; cx += step) {
        const double score = window_score(blocks, cx, cy, hog, model);
        if (score > model.score_threshold) {
          emit(cx * hog.cell, cy * hog.cell, score);
        }
      }
    }
  } else {
    // Arbitrary strides: describe each cropped window on its own.
    Frame crop(hog.window_width, hog.window_height, 1);
    for (int y = 0; y + hog.window_height <= image.height(); y += pyr.window_stride) {
      for (int x = 0; x + hog.window_width <= image.width(); x += pyr.window_stride) {
        for (int r = 0; r < hog.window_height; ++r) {
          const auto src = image.row(y + r).subspan(static_cast<std::size_t>(x), hog.window_width);
          std::copy(src.begin(), src.end(), crop.row(r).begin());
        }
        const double score = svm_score(model, hog_descriptor(crop, hog));
        if (score > model.score_threshold) {
          emit(x, y, score);
        }
      }
    }
  }
  return found;
}

void check_model(const LinearModel & model, const HogParams & hog)
{
  if (model.weights.size() != static_cast<std::size_t>(hog.descriptor_length())) {
    throw ParamError("model length does not match the HOG descriptor length");
  }
}

}  // namespace detail

Descriptor hog_descriptor(const Frame & window, const HogParams & params)
{
  validate(params);
  if (window.channels() != 1 || window.width() != params.window_width ||
    window.height() != params.window_height)
  {
    throw ParamError(
      "hog_descriptor requires a 1-channel " + std::to_string(params.window_width) + "x" +
      std::to_string(params.window_height) + " window");
  }
  const auto blocks = detail::normalize_blocks(hog_cell_histograms(window, params), params);
  Descriptor d(static_cast<std::size_t>(params.descriptor_length()));
  detail::window_descriptor(blocks, 0, 0, params, d.data());
  return d;
}

double svm_score(const LinearModel & model, std::span<const double> descriptor)
{
  if (descriptor.size() != model.weights.size()) {
    throw ParamError("descriptor length does not match model");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < descriptor.size(); ++i) {
    acc += model.weights[i] * descriptor[i];
  }
  return acc + model.bias;
}

double svm_objective(
  const LinearModel & model, std::span<const Descriptor> positives,
  std::span<const Descriptor> negatives, double lambda)
{
  double reg = model.bias * model.bias;
  for (double w : model.weights) {
    reg += w * w;
  }
  double hinge = 0.0;
  for (const auto & x : positives) {
    hinge += std::max(0.0, 1.0 - svm_score(model, x));
  }
  for (const auto & x : negatives) {
    hinge += std::max(0.0, 1.0 + svm_score(model, x));
  }
  const double n = static_cast<double>(positives.size() + negatives.size());
  return 0.5 * lambda * reg + hinge / n;
}

LinearModel train_linear_svm(
  std::span<const Descriptor> positives, std::span<const Descriptor> negatives,
  const SvmTrainParams & params, std::vector<double> * objective_trace)
{
  if (positives.empty() || negatives.empty()) {
    throw ParamError("training needs at least one positive and one negative");
  }
  if (!(params.lambda > 0.0) || params.epochs < 0) {
    throw ParamError("training requires lambda > 0 and epochs >= 0");
  }
  const std::size_t dim = positives.front().size();
  for (auto set : {positives, negatives}) {
    for (const auto & x : set) {
      if (x.size() != dim) {
        throw ParamError("descriptor lengths differ within the training set");
      }
    }
  }

  struct Sample
  {
    const Descriptor * x;
    double y;
  };
  std::vector<Sample> samples;
  samples.reserve(positives.size() + negatives.size());
  for (const auto & x : positives) {
    samples.push_back({&x, 1.0});
  }
  for (const auto & x : negatives) {
    samples.push_back({&x, -1.0});
  }

  LinearModel accepted;
  accepted.weights.assign(dim, 0.0);
  double accepted_objective = svm_objective(accepted, positives, negatives, params.lambda);
  if (objective_trace != nullptr) {
    objective_trace->clear();
  }

  std::mt19937_64 rng(params.seed);
  std::vector<std::size_t> order(samples.size());
  std::uint64_t t = 0;
  LinearModel current = accepted;
  for (int epoch = 0; epoch < params.epochs; ++epoch) {
    for (std::size_t i = 0; i < order.size(); ++i) {
      order[i] = i;
    }
    // Fisher-Yates on raw engine output, independent of the library's distributions.
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[rng() % i]);
    }
    current = accepted;
    for (std::size_t idx : order) {
      ++t;
      const Sample & s = samples[idx];
      const double eta = 1.0 / (params.lambda * static_cast<double>(t));
      const double margin = s.y * svm_score(current, *s.x);
      const double shrink = 1.0 - eta * params.lambda;
      for (double & w : current.weights) {
        w *= shrink;
      }
      current.bias *= shrink;
      if (margin < 1.0) {
        const double step = eta * s.y;
        const Descriptor & x = *s.x;
        for (std::size_t j = 0; j < dim; ++j) {
          current.weights[j] += step * x[j];
        }
        current.bias += step;
      }
    }
    const double objective = svm_objective(current, positives, negatives, params.lambda);
    if (objective <= accepted_objective) {
      accepted = current;
      accepted_objective = objective;
    }
    if (objective_trace != nullptr) {
      objective_trace->push_back(accepted_objective);
    }
  }
  return accepted;
}

Frame resize_bilinear(const Frame & gray, int width, int height)
{
  if (gray.empty() || gray.channels() != 1) {
    throw ParamError("resize requires a 1-channel frame");
  }
  if (width <= 0 || height <= 0) {
    throw ParamError("resize target must be positive");
  }
  Frame out(width, height, 1);
  const double sx = static_cast<double>(gray.width()) / width;
  const double sy = static_cast<double>(gray.height()) / height;
  const int max_x = gray.width() - 1;
  const int max_y = gray.height() - 1;
#pragma omp parallel for schedule(static)
  for (int y = 0; y < height; ++y) {
    const double fy = std::clamp((y + 0.5) * sy - 0.5, 0.0, static_cast<double>(max_y));
    const int y0 = static_cast<int>(fy);
    const int y1 = std::min(y0 + 1, max_y);
    const double wy = fy - y0;
    for (int x = 0; x < width; ++x) {
      const double fx = std::clamp((x + 0.5) * sx - 0.5, 0.0, static_cast<double>(max_x));
      const int x0 = static_cast<int>(fx);
      const int x1 = std::min(x0 + 1, max_x);
      const double wx = fx - x0;
      const double top = gray.at(x0, y0) + wx * (gray.at(x1, y0) - gray.at(x0, y0));
      const double bot = gray.at(x0, y1) + wx * (gray.at(x1, y1) - gray.at(x0, y1));
      out.at(x, y) = static_cast<std::uint8_t>(std::clamp(std::floor(top + wy * (bot - top) + 0.5), 0.0, 255.0));
    }
  }
  return out;
}

std::vector<Detection> detect_windows(
  const Frame & gray, const LinearModel & model, const HogParams & hog, const PyramidParams & pyr)
{
  validate(hog);
  validate(pyr);
  detail::check_model(model, hog);
  if (gray.empty() || gray.channels() != 1) {
    throw ParamError("detection requires a 1-channel frame");
  }
  const auto levels = detail::pyramid_levels(gray.width(), gray.height(), hog, pyr);
  std::vector<std::vector<Detection>> per_level(levels.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(levels.size()); ++i) {
    per_level[i] = detail::detect_level(gray, levels[i], model, hog, pyr);
  }
  std::vector<Detection> all;
  for (auto & v : per_level) {
    all.insert(all.end(), std::make_move_iterator(v.begin()), std::make_move_iterator(v.end()));
  }
  return all;
}

std::vector<Detection> detect_pedestrians(
  const Frame & gray, const LinearModel & model, const HogParams & hog, const PyramidParams & pyr)
{
  return nms(detect_windows(gray, model, hog, pyr), pyr.nms_iou);
}

double iou(const BoundingBox & a, const BoundingBox & b)
{
  const long long ix = std::max(0, std::min(a.right(), b.right()) - std::max(a.x, b.x));
  const long long iy = std::max(0, std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y));
  const long long inter = ix * iy;
  const long long uni = a.area() + b.area() - inter;
  if (uni <= 0) {
    return 0.0;
  }
  return static_cast<double>(inter) / static_cast<double>(uni);
}

std::vector<Detection> nms(std::vector<Detection> dets, double iou_threshold)
{
  std::sort(dets.begin(), dets.end(), [](const Detection & a, const Detection & b) {
      if (a.score != b.score) {
        return a.score > b.score;
      }
      if (a.bbox.y != b.bbox.y) {
        return a.bbox.y < b.bbox.y;
      }
      if (a.bbox.x != b.bbox.x) {
        return a.bbox.x < b.bbox.x;
      }
      if (a.bbox.h != b.bbox.h) {
        return a.bbox.h < b.bbox.h;
      }
      return a.bbox.w < b.bbox.w;
    });
  std::vector<Detection> kept;
  for (auto & d : dets) {
    bool suppressed = false;
    for (const auto & k : kept) {
      if (iou(d.bbox, k.bbox) >= iou_threshold) {
        suppressed = true;
        break;
      }
    }
    if (!suppressed) {
      kept.push_back(std::move(d));
    }
  }
  return kept;
}

namespace
{

constexpr char kModelMagic[] = {'N', 'W', 'S', 'V', 'M', '1'};

void put_u64(std::vector<std::uint8_t> & out, std::uint64_t v)
{
  for (int i = 0; i < 8; ++i) {
    out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
  }
}

void put_f64(std::vector<std::uint8_t> & out, double v)
{
  put_u64(out, std::bit_cast<std::uint64_t>(v));
}

std::uint64_t get_u64(std::span<const std::uint8_t> in, std::size_t off, int bytes)
{
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) {
    v |= static_cast<std::uint64_t>(in[off + i]) << (8 * i);
  }
  return v;
}

}  // namespace

std::vector<std::uint8_t> encode_model(const LinearModel & model)
{
  if (model.weights.size() > 0xffffffffu) {
    throw ParamError("model too large");
  }
  std::vector<std::uint8_t> out(std::begin(kModelMagic), std::end(kModelMagic));
  const auto n = static_cast<std::uint32_t>(model.weights.size());
  for (int i = 0; i < 4; ++i) {
    out.push_back(static_cast<std::uint8_t>(n >> (8 * i)));
  }
  for (double w : model.weights) {
    put_f64(out, w);
  }
  put_f64(out, model.bias);
  put_f64(out, model.score_threshold);
  return out;
}

LinearModel decode_model(std::span<const std::uint8_t> bytes)
{
  if (bytes.size() < 10 || !std::equal(std::begin(kModelMagic), std::end(kModelMagic), bytes.begin())) {
    throw FormatError("not a model file (bad magic)");
  }
  const auto n = static_cast<std::size_t>(get_u64(bytes, 6, 4));
  const std::size_t need = 10 + 8 * (n + 2);
  if (bytes.size() != need) {
    throw FormatError("model file size does not match its declared length");
  }
  LinearModel model;
  model.weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    model.weights[i] = std::bit_cast<double>(get_u64(bytes, 10 + 8 * i, 8));
  }
  model.bias = std::bit_cast<double>(get_u64(bytes, 10 + 8 * n, 8));
  model.score_threshold = std::bit_cast<double>(get_u64(bytes, 18 + 8 * n, 8));
  return model;
}

void save_model(const LinearModel & model, const fs::path & path)
{
  const auto bytes = encode_model(model);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot write " + path.string());
  }
  out.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) {
    throw IoError("write failed for " + path.string());
  }
}

LinearModel load_model(const fs::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open model " + path.string());
  }
  const std::vector<std::uint8_t> bytes(
    (std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_model(bytes);
}

std::string detection_json_line(const Detection & det)
{
  nlohmann::ordered_json j;
  j["frame"] = det.frame_index;
  j["x"] = det.bbox.x;
  j["y"] = det.bbox.y;
  j["w"] = det.bbox.w;
  j["h"] = det.bbox.h;
  j["score"] = det.score;
  j["label"] = det.label;
  return j.dump();
}

namespace
{

std::vector<fs::path> frame_files(const fs::path & dir)
{
  if (!fs::is_directory(dir)) {
    throw IoError("not a directory: " + dir.string());
  }
  std::vector<fs::path> files;
  for (const auto & entry : fs::directory_iterator(dir)) {
    const auto ext = entry.path().extension().string();
    if (entry.is_regular_file() && (ext == ".pgm" || ext == ".ppm" || ext == ".png")) {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  return files;
}

std::vector<Descriptor> describe_dir(const fs::path & dir, const HogParams & hog)
{
  std::vector<Descriptor> out;
  for (const auto & path : frame_files(dir)) {
    const Frame gray = to_grayscale(load_frame(path));
    if (gray.width() != hog.window_width || gray.height() != hog.window_height) {
      throw ParamError("training crop " + path.string() + " is not window-sized");
    }
    out.push_back(hog_descriptor(gray, hog));
  }
  return out;
}

}  // namespace

CropDataset load_crop_dataset(const fs::path & pos_dir, const fs::path & neg_dir, const HogParams & hog)
{
  CropDataset data;
  data.positives = describe_dir(pos_dir, hog);
  data.negatives = describe_dir(neg_dir, hog);
  return data;
}

std::vector<Descriptor> mine_hard_negatives(
  std::span<const Frame> negative_frames, const LinearModel & model, const HogParams & hog,
  const PyramidParams & pyr, std::size_t limit)
{
  std::vector<Descriptor> mined;
  for (const auto & frame : negative_frames) {
    const Frame gray = to_grayscale(frame);
    for (const auto & det : detect_windows(gray, model, hog, pyr)) {
      if (mined.size() >= limit) {
        return mined;
      }
      Frame crop(det.bbox.w, det.bbox.h, 1);
      for (int r = 0; r < det.bbox.h; ++r) {
        const auto src = gray.row(det.bbox.y + r).subspan(static_cast<std::size_t>(det.bbox.x), det.bbox.w);
        std::copy(src.begin(), src.end(), crop.row(r).begin());
      }
      mined.push_back(hog_descriptor(resize_bilinear(crop, hog.window_width, hog.window_height), hog));
    }
  }
  return mined;
}

LinearModel train_detector(
  const CropDataset & data, const SvmTrainParams & params,
  std::span<const Frame> hard_negative_frames, const HogParams & hog, const PyramidParams & pyr)
{
  LinearModel model = train_linear_svm(data.positives, data.negatives, params);
  if (hard_negative_frames.empty()) {
    return model;
  }
  auto negatives = data.negatives;
  auto mined = mine_hard_negatives(hard_negative_frames, model, hog, pyr, 5000);
  if (mined.empty()) {
    return model;
  }
  negatives.insert(negatives.end(), std::make_move_iterator(mined.begin()), std::make_move_iterator(mined.end()));
  return train_linear_svm(data.positives, negatives, params);
}

}  // namespace nightwatch
