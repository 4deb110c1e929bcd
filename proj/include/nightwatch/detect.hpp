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

#ifndef NIGHTWATCH_DETECT_HPP_
#define NIGHTWATCH_DETECT_HPP_

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nightwatch/frame.hpp"

namespace nightwatch
{

/// Canonical pedestrian HOG layout: 64x128 window, 8 px cells, 2x2-cell
/// blocks with a one-cell stride, 9 unsigned orientation bins, L2-Hys.
struct HogParams
{
  int window_width = 64;
  int window_height = 128;
  int cell = 8;
  int block_cells = 2;
  int block_stride_cells = 1;
  int bins = 9;
  double norm_clip = 0.2;
  double epsilon = 1e-6;

  int cells_x() const { return window_width / cell; }
  int cells_y() const { return window_height / cell; }
  int blocks_x() const { return (cells_x() - block_cells) / block_stride_cells + 1; }
  int blocks_y() const { return (cells_y() - block_cells) / block_stride_cells + 1; }
  int block_length() const { return block_cells * block_cells * bins; }
  int descriptor_length() const { return blocks_x() * blocks_y() * block_length(); }
};

void validate(const HogParams & params);

using Descriptor = std::vector<double>;

/// Per-cell orientation histograms over a whole image.
struct CellGrid
{
  int cells_x = 0;
  int cells_y = 0;
  int bins = 0;
  std::vector<double> data;   // (cy * cells_x + cx) * bins + bin

  std::span<const double> cell(int cx, int cy) const
  {
    return std::span<const double>(data).subspan(
      (static_cast<std::size_t>(cy) * cells_x + cx) * bins, static_cast<std::size_t>(bins));
  }
};

/// Centered [-1,0,1] gradients (clamp-to-edge), unsigned orientation split
/// linearly between the two nearest bin centers, magnitude-weighted. Cells
/// tile the image from the top-left; partial cells at the right/bottom edge
/// are dropped.
CellGrid hog_cell_histograms(const Frame & gray, const HogParams & params);

/// Descriptor of an exact window-sized 1-channel frame. Throws ParamError on
/// a size mismatch.
Descriptor hog_descriptor(const Frame & window, const HogParams & params = {});

struct LinearModel
{
  std::vector<double> weights;
  double bias = 0.0;
  double score_threshold = 0.0;

  bool operator==(const LinearModel &) const = default;
};

/// w.x + b. Throws ParamError on a length mismatch.
double svm_score(const LinearModel & model, std::span<const double> descriptor);

/// lambda/2 * (|w|^2 + b^2) + mean hinge loss; positives are +1.
double svm_objective(
  const LinearModel & model, std::span<const Descriptor> positives,
  std::span<const Descriptor> negatives, double lambda);

struct SvmTrainParams
{
  double lambda = 1e-2;
  int epochs = 100;
  std::uint64_t seed = 1;
};

/// Primal sub-gradient descent on the hinge loss with step 1/(lambda*t) and a
/// per-epoch shuffle. The bias is an extra constant-1 feature. An epoch whose
/// end-point raises the full-set objective is discarded, so the accepted
/// objective sequence never increases. `objective_trace`, when given,
/// receives the accepted objective after each epoch.
LinearModel train_linear_svm(
  std::span<const Descriptor> positives, std::span<const Descriptor> negatives,
  const SvmTrainParams & params, std::vector<double> * objective_trace = nullptr);

struct Detection
{
  BoundingBox bbox;
  double score = 0.0;
  std::string label = "person";
  long long frame_index = 0;

  bool operator==(const Detection &) const = default;
};

struct PyramidParams
{
  double scale_step = 1.05;
  int window_stride = 8;
  double nms_iou = 0.3;
  int max_levels = 64;
};

void validate(const PyramidParams & params);

/// Bilinear resampling with pixel-center alignment.
Frame resize_bilinear(const Frame & gray, int width, int height);

/// Every window scoring above the model's threshold across the pyramid, in
/// level order then raster order, with boxes mapped back to base coordinates.
/// A frame smaller than the window yields an empty list.
std::vector<Detection> detect_windows(
  const Frame & gray, const LinearModel & model, const HogParams & hog, const PyramidParams & pyr);

/// detect_windows followed by nms(pyr.nms_iou).
std::vector<Detection> detect_pedestrians(
  const Frame & gray, const LinearModel & model, const HogParams & hog, const PyramidParams & pyr);

double iou(const BoundingBox & a, const BoundingBox & b);

/// Greedy suppression: highest score first, ties by y, x, h, w; a detection
/// is dropped when its IoU with a kept one is >= iou_threshold.
std::vector<Detection> nms(std::vector<Detection> dets, double iou_threshold);

// Model file: "NWSVM1", u32 LE length, f64 LE weights, f64 bias, f64 threshold.
std::vector<std::uint8_t> encode_model(const LinearModel & model);
LinearModel decode_model(std::span<const std::uint8_t> bytes);
void save_model(const LinearModel & model, const std::filesystem::path & path);
LinearModel load_model(const std::filesystem::path & path);

/// {"frame":i,"x":..,"y":..,"w":..,"h":..,"score":..,"label":".."}
std::string detection_json_line(const Detection & det);

struct CropDataset
{
  std::vector<Descriptor> positives;
  std::vector<Descriptor> negatives;
};

/// Descriptors of every frame file in `pos_dir` and `neg_dir`; crops are
/// converted to gray and must match the window size.
CropDataset load_crop_dataset(
  const std::filesystem::path & pos_dir, const std::filesystem::path & neg_dir,
  const HogParams & hog = {});

/// Windows from negative-only frames that the model accepts, as descriptors.
std::vector<Descriptor> mine_hard_negatives(
  std::span<const Frame> negative_frames, const LinearModel & model, const HogParams & hog,
  const PyramidParams & pyr, std::size_t limit);

/// Trains on the crop dataset; when hard-negative frames are given, mines
/// them once and retrains on the enlarged negative set.
LinearModel train_detector(
  const CropDataset & data, const SvmTrainParams & params,
  std::span<const Frame> hard_negative_frames = {}, const HogParams & hog = {},
  const PyramidParams & pyr = {});

}  // namespace nightwatch

#endif  // NIGHTWATCH_DETECT_HPP_
