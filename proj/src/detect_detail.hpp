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

#ifndef NIGHTWATCH_SRC_DETECT_DETAIL_HPP_
#define NIGHTWATCH_SRC_DETECT_DETAIL_HPP_

#include <span>
#include <vector>

#include "nightwatch/detect.hpp"

namespace nightwatch::detail
{

/// L2-Hys normalized blocks at every block position of a cell grid.
struct BlockGrid
{
  int blocks_x = 0;
  int blocks_y = 0;
  int length = 0;
  int stride_cells = 1;
  std::vector<double> data;

  std::span<const double> block(int bx, int by) const
  {
    return std::span<const double>(data).subspan(
      (static_cast<std::size_t>(by) * blocks_x + bx) * length, static_cast<std::size_t>(length));
  }
};

struct PyramidLevel
{
  int index = 0;
  int width = 0;
  int height = 0;
  double scale_x = 1.0;   // base / level
  double scale_y = 1.0;
};

BlockGrid normalize_blocks(const CellGrid & cells, const HogParams & params);

/// Concatenates the window's blocks row-major into `out`.
void window_descriptor(
  const BlockGrid & blocks, int cell_x, int cell_y, const HogParams & params, double * out);

/// Same arithmetic order as svm_score on the concatenated descriptor.
double window_score(
  const BlockGrid & blocks, int cell_x, int cell_y, const HogParams & params, const LinearModel & model);

std::vector<PyramidLevel> pyramid_levels(
  int width, int height, const HogParams & hog, const PyramidParams & pyr);

std::vector<Detection> detect_level(
  const Frame & gray, const PyramidLevel & level, const LinearModel & model,
  const HogParams & hog, const PyramidParams & pyr);

void check_model(const LinearModel & model, const HogParams & hog);

}  // namespace nightwatch::detail

#endif  // NIGHTWATCH_SRC_DETECT_DETAIL_HPP_
