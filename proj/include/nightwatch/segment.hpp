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

#ifndef NIGHTWATCH_SEGMENT_HPP_
#define NIGHTWATCH_SEGMENT_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "nightwatch/frame.hpp"
#include "nightwatch/plane.hpp"

namespace nightwatch
{

struct Component
{
  int label = 0;
  long long area = 0;
  BoundingBox bbox;
  double area_ratio = 0.0;   // area / (bbox.w * bbox.h)

  int bottom_row() const { return bbox.y + bbox.h - 1; }
};

struct CandidateFilterParams
{
  long long min_area = 50;
  long long max_area = 10000;
  double margin_fraction = 0.10;
  double min_area_ratio = 0.5;
  int adaptive_window = 31;
  int adaptive_offset = 10;
};

struct Labeling
{
  Plane<std::int32_t> labels;           // 0 = background, 1..n dense
  std::vector<Component> components;    // components[i].label == i + 1
};

/// 255 where v > mean(window x window neighbourhood, clipped to the frame) + offset.
/// The local mean comes from an integral image. Throws ParamError for an
/// even window or one smaller than 3.
Frame adaptive_binarize(const Frame & gray, int window, int offset);

/// 8-connected labeling of a {0,255} frame by 2x2 block scanning with
/// union-find label equivalence. Labels are dense, numbered in raster order
/// of the first 2x2 block each component touches.
Labeling label_components(const Frame & binary);

/// Keeps components with min_area <= area <= max_area whose bottom row lies
/// outside both the top and bottom margin_fraction of the frame, and whose
/// area ratio is at least min_area_ratio.
std::vector<Component> filter_candidates(
  std::span<const Component> components, int frame_height, const CandidateFilterParams & params);

/// gray -> adaptive_binarize -> label_components -> filter_candidates.
std::vector<BoundingBox> pedestrian_candidates(const Frame & frame, const CandidateFilterParams & params);

void validate(const CandidateFilterParams & params);

}  // namespace nightwatch

#endif  // NIGHTWATCH_SEGMENT_HPP_
