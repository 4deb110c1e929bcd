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

#ifndef NIGHTWATCH_ENHANCE_HPP_
#define NIGHTWATCH_ENHANCE_HPP_

#include <array>
#include <cstdint>
#include <limits>

#include "nightwatch/frame.hpp"

namespace nightwatch
{

using Lut = std::array<std::uint8_t, 256>;
using Histogram = std::array<std::uint32_t, 256>;

struct GammaParams
{
  double gamma = 1.0;
};

struct ClaheParams
{
  int tiles_x = 8;
  int tiles_y = 8;
  /// Multiple of the uniform bin height (tile pixels / 256). Infinity disables clipping.
  double clip_limit = 2.0;
};

/// Power-law LUT: v -> round(255 * (v/255)^(1/gamma)).
///
/// The exponent is 1/gamma so that gamma > 1 brightens and gamma < 1 darkens.
/// Throws ParamError unless gamma is finite and positive.
Lut gamma_lut(double gamma);

/// Applies the gamma LUT to every channel sample.
Frame gamma_correct(const Frame & frame, GammaParams params);

/// 256-bin histogram of a 1-channel frame.
Histogram histogram(const Frame & gray);

/// Equalization table for a histogram holding `total` samples:
/// v -> round((cdf(v) - cdf_min) / (total - cdf_min) * 255), clamped at 0.
/// A histogram with a single occupied level yields the identity table.
Lut equalization_lut(const Histogram & hist);

Frame apply_lut(const Frame & frame, const Lut & lut);

/// Global histogram equalization. Throws ParamError on multi-channel input.
Frame hist_equalize(const Frame & gray);

/// Contrast-limited adaptive equalization with bilinear blending between
/// tile-center mappings. Tiles whose unclipped histogram has one occupied
/// level map to identity.
Frame clahe(const Frame & gray, const ClaheParams & params);

/// v >= t -> 255, else 0.
Frame binary_threshold(const Frame & gray, int t);

}  // namespace nightwatch

#endif  // NIGHTWATCH_ENHANCE_HPP_
