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

#ifndef NIGHTWATCH_MOTIONEDGE_HPP_
#define NIGHTWATCH_MOTIONEDGE_HPP_

#include <cstdint>
#include <utility>
#include <vector>

#include "nightwatch/frame.hpp"
#include "nightwatch/plane.hpp"

namespace nightwatch
{

// ---------------------------------------------------------------------------
// Canny
// ---------------------------------------------------------------------------

struct CannyParams
{
  double sigma = 1.0;
  double low = 20.0;    // on Sobel gradient magnitude
  double high = 60.0;
};

/// Hysteresis neighbourhood. Fixed.
inline constexpr int kHysteresisConnectivity = 8;

struct Gradient
{
  Plane<float> gx;
  Plane<float> gy;
};

/// Normalized 1-D Gaussian taps, radius ceil(3*sigma).
std::vector<float> gaussian_kernel(double sigma);

/// Separable Gaussian smoothing with clamp-to-edge borders.
Plane<float> gaussian_blur(const Frame & gray, double sigma);

/// 3x3 Sobel derivatives, clamp-to-edge.
Gradient sobel(const Plane<float> & image);

/// Gradient magnitude kept only at local maxima along the gradient direction,
/// quantized to 0/45/90/135 degrees; everything else is zero.
Plane<float> non_max_suppression(const Gradient & grad);

/// Strong pixels (>= high) seed an 8-connected flood through weak pixels
/// (in [low, high)). Output is {0,255}.
Frame hysteresis(const Plane<float> & suppressed, double low, double high);

Frame canny(const Frame & gray, const CannyParams & params);

// ---------------------------------------------------------------------------
// Harris
// ---------------------------------------------------------------------------

struct HarrisParams
{
  double k = 0.04;
  double window_sigma = 1.5;
  double response_threshold = 0.01;   // fraction of max response
};

struct Corner
{
  int x = 0;
  int y = 0;
  double response = 0.0;
};

/// R = det(M) - k*trace(M)^2 with M the Gaussian-weighted structure tensor.
Plane<double> harris_response(const Frame & gray, const HarrisParams & params);

/// 3x3 local maxima of the response with R > 0 and R >= threshold * max(R).
std::vector<Corner> harris(const Frame & gray, const HarrisParams & params);

/// Local-maximum selection on a precomputed response map.
std::vector<Corner> harris_peaks(const Plane<double> & response, double response_threshold);

// ---------------------------------------------------------------------------
// Gaussian-mixture background subtraction
// ---------------------------------------------------------------------------

inline constexpr std::uint8_t kMaskBackground = 0;
inline constexpr std::uint8_t kMaskShadow = 127;
inline constexpr std::uint8_t kMaskForeground = 255;

struct GmmParams
{
  int max_components = 5;
  double learning_rate = 0.005;
  double background_fraction = 0.9;
  double initial_variance = 225.0;
  double match_threshold = 2.5;                // in standard deviations
  bool detect_shadows = true;
  std::pair<double, double> shadow_luma_band{0.4, 0.95};
  double min_variance = 4.0;
  double max_variance = 5.0 * 225.0;
  double complexity_prior = 0.05;
};

struct GaussianComponent
{
  double weight = 0.0;
  double mean = 0.0;
  double variance = 0.0;
};

/// Per-pixel mixture state. Components of a pixel are kept sorted by
/// weight / sqrt(variance), strongest first.
class BackgroundModel
{
public:
  BackgroundModel() = default;
  BackgroundModel(const GmmParams & params, int width, int height);

  const GmmParams & params() const { return params_; }
  int width() const { return width_; }
  int height() const { return height_; }
  std::uint64_t frames_seen() const { return frames_seen_; }

  int component_count(std::size_t pixel) const { return counts_[pixel]; }
  const GaussianComponent & component(std::size_t pixel, int k) const
  {
    return components_[pixel * stride() + static_cast<std::size_t>(k)];
  }

  // Raw access for the update kernels.
  GaussianComponent * pixel_components(std::size_t pixel) { return &components_[pixel * stride()]; }
  std::uint8_t & pixel_count(std::size_t pixel) { return counts_[pixel]; }
  void advance() { ++frames_seen_; }

private:
  std::size_t stride() const { return static_cast<std::size_t>(params_.max_components); }

  GmmParams params_;
  int width_ = 0;
  int height_ = 0;
  std::uint64_t frames_seen_ = 0;
  std::vector<GaussianComponent> components_;
  std::vector<std::uint8_t> counts_;
};

/// Throws ParamError on invalid parameters or non-positive dimensions.
BackgroundModel gmm_init(const GmmParams & params, int width, int height);

/// Classifies each pixel against the pre-update mixture (0 background,
/// 127 shadow, 255 foreground), then updates the mixture. Frames must arrive
/// in temporal order.
Frame gmm_update(BackgroundModel & model, const Frame & gray);

namespace detail
{
/// One pixel of gmm_update. Shared by the OpenMP and serial kernels.
std::uint8_t gmm_update_pixel(
  GaussianComponent * comps, std::uint8_t & count, double value, bool first, const GmmParams & p);
}  // namespace detail

}  // namespace nightwatch

#endif  // NIGHTWATCH_MOTIONEDGE_HPP_
