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

// Single-threaded reference kernels.
//
// Every function here has an OpenMP counterpart in the main namespace and
// must produce bit-identical output. They are kept deliberately plain:
// per-pixel loops, clamped reads, no row buffers. The test suites compare the
// two paths and the kernel benchmark measures the parallel speedup.

#ifndef NIGHTWATCH_SERIAL_HPP_
#define NIGHTWATCH_SERIAL_HPP_

#include <vector>

#include "nightwatch/detect.hpp"
#include "nightwatch/enhance.hpp"
#include "nightwatch/frame.hpp"
#include "nightwatch/motionedge.hpp"
#include "nightwatch/plane.hpp"

namespace nightwatch::serial
{

Frame to_grayscale(const Frame & frame);

Frame gamma_correct(const Frame & frame, GammaParams params);
Histogram histogram(const Frame & gray);
Frame hist_equalize(const Frame & gray);
Frame clahe(const Frame & gray, const ClaheParams & params);
Frame binary_threshold(const Frame & gray, int t);

Plane<float> gaussian_blur(const Frame & gray, double sigma);
Gradient sobel(const Plane<float> & image);
Plane<float> non_max_suppression(const Gradient & grad);
Frame canny(const Frame & gray, const CannyParams & params);
Plane<double> harris_response(const Frame & gray, const HarrisParams & params);
Frame gmm_update(BackgroundModel & model, const Frame & gray);

/// Direct window summation instead of an integral image.
Frame adaptive_binarize(const Frame & gray, int window, int offset);

/// Pyramid levels processed one after another.
std::vector<Detection> detect_windows(
  const Frame & gray, const LinearModel & model, const HogParams & hog, const PyramidParams & pyr);

}  // namespace nightwatch::serial

#endif  // NIGHTWATCH_SERIAL_HPP_
