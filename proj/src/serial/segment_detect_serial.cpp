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

#include <algorithm>

#include "../detect_detail.hpp"
#include "nightwatch/errors.hpp"
#include "nightwatch/parallel.hpp"
#include "nightwatch/serial.hpp"

namespace nightwatch::serial
{

Frame adaptive_binarize(const Frame & gray, int window, int offset)
{
  if (gray.channels() != 1) {
    throw ParamError("adaptive_binarize requires a 1-channel frame");
  }
  if (window < 3 || window % 2 == 0) {
    throw ParamError("adaptive window must be odd and >= 3");
  }
  const int r = window / 2;
  Frame out(gray.width(), gray.height(), 1);
  for (int y = 0; y < gray.height(); ++y) {
    for (int x = 0; x < gray.width(); ++x) {
      long long sum = 0;
      long long count = 0;
      for (int yy = std::max(y - r, 0); yy <= std::min(y + r, gray.height() - 1); ++yy) {
        for (int xx = std::max(x - r, 0); xx <= std::min(x + r, gray.width() - 1); ++xx) {
          sum += gray.at(xx, yy);
          ++count;
        }
      }
      out.at(x, y) = gray.at(x, y) * count > sum + static_cast<long long>(offset) * count ? 255 : 0;
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
  // HOG stages carry their own parallel loops; pin them to one thread here.
  ScopedThreads single(1);
  std::vector<Detection> all;
  for (const auto & level : detail::pyramid_levels(gray.width(), gray.height(), hog, pyr)) {
    auto found = detail::detect_level(gray, level, model, hog, pyr);
    all.insert(all.end(), found.begin(), found.end());
  }
  return all;
}

}  // namespace nightwatch::serial
