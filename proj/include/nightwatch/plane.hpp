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

#ifndef NIGHTWATCH_PLANE_HPP_
#define NIGHTWATCH_PLANE_HPP_

#include <algorithm>
#include <vector>

namespace nightwatch
{

/// Single-channel scalar field, row-major.
template<typename T>
struct Plane
{
  int width = 0;
  int height = 0;
  std::vector<T> data;

  Plane() = default;
  Plane(int w, int h, T fill = T{})
  : width(w), height(h), data(static_cast<std::size_t>(w) * h, fill) {}

  T & at(int x, int y) { return data[static_cast<std::size_t>(y) * width + x]; }
  const T & at(int x, int y) const { return data[static_cast<std::size_t>(y) * width + x]; }

  /// Clamp-to-edge read.
  const T & clamped(int x, int y) const
  {
    return at(std::clamp(x, 0, width - 1), std::clamp(y, 0, height - 1));
  }

  bool operator==(const Plane &) const = default;
};

}  // namespace nightwatch

#endif  // NIGHTWATCH_PLANE_HPP_
