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

#include "nightwatch/segment.hpp"

#include <algorithm>

#include "nightwatch/errors.hpp"

namespace nightwatch
{

void validate(const CandidateFilterParams & p)
{
  if (!(p.min_area > 0 && p.min_area < p.max_area)) {
    throw ParamError("candidate filter requires 0 < min_area < max_area");
  }
  if (!(p.margin_fraction > 0.0 && p.margin_fraction < 0.5)) {
    throw ParamError("candidate filter margin_fraction must be in (0, 0.5)");
  }
  if (!(p.min_area_ratio > 0.0 && p.min_area_ratio <= 1.0)) {
    throw ParamError("candidate filter min_area_ratio must be in (0, 1]");
  }
  if (p.adaptive_window < 3 || p.adaptive_window % 2 == 0) {
    throw ParamError("adaptive window must be odd and >= 3");
  }
}

Frame adaptive_binarize(const Frame & gray, int window, int offset)
{
  if (gray.empty() || gray.channels() != 1) {
    throw ParamError("adaptive_binarize requires a 1-channel frame");
  }
  if (window < 3 || window % 2 == 0) {
    throw ParamError("adaptive window must be odd and >= 3");
  }
  const int width = gray.width();
  const int height = gray.height();
  const int radius = window / 2;
  const std::size_t stride = static_cast<std::size_t>(width) + 1;
  std::vector<std::uint64_t> integral(stride * (static_cast<std::size_t>(height) + 1), 0);
  for (int y = 0; y < height; ++y) {
    std::uint64_t row_sum = 0;
    const auto row = gray.row(y);
    for (int x = 0; x < width; ++x) {
      row_sum += row[x];
      integral[(y + 1) * stride + x + 1] = integral[y * stride + x + 1] + row_sum;
    }
  }

  Frame out(width, height, 1);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < height; ++y) {
    const int y0 = std::max(y - radius, 0);
    const int y1 = std::min(y + radius, height - 1) + 1;
    const auto src = gray.row(y);
    auto dst = out.row(y);
    for (int x = 0; x < width; ++x) {
      const int x0 = std::max(x - radius, 0);
      const int x1 = std::min(x + radius, width - 1) + 1;
      const auto sum = static_cast<long long>(
        integral[y1 * stride + x1] - integral[y0 * stride + x1] - integral[y1 * stride + x0] +
        integral[y0 * stride + x0]);
      const long long count = static_cast<long long>(x1 - x0) * (y1 - y0);
      // v > sum/count + offset, kept in integers
      dst[x] = static_cast<long long>(src[x]) * count > sum + static_cast<long long>(offset) * count ?
        255 : 0;
    }
  }
  return out;
}

namespace
{

class LabelEquivalence
{
public:
  LabelEquivalence() { parent_.push_back(0); }

  std::int32_t make()
  {
    const auto id = static_cast<std::int32_t>(parent_.size());
    parent_.push_back(id);
    return id;
  }

  std::int32_t find(std::int32_t v)
  {
    std::int32_t root = v;
    while (parent_[root] != root) {
      root = parent_[root];
    }
    while (parent_[v] != root) {
      const std::int32_t next = parent_[v];
      parent_[v] = root;
      v = next;
    }
    return root;
  }

  // The smaller root survives, so each set's root is its oldest label.
  std::int32_t unite(std::int32_t a, std::int32_t b)
  {
    a = find(a);
    b = find(b);
    if (a == b) {
      return a;
    }
    if (a > b) {
      std::swap(a, b);
    }
    parent_[b] = a;
    return a;
  }

  std::size_t size() const { return parent_.size(); }

private:
  std::vector<std::int32_t> parent_;
};

}  // namespace

Labeling label_components(const Frame & binary)
{
  if (binary.empty() || binary.channels() != 1) {
    throw ParamError("label_components requires a 1-channel frame");
  }
  for (auto v : binary.data()) {
    if (v != 0 && v != 255) {
      throw ParamError("label_components requires a binary {0,255} frame");
    }
  }
  const int width = binary.width();
  const int height = binary.height();
  const int bw = (width + 1) / 2;
  const int bh = (height + 1) / 2;
  auto fg = [&](int x, int y) {
      return x >= 0 && y >= 0 && x < width && y < height && binary.at(x, y) != 0;
    };

  // First pass over 2x2 blocks. Block X at (x,y) with neighbours
  //   P Q R
  //   S X
  // Pixels inside a block are mutually 8-adjacent, so a block carries one label.
  std::vector<std::int32_t> block(static_cast<std::size_t>(bw) * bh, 0);
  auto block_at = [&](int bc, int br) {return block[static_cast<std::size_t>(br) * bw + bc];};
  LabelEquivalence eq;
  for (int br = 0; br < bh; ++br) {
    for (int bc = 0; bc < bw; ++bc) {
      const int x = 2 * bc;
      const int y = 2 * br;
      const bool a = fg(x, y);
      const bool b = fg(x + 1, y);
      const bool c = fg(x, y + 1);
      const bool d = fg(x + 1, y + 1);
      if (!(a || b || c || d)) {
        continue;
      }
      std::int32_t label = 0;
      auto join = [&](std::int32_t other) {
          label = label == 0 ? other : eq.unite(label, other);
        };
      if ((a || b) && (fg(x, y - 1) || fg(x + 1, y - 1))) {
        join(block_at(bc, br - 1));          // Q
      }
      if (a && fg(x - 1, y - 1)) {
        join(block_at(bc - 1, br - 1));      // P
      }
      if (b && fg(x + 2, y - 1)) {
        join(block_at(bc + 1, br - 1));      // R
      }
      if ((a || c) && (fg(x - 1, y) || fg(x - 1, y + 1))) {
        join(block_at(bc - 1, br));          // S
      }
      if (label == 0) {
        label = eq.make();
      }
      block[static_cast<std::size_t>(br) * bw + bc] = label;
    }
  }

  // Flatten equivalences into dense ids.
  std::vector<std::int32_t> dense(eq.size(), 0);
  std::int32_t next = 0;
  for (std::int32_t l = 1; l < static_cast<std::int32_t>(eq.size()); ++l) {
    const std::int32_t root = eq.find(l);
    if (root == l) {
      dense[l] = ++next;
    } else {
      dense[l] = dense[root];
    }
  }

  Labeling out;
  out.labels = Plane<std::int32_t>(width, height, 0);
  struct Extent
  {
    long long area = 0;
    int x0 = 0, y0 = 0, x1 = -1, y1 = -1;
  };
  std::vector<Extent> ext(static_cast<std::size_t>(next) + 1);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      if (!fg(x, y)) {
        continue;
      }
      const std::int32_t id = dense[block_at(x / 2, y / 2)];
      out.labels.at(x, y) = id;
      Extent & e = ext[id];
      if (e.area == 0) {
        e = {0, x, y, x, y};
      }
      ++e.area;
      e.x0 = std::min(e.x0, x);
      e.x1 = std::max(e.x1, x);
      e.y0 = std::min(e.y0, y);
      e.y1 = std::max(e.y1, y);
    }
  }
  out.components.reserve(static_cast<std::size_t>(next));
  for (std::int32_t id = 1; id <= next; ++id) {
    const Extent & e = ext[id];
    Component c;
    c.label = id;
    c.area = e.area;
    c.bbox = {e.x0, e.y0, e.x1 - e.x0 + 1, e.y1 - e.y0 + 1};
    c.area_ratio = static_cast<double>(c.area) / static_cast<double>(c.bbox.area());
    out.components.push_back(c);
  }
  return out;
}

std::vector<Component> filter_candidates(
  std::span<const Component> components, int frame_height, const CandidateFilterParams & params)
{
  validate(params);
  const double margin = params.margin_fraction * frame_height;
  std::vector<Component> kept;
  for (const auto & c : components) {
    if (c.area < params.min_area || c.area > params.max_area) {
      continue;
    }
    const int bottom = c.bottom_row();
    if (bottom < margin || bottom >= frame_height - margin) {
      continue;
    }
    if (c.area_ratio < params.min_area_ratio) {
      continue;
    }
    kept.push_back(c);
  }
  return kept;
}

std::vector<BoundingBox> pedestrian_candidates(const Frame & frame, const CandidateFilterParams & params)
{
  validate(params);
  const Frame gray = to_grayscale(frame);
  const Frame binary = adaptive_binarize(gray, params.adaptive_window, params.adaptive_offset);
  const Labeling labeling = label_components(binary);
  const auto survivors = filter_candidates(labeling.components, frame.height(), params);
  std::vector<BoundingBox> boxes;
  boxes.reserve(survivors.size());
  for (const auto & c : survivors) {
    boxes.push_back(c.bbox);
  }
  return boxes;
}

}  // namespace nightwatch
