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

#include "nightwatch/motionedge.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <type_traits>

#include "nightwatch/errors.hpp"
#include "nightwatch/parallel.hpp"

#if defined(__SSE2__)
#include <emmintrin.h>
#endif
#if defined(__GNUC__) && defined(__x86_64__)
#include <immintrin.h>
#define NIGHTWATCH_AVX2_DISPATCH 1
#endif

namespace nightwatch
{

namespace
{

void require_gray(const Frame & f, const char * what)
{
  if (f.empty() || f.channels() != 1) {
    throw ParamError(std::string(what) + " requires a 1-channel frame");
  }
}

#if defined(NIGHTWATCH_AVX2_DISPATCH)
bool have_avx2()
{
  static const bool ok = __builtin_cpu_supports("avx2");
  return ok;
}

// Wide variants of the loops below. Only separate multiplies and adds are
// used (no fused multiply-add), so results match the narrower paths exactly.
// Each returns the number of leading columns it handled.
__attribute__((target("avx2")))
int weighted_row_sum_avx2(const float * const * rows, const float * taps, int ntaps, float * dst, int width)
{
  int x = 0;
  for (; x + 16 <= width; x += 16) {
    __m256 acc0 = _mm256_setzero_ps();
    __m256 acc1 = _mm256_setzero_ps();
    for (int t = 0; t < ntaps; ++t) {
      const __m256 k = _mm256_set1_ps(taps[t]);
      acc0 = _mm256_add_ps(acc0, _mm256_mul_ps(k, _mm256_loadu_ps(rows[t] + x)));
      acc1 = _mm256_add_ps(acc1, _mm256_mul_ps(k, _mm256_loadu_ps(rows[t] + x + 8)));
    }
    _mm256_storeu_ps(dst + x, acc0);
    _mm256_storeu_ps(dst + x + 8, acc1);
  }
  return x;
}

__attribute__((target("avx2")))
int weighted_row_sum_avx2(const double * const * rows, const double * taps, int ntaps, double * dst, int width)
{
  int x = 0;
  for (; x + 8 <= width; x += 8) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    for (int t = 0; t < ntaps; ++t) {
      const __m256d k = _mm256_set1_pd(taps[t]);
      acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(k, _mm256_loadu_pd(rows[t] + x)));
      acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(k, _mm256_loadu_pd(rows[t] + x + 4)));
    }
    _mm256_storeu_pd(dst + x, acc0);
    _mm256_storeu_pd(dst + x + 4, acc1);
  }
  return x;
}
#endif

#if defined(NIGHTWATCH_AVX2_DISPATCH)
__attribute__((target_clones("avx2", "default")))
#endif
void widen_row(const std::uint8_t * __restrict src, float * __restrict dst, int width)
{
  for (int x = 0; x < width; ++x) {
    dst[x] = static_cast<float>(src[x]);
  }
}

template<typename T>
void widen_row(const T * src, T * dst, int width)
{
  std::copy(src, src + width, dst);
}

// dst[x] = sum over t of taps[t] * rows[t][x], accumulated from zero in
// ascending t so every path rounds identically.
template<typename T>
void weighted_row_sum(const T * const * rows, const T * taps, int ntaps, T * dst, int width)
{
  int x = 0;
#if defined(NIGHTWATCH_AVX2_DISPATCH)
  if (have_avx2()) {
    x = weighted_row_sum_avx2(rows, taps, ntaps, dst, width);
  }
#endif
#if defined(__SSE2__)
  if constexpr (std::is_same_v<T, float>) {
    for (; x + 8 <= width; x += 8) {
      __m128 acc0 = _mm_setzero_ps();
      __m128 acc1 = _mm_setzero_ps();
      for (int t = 0; t < ntaps; ++t) {
        const __m128 k = _mm_set1_ps(taps[t]);
        acc0 = _mm_add_ps(acc0, _mm_mul_ps(k, _mm_loadu_ps(rows[t] + x)));
        acc1 = _mm_add_ps(acc1, _mm_mul_ps(k, _mm_loadu_ps(rows[t] + x + 4)));
      }
      _mm_storeu_ps(dst + x, acc0);
      _mm_storeu_ps(dst + x + 4, acc1);
    }
  } else {
    for (; x + 4 <= width; x += 4) {
      __m128d acc0 = _mm_setzero_pd();
      __m128d acc1 = _mm_setzero_pd();
      for (int t = 0; t < ntaps; ++t) {
        const __m128d k = _mm_set1_pd(taps[t]);
        acc0 = _mm_add_pd(acc0, _mm_mul_pd(k, _mm_loadu_pd(rows[t] + x)));
        acc1 = _mm_add_pd(acc1, _mm_mul_pd(k, _mm_loadu_pd(rows[t] + x + 2)));
      }
      _mm_storeu_pd(dst + x, acc0);
      _mm_storeu_pd(dst + x + 2, acc1);
    }
  }
#endif
  for (; x < width; ++x) {
    T acc = T(0);
    for (int t = 0; t < ntaps; ++t) {
      acc += taps[t] * rows[t][x];
    }
    dst[x] = acc;
  }
}

// Horizontal then vertical pass with clamped borders; src(y) yields a
// pointer to row y.
template<typename T>
void reshape(Plane<T> & p, int width, int height)
{
  p.width = width;
  p.height = height;
  p.data.resize(static_cast<std::size_t>(width) * height);
}

template<typename T, typename Source>
void separable_blur_into(
  int width, int height, const Source & src, const std::vector<T> & taps, Plane<T> & tmp, Plane<T> & out)
{
  static_assert(std::is_same_v<T, float> || std::is_same_v<T, double>);
  const int radius = static_cast<int>(taps.size() / 2);
  const int ntaps = static_cast<int>(taps.size());
  reshape(tmp, width, height);
  reshape(out, width, height);

#pragma omp parallel
  {
    std::vector<T> padded(static_cast<std::size_t>(width + 2 * radius));
    std::vector<const T *> rows(static_cast<std::size_t>(ntaps));
    for (int t = 0; t < ntaps; ++t) {
      rows[t] = padded.data() + t;
    }
#pragma omp for schedule(static)
    for (int y = 0; y < height; ++y) {
      const auto * row = src(y);
      std::fill(padded.begin(), padded.begin() + radius, static_cast<T>(row[0]));
      widen_row(row, padded.data() + radius, width);
      std::fill(padded.begin() + radius + width, padded.end(), static_cast<T>(row[width - 1]));
      weighted_row_sum(rows.data(), taps.data(), ntaps, &tmp.data[static_cast<std::size_t>(y) * width], width);
    }

    std::vector<const T *> column(static_cast<std::size_t>(ntaps));
#pragma omp for schedule(static)
    for (int y = 0; y < height; ++y) {
      for (int t = 0; t < ntaps; ++t) {
        const int sy = std::clamp(y + t - radius, 0, height - 1);
        column[t] = &tmp.data[static_cast<std::size_t>(sy) * width];
      }
      weighted_row_sum(column.data(), taps.data(), ntaps, &out.data[static_cast<std::size_t>(y) * width], width);
    }
  }
}

template<typename T, typename Source>
Plane<T> separable_blur(int width, int height, const Source & src, const std::vector<T> & taps)
{
  Plane<T> tmp;
  Plane<T> out;
  separable_blur_into(width, height, src, taps, tmp, out);
  return out;
}

template<typename T>
std::vector<T> gaussian_taps(double sigma)
{
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw ParamError("gaussian sigma must be > 0");
  }
  const int radius = static_cast<int>(std::ceil(3.0 * sigma));
  std::vector<double> w(static_cast<std::size_t>(2 * radius + 1));
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    w[i + radius] = std::exp(-0.5 * i * i / (sigma * sigma));
    sum += w[i + radius];
  }
  std::vector<T> taps(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    taps[i] = static_cast<T>(w[i] / sum);
  }
  return taps;
}

}  // namespace

std::vector<float> gaussian_kernel(double sigma)
{
  return gaussian_taps<float>(sigma);
}

Plane<float> gaussian_blur(const Frame & gray, double sigma)
{
  require_gray(gray, "gaussian_blur");
  const auto taps = gaussian_kernel(sigma);
  return separable_blur<float>(
    gray.width(), gray.height(), [&](int y) {return gray.row(y).data();}, taps);
}

namespace
{

#if defined(NIGHTWATCH_AVX2_DISPATCH)
__attribute__((target_clones("avx2", "default")))
#endif
void sobel_interior(
  const float * __restrict up, const float * __restrict mid, const float * __restrict dn,
  float * __restrict gx, float * __restrict gy, int width)
{
  for (int x = 1; x + 1 < width; ++x) {
    gx[x] = (up[x + 1] + 2.0f * mid[x + 1] + dn[x + 1]) - (up[x - 1] + 2.0f * mid[x - 1] + dn[x - 1]);
    gy[x] = (dn[x - 1] + 2.0f * dn[x] + dn[x + 1]) - (up[x - 1] + 2.0f * up[x] + up[x + 1]);
  }
}

// Magnitude buffer with a one-pixel zero border, so every neighbour read in
// non-maximum suppression is valid.
void prepare_padded(std::vector<float> & mag, int width, int height)
{
  const std::ptrdiff_t stride = width + 2;
  mag.resize(static_cast<std::size_t>(stride) * (height + 2));
  std::fill(mag.begin(), mag.begin() + stride, 0.0f);
  std::fill(mag.end() - stride, mag.end(), 0.0f);
  for (int y = 1; y <= height; ++y) {
    mag[static_cast<std::size_t>(y * stride)] = 0.0f;
    mag[static_cast<std::size_t>(y * stride + width + 1)] = 0.0f;
  }
}

#if defined(NIGHTWATCH_AVX2_DISPATCH)
__attribute__((target_clones("avx2", "default")))
#endif
void magnitude_row(
  const float * __restrict gx, const float * __restrict gy, float * __restrict m, int width)
{
  for (int x = 0; x < width; ++x) {
    m[x] = std::sqrt(gx[x] * gx[x] + gy[x] * gy[x]);
  }
}

/// When `padded_mag` is given it also receives the gradient magnitude.
void sobel_into(const Plane<float> & p, Gradient & g, std::vector<float> * padded_mag = nullptr)
{
  const int width = p.width;
  const int height = p.height;
  reshape(g.gx, width, height);
  reshape(g.gy, width, height);
  if (padded_mag != nullptr) {
    prepare_padded(*padded_mag, width, height);
  }
#pragma omp parallel for schedule(static)
  for (int y = 0; y < height; ++y) {
    const float * up = &p.data[static_cast<std::size_t>(std::max(y - 1, 0)) * width];
    const float * mid = &p.data[static_cast<std::size_t>(y) * width];
    const float * dn = &p.data[static_cast<std::size_t>(std::min(y + 1, height - 1)) * width];
    float * gx = &g.gx.data[static_cast<std::size_t>(y) * width];
    float * gy = &g.gy.data[static_cast<std::size_t>(y) * width];
    auto at = [&](int x, int l, int r) {
        gx[x] = (up[r] + 2.0f * mid[r] + dn[r]) - (up[l] + 2.0f * mid[l] + dn[l]);
        gy[x] = (dn[l] + 2.0f * dn[x] + dn[r]) - (up[l] + 2.0f * up[x] + up[r]);
      };
    at(0, 0, std::min(1, width - 1));
    sobel_interior(up, mid, dn, gx, gy, width);
    if (width > 1) {
      at(width - 1, width - 2, width - 1);
    }
    if (padded_mag != nullptr) {
      magnitude_row(gx, gy, padded_mag->data() + static_cast<std::size_t>((y + 1) * (width + 2) + 1), width);
    }
  }
}

}  // namespace

Gradient sobel(const Plane<float> & p)
{
  Gradient g;
  sobel_into(p, g);
  return g;
}

namespace
{

constexpr float kTan22 = 0.41421356f;   // tan(22.5 deg)
constexpr float kTan67 = 2.41421356f;   // tan(67.5 deg)


#if defined(NIGHTWATCH_AVX2_DISPATCH)
__attribute__((target("avx2")))
int nms_row_avx2(
  const float * mr, const float * up, const float * dn, const float * gxr, const float * gyr,
  float * dst, int width)
{
  const __m256 abs_mask = _mm256_castsi256_ps(_mm256_set1_epi32(0x7fffffff));
  const __m256 ones = _mm256_castsi256_ps(_mm256_set1_epi32(-1));
  const __m256 zero = _mm256_setzero_ps();
  const __m256 tan22 = _mm256_set1_ps(kTan22);
  const __m256 tan67 = _mm256_set1_ps(kTan67);
  int x = 0;
  for (; x + 8 <= width; x += 8) {
    const __m256 m = _mm256_loadu_ps(mr + x);
    const __m256 gx = _mm256_loadu_ps(gxr + x);
    const __m256 gy = _mm256_loadu_ps(gyr + x);
    const __m256 ax = _mm256_and_ps(gx, abs_mask);
    const __m256 ay = _mm256_and_ps(gy, abs_mask);
    const __m256 horizontal = _mm256_cmp_ps(ay, _mm256_mul_ps(tan22, ax), _CMP_LE_OQ);
    const __m256 vertical = _mm256_cmp_ps(ay, _mm256_mul_ps(tan67, ax), _CMP_GE_OQ);
    const __m256 same = _mm256_xor_ps(
      _mm256_xor_ps(_mm256_cmp_ps(gx, zero, _CMP_GT_OQ), _mm256_cmp_ps(gy, zero, _CMP_GT_OQ)), ones);
    const __m256 diag_prev = _mm256_blendv_ps(_mm256_loadu_ps(up + x + 1), _mm256_loadu_ps(up + x - 1), same);
    const __m256 diag_next = _mm256_blendv_ps(_mm256_loadu_ps(dn + x - 1), _mm256_loadu_ps(dn + x + 1), same);
    const __m256 prev = _mm256_blendv_ps(
      _mm256_blendv_ps(diag_prev, _mm256_loadu_ps(up + x), vertical), _mm256_loadu_ps(mr + x - 1), horizontal);
    const __m256 next = _mm256_blendv_ps(
      _mm256_blendv_ps(diag_next, _mm256_loadu_ps(dn + x), vertical), _mm256_loadu_ps(mr + x + 1), horizontal);
    const __m256 keep = _mm256_and_ps(
      _mm256_cmp_ps(m, zero, _CMP_GT_OQ),
      _mm256_and_ps(_mm256_cmp_ps(m, prev, _CMP_GT_OQ), _mm256_cmp_ps(m, next, _CMP_GE_OQ)));
    _mm256_storeu_ps(dst + x, _mm256_and_ps(keep, m));
  }
  return x;
}
#endif

// `mag` is the padded magnitude buffer; it is filled here unless
// `mag_ready` says sobel_into already did.
void non_max_suppression_into(
  const Gradient & grad, std::vector<float> & mag, Plane<float> & out, bool mag_ready = false)
{
  const int width = grad.gx.width;
  const int height = grad.gx.height;
  const std::ptrdiff_t stride = width + 2;
  if (!mag_ready) {
    prepare_padded(mag, width, height);
#pragma omp parallel for schedule(static)
    for (int y = 0; y < height; ++y) {
      magnitude_row(
        &grad.gx.data[static_cast<std::size_t>(y) * width], &grad.gy.data[static_cast<std::size_t>(y) * width],
        &mag[static_cast<std::size_t>((y + 1) * stride + 1)], width);
    }
  }

  reshape(out, width, height);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < height; ++y) {
    const float * gxr = &grad.gx.data[static_cast<std::size_t>(y) * width];
    const float * gyr = &grad.gy.data[static_cast<std::size_t>(y) * width];
    const float * mr = &mag[static_cast<std::size_t>((y + 1) * stride + 1)];
    const float * up = mr - stride;
    const float * dn = mr + stride;
    float * dst = &out.data[static_cast<std::size_t>(y) * width];
    int x = 0;
#if defined(NIGHTWATCH_AVX2_DISPATCH)
    if (have_avx2()) {
      x = nms_row_avx2(mr, up, dn, gxr, gyr, dst, width);
    }
#endif
#if defined(__SSE2__)
    // Same comparisons as the scalar loop below, four pixels at a time with
    // mask selects instead of branches.
    const __m128 abs_mask = _mm_castsi128_ps(_mm_set1_epi32(0x7fffffff));
    const __m128 ones = _mm_castsi128_ps(_mm_set1_epi32(-1));
    const __m128 zero = _mm_setzero_ps();
    const __m128 tan22 = _mm_set1_ps(kTan22);
    const __m128 tan67 = _mm_set1_ps(kTan67);
    auto select = [](__m128 mask, __m128 a, __m128 b) {
        return _mm_or_ps(_mm_and_ps(mask, a), _mm_andnot_ps(mask, b));
      };
    for (; x + 4 <= width; x += 4) {
      const __m128 m = _mm_loadu_ps(mr + x);
      const __m128 gx = _mm_loadu_ps(gxr + x);
      const __m128 gy = _mm_loadu_ps(gyr + x);
      const __m128 ax = _mm_and_ps(gx, abs_mask);
      const __m128 ay = _mm_and_ps(gy, abs_mask);
      const __m128 horizontal = _mm_cmple_ps(ay, _mm_mul_ps(tan22, ax));
      const __m128 vertical = _mm_cmpge_ps(ay, _mm_mul_ps(tan67, ax));
      const __m128 same = _mm_xor_ps(_mm_xor_ps(_mm_cmpgt_ps(gx, zero), _mm_cmpgt_ps(gy, zero)), ones);
      const __m128 diag_prev = select(same, _mm_loadu_ps(up + x - 1), _mm_loadu_ps(up + x + 1));
      const __m128 diag_next = select(same, _mm_loadu_ps(dn + x + 1), _mm_loadu_ps(dn + x - 1));
      const __m128 prev = select(
        horizontal, _mm_loadu_ps(mr + x - 1), select(vertical, _mm_loadu_ps(up + x), diag_prev));
      const __m128 next = select(
        horizontal, _mm_loadu_ps(mr + x + 1), select(vertical, _mm_loadu_ps(dn + x), diag_next));
      const __m128 keep = _mm_and_ps(
        _mm_cmpgt_ps(m, zero), _mm_and_ps(_mm_cmpgt_ps(m, prev), _mm_cmpge_ps(m, next)));
      _mm_storeu_ps(dst + x, _mm_and_ps(keep, m));
    }
#endif
    for (; x < width; ++x) {
      const float m = mr[x];
      const float gx = gxr[x];
      const float gy = gyr[x];
      const float ax = std::fabs(gx);
      const float ay = std::fabs(gy);
      float prev;
      float next;
      if (ay <= kTan22 * ax) {
        prev = mr[x - 1];
        next = mr[x + 1];
      } else if (ay >= kTan67 * ax) {
        prev = up[x];
        next = dn[x];
      } else if ((gx > 0) == (gy > 0)) {
        prev = up[x - 1];
        next = dn[x + 1];
      } else {
        prev = up[x + 1];
        next = dn[x - 1];
      }
      // Strict against the predecessor, non-strict against the successor:
      // plateaus of width two keep exactly one pixel.
      dst[x] = (m > 0.0f && m > prev && m >= next) ? m : 0.0f;
    }
  }
}

}  // namespace

Plane<float> non_max_suppression(const Gradient & grad)
{
  std::vector<float> mag;
  Plane<float> out;
  non_max_suppression_into(grad, mag, out);
  return out;
}

namespace
{

#if defined(NIGHTWATCH_AVX2_DISPATCH)
__attribute__((target_clones("avx2", "default")))
#endif
bool any_at_least(const float * v, int count, float threshold)
{
  int hits = 0;
  for (int i = 0; i < count; ++i) {
    hits |= v[i] >= threshold;
  }
  return hits != 0;
}

Frame hysteresis_with(const Plane<float> & suppressed, double low, double high, std::vector<int> & stack)
{
  if (!(low >= 0.0) || !(low < high)) {
    throw ParamError("hysteresis thresholds require 0 <= low < high");
  }
  const int width = suppressed.width;
  const int height = suppressed.height;
  Frame out(width, height, 1);
  std::uint8_t * mark = out.data().data();
  const float * mag = suppressed.data.data();
  stack.clear();
  const int n = width * height;
  // Smallest float >= high, so float compares agree with the double test.
  float high_f = static_cast<float>(high);
  if (static_cast<double>(high_f) < high) {
    high_f = std::nextafter(high_f, std::numeric_limits<float>::infinity());
  }
  constexpr int kBlock = 16;
  for (int i = 0; i < n; ++i) {
    if (i % kBlock == 0 && i + kBlock <= n && !any_at_least(mag + i, kBlock, high_f)) {
      i += kBlock - 1;
      continue;
    }
    if (static_cast<double>(mag[i]) < high || mark[i] != 0) {
      continue;
    }
    mark[i] = 255;
    stack.push_back(i);
    while (!stack.empty()) {
      const int idx = stack.back();
      stack.pop_back();
      const int cx = idx % width;
      const int cy = idx / width;
      for (int ny = std::max(cy - 1, 0); ny <= std::min(cy + 1, height - 1); ++ny) {
        for (int nx = std::max(cx - 1, 0); nx <= std::min(cx + 1, width - 1); ++nx) {
          const int j = ny * width + nx;
          if (mark[j] == 0 && static_cast<double>(mag[j]) >= low) {
            mark[j] = 255;
            stack.push_back(j);
          }
        }
      }
    }
  }
  return out;
}

/// Scratch reused across frames by canny() on each thread.
struct CannyWorkspace
{
  std::vector<float> taps;
  double sigma = 0.0;
  Plane<float> tmp;
  Plane<float> blurred;
  Gradient grad;
  std::vector<float> mag;
  Plane<float> suppressed;
  std::vector<int> stack;
};

}  // namespace

Frame hysteresis(const Plane<float> & suppressed, double low, double high)
{
  std::vector<int> stack;
  return hysteresis_with(suppressed, low, high, stack);
}

Frame canny(const Frame & gray, const CannyParams & params)
{
  require_gray(gray, "canny");
  if (!(params.low >= 0.0) || !(params.low < params.high)) {
    throw ParamError("canny requires 0 <= low < high");
  }
  thread_local CannyWorkspace ws;
  if (ws.taps.empty() || ws.sigma != params.sigma) {
    ws.taps = gaussian_kernel(params.sigma);
    ws.sigma = params.sigma;
  }
  separable_blur_into<float>(
    gray.width(), gray.height(), [&](int y) {return gray.row(y).data();}, ws.taps, ws.tmp, ws.blurred);
  sobel_into(ws.blurred, ws.grad, &ws.mag);
  non_max_suppression_into(ws.grad, ws.mag, ws.suppressed, true);
  return hysteresis_with(ws.suppressed, params.low, params.high, ws.stack);
}

// ---------------------------------------------------------------------------

namespace
{

void validate_harris(const HarrisParams & p)
{
  if (!(p.k > 0.0 && p.k < 0.25)) {
    throw ParamError("harris k must be in (0, 0.25)");
  }
  if (!(p.window_sigma > 0.0)) {
    throw ParamError("harris window_sigma must be > 0");
  }
  if (!(p.response_threshold > 0.0 && p.response_threshold <= 1.0)) {
    throw ParamError("harris response_threshold must be in (0, 1]");
  }
}

}  // namespace

Plane<double> harris_response(const Frame & gray, const HarrisParams & params)
{
  require_gray(gray, "harris");
  validate_harris(params);
  const int width = gray.width();
  const int height = gray.height();
  Plane<double> ixx(width, height), iyy(width, height), ixy(width, height);
#pragma omp parallel for schedule(static)
  for (int y = 0; y < height; ++y) {
    const int u = std::max(y - 1, 0);
    const int d = std::min(y + 1, height - 1);
    for (int x = 0; x < width; ++x) {
      const int l = std::max(x - 1, 0);
      const int r = std::min(x + 1, width - 1);
      const double gx = (gray.at(r, u) + 2.0 * gray.at(r, y) + gray.at(r, d)) -
        (gray.at(l, u) + 2.0 * gray.at(l, y) + gray.at(l, d));
      const double gy = (gray.at(l, d) + 2.0 * gray.at(x, d) + gray.at(r, d)) -
        (gray.at(l, u) + 2.0 * gray.at(x, u) + gray.at(r, u));
      ixx.at(x, y) = gx * gx;
      iyy.at(x, y) = gy * gy;
      ixy.at(x, y) = gx * gy;
    }
  }
  const auto taps = gaussian_taps<double>(params.window_sigma);
  const auto sxx = separable_blur<double>(width, height, [&](int y) {return &ixx.data[static_cast<std::size_t>(y) * width];}, taps);
  const auto syy = separable_blur<double>(width, height, [&](int y) {return &iyy.data[static_cast<std::size_t>(y) * width];}, taps);
  const auto sxy = separable_blur<double>(width, height, [&](int y) {return &ixy.data[static_cast<std::size_t>(y) * width];}, taps);

  Plane<double> response(width, height);
  const auto n = static_cast<std::ptrdiff_t>(response.data.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const double a = sxx.data[i];
    const double b = syy.data[i];
    const double c = sxy.data[i];
    const double trace = a + b;
    response.data[i] = (a * b - c * c) - params.k * trace * trace;
  }
  return response;
}

std::vector<Corner> harris_peaks(const Plane<double> & response, double response_threshold)
{
  double max_r = 0.0;
  for (double r : response.data) {
    max_r = std::max(max_r, r);
  }
  std::vector<Corner> corners;
  if (max_r <= 0.0) {
    return corners;
  }
  const double floor_r = response_threshold * max_r;
  const int width = response.width;
  const int height = response.height;
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double r = response.at(x, y);
      if (r <= 0.0 || r < floor_r) {
        continue;
      }
      bool peak = true;
      for (int dy = -1; dy <= 1 && peak; ++dy) {
        for (int dx = -1; dx <= 1; ++dx) {
          const int nx = x + dx;
          const int ny = y + dy;
          if ((dx == 0 && dy == 0) || nx < 0 || ny < 0 || nx >= width || ny >= height) {
            continue;
          }
          const double nr = response.at(nx, ny);
          // Raster-earlier neighbours must be strictly lower, later ones may tie.
          const bool earlier = dy < 0 || (dy == 0 && dx < 0);
          if (earlier ? !(r > nr) : !(r >= nr)) {
            peak = false;
            break;
          }
        }
      }
      if (peak) {
        corners.push_back({x, y, r});
      }
    }
  }
  return corners;
}

std::vector<Corner> harris(const Frame & gray, const HarrisParams & params)
{
  return harris_peaks(harris_response(gray, params), params.response_threshold);
}

// ---------------------------------------------------------------------------

namespace
{

void validate_gmm(const GmmParams & p)
{
  if (p.max_components < 1 || p.max_components > 8) {
    throw ParamError("gmm max_components must be in [1, 8]");
  }
  if (!(p.learning_rate > 0.0 && p.learning_rate < 1.0)) {
    throw ParamError("gmm learning_rate must be in (0, 1)");
  }
  if (!(p.background_fraction > 0.0 && p.background_fraction < 1.0)) {
    throw ParamError("gmm background_fraction must be in (0, 1)");
  }
  if (!(p.initial_variance > 0.0) || !(p.min_variance > 0.0) ||
    !(p.max_variance >= p.min_variance))
  {
    throw ParamError("gmm variances must be positive with min <= max");
  }
  if (!(p.match_threshold > 0.0)) {
    throw ParamError("gmm match_threshold must be > 0");
  }
  if (!(p.complexity_prior >= 0.0 && p.complexity_prior < 1.0)) {
    throw ParamError("gmm complexity_prior must be in [0, 1)");
  }
  if (!(p.shadow_luma_band.first > 0.0 && p.shadow_luma_band.first < p.shadow_luma_band.second &&
    p.shadow_luma_band.second <= 1.0))
  {
    throw ParamError("gmm shadow band must satisfy 0 < low < high <= 1");
  }
}

inline double rank_key(const GaussianComponent & c)
{
  return c.weight / std::sqrt(c.variance);
}

}  // namespace

BackgroundModel::BackgroundModel(const GmmParams & params, int width, int height)
: params_(params), width_(width), height_(height)
{
  validate_gmm(params);
  if (width <= 0 || height <= 0) {
    throw ParamError("background model dimensions must be positive");
  }
  const std::size_t pixels = static_cast<std::size_t>(width) * height;
  components_.assign(pixels * stride(), GaussianComponent{});
  counts_.assign(pixels, 1);
  for (std::size_t i = 0; i < pixels; ++i) {
    components_[i * stride()] = {1.0, 0.0, params.initial_variance};
  }
}

BackgroundModel gmm_init(const GmmParams & params, int width, int height)
{
  return BackgroundModel(params, width, height);
}

namespace detail
{

std::uint8_t gmm_update_pixel(
  GaussianComponent * comps, std::uint8_t & count, double value, bool first, const GmmParams & p)
{
  if (first) {
    comps[0] = {1.0, value, p.initial_variance};
    count = 1;
    return kMaskBackground;
  }
  const double alpha = p.learning_rate;
  const double prune = alpha * p.complexity_prior;
  const double gate = p.match_threshold * p.match_threshold;
  int n = count;

  // Classification against the mixture as it stood before this frame.
  int matched = -1;
  bool background = false;
  double cumulative = 0.0;
  for (int k = 0; k < n; ++k) {
    const double d = value - comps[k].mean;
    if (d * d < gate * comps[k].variance) {
      matched = k;
      background = cumulative < p.background_fraction;
      break;
    }
    cumulative += comps[k].weight;
  }
  std::uint8_t label = kMaskBackground;
  if (!background) {
    label = kMaskForeground;
    if (p.detect_shadows) {
      cumulative = 0.0;
      for (int k = 0; k < n && cumulative < p.background_fraction; ++k) {
        if (comps[k].mean > 0.0) {
          const double ratio = value / comps[k].mean;
          if (ratio >= p.shadow_luma_band.first && ratio <= p.shadow_luma_band.second) {
            label = kMaskShadow;
            break;
          }
        }
        cumulative += comps[k].weight;
      }
    }
  }

  // Weight recursion with the complexity prior; weak components are dropped.
  int kept = 0;
  int matched_slot = -1;
  for (int k = 0; k < n; ++k) {
    const double ownership = k == matched ? 1.0 : 0.0;
    const double decayed = comps[k].weight + alpha * (ownership - comps[k].weight);
    if (k != matched && decayed < prune) {
      continue;
    }
    GaussianComponent c = comps[k];
    c.weight = decayed - prune;
    if (k == matched) {
      const double d = value - c.mean;
      const double rho = std::min(1.0, alpha / c.weight);
      c.mean += rho * d;
      c.variance = std::clamp(c.variance + rho * (d * d - c.variance), p.min_variance, p.max_variance);
      matched_slot = kept;
    }
    comps[kept++] = c;
  }
  n = kept;
  if (matched_slot < 0) {
    const GaussianComponent fresh{alpha, value, p.initial_variance};
    if (n < p.max_components) {
      comps[n++] = fresh;
    } else {
      comps[n - 1] = fresh;
    }
  }

  double total = 0.0;
  for (int k = 0; k < n; ++k) {
    total += comps[k].weight;
  }
  for (int k = 0; k < n; ++k) {
    comps[k].weight /= total;
  }
  for (int k = 1; k < n; ++k) {
    const GaussianComponent c = comps[k];
    const double key = rank_key(c);
    int j = k - 1;
    while (j >= 0 && rank_key(comps[j]) < key) {
      comps[j + 1] = comps[j];
      --j;
    }
    comps[j + 1] = c;
  }
  count = static_cast<std::uint8_t>(n);
  return label;
}

}  // namespace detail

Frame gmm_update(BackgroundModel & model, const Frame & gray)
{
  require_gray(gray, "gmm_update");
  if (gray.width() != model.width() || gray.height() != model.height()) {
    throw ParamError("frame dimensions do not match the background model");
  }
  Frame mask(gray.width(), gray.height(), 1);
  const bool first = model.frames_seen() == 0;
  const GmmParams & p = model.params();
  const std::uint8_t * src = gray.data().data();
  std::uint8_t * dst = mask.data().data();
  const auto n = static_cast<std::ptrdiff_t>(gray.pixel_count());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto px = static_cast<std::size_t>(i);
    dst[i] = detail::gmm_update_pixel(
      model.pixel_components(px), model.pixel_count(px), src[i], first, p);
  }
  model.advance();
  return mask;
}

}  // namespace nightwatch
