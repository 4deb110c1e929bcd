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


// Serial reference kernels against their OpenMP counterparts on a 640x480
// night frame. Run with OMP_NUM_THREADS to pick the team size.

#include <benchmark/benchmark.h>

#include <cmath>
#include <cstdint>
#include <random>

#include "nightwatch/detect.hpp"
#include "nightwatch/enhance.hpp"
#include "nightwatch/frame.hpp"
#include "nightwatch/motionedge.hpp"
#include "nightwatch/segment.hpp"
#include "nightwatch/serial.hpp"

namespace nw = nightwatch;

namespace
{

const nw::Frame & scene()
{
  static const nw::Frame frame = [] {
      std::mt19937_64 rng(1);
      std::uniform_int_distribution<int> noise(-3, 3);
      nw::Frame f(640, 480, 3);
      for (int y = 0; y < 480; ++y) {
        for (int x = 0; x < 640; ++x) {
          const double glow = 60.0 * std::exp(-((x - 320.0) * (x - 320.0) + (y - 100.0) * (y - 100.0)) / 8000.0);
          const int v = std::clamp(static_cast<int>(20 + 15.0 * y / 480 + glow) + noise(rng), 0, 255);
          for (int c = 0; c < 3; ++c) {
            f.at(x, y, c) = static_cast<std::uint8_t>(v);
          }
        }
      }
      return f;
    }();
  return frame;
}

const nw::Frame & gray()
{
  static const nw::Frame g = nw::to_grayscale(scene());
  return g;
}

template<typename Fn>
void run(benchmark::State & state, Fn && fn)
{
  for (auto _ : state) {
    benchmark::DoNotOptimize(fn());
  }
  state.SetItemsProcessed(state.iterations());
}

void BM_Gray(benchmark::State & s) {run(s, [] {return nw::to_grayscale(scene());});}
void BM_GraySerial(benchmark::State & s) {run(s, [] {return nw::serial::to_grayscale(scene());});}
void BM_Equalize(benchmark::State & s) {run(s, [] {return nw::hist_equalize(gray());});}
void BM_EqualizeSerial(benchmark::State & s) {run(s, [] {return nw::serial::hist_equalize(gray());});}
void BM_Clahe(benchmark::State & s) {run(s, [] {return nw::clahe(gray(), {});});}
void BM_ClaheSerial(benchmark::State & s) {run(s, [] {return nw::serial::clahe(gray(), {});});}
void BM_Canny(benchmark::State & s) {run(s, [] {return nw::canny(gray(), {});});}
void BM_CannySerial(benchmark::State & s) {run(s, [] {return nw::serial::canny(gray(), {});});}
void BM_Harris(benchmark::State & s) {run(s, [] {return nw::harris_response(gray(), {});});}
void BM_HarrisSerial(benchmark::State & s) {run(s, [] {return nw::serial::harris_response(gray(), {});});}
void BM_Binarize(benchmark::State & s) {run(s, [] {return nw::adaptive_binarize(gray(), 31, 10);});}
void BM_BinarizeSerial(benchmark::State & s) {run(s, [] {return nw::serial::adaptive_binarize(gray(), 31, 10);});}

void BM_Gmm(benchmark::State & s)
{
  auto model = nw::gmm_init({}, 640, 480);
  run(s, [&] {return nw::gmm_update(model, gray());});
}

void BM_GmmSerial(benchmark::State & s)
{
  auto model = nw::gmm_init({}, 640, 480);
  run(s, [&] {return nw::serial::gmm_update(model, gray());});
}

nw::LinearModel flat_model()
{
  nw::LinearModel m;
  m.weights.assign(3780, 1e-3);
  m.bias = -10.0;
  return m;
}

void BM_Detect(benchmark::State & s)
{
  const auto m = flat_model();
  run(s, [&] {return nw::detect_windows(gray(), m, {}, {});});
}

void BM_DetectSerial(benchmark::State & s)
{
  const auto m = flat_model();
  run(s, [&] {return nw::serial::detect_windows(gray(), m, {}, {});});
}

}  // namespace

BENCHMARK(BM_Gray);
BENCHMARK(BM_GraySerial);
BENCHMARK(BM_Equalize);
BENCHMARK(BM_EqualizeSerial);
BENCHMARK(BM_Clahe);
BENCHMARK(BM_ClaheSerial);
BENCHMARK(BM_Canny);
BENCHMARK(BM_CannySerial);
BENCHMARK(BM_Harris);
BENCHMARK(BM_HarrisSerial);
BENCHMARK(BM_Binarize);
BENCHMARK(BM_BinarizeSerial);
BENCHMARK(BM_Gmm);
BENCHMARK(BM_GmmSerial);
BENCHMARK(BM_Detect)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_DetectSerial)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
