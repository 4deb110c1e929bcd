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
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "detector_fixture.hpp"
#include "doctest.h"
#include "fixtures.hpp"
#include "nightwatch/detect.hpp"
#include "nightwatch/errors.hpp"
#include "nightwatch/serial.hpp"
#include "oracles.hpp"

using namespace nightwatch;

namespace
{

constexpr double kInf = std::numeric_limits<double>::infinity();

Detection det(BoundingBox b, double score)
{
  Detection d;
  d.bbox = b;
  d.score = score;
  return d;
}

BoundingBox random_box(std::mt19937_64 & rng)
{
  std::uniform_int_distribution<int> p(-20, 40), s(1, 30);
  return BoundingBox{p(rng), p(rng), s(rng), s(rng)};
}

}  // namespace

// ---------------------------------------------------------------------------
// HOG
// ---------------------------------------------------------------------------

TEST_CASE("descriptor length and constant window")
{
  const HogParams p;
  CHECK(p.descriptor_length() == 3780);
  const Descriptor d = hog_descriptor(nwtest::constant_frame(64, 128, 1, 99));
  CHECK(d.size() == 3780);
  CHECK(std::all_of(d.begin(), d.end(), [](double v) {return v == 0.0;}));
  CHECK_THROWS_AS(hog_descriptor(Frame(64, 127, 1)), ParamError);
  CHECK_THROWS_AS(hog_descriptor(Frame(64, 128, 3)), ParamError);
}

TEST_CASE("descriptor is invariant to an intensity shift")
{
  std::mt19937_64 rng(51);
  std::uniform_int_distribution<int> v(10, 235);
  for (int i = 0; i < 20; ++i) {
    Frame f(64, 128, 1);
    for (auto & p : f.data()) {
      p = static_cast<std::uint8_t>(v(rng));
    }
    Frame g = f;
    for (auto & p : g.data()) {
      p = static_cast<std::uint8_t>(p + 10);
    }
    const Descriptor a = hog_descriptor(f);
    const Descriptor b = hog_descriptor(g);
    double worst = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
      worst = std::max(worst, std::fabs(a[k] - b[k]));
    }
    CHECK(worst <= 1e-12);
  }
}

TEST_CASE("descriptor blocks are L2-Hys normalized")
{
  std::mt19937_64 rng(53);
  const HogParams p;
  for (int i = 0; i < 20; ++i) {
    const Frame f = nwtest::random_frame(rng, 64, 128, 1);
    const Descriptor d = hog_descriptor(f);
    for (int b = 0; b < p.blocks_x() * p.blocks_y(); ++b) {
      double ss = 0.0;
      for (int k = 0; k < p.block_length(); ++k) {
        const double v = d[static_cast<std::size_t>(b * p.block_length() + k)];
        REQUIRE(v >= 0.0);
        REQUIRE(v <= 1.0);
        ss += v * v;
      }
      REQUIRE(std::sqrt(ss) <= 1.0 + 1e-6);
    }
  }
}

TEST_CASE("cell histograms on a linear ramp")
{
  // v = 3x + 2y: centered differences are gx = 6, gy = 4 away from the border.
  Frame f(40, 40, 1);
  for (int y = 0; y < 40; ++y) {
    for (int x = 0; x < 40; ++x) {
      f.at(x, y) = static_cast<std::uint8_t>(3 * x + 2 * y);
    }
  }
  const CellGrid g = hog_cell_histograms(f, {});
  const long double mag = std::sqrt(52.0L);
  const long double angle = std::atan2(4.0L, 6.0L) * 180.0L / std::numbers::pi_v<long double>;
  const long double pos = angle / 20.0L - 0.5L;   // bin centers at 10, 30, ... degrees
  const int lo = static_cast<int>(std::floor(pos));
  const long double frac = pos - lo;
  for (int cy = 1; cy < 4; ++cy) {
    for (int cx = 1; cx < 4; ++cx) {
      const auto cell = g.cell(cx, cy);
      for (int b = 0; b < 9; ++b) {
        long double expect = 0.0L;
        if (b == lo) {
          expect = 64.0L * mag * (1.0L - frac);
        } else if (b == lo + 1) {
          expect = 64.0L * mag * frac;
        }
        REQUIRE(std::fabs(static_cast<long double>(cell[b]) - expect) <= 1e-9L);
      }
    }
  }
}

TEST_CASE("orientation wraps between the last and first bin")
{
  // A leftward ramp points at 180 degrees, which folds to 0 and sits between
  // the centers of bins 8 and 0. Cell (1,1) stays clear of the clamped border.
  Frame f(24, 24, 1);
  for (int y = 0; y < 24; ++y) {
    for (int x = 0; x < 24; ++x) {
      f.at(x, y) = static_cast<std::uint8_t>(100 - 5 * x);
    }
  }
  const CellGrid g = hog_cell_histograms(f, {});
  const auto cell = g.cell(1, 1);
  CHECK(cell[8] == doctest::Approx(64 * 10 * 0.5));
  CHECK(cell[0] == doctest::Approx(64 * 10 * 0.5));
}

// ---------------------------------------------------------------------------
// SVM
// ---------------------------------------------------------------------------

TEST_CASE("svm score")
{
  LinearModel m{{1.0, 0.0, 0.0}, 0.0, 0.0};
  const std::vector<double> x{2.0, 5.0, -1.0};
  CHECK(svm_score(m, x) == 2.0);
  m.bias = -0.75;
  CHECK(svm_score(m, std::vector<double>(3, 0.0)) == -0.75);
  CHECK_THROWS_AS(svm_score(m, std::vector<double>(2, 0.0)), ParamError);
}

TEST_CASE("svm separates toy data deterministically")
{
  std::mt19937_64 rng(55);
  std::normal_distribution<double> n(0.0, 0.2);
  std::vector<Descriptor> pos, neg;
  for (int i = 0; i < 50; ++i) {
    pos.push_back({1.0 + n(rng), n(rng)});
    neg.push_back({-1.0 + n(rng), n(rng)});
  }
  SvmTrainParams p;
  p.seed = 3;
  std::vector<double> trace;
  const LinearModel m = train_linear_svm(pos, neg, p, &trace);
  int correct = 0;
  for (const auto & x : pos) {
    correct += svm_score(m, x) > 0 ? 1 : 0;
  }
  for (const auto & x : neg) {
    correct += svm_score(m, x) < 0 ? 1 : 0;
  }
  CHECK(correct == 100);
  CHECK(train_linear_svm(pos, neg, p) == m);

  REQUIRE(trace.size() == 100);
  for (std::size_t i = 1; i < trace.size(); ++i) {
    REQUIRE(trace[i] <= trace[i - 1] * (1.0 + 1e-6));
  }
  CHECK(trace.back() == doctest::Approx(svm_objective(m, pos, neg, p.lambda)));

  p.seed = 4;
  const LinearModel other = train_linear_svm(pos, neg, p);
  CHECK(other.weights.size() == 2);
}

TEST_CASE("svm training errors")
{
  const std::vector<Descriptor> some{{1.0, 2.0}};
  const std::vector<Descriptor> none;
  CHECK_THROWS_AS(train_linear_svm(none, some, {}), ParamError);
  CHECK_THROWS_AS(train_linear_svm(some, none, {}), ParamError);
  const std::vector<Descriptor> ragged{{1.0}};
  CHECK_THROWS_AS(train_linear_svm(some, ragged, {}), ParamError);
  CHECK_THROWS_AS(train_linear_svm(some, some, {0.0, 10, 1}), ParamError);
}

// ---------------------------------------------------------------------------
// IoU and NMS
// ---------------------------------------------------------------------------

TEST_CASE("iou analytic cases")
{
  const BoundingBox a{0, 0, 10, 10};
  CHECK(iou(a, a) == 1.0);
  CHECK(iou(a, BoundingBox{10, 0, 10, 10}) == 0.0);
  CHECK(iou(a, BoundingBox{50, 50, 3, 3}) == 0.0);
  CHECK(std::fabs(iou(a, BoundingBox{5, 0, 10, 10}) - 1.0 / 3.0) <= 1e-12);
}

TEST_CASE("iou properties")
{
  std::mt19937_64 rng(57);
  std::uniform_int_distribution<int> shift(-50, 50);
  for (int i = 0; i < 2000; ++i) {
    const BoundingBox a = random_box(rng);
    const BoundingBox b = random_box(rng);
    const double v = iou(a, b);
    REQUIRE(v >= 0.0);
    REQUIRE(v <= 1.0);
    REQUIRE(v == iou(b, a));
    const int dx = shift(rng), dy = shift(rng);
    REQUIRE(v == iou(BoundingBox{a.x + dx, a.y + dy, a.w, a.h}, BoundingBox{b.x + dx, b.y + dy, b.w, b.h}));
    REQUIRE(std::fabs(v - nwtest::oracle::iou_by_pixels(a, b)) <= 1e-12);
  }
}

TEST_CASE("nms examples")
{
  const std::vector<Detection> single{det({0, 0, 5, 5}, 0.1)};
  CHECK(nms(single, 0.5) == single);

  const auto dup = nms({det({0, 0, 10, 10}, 0.8), det({0, 0, 10, 10}, 0.9)}, 0.5);
  REQUIRE(dup.size() == 1);
  CHECK(dup[0].score == 0.9);

  // B overlaps both A and C (IoU 7/17 each); A and C only touch. Above 0.5
  // such a chain cannot exist: B's two intersections share B's own area.
  const BoundingBox a{0, 0, 10, 10}, b{3, 0, 14, 10}, c{10, 0, 10, 10};
  CHECK(iou(a, b) == doctest::Approx(7.0 / 17.0));
  CHECK(iou(b, c) == doctest::Approx(7.0 / 17.0));
  CHECK(iou(a, c) == 0.0);
  const auto kept = nms({det(c, 0.5), det(a, 0.9), det(b, 0.7)}, 0.4);
  REQUIRE(kept.size() == 2);
  CHECK(kept[0].bbox == a);
  CHECK(kept[1].bbox == c);
}

TEST_CASE("nms properties")
{
  std::mt19937_64 rng(59);
  std::uniform_int_distribution<int> s(0, 4);
  for (int i = 0; i < 300; ++i) {
    std::vector<Detection> in;
    for (int k = 0; k < 25; ++k) {
      in.push_back(det(random_box(rng), 0.1 * s(rng)));   // coarse scores force ties
    }
    const double thr = 0.2 + 0.1 * (i % 7);
    const auto out = nms(in, thr);
    for (std::size_t p = 0; p < out.size(); ++p) {
      REQUIRE(std::find(in.begin(), in.end(), out[p]) != in.end());
      for (std::size_t q = p + 1; q < out.size(); ++q) {
        REQUIRE(iou(out[p].bbox, out[q].bbox) < thr);
      }
    }
    auto shuffled = in;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    REQUIRE(nms(shuffled, thr) == out);
  }
}

// ---------------------------------------------------------------------------
// Model file and JSON lines
// ---------------------------------------------------------------------------

TEST_CASE("model encoding")
{
  LinearModel m{{1.5, -0.25, 3e-300}, -0.125, 2.0};
  const auto bytes = encode_model(m);
  REQUIRE(bytes.size() == 6 + 4 + 8 * 5);
  CHECK(std::string(bytes.begin(), bytes.begin() + 6) == "NWSVM1");
  CHECK(bytes[6] == 3);
  CHECK(bytes[7] == 0);
  // 1.5 = 0x3FF8000000000000, little endian.
  CHECK(bytes[10 + 7] == 0x3F);
  CHECK(bytes[10 + 6] == 0xF8);
  CHECK(decode_model(bytes) == m);

  auto bad = bytes;
  bad[0] = 'X';
  CHECK_THROWS_AS(decode_model(bad), FormatError);
  auto shorter = bytes;
  shorter.pop_back();
  CHECK_THROWS_AS(decode_model(shorter), FormatError);
}

TEST_CASE("model file round-trip is bit exact")
{
  nwtest::TempDir tmp;
  std::mt19937_64 rng(61);
  std::normal_distribution<double> n(0.0, 1.0);
  LinearModel m;
  m.weights.resize(3780);
  for (auto & w : m.weights) {
    w = n(rng);
  }
  m.bias = n(rng);
  m.score_threshold = -0.5;
  save_model(m, tmp / "m.nwsvm");
  const LinearModel back = load_model(tmp / "m.nwsvm");
  CHECK(back == m);
  save_model(back, tmp / "m2.nwsvm");
  CHECK(nwtest::read_bytes(tmp / "m.nwsvm") == nwtest::read_bytes(tmp / "m2.nwsvm"));
  CHECK_THROWS_AS(load_model(tmp / "missing"), IoError);
}

TEST_CASE("detection json line")
{
  Detection d;
  d.bbox = {3, 4, 64, 128};
  d.score = 1.25;
  d.frame_index = 17;
  CHECK(detection_json_line(d) ==
    R"({"frame":17,"x":3,"y":4,"w":64,"h":128,"score":1.25,"label":"person"})");
}

// ---------------------------------------------------------------------------
// Sliding window detection
// ---------------------------------------------------------------------------

TEST_CASE("pyramid parameter validation")
{
  CHECK_THROWS_AS(validate(PyramidParams{1.0, 8, 0.3, 64}), ParamError);
  CHECK_THROWS_AS(validate(PyramidParams{1.05, 0, 0.3, 64}), ParamError);
  CHECK_THROWS_AS(validate(PyramidParams{1.05, 8, 0.0, 64}), ParamError);
  CHECK_THROWS_AS(validate(PyramidParams{1.05, 8, 0.3, 0}), ParamError);
}

TEST_CASE("resize keeps a same-size frame")
{
  std::mt19937_64 rng(63);
  const Frame f = nwtest::random_frame(rng, 30, 20, 1);
  CHECK(resize_bilinear(f, 30, 20) == f);
  const Frame half = resize_bilinear(nwtest::constant_frame(30, 20, 1, 80), 15, 10);
  CHECK(half == nwtest::constant_frame(15, 10, 1, 80));
}

TEST_CASE("degenerate detection inputs return nothing")
{
  LinearModel m;
  m.weights.assign(3780, 0.01);
  m.bias = -1.0;
  m.score_threshold = -0.5;   // above the bias
  CHECK(detect_pedestrians(Frame(200, 200, 1), m, {}, {}).empty());
  m.score_threshold = kInf;
  CHECK(detect_pedestrians(nwtest::night_scene(200, 200, 1), m, {}, {}).empty());
  m.score_threshold = -kInf;
  CHECK(detect_pedestrians(Frame(63, 200, 1), m, {}, {}).empty());
  m.weights.pop_back();
  CHECK_THROWS_AS(detect_pedestrians(Frame(200, 200, 1), m, {}, {}), ParamError);
}

TEST_CASE("toy detector finds the pasted crop")
{
  const LinearModel & model = nwtest::toy_model();
  Frame scene = nwtest::night_scene(nwtest::kSceneWidth, nwtest::kSceneHeight, 4242);
  const BoundingBox where{120, 56, 64, 128};
  nwtest::composite(scene, nwtest::pedestrian_crop(31337), where.x, where.y);
  const auto dets = detect_pedestrians(scene, model, {}, {});
  REQUIRE_FALSE(dets.empty());
  double best = 0.0;
  for (const auto & d : dets) {
    best = std::max(best, iou(d.bbox, where));
  }
  CHECK(best >= 0.5);

  const auto none = detect_pedestrians(nwtest::night_scene(nwtest::kSceneWidth, nwtest::kSceneHeight, 4243), model, {}, {});
  for (const auto & d : none) {
    CHECK(iou(d.bbox, where) < 0.5);
  }
}

TEST_CASE("raw window count is monotone in the threshold")
{
  LinearModel model = nwtest::toy_model();
  Frame scene = nwtest::night_scene(nwtest::kSceneWidth, nwtest::kSceneHeight, 17);
  nwtest::composite(scene, nwtest::pedestrian_crop(5), 100, 70);
  std::size_t previous = std::numeric_limits<std::size_t>::max();
  for (double t : {-kInf, -2.0, -1.0, -0.5, 0.0, 0.5, 1.0, kInf}) {
    model.score_threshold = t;
    const auto raw = detect_windows(scene, model, {}, {});
    REQUIRE(raw.size() <= previous);
    for (const auto & d : raw) {
      REQUIRE(d.bbox.inside(scene.width(), scene.height()));
      REQUIRE(std::isfinite(d.score));
    }
    previous = raw.size();
  }
}

TEST_CASE("parallel and serial window scans agree")
{
  LinearModel model = nwtest::toy_model();
  model.score_threshold = -1.0;
  const Frame scene = nwtest::night_scene(200, 150, 19);
  for (int stride : {8, 16, 12}) {
    PyramidParams p;
    p.window_stride = stride;
    p.scale_step = 1.1;
    REQUIRE(detect_windows(scene, model, {}, p) == serial::detect_windows(scene, model, {}, p));
  }
}

TEST_CASE("crop dataset from directories and hard negatives")
{
  nwtest::TempDir tmp;
  std::filesystem::create_directories(tmp / "pos");
  std::filesystem::create_directories(tmp / "neg");
  const auto pos = nwtest::positive_crops(4, 1);
  const auto neg = nwtest::negative_crops(6, 2);
  for (std::size_t i = 0; i < pos.size(); ++i) {
    save_frame(pos[i], tmp.path() / "pos" / ("p_" + std::to_string(i) + ".pgm"));
  }
  for (std::size_t i = 0; i < neg.size(); ++i) {
    save_frame(to_rgb(neg[i]), tmp.path() / "neg" / ("n_" + std::to_string(i) + ".ppm"));
  }
  const CropDataset data = load_crop_dataset(tmp / "pos", tmp / "neg");
  REQUIRE(data.positives.size() == 4);
  REQUIRE(data.negatives.size() == 6);
  CHECK(data.positives[0] == hog_descriptor(pos[0]));
  CHECK(data.negatives[5] == hog_descriptor(neg[5]));

  save_frame(Frame(10, 10, 1), tmp.path() / "pos" / "small.pgm");
  CHECK_THROWS_AS(load_crop_dataset(tmp / "pos", tmp / "neg"), ParamError);
  CHECK_THROWS(load_crop_dataset(tmp / "nope", tmp / "neg"));

  LinearModel eager;
  eager.weights.assign(3780, 0.0);
  eager.bias = 1.0;   // accepts every window
  const std::vector<Frame> frames{nwtest::night_scene(160, 160, 3)};
  const auto mined = mine_hard_negatives(frames, eager, {}, {}, 7);
  CHECK(mined.size() == 7);
  for (const auto & d : mined) {
    CHECK(d.size() == 3780);
  }
}
