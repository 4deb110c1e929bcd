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


// Acceptance run: one PASS/FAIL line per criterion, exit status 1 when any
// criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "detector_fixture.hpp"
#include "fixtures.hpp"
#include "nightwatch/bench.hpp"
#include "nightwatch/detect.hpp"
#include "nightwatch/enhance.hpp"
#include "nightwatch/motionedge.hpp"
#include "nightwatch/segment.hpp"
#include "oracles.hpp"

using namespace nightwatch;
namespace oracle = nwtest::oracle;

namespace
{

/// Collects the failed checks of one criterion.
class Verdict
{
public:
  void check(bool ok, const std::string & what)
  {
    if (!ok) {
      failures_.push_back(what);
    }
  }
  void note(const std::string & line) { notes_.push_back(line); }
  bool passed() const { return failures_.empty(); }

  void print(int number, const std::string & title) const
  {
    std::cout << (passed() ? "PASS" : "FAIL") << "  criterion " << number << ": " << title << '\n';
    for (const auto & n : notes_) {
      std::cout << "      " << n << '\n';
    }
    for (const auto & f : failures_) {
      std::cout << "      failed: " << f << '\n';
    }
  }

private:
  std::vector<std::string> failures_;
  std::vector<std::string> notes_;
};

std::string fmt(double v, int digits = 1)
{
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

// ---------------------------------------------------------------------------

Verdict throughput_tiers()
{
  Verdict v;
  const auto start = std::chrono::steady_clock::now();
  std::vector<Frame> frames;
  frames.reserve(165);
  for (int i = 0; i < 165; ++i) {
    frames.push_back(nwtest::night_scene_rgb(640, 480, 1, i));
  }
  std::map<std::string, double> fps;
  for (const auto & m : enhancement_methods({})) {
    const BenchRecord r = time_method(m.name, m.factory, frames, 5);
    fps[m.name] = *r.fps;
    v.note(m.name + ": " + fmt(*r.total_seconds, 3) + " s, " + fmt(*r.fps) + " fps");
  }
  const double clahe = fps.at("CLAHE");
  const double seg = fps.at("Adaptive Threshold Segmentation");
  const double shadows = fps.at("Motion Map (Shadows)");
  const double plain = fps.at("Motion Map (No Shadows)");
  const double harris = fps.at("Harris Corner Detection");
  for (const char * fast : {"Histogram Equalization", "Canny Edge Detection", "Binary Thresholding", "Gamma Correction"}) {
    v.check(fps.at(fast) > clahe, std::string(fast) + " faster than CLAHE");
    v.check(fps.at(fast) > 100.0, std::string(fast) + " above 100 fps");
  }
  v.check(clahe > seg, "CLAHE faster than segmentation");
  v.check(seg > shadows && seg > plain, "segmentation faster than both motion maps");
  v.check(shadows > harris && plain > harris, "motion maps faster than Harris");
  const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  v.note("165 frames at 640x480, whole suite " + fmt(total) + " s");
  v.check(total < 300.0, "suite under 5 minutes");
  return v;
}

Verdict timeline_arithmetic()
{
  Verdict v;
  const double a = seconds_before_crash(74, 95, 24.0);
  const double b = seconds_before_crash(60, 95, 24.0);
  v.check(std::fabs(a - 0.875) <= 1e-9, "(74, 95, 24) = 0.875");
  v.check(std::fabs(b - 1.4583) <= 1e-4, "(60, 95, 24) = 1.4583");
  std::istringstream gt_text("# crash_frame=95 fps=24 first_visible_frame=60\n74,0,0,10,10,person\n");
  const GroundTruth gt = parse_ground_truth(gt_text);
  BenchRecord r;
  r.method = "reference detector";
  DetectionTable dets;
  Detection d;
  d.bbox = {0, 0, 10, 10};
  d.frame_index = 74;
  dets[74].push_back(d);
  score_timeliness(r, dets, gt, *gt.fps);
  v.check(r.seconds_before_crash == 0.875, "report row carries 0.875 s");
  const std::vector<BenchRecord> rows{r};
  const std::string note = timeline_note(gt, *gt.fps, rows);
  v.check(note.find("0.86 s") != std::string::npos && note.find("1.45 s") != std::string::npos,
    "note footnotes the rounded 0.86 s and 1.45 s figures");
  v.note("0.875000000 s and " + fmt(b, 6) + " s; footnote present in the report notes");
  return v;
}

Verdict first_detection_harness()
{
  Verdict v;
  constexpr int kFrames = 120;
  constexpr int kFirst = 40;
  const auto frames = nwtest::walker_sequence(kFrames, kFirst);
  const LinearModel & model = nwtest::toy_model();
  GroundTruth gt;
  for (int i = kFirst; i < kFrames; ++i) {
    gt.frames[i].push_back({nwtest::walker_box(i, kFirst), "person"});
  }
  const DetectorRun run = time_detector("HOG + SVM", [&](const Frame & f, long long) {
        return detect_pedestrians(f, model, {}, {});
      }, frames, 0);
  const auto first = eval_first_detection(run.detections, gt, 0.5);
  v.check(first.has_value() && *first >= 40 && *first <= 50, "first detection in [40, 50]");
  if (first) {
    double best = 0.0;
    for (const auto & d : run.detections.at(*first)) {
      best = std::max(best, iou(d.bbox, gt.frames.at(*first).front().box));
    }
    v.note("first detection at frame " + std::to_string(*first) + ", IoU " + fmt(best, 3));
    v.check(best >= 0.5, "IoU >= 0.5 at the first detection");
  }
  // Before the pedestrian appears no detection may match any box it will
  // later occupy.
  int early_matches = 0;
  int early_detections = 0;
  for (const auto & [frame, dets] : run.detections) {
    if (frame >= kFirst) {
      continue;
    }
    early_detections += static_cast<int>(dets.size());
    for (const auto & d : dets) {
      for (const auto & [gf, boxes] : gt.frames) {
        early_matches += iou(d.bbox, boxes.front().box) >= 0.5 ? 1 : 0;
      }
    }
  }
  v.note(std::to_string(early_detections) + " detections before frame 40, " +
    std::to_string(early_matches) + " ground-truth matches");
  v.check(early_matches == 0, "no ground-truth matches before frame 40");
  return v;
}

Verdict oracle_equivalences()
{
  Verdict v;
  std::mt19937_64 rng(2024);
  int mismatches = 0;
  for (int i = 0; i < 1000; ++i) {
    const Frame f = nwtest::random_binary(rng, 64, 64, 0.1 + 0.8 * (i % 9) / 8.0);
    const auto truth = oracle::flood_fill_labels(f);
    mismatches += oracle::same_partition(label_components(f).labels.data, truth) ? 0 : 1;
  }
  v.note("labeling: " + std::to_string(mismatches) + " mismatches over 1000 frames");
  v.check(mismatches == 0, "labeling partition equals flood fill");

  int clahe_diff = 0;
  for (int i = 0; i < 100; ++i) {
    const Frame f = i % 2 == 0 ? nwtest::random_frame(rng, 64, 48, 1) : nwtest::night_scene(96, 64, static_cast<std::uint64_t>(i));
    clahe_diff += clahe(f, {1, 1, std::numeric_limits<double>::infinity()}) == hist_equalize(f) ? 0 : 1;
  }
  v.check(clahe_diff == 0, "1x1 CLAHE with unbounded clip equals global HE");

  const BoundingBox a{0, 0, 10, 10};
  v.check(iou(a, a) == 1.0, "iou(a, a) = 1");
  v.check(iou(a, {20, 20, 5, 5}) == 0.0, "disjoint iou = 0");
  v.check(std::fabs(iou(a, {5, 0, 10, 10}) - 1.0 / 3.0) <= 1e-12, "half-shifted iou = 1/3");
  return v;
}

Verdict numerical_suite()
{
  Verdict v;
  std::mt19937_64 rng(77);
  const Frame rgb = nwtest::random_frame(rng, 64, 48, 3);
  v.check(gamma_correct(rgb, {1.0}) == rgb, "gamma 1 identity");

  std::uniform_real_distribution<double> g(0.1, 10.0);
  bool monotone = true;
  for (int i = 0; i < 100; ++i) {
    const Lut lut = gamma_lut(g(rng));
    monotone = monotone && std::is_sorted(lut.begin(), lut.end());
  }
  v.check(monotone, "gamma LUT monotone for 100 random gamma");

  bool he_ok = true;
  for (int i = 0; i < 100; ++i) {
    const Frame f = i % 2 == 0 ? nwtest::random_frame(rng, 40, 30, 1) : nwtest::night_scene(80, 60, static_cast<std::uint64_t>(i));
    const Lut lut = equalization_lut(histogram(f));
    he_ok = he_ok && std::is_sorted(lut.begin(), lut.end());
    const Frame once = hist_equalize(f);
    const Frame twice = hist_equalize(once);
    for (std::size_t k = 0; k < once.data().size(); ++k) {
      he_ok = he_ok && std::abs(once.data()[k] - twice.data()[k]) <= 1;
    }
  }
  v.check(he_ok, "HE monotone and idempotent within one level");

  std::uniform_int_distribution<int> px(10, 235);
  double worst = 0.0;
  bool length_ok = true;
  for (int i = 0; i < 20; ++i) {
    Frame w(64, 128, 1);
    for (auto & p : w.data()) {
      p = static_cast<std::uint8_t>(px(rng));
    }
    Frame shifted = w;
    for (auto & p : shifted.data()) {
      p = static_cast<std::uint8_t>(p + 10);
    }
    const auto d0 = hog_descriptor(w);
    const auto d1 = hog_descriptor(shifted);
    length_ok = length_ok && d0.size() == 3780;
    for (std::size_t k = 0; k < d0.size(); ++k) {
      worst = std::max(worst, std::fabs(d0[k] - d1[k]));
    }
  }
  v.note("HOG shift difference " + fmt(worst, 17));
  v.check(worst <= 1e-12, "HOG shift invariance within 1e-12");
  v.check(length_ok, "HOG length 3780");

  std::normal_distribution<double> n(0.0, 0.25);
  std::vector<Descriptor> pos, neg;
  for (int i = 0; i < 100; ++i) {
    pos.push_back({1.0 + n(rng), n(rng)});
    neg.push_back({-1.0 + n(rng), n(rng)});
  }
  const LinearModel m = train_linear_svm(pos, neg, {});
  int correct = 0;
  for (const auto & x : pos) {
    correct += svm_score(m, x) > 0.0 ? 1 : 0;
  }
  for (const auto & x : neg) {
    correct += svm_score(m, x) < 0.0 ? 1 : 0;
  }
  v.check(correct == 200, "SVM 100% training accuracy on separable data");

  const Frame still = nwtest::night_scene(160, 120, 3);
  BackgroundModel bg = gmm_init({}, still.width(), still.height());
  Frame mask;
  for (int i = 0; i < 100; ++i) {
    mask = gmm_update(bg, still);
  }
  v.check(std::all_of(mask.data().begin(), mask.data().end(), [](auto p) {return p == 0;}),
    "GMM static-scene mask empty by frame 100");
  return v;
}

Verdict format_round_trips()
{
  Verdict v;
  nwtest::TempDir tmp;
  std::mt19937_64 rng(99);
  bool frames_ok = true;
  for (int i = 0; i < 50; ++i) {
    const Frame f = nwtest::random_frame(rng, 1 + i, 1 + (i * 3) % 40, i % 2 == 0 ? 1 : 3);
    const auto path = tmp / (f.channels() == 1 ? "f.pgm" : "f.ppm");
    save_frame(f, path);
    frames_ok = frames_ok && load_frame(path) == f;
  }
  v.check(frames_ok, "PGM/PPM save then load");

  LinearModel model = nwtest::toy_model();
  save_model(model, tmp / "m.nwsvm");
  const LinearModel back = load_model(tmp / "m.nwsvm");
  save_model(back, tmp / "m2.nwsvm");
  v.check(back == model && nwtest::read_bytes(tmp / "m.nwsvm") == nwtest::read_bytes(tmp / "m2.nwsvm"),
    "model write then read");

  DetectionTable dets;
  std::normal_distribution<double> score(0.0, 2.0);
  for (int i = 0; i < 200; ++i) {
    Detection d;
    d.frame_index = i / 3;
    d.bbox = {i, 2 * i, 64, 128};
    d.score = score(rng);
    dets[d.frame_index].push_back(d);
  }
  nwtest::write_text(tmp / "d.jsonl", format_detection_lines(dets));
  v.check(ingest_external_detections(tmp / "d.jsonl") == dets, "detection JSON lines emit then ingest");

  const std::vector<BenchRecord> records{
    {"Gamma Correction", 0.123456789, 165.0 / 0.123456789, std::nullopt, std::nullopt},
    {"HOG + SVM", 17.5, 120.0 / 17.5, 41, 2.375},
    {"external, \"quoted\"", std::nullopt, std::nullopt, 74, 0.875}};
  write_report(records, tmp / "r.csv", ReportFormat::kCsv);
  write_report(records, tmp / "r.json", ReportFormat::kJson);
  v.check(read_report(tmp / "r.csv", ReportFormat::kCsv) == records, "CSV report write then parse");
  v.check(read_report(tmp / "r.json", ReportFormat::kJson) == records, "JSON report write then parse");
  return v;
}

}  // namespace

int main()
{
  struct Criterion
  {
    int number;
    std::string title;
    std::function<Verdict()> run;
  };
  const std::vector<Criterion> criteria{
    {1, "enhancement throughput tiers", throughput_tiers},
    {2, "crash timeline arithmetic", timeline_arithmetic},
    {3, "first-detection harness", first_detection_harness},
    {4, "oracle equivalences", oracle_equivalences},
    {5, "numerical and identity checks", numerical_suite},
    {6, "bit-exact format round-trips", format_round_trips},
  };
  int failed = 0;
  for (const auto & c : criteria) {
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception & e) {
      v.check(false, std::string("exception: ") + e.what());
    }
    v.print(c.number, c.title);
    failed += v.passed() ? 0 : 1;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << '\n';
  return failed == 0 ? 0 : 1;
}
