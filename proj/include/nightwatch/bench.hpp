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

#ifndef NIGHTWATCH_BENCH_HPP_
#define NIGHTWATCH_BENCH_HPP_

#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nightwatch/detect.hpp"
#include "nightwatch/enhance.hpp"
#include "nightwatch/frame.hpp"
#include "nightwatch/motionedge.hpp"
#include "nightwatch/segment.hpp"

namespace nightwatch
{

// ---------------------------------------------------------------------------
// Ground truth
// ---------------------------------------------------------------------------

struct GroundTruthBox
{
  BoundingBox box;
  std::string label = "person";
};

/// CSV `frame,x,y,w,h,label` with an optional comment line carrying
/// sequence marks, e.g. `# crash_frame=95 fps=24`.
struct GroundTruth
{
  std::map<long long, std::vector<GroundTruthBox>> frames;
  std::optional<long long> crash_frame;
  std::optional<long long> first_visible_frame;
  std::optional<long long> full_silhouette_frame;
  std::optional<double> fps;
};

GroundTruth parse_ground_truth(std::istream & in);
GroundTruth load_ground_truth(const std::filesystem::path & path);
std::string format_ground_truth(const GroundTruth & gt);

/// Throws ParamError when a frame index lies outside [0, frame_count) or a
/// box leaves the frame.
void validate(const GroundTruth & gt, std::size_t frame_count, int width, int height);

// ---------------------------------------------------------------------------
// Records and timing
// ---------------------------------------------------------------------------

/// One report row. Timing columns are absent for detector outputs that were
/// ingested rather than run here.
struct BenchRecord
{
  std::string method;
  std::optional<double> total_seconds;
  std::optional<double> fps;
  std::optional<long long> first_detection_frame;
  std::optional<double> seconds_before_crash;

  bool operator==(const BenchRecord &) const = default;
};

using FrameTransform = std::function<Frame(const Frame &)>;
/// Builds a fresh transform; stateful methods get new state per pass.
using TransformFactory = std::function<FrameTransform()>;
using FrameSink = std::function<void(std::size_t index, const Frame & output)>;

/// Untimed warm-up over the first `warmup_frames` frames on one transform
/// instance, then one timed pass over every frame, in order, on a fresh
/// instance. Outputs go to `sink` after the clock stops.
BenchRecord time_method(
  const std::string & name, const TransformFactory & factory, std::span<const Frame> frames,
  std::size_t warmup_frames = 5, const FrameSink & sink = {});

/// Stateless transforms only: the timed pass spreads frames over `jobs`
/// threads. Warm-up stays sequential.
BenchRecord time_method_parallel(
  const std::string & name, const FrameTransform & method, std::span<const Frame> frames, int jobs,
  std::size_t warmup_frames = 5);

/// Convenience overload for stateless transforms.
BenchRecord time_method(
  const std::string & name, const FrameTransform & method, std::span<const Frame> frames,
  std::size_t warmup_frames = 5, const FrameSink & sink = {});

using DetectionTable = std::map<long long, std::vector<Detection>>;
using FrameDetector = std::function<std::vector<Detection>(const Frame &, long long index)>;

struct DetectorRun
{
  BenchRecord record;
  DetectionTable detections;
};

/// Times a detector the way time_method times transforms and keeps its output.
DetectorRun time_detector(
  const std::string & name, const FrameDetector & detector, std::span<const Frame> frames,
  std::size_t warmup_frames = 5);

// ---------------------------------------------------------------------------
// Timeliness
// ---------------------------------------------------------------------------

/// Earliest frame with a `label` detection whose IoU with a same-frame,
/// same-label ground-truth box is >= iou_min.
std::optional<long long> eval_first_detection(
  const DetectionTable & dets, const GroundTruth & gt, double iou_min = 0.5,
  const std::string & label = "person");

/// (crash_frame - detect_frame) / fps. Throws ParamError when the detection
/// comes after the crash or fps is not positive.
double seconds_before_crash(long long detect_frame, long long crash_frame, double fps);

/// Fills first_detection_frame and, when the crash mark is known,
/// seconds_before_crash. A detection after the crash leaves the latter empty.
void score_timeliness(
  BenchRecord & record, const DetectionTable & dets, const GroundTruth & gt, double fps,
  double iou_min = 0.5);

/// Human-readable timeline derived from the ground-truth marks and the
/// records, including the rounding footnote for the reference timeline.
std::string timeline_note(const GroundTruth & gt, double fps, std::span<const BenchRecord> records);

// ---------------------------------------------------------------------------
// Detection ingestion and reports
// ---------------------------------------------------------------------------

/// JSON lines as emitted by `nightwatch detect`. Errors name the 1-based line.
DetectionTable parse_detection_lines(std::istream & in);
DetectionTable ingest_external_detections(const std::filesystem::path & path);
std::string format_detection_lines(const DetectionTable & dets);

enum class ReportFormat { kCsv, kJson };

ReportFormat parse_report_format(const std::string & name);

/// CSV header: method,total_seconds,fps,first_detection_frame,seconds_before_crash
std::string format_report(std::span<const BenchRecord> records, ReportFormat format);
std::vector<BenchRecord> parse_report(const std::string & text, ReportFormat format);
void write_report(
  std::span<const BenchRecord> records, const std::filesystem::path & path, ReportFormat format);
std::vector<BenchRecord> read_report(const std::filesystem::path & path, ReportFormat format);

// ---------------------------------------------------------------------------
// Method registry
// ---------------------------------------------------------------------------

struct EnhanceSuiteConfig
{
  GammaParams gamma{3.5};
  ClaheParams clahe{};
  int threshold = 128;
  CannyParams canny{};
  HarrisParams harris{};
  GmmParams gmm{};
  CandidateFilterParams segment{};
};

struct BenchMethod
{
  std::string name;
  TransformFactory factory;
  /// Output depends on earlier frames; frame-parallel timing is not allowed.
  bool stateful = false;
};

/// Every enhancement-table method implemented here, in report order.
std::vector<BenchMethod> enhancement_methods(const EnhanceSuiteConfig & config);

/// Frame with survivors of the candidate filter painted 255.
Frame candidate_mask(const Frame & frame, const CandidateFilterParams & params);

/// 255 at each detected corner, 0 elsewhere.
Frame corner_map(const Frame & gray, const HarrisParams & params);

}  // namespace nightwatch

#endif  // NIGHTWATCH_BENCH_HPP_
