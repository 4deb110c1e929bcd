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

#include "nightwatch/bench.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <memory>
#include <sstream>

#include "json.hpp"
#include "nightwatch/errors.hpp"
#include "nightwatch/parallel.hpp"

namespace nightwatch
{

namespace fs = std::filesystem;

namespace
{

std::string trim(const std::string & s)
{
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) {
    return {};
  }
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string & s, char sep)
{
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

template<typename T>
std::optional<T> parse_number(const std::string & text)
{
  const std::string s = trim(text);
  T value{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    return std::nullopt;
  }
  return value;
}

std::string format_double(double v)
{
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string read_text(const fs::path & path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text(const fs::path & path, const std::string & text)
{
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot write " + path.string());
  }
  out << text;
  if (!out) {
    throw IoError("write failed for " + path.string());
  }
}

}  // namespace

// ---------------------------------------------------------------------------

GroundTruth parse_ground_truth(std::istream & in)
{
  GroundTruth gt;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty()) {
      continue;
    }
    if (t.front() == '#') {
      std::istringstream tokens(t.substr(1));
      std::string tok;
      while (tokens >> tok) {
        const auto eq = tok.find('=');
        if (eq == std::string::npos) {
          continue;
        }
        const std::string key = tok.substr(0, eq);
        const std::string val = tok.substr(eq + 1);
        auto as_frame = [&]() {
            const auto v = parse_number<long long>(val);
            if (!v) {
              throw FormatError("ground truth line " + std::to_string(lineno) + ": bad " + key);
            }
            return *v;
          };
        if (key == "crash_frame") {
          gt.crash_frame = as_frame();
        } else if (key == "first_visible_frame") {
          gt.first_visible_frame = as_frame();
        } else if (key == "full_silhouette_frame") {
          gt.full_silhouette_frame = as_frame();
        } else if (key == "fps") {
          const auto v = parse_number<double>(val);
          if (!v || !(*v > 0.0)) {
            throw FormatError("ground truth line " + std::to_string(lineno) + ": bad fps");
          }
          gt.fps = *v;
        }
      }
      continue;
    }
    const auto fields = split(t, ',');
    if (trim(fields[0]) == "frame") {
      continue;   // header
    }
    if (fields.size() != 5 && fields.size() != 6) {
      throw FormatError("ground truth line " + std::to_string(lineno) + ": expected frame,x,y,w,h,label");
    }
    const auto frame = parse_number<long long>(fields[0]);
    const auto x = parse_number<int>(fields[1]);
    const auto y = parse_number<int>(fields[2]);
    const auto w = parse_number<int>(fields[3]);
    const auto h = parse_number<int>(fields[4]);
    if (!frame || !x || !y || !w || !h) {
      throw FormatError("ground truth line " + std::to_string(lineno) + ": non-numeric field");
    }
    if (*frame < 0 || *x < 0 || *y < 0 || *w <= 0 || *h <= 0) {
      throw FormatError("ground truth line " + std::to_string(lineno) + ": negative index or empty box");
    }
    GroundTruthBox box{{*x, *y, *w, *h}, fields.size() == 6 ? trim(fields[5]) : "person"};
    gt.frames[*frame].push_back(std::move(box));
  }
  return gt;
}

GroundTruth load_ground_truth(const fs::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open ground truth " + path.string());
  }
  return parse_ground_truth(in);
}

std::string format_ground_truth(const GroundTruth & gt)
{
  std::ostringstream out;
  std::string marks;
  if (gt.crash_frame) {
    marks += " crash_frame=" + std::to_string(*gt.crash_frame);
  }
  if (gt.fps) {
    marks += " fps=" + format_double(*gt.fps);
  }
  if (gt.first_visible_frame) {
    marks += " first_visible_frame=" + std::to_string(*gt.first_visible_frame);
  }
  if (gt.full_silhouette_frame) {
    marks += " full_silhouette_frame=" + std::to_string(*gt.full_silhouette_frame);
  }
  if (!marks.empty()) {
    out << '#' << marks << '\n';
  }
  out << "frame,x,y,w,h,label\n";
  for (const auto & [frame, boxes] : gt.frames) {
    for (const auto & b : boxes) {
      out << frame << ',' << b.box.x << ',' << b.box.y << ',' << b.box.w << ',' << b.box.h << ','
          << b.label << '\n';
    }
  }
  return out.str();
}

void validate(const GroundTruth & gt, std::size_t frame_count, int width, int height)
{
  const auto n = static_cast<long long>(frame_count);
  for (const auto & [frame, boxes] : gt.frames) {
    if (frame < 0 || frame >= n) {
      throw ParamError("ground truth frame " + std::to_string(frame) + " outside the sequence");
    }
    for (const auto & b : boxes) {
      if (!b.box.inside(width, height)) {
        throw ParamError("ground truth box in frame " + std::to_string(frame) + " leaves the frame");
      }
    }
  }
  for (const auto & mark : {gt.crash_frame, gt.first_visible_frame, gt.full_silhouette_frame}) {
    if (mark && (*mark < 0 || *mark >= n)) {
      throw ParamError("ground truth mark " + std::to_string(*mark) + " outside the sequence");
    }
  }
}

// ---------------------------------------------------------------------------

BenchRecord time_method(
  const std::string & name, const TransformFactory & factory, std::span<const Frame> frames,
  std::size_t warmup_frames, const FrameSink & sink)
{
  if (frames.empty()) {
    throw ParamError("cannot time " + name + " over an empty sequence");
  }
  {
    FrameTransform warm = factory();
    const std::size_t n = std::min(warmup_frames, frames.size());
    for (std::size_t i = 0; i < n; ++i) {
      (void)warm(frames[i]);
    }
  }
  FrameTransform method = factory();
  std::vector<Frame> outputs;
  if (sink) {
    outputs.reserve(frames.size());
  }
  const auto start = std::chrono::steady_clock::now();
  for (const auto & f : frames) {
    Frame out = method(f);
    if (sink) {
      outputs.push_back(std::move(out));
    }
  }
  const auto stop = std::chrono::steady_clock::now();
  const double elapsed = std::chrono::duration<double>(stop - start).count();
  for (std::size_t i = 0; i < outputs.size(); ++i) {
    sink(i, outputs[i]);
  }
  BenchRecord r;
  r.method = name;
  r.total_seconds = elapsed;
  r.fps = static_cast<double>(frames.size()) / elapsed;
  return r;
}

BenchRecord time_method(
  const std::string & name, const FrameTransform & method, std::span<const Frame> frames,
  std::size_t warmup_frames, const FrameSink & sink)
{
  return time_method(name, TransformFactory([method]() {return method;}), frames, warmup_frames, sink);
}

BenchRecord time_method_parallel(
  const std::string & name, const FrameTransform & method, std::span<const Frame> frames, int jobs,
  std::size_t warmup_frames)
{
  if (frames.empty()) {
    throw ParamError("cannot time " + name + " over an empty sequence");
  }
  if (jobs < 1) {
    throw ParamError("jobs must be >= 1");
  }
  for (std::size_t i = 0; i < std::min(warmup_frames, frames.size()); ++i) {
    (void)method(frames[i]);
  }
  const auto start = std::chrono::steady_clock::now();
  parallel_for_frames(frames.size(), jobs, [&](std::size_t i) {(void)method(frames[i]);});
  const auto stop = std::chrono::steady_clock::now();
  const double elapsed = std::chrono::duration<double>(stop - start).count();
  BenchRecord r;
  r.method = name;
  r.total_seconds = elapsed;
  r.fps = static_cast<double>(frames.size()) / elapsed;
  return r;
}

DetectorRun time_detector(
  const std::string & name, const FrameDetector & detector, std::span<const Frame> frames,
  std::size_t warmup_frames)
{
  if (frames.empty()) {
    throw ParamError("cannot time " + name + " over an empty sequence");
  }
  for (std::size_t i = 0; i < std::min(warmup_frames, frames.size()); ++i) {
    (void)detector(frames[i], static_cast<long long>(i));
  }
  DetectorRun run;
  std::vector<std::vector<Detection>> per_frame(frames.size());
  const auto start = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < frames.size(); ++i) {
    per_frame[i] = detector(frames[i], static_cast<long long>(i));
  }
  const auto stop = std::chrono::steady_clock::now();
  const double elapsed = std::chrono::duration<double>(stop - start).count();
  for (std::size_t i = 0; i < per_frame.size(); ++i) {
    if (!per_frame[i].empty()) {
      for (auto & d : per_frame[i]) {
        d.frame_index = static_cast<long long>(i);
      }
      run.detections[static_cast<long long>(i)] = std::move(per_frame[i]);
    }
  }
  run.record.method = name;
  run.record.total_seconds = elapsed;
  run.record.fps = static_cast<double>(frames.size()) / elapsed;
  return run;
}

// ---------------------------------------------------------------------------

std::optional<long long> eval_first_detection(
  const DetectionTable & dets, const GroundTruth & gt, double iou_min, const std::string & label)
{
  for (const auto & [frame, list] : dets) {   // ascending frame order
    const auto truth = gt.frames.find(frame);
    if (truth == gt.frames.end()) {
      continue;
    }
    for (const auto & d : list) {
      if (d.label != label) {
        continue;
      }
      for (const auto & g : truth->second) {
        if (g.label == label && iou(d.bbox, g.box) >= iou_min) {
          return frame;
        }
      }
    }
  }
  return std::nullopt;
}

double seconds_before_crash(long long detect_frame, long long crash_frame, double fps)
{
  if (!(fps > 0.0)) {
    throw ParamError("fps must be positive");
  }
  if (detect_frame > crash_frame) {
    throw ParamError("detection frame comes after the crash frame");
  }
  return static_cast<double>(crash_frame - detect_frame) / fps;
}

void score_timeliness(
  BenchRecord & record, const DetectionTable & dets, const GroundTruth & gt, double fps, double iou_min)
{
  record.first_detection_frame = eval_first_detection(dets, gt, iou_min);
  record.seconds_before_crash.reset();
  if (record.first_detection_frame && gt.crash_frame && *record.first_detection_frame <= *gt.crash_frame) {
    record.seconds_before_crash = seconds_before_crash(*record.first_detection_frame, *gt.crash_frame, fps);
  }
}

std::string timeline_note(const GroundTruth & gt, double fps, std::span<const BenchRecord> records)
{
  std::ostringstream out;
  out << "timeline at " << format_double(fps) << " fps";
  if (!gt.crash_frame) {
    out << " (no crash_frame mark; seconds-before-crash not computed)\n";
    return out.str();
  }
  const long long crash = *gt.crash_frame;
  out << ", crash at frame " << crash << " = " << format_double(crash / fps) << " s\n";
  auto line = [&](const std::string & what, long long frame) {
      out << "  " << what << ": frame " << frame;
      if (frame <= crash) {
        out << ", " << format_double(seconds_before_crash(frame, crash, fps)) << " s before crash";
      } else {
        out << ", after the crash";
      }
      out << '\n';
    };
  if (gt.first_visible_frame) {
    line("first visible", *gt.first_visible_frame);
  }
  if (gt.full_silhouette_frame) {
    line("full silhouette", *gt.full_silhouette_frame);
  }
  for (const auto & r : records) {
    if (r.first_detection_frame) {
      line(r.method + " first detection", *r.first_detection_frame);
    } else if (r.seconds_before_crash || r.total_seconds) {
      out << "  " << r.method << ": no matching detection\n";
    }
  }
  out << "note: values are exact frame arithmetic (frames / fps). The reference crash timeline\n"
         "      is usually quoted as 0.86 s (frame 74) and 1.45 s (frame 60) before the crash;\n"
         "      those figures are rounded from a 3.95 s crash time, while 21/24 = 0.875 s and\n"
         "      35/24 = 1.4583 s.\n";
  return out.str();
}

// ---------------------------------------------------------------------------

DetectionTable parse_detection_lines(std::istream & in)
{
  DetectionTable table;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) {
      continue;
    }
    const std::string where = "detection line " + std::to_string(lineno);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception & e) {
      throw FormatError(where + ": malformed JSON (" + e.what() + ")");
    }
    try {
      Detection d;
      d.frame_index = j.at("frame").get<long long>();
      d.bbox.x = j.at("x").get<int>();
      d.bbox.y = j.at("y").get<int>();
      d.bbox.w = j.at("w").get<int>();
      d.bbox.h = j.at("h").get<int>();
      d.score = j.at("score").get<double>();
      d.label = j.value("label", std::string("person"));
      if (d.bbox.w <= 0 || d.bbox.h <= 0) {
        throw FormatError(where + ": box width and height must be positive");
      }
      if (d.bbox.x < 0 || d.bbox.y < 0 || d.frame_index < 0) {
        throw FormatError(where + ": negative coordinate or frame index");
      }
      table[d.frame_index].push_back(std::move(d));
    } catch (const nlohmann::json::exception & e) {
      throw FormatError(where + ": " + e.what());
    }
  }
  return table;
}

DetectionTable ingest_external_detections(const fs::path & path)
{
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot open detections " + path.string());
  }
  return parse_detection_lines(in);
}

std::string format_detection_lines(const DetectionTable & dets)
{
  std::string out;
  for (const auto & [frame, list] : dets) {
    for (const auto & d : list) {
      Detection copy = d;
      copy.frame_index = frame;
      out += detection_json_line(copy);
      out += '\n';
    }
  }
  return out;
}

ReportFormat parse_report_format(const std::string & name)
{
  if (name == "csv") {
    return ReportFormat::kCsv;
  }
  if (name == "json") {
    return ReportFormat::kJson;
  }
  throw ParamError("report format must be csv or json");
}

namespace
{

constexpr const char * kReportHeader = "method,total_seconds,fps,first_detection_frame,seconds_before_crash";

std::string csv_quote(const std::string & s)
{
  if (s.find_first_of(",\"\n") == std::string::npos) {
    return s;
  }
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') {
      out += '"';
    }
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::string> csv_fields(const std::string & line)
{
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

template<typename T>
std::string cell(const std::optional<T> & v)
{
  if (!v) {
    return {};
  }
  if constexpr (std::is_floating_point_v<T>) {
    return format_double(*v);
  } else {
    return std::to_string(*v);
  }
}

template<typename T>
std::optional<T> parse_cell(const std::string & s, std::size_t lineno)
{
  if (s.empty()) {
    return std::nullopt;
  }
  auto v = parse_number<T>(s);
  if (!v) {
    throw FormatError("report line " + std::to_string(lineno) + ": bad number '" + s + "'");
  }
  return v;
}

template<typename T>
nlohmann::ordered_json json_cell(const std::optional<T> & v)
{
  return v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json(nullptr);
}

template<typename T>
std::optional<T> from_json_cell(const nlohmann::json & j, const char * key)
{
  if (!j.contains(key) || j.at(key).is_null()) {
    return std::nullopt;
  }
  return j.at(key).get<T>();
}

}  // namespace

std::string format_report(std::span<const BenchRecord> records, ReportFormat format)
{
  if (format == ReportFormat::kCsv) {
    std::string out = std::string(kReportHeader) + "\n";
    for (const auto & r : records) {
      out += csv_quote(r.method) + ',' + cell(r.total_seconds) + ',' + cell(r.fps) + ',' +
        cell(r.first_detection_frame) + ',' + cell(r.seconds_before_crash) + '\n';
    }
    return out;
  }
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto & r : records) {
    nlohmann::ordered_json o;
    o["method"] = r.method;
    o["total_seconds"] = json_cell(r.total_seconds);
    o["fps"] = json_cell(r.fps);
    o["first_detection_frame"] = json_cell(r.first_detection_frame);
    o["seconds_before_crash"] = json_cell(r.seconds_before_crash);
    arr.push_back(std::move(o));
  }
  return arr.dump(2) + "\n";
}

std::vector<BenchRecord> parse_report(const std::string & text, ReportFormat format)
{
  std::vector<BenchRecord> records;
  if (format == ReportFormat::kCsv) {
    std::istringstream in(text);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (!line.empty() && line.back() == '\r') {
        line.pop_back();
      }
      if (lineno == 1) {
        if (line != kReportHeader) {
          throw FormatError("report header mismatch");
        }
        continue;
      }
      if (line.empty()) {
        continue;
      }
      const auto f = csv_fields(line);
      if (f.size() != 5) {
        throw FormatError("report line " + std::to_string(lineno) + ": expected 5 columns");
      }
      BenchRecord r;
      r.method = f[0];
      r.total_seconds = parse_cell<double>(f[1], lineno);
      r.fps = parse_cell<double>(f[2], lineno);
      r.first_detection_frame = parse_cell<long long>(f[3], lineno);
      r.seconds_before_crash = parse_cell<double>(f[4], lineno);
      records.push_back(std::move(r));
    }
    return records;
  }
  nlohmann::json arr;
  try {
    arr = nlohmann::json::parse(text);
    for (const auto & o : arr) {
      BenchRecord r;
      r.method = o.at("method").get<std::string>();
      r.total_seconds = from_json_cell<double>(o, "total_seconds");
      r.fps = from_json_cell<double>(o, "fps");
      r.first_detection_frame = from_json_cell<long long>(o, "first_detection_frame");
      r.seconds_before_crash = from_json_cell<double>(o, "seconds_before_crash");
      records.push_back(std::move(r));
    }
  } catch (const nlohmann::json::exception & e) {
    throw FormatError(std::string("malformed JSON report: ") + e.what());
  }
  return records;
}

void write_report(std::span<const BenchRecord> records, const fs::path & path, ReportFormat format)
{
  write_text(path, format_report(records, format));
}

std::vector<BenchRecord> read_report(const fs::path & path, ReportFormat format)
{
  return parse_report(read_text(path), format);
}

// ---------------------------------------------------------------------------

Frame candidate_mask(const Frame & frame, const CandidateFilterParams & params)
{
  validate(params);
  const Frame gray = to_grayscale(frame);
  const Labeling labeling = label_components(
    adaptive_binarize(gray, params.adaptive_window, params.adaptive_offset));
  const auto survivors = filter_candidates(labeling.components, gray.height(), params);
  std::vector<std::uint8_t> keep(labeling.components.size() + 1, 0);
  for (const auto & c : survivors) {
    keep[static_cast<std::size_t>(c.label)] = 255;
  }
  Frame mask(gray.width(), gray.height(), 1);
  auto dst = mask.data();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    dst[i] = keep[static_cast<std::size_t>(labeling.labels.data[i])];
  }
  return mask;
}

Frame corner_map(const Frame & gray, const HarrisParams & params)
{
  Frame map(gray.width(), gray.height(), 1);
  for (const auto & c : harris(gray, params)) {
    map.at(c.x, c.y) = 255;
  }
  return map;
}

std::vector<BenchMethod> enhancement_methods(const EnhanceSuiteConfig & config)
{
  std::vector<BenchMethod> methods;
  auto stateless = [&](std::string name, FrameTransform t) {
      methods.push_back({std::move(name), [t]() {return t;}, false});
    };
  stateless("Histogram Equalization", [](const Frame & f) {
      return hist_equalize(to_grayscale(f));
    });
  stateless("Canny Edge Detection", [p = config.canny](const Frame & f) {
      return canny(to_grayscale(f), p);
    });
  stateless("Binary Thresholding", [t = config.threshold](const Frame & f) {
      return binary_threshold(to_grayscale(f), t);
    });
  stateless("Gamma Correction", [p = config.gamma](const Frame & f) {
      return gamma_correct(f, p);
    });
  stateless("CLAHE", [p = config.clahe](const Frame & f) {
      return clahe(to_grayscale(f), p);
    });
  stateless("Adaptive Threshold Segmentation", [p = config.segment](const Frame & f) {
      return candidate_mask(f, p);
    });
  auto motion = [](GmmParams params) -> TransformFactory {
      return [params]() -> FrameTransform {
               auto model = std::make_shared<std::optional<BackgroundModel>>();
               return [params, model](const Frame & f) {
                        const Frame gray = to_grayscale(f);
                        if (!model->has_value()) {
                          model->emplace(gmm_init(params, gray.width(), gray.height()));
                        }
                        return gmm_update(**model, gray);
                      };
             };
    };
  GmmParams shadows = config.gmm;
  shadows.detect_shadows = true;
  GmmParams no_shadows = config.gmm;
  no_shadows.detect_shadows = false;
  methods.push_back({"Motion Map (Shadows)", motion(shadows), true});
  methods.push_back({"Motion Map (No Shadows)", motion(no_shadows), true});
  stateless("Harris Corner Detection", [p = config.harris](const Frame & f) {
      return corner_map(to_grayscale(f), p);
    });
  return methods;
}

}  // namespace nightwatch
