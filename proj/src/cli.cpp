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


#include "nightwatch/cli.hpp"

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <regex>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "nightwatch/bench.hpp"
#include "nightwatch/detect.hpp"
#include "nightwatch/enhance.hpp"
#include "nightwatch/errors.hpp"
#include "nightwatch/motionedge.hpp"
#include "nightwatch/parallel.hpp"
#include "nightwatch/segment.hpp"

namespace nightwatch
{

namespace fs = std::filesystem;

namespace
{

struct Options
{
  std::string config;
  std::string input;
  std::string output;
  double fps = 24.0;
  int jobs = 1;

  std::string method;
  double gamma = 3.5;
  std::string tiles = "8x8";
  double clip = 2.0;
  int threshold = 128;
  double sigma = 1.0;
  double low = 20.0;
  double high = 60.0;
  std::string shadows = "on";
  double harris_k = 0.04;
  double harris_threshold = 0.01;
  double learning_rate = 0.005;

  int min_area = 50;
  int max_area = 10000;
  double margin = 0.10;
  double min_area_ratio = 0.5;
  int window = 31;
  int offset = 10;

  std::string model;
  std::vector<std::string> train;
  double score_threshold = 0.0;
  double scale_step = 1.05;
  int stride = 8;
  double nms_iou = 0.3;
  int max_levels = 64;
  std::string annotate;

  std::string suite = "enhance";
  std::string gt;
  std::string report;
  std::string format;
  std::vector<std::string> ingest;
  int warmup = 5;
  double iou_min = 0.5;

  std::string pos_dir;
  std::string neg_dir;
  std::uint64_t seed = 1;
  double lambda = 1e-2;
  int epochs = 100;
  std::string hard_negatives;
};

struct Parser
{
  CLI::App app{"Low-light enhancement, pedestrian detection and benchmarking", "nightwatch"};
  Options o;
  CLI::App * enhance = nullptr;
  CLI::App * detect = nullptr;
  CLI::App * bench = nullptr;
  CLI::App * segment = nullptr;
  CLI::App * train = nullptr;

  /// A lenient parser leaves required options optional; it only serves to
  /// find --config before the values from the file are merged in.
  explicit Parser(bool strict = true)
  {
    app.require_subcommand(1);
    app.set_version_flag("--version", "nightwatch 0.1.0");

    auto common = [this, strict](CLI::App * sub, bool needs_input) {
        sub->add_option("--config", o.config, "Flat key=value file; flags override it");
        auto * in = sub->add_option("--in", o.input, "Frame directory or glob pattern (pgm/ppm/png)");
        if (needs_input && strict) {
          in->required(strict);
        }
        sub->add_option("--jobs", o.jobs, "Frame-parallel workers for stateless methods")
        ->check(CLI::PositiveNumber)->capture_default_str();
      };
    auto enhance_flags = [this](CLI::App * sub) {
        sub->add_option("--gamma", o.gamma, "Gamma; > 1 lightens")->check(CLI::PositiveNumber)
        ->capture_default_str();
        sub->add_option("--tiles", o.tiles, "CLAHE tile grid as TXxTY")->capture_default_str();
        sub->add_option("--clip", o.clip, "CLAHE clip limit, multiple of the uniform bin height")
        ->capture_default_str();
        sub->add_option("--t", o.threshold, "Binary threshold level")->check(CLI::Range(0, 255))
        ->capture_default_str();
        sub->add_option("--sigma", o.sigma, "Canny smoothing sigma")->capture_default_str();
        sub->add_option("--low", o.low, "Canny low hysteresis threshold")->capture_default_str();
        sub->add_option("--high", o.high, "Canny high hysteresis threshold")->capture_default_str();
        sub->add_option("--shadows", o.shadows, "Motion map shadow labelling")
        ->check(CLI::IsMember({"on", "off"}))->capture_default_str();
        sub->add_option("--harris-k", o.harris_k, "Harris sensitivity k")->capture_default_str();
        sub->add_option("--harris-threshold", o.harris_threshold, "Harris peak fraction of the maximum")
        ->capture_default_str();
        sub->add_option("--learning-rate", o.learning_rate, "Motion model learning rate")
        ->capture_default_str();
      };
    auto segment_flags = [this](CLI::App * sub) {
        sub->add_option("--min-area", o.min_area, "Smallest candidate area in pixels")->capture_default_str();
        sub->add_option("--max-area", o.max_area, "Largest candidate area in pixels")->capture_default_str();
        sub->add_option("--margin", o.margin, "Top/bottom margin as a fraction of the height")
        ->capture_default_str();
        sub->add_option("--min-area-ratio", o.min_area_ratio, "Smallest area / bbox area")
        ->capture_default_str();
        sub->add_option("--window", o.window, "Adaptive threshold window (odd)")->capture_default_str();
        sub->add_option("--offset", o.offset, "Adaptive threshold offset")->capture_default_str();
      };
    auto pyramid_flags = [this](CLI::App * sub) {
        sub->add_option("--score-threshold", o.score_threshold, "Override the model decision threshold");
        sub->add_option("--scale-step", o.scale_step, "Pyramid scale factor (> 1)")->capture_default_str();
        sub->add_option("--stride", o.stride, "Window stride in pixels")->capture_default_str();
        sub->add_option("--nms-iou", o.nms_iou, "IoU at which overlapping detections merge")
        ->capture_default_str();
        sub->add_option("--max-levels", o.max_levels, "Pyramid level cap")->capture_default_str();
      };

    enhance = app.add_subcommand("enhance", "Apply one enhancement or motion/edge method to every frame");
    common(enhance, true);
    enhance->add_option("--method", o.method, "Method to apply")->required(strict)
    ->check(CLI::IsMember({"gamma", "he", "clahe", "threshold", "canny", "harris", "motion"}));
    enhance->add_option("--out", o.output, "Output directory")->required(strict);
    enhance_flags(enhance);

    detect = app.add_subcommand("detect", "Run the HOG+SVM pedestrian detector");
    common(detect, true);
    detect->add_option("--model", o.model, "Model file");
    detect->add_option("--train", o.train, "Train first from POS_DIR NEG_DIR")->expected(2);
    detect->add_option("--out", o.output, "Detection JSON lines (stdout when omitted)");
    detect->add_option("--annotate", o.annotate, "Directory for boxed RGB frames");
    detect->add_option("--seed", o.seed, "Training seed with --train")->capture_default_str();
    pyramid_flags(detect);

    bench = app.add_subcommand("bench", "Time every method and score detection timeliness");
    common(bench, true);
    bench->add_option("--suite", o.suite, "Which methods to run")
    ->check(CLI::IsMember({"enhance", "detect", "all"}))->capture_default_str();
    bench->add_option("--gt", o.gt, "Ground-truth CSV");
    bench->add_option("--report", o.report, "Report path (stdout when omitted)");
    bench->add_option("--format", o.format, "Report format; defaults from the report extension")
    ->check(CLI::IsMember({"csv", "json"}));
    bench->add_option("--ingest", o.ingest, "External detections as NAME=PATH[@SECONDS]");
    bench->add_option("--model", o.model, "HOG+SVM model for the detect suite");
    bench->add_option("--warmup", o.warmup, "Untimed warm-up frames per method")
    ->check(CLI::NonNegativeNumber)->capture_default_str();
    bench->add_option("--fps", o.fps, "Frame rate; the ground-truth mark wins when omitted")
      ->check(CLI::PositiveNumber)->capture_default_str();
    bench->add_option("--iou", o.iou_min, "IoU needed to match a ground-truth box")->capture_default_str();
    enhance_flags(bench);
    segment_flags(bench);
    pyramid_flags(bench);

    segment = app.add_subcommand("segment", "Adaptive-threshold pedestrian candidates as JSON lines");
    common(segment, true);
    segment->add_option("--out", o.output, "Output JSON lines (stdout when omitted)");
    segment_flags(segment);

    train = app.add_subcommand("train", "Train a linear SVM on HOG crops");
    train->add_option("--config", o.config, "Flat key=value file; flags override it");
    train->add_option("pos", o.pos_dir, "Positive crop directory")->required(strict);
    train->add_option("neg", o.neg_dir, "Negative crop directory")->required(strict);
    train->add_option("--out", o.output, "Model file to write")->required(strict);
    train->add_option("--seed", o.seed, "Shuffle seed")->capture_default_str();
    train->add_option("--lambda", o.lambda, "Regularization strength")->check(CLI::PositiveNumber)
    ->capture_default_str();
    train->add_option("--epochs", o.epochs, "Passes over the data")->check(CLI::PositiveNumber)
    ->capture_default_str();
    train->add_option("--hard-negatives", o.hard_negatives, "Person-free frames to mine once");
    train->add_option("--score-threshold", o.score_threshold, "Decision threshold stored in the model")
    ->capture_default_str();
  }

  /// True when the selected subcommand received `flag` from the command line.
  bool given(const std::string & flag) const
  {
    const CLI::App * sub = selected();
    const CLI::Option * opt = sub ? sub->get_option_no_throw(flag) : nullptr;
    return opt != nullptr && opt->count() > 0;
  }

  CLI::App * selected() const
  {
    for (CLI::App * sub : {enhance, detect, bench, segment, train}) {
      if (sub->parsed()) {
        return sub;
      }
    }
    return nullptr;
  }
};

std::string trim(const std::string & s)
{
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) {
    return {};
  }
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

/// Extra command-line tokens for config entries the command line left unset.
std::vector<std::string> config_arguments(const fs::path & path, CLI::App & sub)
{
  std::ifstream in(path);
  if (!in) {
    throw ParamError("cannot read config file " + path.string());
  }
  std::vector<std::string> args;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t.front() == '#') {
      continue;
    }
    const auto eq = t.find('=');
    const std::string where = path.string() + ":" + std::to_string(lineno);
    if (eq == std::string::npos) {
      throw ParamError(where + ": expected key=value");
    }
    const std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    CLI::Option * opt = key.empty() || key == "config" || key == "help" ?
      nullptr : sub.get_option_no_throw("--" + key);
    if (opt == nullptr) {
      throw ParamError(where + ": unknown key '" + key + "' for " + sub.get_name());
    }
    if (opt->count() > 0) {
      continue;   // the command line wins
    }
    args.push_back("--" + key);
    std::istringstream tokens(value);
    std::string tok;
    if (opt->get_expected_max() > 1) {
      while (tokens >> tok) {
        args.push_back(tok);
      }
    } else {
      args.push_back(value);
    }
  }
  return args;
}

bool has_wildcard(const std::string & s)
{
  return s.find_first_of("*?") != std::string::npos;
}

void require_input(const std::string & pattern)
{
  const fs::path p(pattern);
  if (fs::exists(p)) {
    return;
  }
  if (has_wildcard(p.filename().string())) {
    const fs::path parent = p.parent_path().empty() ? fs::path(".") : p.parent_path();
    if (fs::is_directory(parent)) {
      return;
    }
  }
  throw ParamError("input not found: " + pattern);
}

void require_file(const std::string & path, const std::string & what)
{
  if (!fs::is_regular_file(path)) {
    throw ParamError(what + " not found: " + path);
  }
}

void require_dir(const std::string & path, const std::string & what)
{
  if (!fs::is_directory(path)) {
    throw ParamError(what + " is not a directory: " + path);
  }
}

void require_writable_dir(const std::string & path)
{
  if (fs::exists(path) && !fs::is_directory(path)) {
    throw ParamError("output exists and is not a directory: " + path);
  }
}

ClaheParams clahe_params(const Options & o)
{
  static const std::regex grid(R"(^\s*(\d+)\s*[xX]\s*(\d+)\s*$)");
  std::smatch m;
  if (!std::regex_match(o.tiles, m, grid)) {
    throw ParamError("--tiles must look like 8x8");
  }
  ClaheParams p;
  try {
    p.tiles_x = std::stoi(m[1]);
    p.tiles_y = std::stoi(m[2]);
  } catch (const std::out_of_range &) {
    throw ParamError("--tiles value out of range");
  }
  p.clip_limit = o.clip;
  if (p.tiles_x < 1 || p.tiles_y < 1) {
    throw ParamError("CLAHE tile counts must be >= 1");
  }
  if (!(p.clip_limit >= 1.0)) {
    throw ParamError("CLAHE clip limit must be >= 1");
  }
  return p;
}

CannyParams canny_params(const Options & o)
{
  if (!(o.sigma > 0.0) || !(o.low >= 0.0) || !(o.low < o.high)) {
    throw ParamError("canny needs sigma > 0 and 0 <= low < high");
  }
  return {o.sigma, o.low, o.high};
}

HarrisParams harris_params(const Options & o)
{
  HarrisParams p;
  p.k = o.harris_k;
  p.response_threshold = o.harris_threshold;
  if (!(p.k > 0.0 && p.k < 0.25) || !(p.response_threshold >= 0.0 && p.response_threshold <= 1.0)) {
    throw ParamError("harris needs 0 < k < 0.25 and a threshold in [0, 1]");
  }
  return p;
}

GmmParams gmm_params(const Options & o)
{
  GmmParams p;
  p.learning_rate = o.learning_rate;
  p.detect_shadows = o.shadows == "on";
  (void)gmm_init(p, 1, 1);   // validates
  return p;
}

CandidateFilterParams segment_params(const Options & o)
{
  CandidateFilterParams p;
  p.min_area = o.min_area;
  p.max_area = o.max_area;
  p.margin_fraction = o.margin;
  p.min_area_ratio = o.min_area_ratio;
  p.adaptive_window = o.window;
  p.adaptive_offset = o.offset;
  validate(p);
  return p;
}

PyramidParams pyramid_params(const Options & o)
{
  PyramidParams p;
  p.scale_step = o.scale_step;
  p.window_stride = o.stride;
  p.nms_iou = o.nms_iou;
  p.max_levels = o.max_levels;
  validate(p);
  return p;
}

EnhanceSuiteConfig suite_config(const Options & o)
{
  EnhanceSuiteConfig c;
  c.gamma = GammaParams{o.gamma};
  (void)gamma_lut(o.gamma);   // validates
  c.clahe = clahe_params(o);
  if (o.threshold < 0 || o.threshold > 255) {
    throw ParamError("threshold must be in [0, 255]");
  }
  c.threshold = o.threshold;
  c.canny = canny_params(o);
  c.harris = harris_params(o);
  c.gmm = gmm_params(o);
  c.segment = segment_params(o);
  return c;
}

fs::path output_name(const Sequence & seq, std::size_t i, int channels)
{
  std::string stem = seq.paths.size() > i ? seq.paths[i].stem().string() : "";
  if (stem.empty()) {
    std::ostringstream s;
    s << "frame_" << i;
    stem = s.str();
  }
  return stem + (channels == 1 ? ".pgm" : ".ppm");
}

class OutputStream
{
public:
  OutputStream(const std::string & path, std::ostream & fallback)
  : stream_(&fallback)
  {
    if (!path.empty() && path != "-") {
      if (fs::path(path).has_parent_path()) {
        fs::create_directories(fs::path(path).parent_path());
      }
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_) {
        throw IoError("cannot write " + path);
      }
      stream_ = &file_;
      path_ = path;
    }
  }

  std::ostream & get() {return *stream_;}

  void close()
  {
    stream_->flush();
    if (!*stream_) {
      throw IoError("write failed for " + (path_.empty() ? std::string("standard output") : path_));
    }
  }

private:
  std::ofstream file_;
  std::ostream * stream_;
  std::string path_;
};

// ---------------------------------------------------------------------------

int cmd_enhance(const Parser & p, std::ostream & err)
{
  const Options & o = p.o;
  FrameTransform method;
  bool stateful = false;
  if (o.method == "gamma") {
    const GammaParams g{o.gamma};
    (void)gamma_lut(o.gamma);
    method = [g](const Frame & f) {return gamma_correct(f, g);};
  } else if (o.method == "he") {
    method = [](const Frame & f) {return hist_equalize(to_grayscale(f));};
  } else if (o.method == "clahe") {
    const ClaheParams c = clahe_params(o);
    method = [c](const Frame & f) {return clahe(to_grayscale(f), c);};
  } else if (o.method == "threshold") {
    const int t = o.threshold;
    method = [t](const Frame & f) {return binary_threshold(to_grayscale(f), t);};
  } else if (o.method == "canny") {
    const CannyParams c = canny_params(o);
    method = [c](const Frame & f) {return canny(to_grayscale(f), c);};
  } else if (o.method == "harris") {
    const HarrisParams h = harris_params(o);
    method = [h](const Frame & f) {return corner_map(to_grayscale(f), h);};
  } else {
    stateful = true;
  }
  const GmmParams gmm = stateful ? gmm_params(o) : GmmParams{};
  require_input(o.input);
  require_writable_dir(o.output);

  int jobs = o.jobs;
  if (stateful && jobs > 1) {
    err << "warning: --jobs ignored for the motion method (frames depend on each other)\n";
    jobs = 1;
  }
  const Sequence seq = load_sequence(o.input);
  fs::create_directories(o.output);
  if (stateful) {
    std::optional<BackgroundModel> model;
    for (std::size_t i = 0; i < seq.frames.size(); ++i) {
      const Frame gray = to_grayscale(seq.frames[i]);
      if (!model) {
        model.emplace(gmm_init(gmm, gray.width(), gray.height()));
      }
      const Frame mask = gmm_update(*model, gray);
      save_frame(mask, fs::path(o.output) / output_name(seq, i, 1));
    }
  } else {
    parallel_for_frames(seq.frames.size(), jobs, [&](std::size_t i) {
        const Frame result = method(seq.frames[i]);
        save_frame(result, fs::path(o.output) / output_name(seq, i, result.channels()));
      });
  }
  return kExitOk;
}

LinearModel obtain_model(const Options & o, const HogParams & hog)
{
  if (!o.train.empty()) {
    SvmTrainParams params;
    params.seed = o.seed;
    const CropDataset data = load_crop_dataset(o.train[0], o.train[1], hog);
    return train_detector(data, params, {}, hog);
  }
  return load_model(o.model);
}

void check_detector_source(const Options & o, bool required)
{
  if (!o.model.empty() && !o.train.empty()) {
    throw ParamError("use either --model or --train, not both");
  }
  if (!o.model.empty()) {
    require_file(o.model, "model file");
  } else if (!o.train.empty()) {
    require_dir(o.train[0], "positive crop directory");
    require_dir(o.train[1], "negative crop directory");
  } else if (required) {
    throw ParamError("detect needs --model or --train POS NEG");
  }
}

int cmd_detect(const Parser & p, std::ostream & out)
{
  const Options & o = p.o;
  const HogParams hog;
  const PyramidParams pyr = pyramid_params(o);
  check_detector_source(o, true);
  require_input(o.input);
  if (!o.annotate.empty()) {
    require_writable_dir(o.annotate);
  }

  LinearModel model = obtain_model(o, hog);
  if (p.given("--score-threshold")) {
    model.score_threshold = o.score_threshold;
  }
  const Sequence seq = load_sequence(o.input);
  std::vector<std::vector<Detection>> found(seq.frames.size());
  parallel_for_frames(seq.frames.size(), o.jobs, [&](std::size_t i) {
      found[i] = detect_pedestrians(to_grayscale(seq.frames[i]), model, hog, pyr);
      for (auto & d : found[i]) {
        d.frame_index = static_cast<long long>(i);
      }
    });

  OutputStream sink(o.output, out);
  for (const auto & list : found) {
    for (const auto & d : list) {
      sink.get() << detection_json_line(d) << '\n';
    }
  }
  sink.close();

  if (!o.annotate.empty()) {
    fs::create_directories(o.annotate);
    parallel_for_frames(seq.frames.size(), o.jobs, [&](std::size_t i) {
        std::vector<BoxAnnotation> boxes;
        for (const auto & d : found[i]) {
          boxes.push_back({d.bbox, d.label, d.score});
        }
        save_frame(draw_boxes(seq.frames[i], boxes), fs::path(o.annotate) / output_name(seq, i, 3));
      });
  }
  return kExitOk;
}

int cmd_segment(const Parser & p, std::ostream & out)
{
  const Options & o = p.o;
  const CandidateFilterParams params = segment_params(o);
  require_input(o.input);

  const Sequence seq = load_sequence(o.input);
  std::vector<std::vector<BoundingBox>> boxes(seq.frames.size());
  parallel_for_frames(seq.frames.size(), o.jobs, [&](std::size_t i) {
      boxes[i] = pedestrian_candidates(seq.frames[i], params);
    });
  OutputStream sink(o.output, out);
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    nlohmann::ordered_json line;
    line["frame"] = i;
    line["boxes"] = nlohmann::ordered_json::array();
    for (const auto & b : boxes[i]) {
      line["boxes"].push_back({b.x, b.y, b.w, b.h});
    }
    sink.get() << line.dump() << '\n';
  }
  sink.close();
  return kExitOk;
}

int cmd_train(const Parser & p)
{
  const Options & o = p.o;
  require_dir(o.pos_dir, "positive crop directory");
  require_dir(o.neg_dir, "negative crop directory");
  if (!o.hard_negatives.empty()) {
    require_input(o.hard_negatives);
  }
  if (fs::is_directory(o.output)) {
    throw ParamError("model output is a directory: " + o.output);
  }
  const HogParams hog;
  SvmTrainParams params;
  params.seed = o.seed;
  params.lambda = o.lambda;
  params.epochs = o.epochs;

  const CropDataset data = load_crop_dataset(o.pos_dir, o.neg_dir, hog);
  std::vector<Frame> hard;
  if (!o.hard_negatives.empty()) {
    for (const auto & f : load_sequence(o.hard_negatives).frames) {
      hard.push_back(to_grayscale(f));
    }
  }
  LinearModel model = train_detector(data, params, hard, hog);
  model.score_threshold = o.score_threshold;
  if (fs::path(o.output).has_parent_path()) {
    fs::create_directories(fs::path(o.output).parent_path());
  }
  save_model(model, o.output);
  return kExitOk;
}

struct IngestSpec
{
  std::string name;
  std::string path;
  std::optional<double> seconds;
};

IngestSpec parse_ingest(const std::string & spec)
{
  const auto eq = spec.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == spec.size()) {
    throw ParamError("--ingest expects NAME=PATH[@SECONDS], got '" + spec + "'");
  }
  IngestSpec s{spec.substr(0, eq), spec.substr(eq + 1), std::nullopt};
  const auto at = s.path.rfind('@');
  if (at != std::string::npos) {
    const std::string tail = s.path.substr(at + 1);
    double v = 0.0;
    std::size_t used = 0;
    try {
      v = std::stod(tail, &used);
    } catch (const std::exception &) {
      used = 0;
    }
    if (used == tail.size() && !tail.empty()) {
      if (!(v > 0.0)) {
        throw ParamError("--ingest seconds must be positive in '" + spec + "'");
      }
      s.seconds = v;
      s.path = s.path.substr(0, at);
    }
  }
  return s;
}

int cmd_bench(const Parser & p, std::ostream & out, std::ostream & err)
{
  const Options & o = p.o;
  const bool run_enhance = o.suite == "enhance" || o.suite == "all";
  const bool run_detect = o.suite == "detect" || o.suite == "all";
  const EnhanceSuiteConfig config = suite_config(o);
  const HogParams hog;
  const PyramidParams pyr = pyramid_params(o);
  ReportFormat format = ReportFormat::kCsv;
  if (!o.format.empty()) {
    format = parse_report_format(o.format);
  } else if (!o.report.empty()) {
    const std::string ext = fs::path(o.report).extension().string();
    if (ext == ".json") {
      format = ReportFormat::kJson;
    } else if (ext != ".csv") {
      throw ParamError("cannot infer report format from '" + o.report + "'; pass --format");
    }
  }
  if (!(o.iou_min > 0.0 && o.iou_min <= 1.0)) {
    throw ParamError("--iou must be in (0, 1]");
  }
  std::vector<IngestSpec> ingests;
  for (const auto & spec : o.ingest) {
    ingests.push_back(parse_ingest(spec));
  }
  if (run_detect) {
    if (o.gt.empty()) {
      throw ParamError("--suite " + o.suite + " needs --gt");
    }
    require_file(o.gt, "ground truth");
    check_detector_source(o, false);
    if (o.model.empty() && ingests.empty()) {
      throw ParamError("the detect suite needs --model or at least one --ingest");
    }
    for (const auto & s : ingests) {
      require_file(s.path, "detections for " + s.name);
    }
  } else if (!ingests.empty() || !o.gt.empty()) {
    err << "warning: --gt and --ingest are only used by the detect suite\n";
  }
  require_input(o.input);
  if (fs::is_directory(o.report)) {
    throw ParamError("report path is a directory: " + o.report);
  }

  const Sequence seq = load_sequence(o.input);
  const std::size_t warmup = static_cast<std::size_t>(o.warmup);
  std::vector<BenchRecord> records;
  if (run_enhance) {
    for (const auto & m : enhancement_methods(config)) {
      if (o.jobs > 1 && m.stateful) {
        err << "warning: --jobs ignored for " << m.name << " (frames depend on each other)\n";
      }
      if (o.jobs > 1 && !m.stateful) {
        records.push_back(time_method_parallel(m.name, m.factory(), seq.frames, o.jobs, warmup));
      } else {
        records.push_back(time_method(m.name, m.factory, seq.frames, warmup));
      }
    }
  }

  std::optional<GroundTruth> gt;
  double fps = o.fps;
  if (run_detect) {
    gt = load_ground_truth(o.gt);
    validate(*gt, seq.frames.size(), seq.frames.front().width(), seq.frames.front().height());
    if (!p.given("--fps") && gt->fps) {
      fps = *gt->fps;
    }
    if (!o.model.empty()) {
      LinearModel model = load_model(o.model);
      if (p.given("--score-threshold")) {
        model.score_threshold = o.score_threshold;
      }
      std::vector<Frame> gray;
      gray.reserve(seq.frames.size());
      for (const auto & f : seq.frames) {
        gray.push_back(to_grayscale(f));
      }
      DetectorRun run = time_detector(
        "HOG + SVM",
        [&](const Frame & f, long long) {return detect_pedestrians(f, model, hog, pyr);},
        gray, warmup);
      score_timeliness(run.record, run.detections, *gt, fps, o.iou_min);
      records.push_back(run.record);
    }
    for (const auto & s : ingests) {
      BenchRecord r;
      r.method = s.name;
      if (s.seconds) {
        r.total_seconds = *s.seconds;
        r.fps = static_cast<double>(seq.frames.size()) / *s.seconds;
      }
      score_timeliness(r, ingest_external_detections(s.path), *gt, fps, o.iou_min);
      records.push_back(std::move(r));
    }
  }

  OutputStream sink(o.report, out);
  sink.get() << format_report(records, format);
  sink.close();
  if (gt) {
    const std::string note = timeline_note(*gt, fps, records);
    if (o.report.empty() || o.report == "-") {
      err << note;
    } else {
      OutputStream notes(o.report + ".notes.txt", out);
      notes.get() << note;
      notes.close();
    }
  }
  return kExitOk;
}

int dispatch(const Parser & p, std::ostream & out, std::ostream & err)
{
  CLI::App * sub = p.selected();
  if (sub == p.enhance) {
    return cmd_enhance(p, err);
  }
  if (sub == p.detect) {
    return cmd_detect(p, out);
  }
  if (sub == p.bench) {
    return cmd_bench(p, out, err);
  }
  if (sub == p.segment) {
    return cmd_segment(p, out);
  }
  return cmd_train(p);
}

int parse_error(Parser & p, const CLI::ParseError & e, std::ostream & out, std::ostream & err)
{
  const int code = p.app.exit(e, out, err);
  return code == 0 ? kExitOk : kExitUsage;
}

}  // namespace

int run_cli(int argc, const char * const * argv, std::ostream & out, std::ostream & err)
{
  std::vector<std::string> args(argv + 1, argv + argc);
  const bool with_config = std::any_of(args.begin(), args.end(), [](const std::string & a) {
        return a == "--config" || a.rfind("--config=", 0) == 0;
      });
  auto parser = std::make_unique<Parser>(!with_config);
  try {
    try {
      parser->app.parse(argc, argv);
    } catch (const CLI::ParseError & e) {
      return parse_error(*parser, e, out, err);
    }
    if (with_config) {
      CLI::App * sub = parser->selected();
      std::vector<std::string> extra;
      if (!parser->o.config.empty()) {
        extra = config_arguments(parser->o.config, *sub);
      }
      // Subcommand options may follow positionals of the subcommand.
      args.insert(args.end(), extra.begin(), extra.end());
      std::vector<const char *> full{argv[0]};
      for (const auto & a : args) {
        full.push_back(a.c_str());
      }
      parser = std::make_unique<Parser>();
      try {
        parser->app.parse(static_cast<int>(full.size()), full.data());
      } catch (const CLI::ParseError & e) {
        return parse_error(*parser, e, out, err);
      }
    }
    return dispatch(*parser, out, err);
  } catch (const ParamError & e) {
    err << "nightwatch: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception & e) {
    err << "nightwatch: " << e.what() << '\n';
    return kExitRuntime;
  }
}

int run_cli(const std::vector<std::string> & args, std::ostream & out, std::ostream & err)
{
  std::vector<const char *> argv{"nightwatch"};
  for (const auto & a : args) {
    argv.push_back(a.c_str());
  }
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace nightwatch
