// nap: neuron-activation-pattern toolkit for LiDAR domain adaptation.
// Pipeline subcommands (extract, bank, layers, score, select) communicate
// through files so selection can be re-run with different budgets without
// re-reading activation dumps; statnorm, downsample, eval and schedule are
// standalone utilities.
//
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <deque>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "nap/align.hpp"
#include "nap/diversity.hpp"
#include "nap/error.hpp"
#include "nap/kitti_io.hpp"
#include "nap/layer_select.hpp"
#include "nap/metrics.hpp"
#include "nap/pattern.hpp"
#include "nap/pattern_bank.hpp"
#include "nap/pipeline.hpp"
#include "nap/schedules.hpp"

namespace {

using nlohmann::ordered_json;
namespace fs = std::filesystem;

void emit(const ordered_json& j, const std::string& out_path) {
  const std::string text = j.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path, std::ios::trunc);
    if (!out) throw nap::error("cannot write " + out_path);
    out << text;
    if (!out) throw nap::error("write failed: " + out_path);
  }
}

void emit_text(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path, std::ios::trunc);
    if (!out) throw nap::error("cannot write " + out_path);
    out << text;
    if (!out) throw nap::error("write failed: " + out_path);
  }
}

std::string resolve_layer(const std::vector<nap::ActivationRecord>& records,
                          const std::string& requested) {
  std::set<std::string> layers;
  for (const auto& rec : records) layers.insert(rec.layer_id);
  if (!requested.empty()) {
    if (!layers.count(requested)) {
      std::string known;
      for (const auto& l : layers) known += (known.empty() ? "" : ", ") + l;
      throw nap::error("layer '" + requested + "' not in dump (layers: " + known + ")");
    }
    return requested;
  }
  if (layers.size() == 1) return *layers.begin();
  std::string known;
  for (const auto& l : layers) known += (known.empty() ? "" : ", ") + l;
  throw nap::error("dump has " + std::to_string(layers.size()) + " layers (" + known +
                   "); pass --layer");
}

std::vector<fs::path> list_files(const fs::path& dir, const std::string& extension) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == extension)
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  return files;
}

nap::PatternBank load_bank(const std::string& bank_path,
                           const std::vector<nap::ActivationRecord>& records,
                           const std::string& layer) {
  if (!bank_path.empty()) {
    const auto patterns = nap::read_pattern_file(bank_path);
    return nap::PatternBank::build(patterns);
  }
  return nap::bank_from_dump(records, layer);
}

// ---- extract ------------------------------------------------------------

struct ExtractArgs {
  std::string dump, layer, role = "gt", out;
};

void run_extract(const ExtractArgs& a) {
  const auto records = nap::read_activation_dump(a.dump);
  const std::string layer = resolve_layer(records, a.layer);
  const nap::BoxRole role = nap::box_role_from_string(a.role);
  const auto patterns = nap::extract_patterns(records, layer, role);
  if (patterns.empty())
    throw nap::error("no records with layer '" + layer + "' and role '" + a.role + "'");
  nap::write_pattern_file(a.out, patterns);
  std::cerr << "extracted " << patterns.size() << " patterns (layer " << layer << ", role "
            << a.role << ", d=" << patterns.front().dim() << ") -> " << a.out << "\n";
}

// ---- bank ---------------------------------------------------------------

struct BankArgs {
  std::vector<std::string> pattern_files;
  std::string out;
};

void run_bank(const BankArgs& a) {
  std::vector<nap::BinaryPattern> all;
  for (const auto& path : a.pattern_files) {
    auto patterns = nap::read_pattern_file(path);
    all.insert(all.end(), patterns.begin(), patterns.end());
  }
  const nap::PatternBank bank = nap::PatternBank::build(all);  // validates dims
  nap::write_pattern_file(a.out, all);
  std::cerr << "bank of " << bank.size() << " patterns (d=" << bank.dim() << ") -> " << a.out
            << "\n";
}

// ---- layers -------------------------------------------------------------

struct LayersArgs {
  std::string dump, out;
};

void run_layers(const LayersArgs& a) {
  const auto records = nap::read_activation_dump(a.dump);
  const auto per_layer = nap::layer_distance_sets(records);
  if (per_layer.empty()) throw nap::error("dump has no records");
  const auto ranked = nap::rank_layers(per_layer);

  ordered_json out = ordered_json::array();
  for (const auto& score : ranked) {
    ordered_json item;
    item["layer"] = score.layer_id;
    if (score.defined)
      item["auroc"] = score.auroc;
    else
      item["auroc"] = nullptr;
    item["n_tp"] = score.n_tp;
    item["n_fp"] = score.n_fp;
    out.push_back(std::move(item));
  }
  emit(out, a.out);
}

// ---- score --------------------------------------------------------------

struct ScoreArgs {
  std::string dump, layer, bank, out;
  double score_threshold = -1;
  bool has_threshold = false;
};

void run_score(const ScoreArgs& a) {
  const auto records = nap::read_activation_dump(a.dump);
  const std::string layer = resolve_layer(records, a.layer);
  const nap::PatternBank bank = load_bank(a.bank, records, layer);
  const std::optional<double> threshold =
      a.has_threshold ? std::optional<double>(a.score_threshold) : std::nullopt;
  const auto frames = nap::build_frame_records(records, layer, bank, threshold);
  if (frames.empty()) throw nap::error("no det-role records for layer '" + layer + "'");

  ordered_json out;
  out["layer"] = layer;
  out["frames"] = ordered_json::array();
  for (const auto& f : frames) {
    ordered_json item;
    item["frame"] = f.frame_id;
    item["n_boxes"] = f.bit_counts.n_boxes;
    item["H"] = f.entropy;
    item["distances"] = f.distances;
    out["frames"].push_back(std::move(item));
  }
  emit(out, a.out);
}

// ---- select -------------------------------------------------------------

struct SelectArgs {
  std::string dump, layer, bank, out, list;
  std::size_t n = 10;
  std::size_t k = 0;
  std::size_t min_boxes = 1;
  double score_threshold = -1;
  bool has_threshold = false;
};

void run_select(const SelectArgs& a) {
  const auto records = nap::read_activation_dump(a.dump);
  const std::string layer = resolve_layer(records, a.layer);
  const nap::PatternBank bank = load_bank(a.bank, records, layer);

  nap::SelectionConfig cfg;
  cfg.target_count = a.n;
  cfg.proposal_size = a.k > 0 ? a.k : 10 * a.n;
  cfg.min_boxes = a.min_boxes;
  if (a.has_threshold) cfg.score_threshold = a.score_threshold;

  const auto frames = nap::build_frame_records(records, layer, bank, cfg.score_threshold);
  const auto result = nap::select_frames(frames, cfg);

  ordered_json out;
  out["config"] = {{"layer", layer},
                   {"n", cfg.target_count},
                   {"k", cfg.proposal_size},
                   {"min_boxes", cfg.min_boxes},
                   {"score_threshold",
                    cfg.score_threshold ? ordered_json(*cfg.score_threshold) : ordered_json()}};
  out["selected"] = ordered_json::array();
  std::string id_list;
  for (const auto& step : result.selected) {
    ordered_json item;
    item["iter"] = step.iter;
    item["frame"] = step.frame_id;
    item["H"] = step.raw_entropy;
    item["Dist"] = step.raw_dist;
    item["H_norm"] = step.norm_entropy;
    item["Dist_norm"] = step.norm_dist;
    item["product"] = step.product;
    out["selected"].push_back(std::move(item));
    id_list += step.frame_id + "\n";
  }
  emit(out, a.out);
  std::string list_path = a.list;
  if (list_path.empty() && !a.out.empty())
    list_path = fs::path(a.out).replace_extension(".txt").string();
  if (!list_path.empty()) emit_text(id_list, list_path);
}

// ---- statnorm -----------------------------------------------------------

struct StatnormArgs {
  std::string labels_dir, source, target, out_dir;
  std::string clouds_dir, clouds_out_dir;
  bool multiplicative = false;
};

void run_statnorm(const StatnormArgs& a) {
  const nap::SizeStats source = nap::resolve_size_stats(a.source);
  const nap::SizeStats target = nap::resolve_size_stats(a.target);
  std::vector<std::string> skipped;
  nap::SizeDelta delta;
  nap::SizeScale scale;
  if (a.multiplicative)
    scale = nap::compute_size_scale(source, target, &skipped);
  else
    delta = nap::compute_size_delta(source, target, &skipped);
  for (const auto& cls : skipped)
    std::cerr << "warning: class '" << cls << "' present on one side only, skipped\n";

  fs::create_directories(a.out_dir);
  if (!a.clouds_dir.empty()) fs::create_directories(a.clouds_out_dir);

  const auto files = list_files(a.labels_dir, ".txt");
  if (files.empty()) throw nap::error("no .txt label files in " + a.labels_dir);
  for (const auto& path : files) {
    const auto labels = nap::read_label_file(path);
    const auto adjusted = a.multiplicative ? nap::statnorm_labels_scaled(labels, scale)
                                           : nap::statnorm_labels(labels, delta);
    nap::write_label_file(fs::path(a.out_dir) / path.filename(), adjusted);

    if (!a.clouds_dir.empty()) {
      const fs::path cloud_path = fs::path(a.clouds_dir) / path.stem().concat(".bin");
      nap::PointCloud cloud = nap::read_point_cloud_file(cloud_path);
      for (std::size_t i = 0; i < labels.size(); ++i) {
        if (labels[i].l == adjusted[i].l && labels[i].w == adjusted[i].w &&
            labels[i].h == adjusted[i].h)
          continue;
        cloud =
            nap::statnorm_points(cloud, nap::to_box3d(labels[i]), nap::to_box3d(adjusted[i]));
      }
      nap::write_point_cloud_file(fs::path(a.clouds_out_dir) / cloud_path.filename(), cloud);
    }
  }
  std::cerr << "statnorm: " << files.size() << " label files -> " << a.out_dir << "\n";
}

// ---- downsample ---------------------------------------------------------

struct DownsampleArgs {
  std::string clouds_dir, out_dir;
  int source_beams = 64;
  int target_beams = 32;
};

void run_downsample(const DownsampleArgs& a) {
  fs::create_directories(a.out_dir);
  const auto files = list_files(a.clouds_dir, ".bin");
  if (files.empty()) throw nap::error("no .bin cloud files in " + a.clouds_dir);
  for (const auto& path : files) {
    const nap::PointCloud cloud = nap::read_point_cloud_file(path);
    std::vector<int> ids;
    fs::path sidecar = path;
    sidecar.replace_extension(".beam");
    if (fs::exists(sidecar))
      ids = nap::read_beam_sidecar(sidecar, cloud.size());
    else
      ids = nap::estimate_beams(cloud, a.source_beams);
    const auto out = nap::downsample_beams(cloud, ids, a.source_beams, a.target_beams);
    nap::write_point_cloud_file(fs::path(a.out_dir) / path.filename(), out);
  }
  std::cerr << "downsample: " << files.size() << " clouds " << a.source_beams << " -> "
            << a.target_beams << " beams -> " << a.out_dir << "\n";
}

// ---- eval ---------------------------------------------------------------

struct EvalArgs {
  std::string gt_dir, det_dir, cloud_dir, out, pr_csv;
  std::string ious = "0.5,0.7";
  std::vector<std::string> classes;
  std::size_t min_points = 50;
  bool r11 = false;
};

std::vector<double> parse_iou_list(const std::string& text) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string token =
        text.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
    if (!token.empty()) {
      try {
        out.push_back(std::stod(token));
      } catch (const std::exception&) {
        throw nap::error("bad --iou value '" + token + "'");
      }
      if (out.back() <= 0 || out.back() > 1) throw nap::error("--iou must be in (0, 1]");
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (out.empty()) throw nap::error("--iou list is empty");
  return out;
}

std::string format_iou(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

void run_eval(const EvalArgs& a) {
  const auto gt_files = list_files(a.gt_dir, ".txt");
  if (gt_files.empty()) throw nap::error("no .txt label files in " + a.gt_dir);
  const auto ious = parse_iou_list(a.ious);
  const std::vector<std::string> classes =
      a.classes.empty() ? std::vector<std::string>{"Car"} : a.classes;

  std::deque<nap::PointCloud> clouds;
  std::vector<nap::EvalFrame> frames;
  for (const auto& gt_path : gt_files) {
    nap::EvalFrame frame;
    for (const auto& label : nap::read_label_file(gt_path))
      frame.gts.push_back(nap::to_box3d(label));

    const fs::path det_path = fs::path(a.det_dir) / gt_path.filename();
    if (fs::exists(det_path)) {
      for (const auto& label : nap::read_label_file(det_path)) {
        if (!label.score)
          throw nap::error(det_path.string() + ": detection line without a score field");
        frame.dets.push_back(nap::to_box3d(label));
      }
    }

    if (!a.cloud_dir.empty()) {
      const fs::path cloud_path = fs::path(a.cloud_dir) / gt_path.stem().concat(".bin");
      clouds.push_back(nap::read_point_cloud_file(cloud_path));
      frame.cloud = &clouds.back();
    }
    frames.push_back(std::move(frame));
  }

  const auto interp = a.r11 ? nap::ApInterpolation::r11 : nap::ApInterpolation::r40;
  const std::size_t min_points = a.cloud_dir.empty() ? 0 : a.min_points;

  ordered_json out;
  std::string csv = "class,iou,score,recall,precision\n";
  for (const auto& cls : classes) {
    ordered_json per_iou;
    for (double iou : ious) {
      const auto eval = nap::evaluate_class(frames, cls, iou, min_points, interp);
      per_iou[format_iou(iou)] = {{"ap", eval.ap}, {"n_gt", eval.n_gt}, {"n_tp", eval.n_tp}};
      for (const auto& sample : eval.curve) {
        char line[160];
        std::snprintf(line, sizeof(line), "%s,%s,%.6f,%.6f,%.6f\n", cls.c_str(),
                      format_iou(iou).c_str(), sample.score, sample.recall, sample.precision);
        csv += line;
      }
    }
    out[cls] = std::move(per_iou);
  }
  emit(out, a.out);
  if (!a.pr_csv.empty()) emit_text(csv, a.pr_csv);
}

// ---- schedule -----------------------------------------------------------

struct ScheduleArgs {
  std::string kind, format = "json", out;
  double lr0 = 0.01;
  double lr = 0.001;
  double alpha = 0.01;
  std::size_t epochs = 40;
  std::string weights, ref;
};

void run_schedule(const ScheduleArgs& a) {
  if (a.kind == "l2sp-check") {
    if (a.weights.empty() || a.ref.empty())
      throw nap::error("l2sp-check requires --weights and --ref");
    const auto w = nap::read_weight_file(a.weights);
    const auto w0 = nap::read_weight_file(a.ref);
    const double penalty = nap::l2sp_penalty(w, w0, a.alpha);
    const auto grad = nap::l2sp_gradient(w, w0, a.alpha);
    double norm_sq = 0.0;
    for (double g : grad) norm_sq += g * g;
    ordered_json out;
    out["alpha"] = a.alpha;
    out["n_weights"] = w.size();
    out["penalty"] = penalty;
    out["grad_norm"] = std::sqrt(norm_sq);
    emit(out, a.out);
    return;
  }

  std::vector<double> schedule;
  ordered_json out;
  out["kind"] = a.kind;
  if (a.kind == "fade") {
    schedule = nap::linear_fade(a.lr0, a.epochs);
    out["lr0"] = a.lr0;
  } else {  // const
    schedule = nap::const_schedule(a.lr, a.epochs);
    out["lr"] = a.lr;
  }
  out["epochs"] = a.epochs;

  if (a.format == "csv") {
    std::string csv = "epoch,lr\n";
    for (std::size_t e = 0; e < schedule.size(); ++e) {
      char line[64];
      std::snprintf(line, sizeof(line), "%zu,%.10g\n", e, schedule[e]);
      csv += line;
    }
    emit_text(csv, a.out);
  } else {
    out["schedule"] = schedule;
    emit(out, a.out);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "neuron-activation-pattern toolkit for target-frame selection,\n"
      "source-target alignment, and KITTI-protocol 3D detection evaluation"};
  app.require_subcommand(1);

  ExtractArgs extract_args;
  auto* extract = app.add_subcommand("extract", "activation dump -> bit-packed pattern cache");
  extract->add_option("--dump", extract_args.dump, "activation dump (JSONL or NAPD)")
      ->required()
      ->check(CLI::ExistingFile);
  extract->add_option("--layer", extract_args.layer,
                      "layer id (optional when the dump has a single layer)");
  extract->add_option("--role", extract_args.role, "record role to extract")
      ->check(CLI::IsMember({"gt", "tp", "fp", "det"}))
      ->capture_default_str();
  extract->add_option("--out", extract_args.out, "output pattern file (NAPB)")->required();

  BankArgs bank_args;
  auto* bank = app.add_subcommand("bank", "pattern file(s) -> ground-truth pattern bank");
  bank->add_option("--patterns", bank_args.pattern_files, "input pattern files (NAPB)")
      ->required()
      ->check(CLI::ExistingFile);
  bank->add_option("--out", bank_args.out, "output bank file (NAPB)")->required();

  LayersArgs layers_args;
  auto* layers =
      app.add_subcommand("layers", "rank layers by TP/FP separation (AUROC over bank distances)");
  layers->add_option("--dump", layers_args.dump, "dump with gt, tp and fp records")
      ->required()
      ->check(CLI::ExistingFile);
  layers->add_option("--out", layers_args.out, "output JSON (default stdout)");

  ScoreArgs score_args;
  auto* score = app.add_subcommand("score", "per-frame entropy scores for det records");
  score->add_option("--dump", score_args.dump, "activation dump")
      ->required()
      ->check(CLI::ExistingFile);
  score->add_option("--layer", score_args.layer, "layer id");
  score->add_option("--bank", score_args.bank,
                    "bank file (default: build from gt records in the dump)")
      ->check(CLI::ExistingFile);
  auto* score_thr = score->add_option("--score-threshold", score_args.score_threshold,
                                      "ignore detections scored below this");
  score->add_option("--out", score_args.out, "output JSON (default stdout)");

  SelectArgs select_args;
  auto* select = app.add_subcommand("select", "iterative diverse frame selection");
  select->add_option("--dump", select_args.dump, "activation dump")
      ->required()
      ->check(CLI::ExistingFile);
  select->add_option("--layer", select_args.layer, "layer id");
  select->add_option("--bank", select_args.bank,
                     "bank file (default: build from gt records in the dump)")
      ->check(CLI::ExistingFile);
  select->add_option("--n", select_args.n, "number of frames to select")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  select->add_option("--k", select_args.k, "proposal size (default 10*n)");
  select->add_option("--min-boxes", select_args.min_boxes,
                     "exclude frames with fewer detections")
      ->capture_default_str();
  auto* select_thr = select->add_option("--score-threshold", select_args.score_threshold,
                                        "ignore detections scored below this");
  select->add_option("--out", select_args.out, "output JSON (default stdout)");
  select->add_option("--list", select_args.list,
                     "frame-id list path (default: --out with a .txt extension)");

  StatnormArgs statnorm_args;
  auto* statnorm =
      app.add_subcommand("statnorm", "shift source labels to the target size distribution");
  statnorm->add_option("--labels", statnorm_args.labels_dir, "source label directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  statnorm
      ->add_option("--source", statnorm_args.source,
                   "source stats: kitti|nuscenes|waymo or a JSON file")
      ->required();
  statnorm
      ->add_option("--target", statnorm_args.target,
                   "target stats: kitti|nuscenes|waymo or a JSON file")
      ->required();
  statnorm->add_option("--out", statnorm_args.out_dir, "output label directory")->required();
  auto* sn_clouds = statnorm
                        ->add_option("--clouds", statnorm_args.clouds_dir,
                                     "also rescale points inside each adjusted box")
                        ->check(CLI::ExistingDirectory);
  statnorm->add_option("--clouds-out", statnorm_args.clouds_out_dir, "output cloud directory")
      ->needs(sn_clouds);
  statnorm->add_flag("--multiplicative", statnorm_args.multiplicative,
                     "scale dims by target/source ratios instead of adding deltas");

  DownsampleArgs down_args;
  auto* down =
      app.add_subcommand("downsample", "drop LiDAR beams to emulate a lower-resolution sensor");
  down->add_option("--clouds", down_args.clouds_dir, "input cloud directory (.bin)")
      ->required()
      ->check(CLI::ExistingDirectory);
  down->add_option("--source-beams", down_args.source_beams, "beams in the source sensor")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  down->add_option("--target-beams", down_args.target_beams, "beams to keep")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  down->add_option("--out", down_args.out_dir, "output cloud directory")->required();

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "KITTI-protocol AP_3D evaluation");
  eval->add_option("--gt", eval_args.gt_dir, "ground-truth label directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  eval->add_option("--det", eval_args.det_dir, "detection label directory (16-field lines)")
      ->required()
      ->check(CLI::ExistingDirectory);
  eval->add_option("--cloud", eval_args.cloud_dir,
                   "cloud directory; enables the min-points GT filter")
      ->check(CLI::ExistingDirectory);
  eval->add_option("--min-points", eval_args.min_points,
                   "filter GT boxes with fewer cloud points (needs --cloud)")
      ->capture_default_str();
  eval->add_option("--iou", eval_args.ious, "comma-separated IoU thresholds")
      ->capture_default_str();
  eval->add_option("--class", eval_args.classes, "class name (repeatable; default Car)");
  eval->add_flag("--r11", eval_args.r11, "11-point interpolation instead of R40");
  eval->add_option("--out", eval_args.out, "output JSON (default stdout)");
  eval->add_option("--pr-csv", eval_args.pr_csv, "also write the PR curve as CSV");

  ScheduleArgs sched_args;
  auto* sched = app.add_subcommand("schedule", "post-training schedule tables and L2-SP check");
  sched->add_option("--kind", sched_args.kind, "fade | const | l2sp-check")
      ->required()
      ->check(CLI::IsMember({"fade", "const", "l2sp-check"}));
  sched->add_option("--lr0", sched_args.lr0, "starting rate for fade")->capture_default_str();
  sched->add_option("--lr", sched_args.lr, "constant rate")->capture_default_str();
  sched->add_option("--epochs", sched_args.epochs, "epoch count")->capture_default_str();
  sched->add_option("--alpha", sched_args.alpha, "L2-SP penalty strength")
      ->capture_default_str();
  sched->add_option("--weights", sched_args.weights, "flat f32 weight file (w)")
      ->check(CLI::ExistingFile);
  sched->add_option("--ref", sched_args.ref, "flat f32 reference weight file (w0)")
      ->check(CLI::ExistingFile);
  sched->add_option("--format", sched_args.format, "json | csv")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  sched->add_option("--out", sched_args.out, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  score_args.has_threshold = score_thr->count() > 0;
  select_args.has_threshold = select_thr->count() > 0;

  try {
    if (extract->parsed()) run_extract(extract_args);
    if (bank->parsed()) run_bank(bank_args);
    if (layers->parsed()) run_layers(layers_args);
    if (score->parsed()) run_score(score_args);
    if (select->parsed()) run_select(select_args);
    if (statnorm->parsed()) run_statnorm(statnorm_args);
    if (down->parsed()) run_downsample(down_args);
    if (eval->parsed()) run_eval(eval_args);
    if (sched->parsed()) run_schedule(sched_args);
  } catch (const nap::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
