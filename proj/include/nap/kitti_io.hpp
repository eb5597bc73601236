#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace nap {

// One line of a KITTI label file. Camera frame: x right, y down, z forward;
// location is the bottom-face center; rotation_y about the camera y-axis.
struct BoxLabel {
  std::string class_name;
  double truncation = 0.0;
  int occlusion = 0;
  double alpha = 0.0;
  double bbox_left = 0.0, bbox_top = 0.0, bbox_right = 0.0, bbox_bottom = 0.0;
  double h = 0.0, w = 0.0, l = 0.0;
  double x = 0.0, y = 0.0, z = 0.0;
  double rotation_y = 0.0;
  std::optional<double> score;  // present only for detections (16-field lines)
};

// 15 whitespace-separated fields (ground truth) or 16 (detection with
// trailing score).
BoxLabel parse_label_line(std::string_view line);

// Standard numeric fields at 2 decimals, score at 4. parse -> serialize is
// idempotent after one round.
std::string serialize_label(const BoxLabel& label);

std::vector<BoxLabel> read_label_file(const std::filesystem::path& path);
void write_label_file(const std::filesystem::path& path, std::span<const BoxLabel> labels);

struct PointCloud {
  struct Point {
    float x = 0, y = 0, z = 0, intensity = 0;
  };
  std::vector<Point> points;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
};

// KITTI ".bin" layout: consecutive little-endian f32 quadruples
// (x, y, z, intensity).
PointCloud read_point_cloud(std::span<const std::uint8_t> bytes);
PointCloud read_point_cloud_file(const std::filesystem::path& path);
std::vector<std::uint8_t> serialize_point_cloud(const PointCloud& cloud);
void write_point_cloud_file(const std::filesystem::path& path, const PointCloud& cloud);

enum class IntensityMode { divisor, minmax };

// Maps every intensity into [0,1]. divisor: clamp(i/v, 0, 1). minmax:
// affine map of the per-cloud [min,max] onto [0,1]; a constant cloud maps
// to all zeros.
PointCloud normalize_intensity(const PointCloud& cloud, IntensityMode mode,
                               double divisor = 255.0);

enum class BoxRole { gt = 0, tp = 1, fp = 2, det = 3 };

std::string_view to_string(BoxRole role);
BoxRole box_role_from_string(std::string_view s);

// One box's latent ReLU vector from an activation dump.
struct ActivationRecord {
  std::string frame_id;
  std::string box_id;
  std::string layer_id;
  BoxRole role = BoxRole::gt;
  std::optional<double> score;
  std::vector<float> values;
};

// Reads a dump, autodetecting JSONL vs the packed "NAPD" format. Enforces
// per-layer dimension consistency and that values are ReLU outputs
// (negative beyond -1e-9 rejected).
std::vector<ActivationRecord> read_activation_dump(const std::filesystem::path& path);

void write_activation_dump_jsonl(const std::filesystem::path& path,
                                 std::span<const ActivationRecord> records);
// Packed format requires a uniform dimension across all records.
void write_activation_dump_packed(const std::filesystem::path& path,
                                  std::span<const ActivationRecord> records);

struct Dims {
  double l = 0, w = 0, h = 0;
};

// Per-class mean box dimensions in meters.
struct SizeStats {
  std::map<std::string, Dims> classes;
};

// JSON object {"<class>": {"l": num, "w": num, "h": num}}.
SizeStats read_size_stats(const std::filesystem::path& path);
SizeStats parse_size_stats(const std::string& json_text, const std::string& what);

// Bundled per-dataset car statistics: "kitti", "nuscenes", "waymo".
SizeStats builtin_size_stats(std::string_view dataset);

// Resolves a --stats argument: a bundled dataset name or a JSON file path.
SizeStats resolve_size_stats(const std::string& name_or_path);

}  // namespace nap
