#include "nap/kitti_io.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "nap/error.hpp"

namespace nap {

namespace {

constexpr const char* kLabelFieldNames[16] = {
    "class",     "truncation", "occlusion", "alpha",  "bbox_left", "bbox_top",
    "bbox_right", "bbox_bottom", "height",  "width",  "length",    "x",
    "y",         "z",          "rotation_y", "score"};

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) fields.push_back(line.substr(i, j - i));
    i = j;
  }
  return fields;
}

double parse_field(std::string_view s, std::size_t index) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw error("label: non-numeric field at index " + std::to_string(index) + " (" +
                kLabelFieldNames[index] + "): '" + std::string(s) + "'");
  return v;
}

}  // namespace

BoxLabel parse_label_line(std::string_view line) {
  const auto fields = split_ws(line);
  if (fields.size() != 15 && fields.size() != 16)
    throw error("label: expected 15 or 16 fields, got " + std::to_string(fields.size()));

  BoxLabel b;
  b.class_name = std::string(fields[0]);
  b.truncation = parse_field(fields[1], 1);
  const double occ = parse_field(fields[2], 2);
  b.occlusion = static_cast<int>(occ);
  b.alpha = parse_field(fields[3], 3);
  b.bbox_left = parse_field(fields[4], 4);
  b.bbox_top = parse_field(fields[5], 5);
  b.bbox_right = parse_field(fields[6], 6);
  b.bbox_bottom = parse_field(fields[7], 7);
  b.h = parse_field(fields[8], 8);
  b.w = parse_field(fields[9], 9);
  b.l = parse_field(fields[10], 10);
  b.x = parse_field(fields[11], 11);
  b.y = parse_field(fields[12], 12);
  b.z = parse_field(fields[13], 13);
  b.rotation_y = parse_field(fields[14], 14);
  if (fields.size() == 16) b.score = parse_field(fields[15], 15);

  // DontCare rows carry -1/-10 sentinels in the numeric fields.
  if (b.class_name != "DontCare") {
    if (b.h <= 0 || b.w <= 0 || b.l <= 0)
      throw error("label: non-positive dimensions for class " + b.class_name);
    if (std::abs(b.rotation_y) > std::numbers::pi + 1e-6)
      throw error("label: rotation_y outside [-pi, pi]");
  }
  if (b.bbox_right < b.bbox_left || b.bbox_bottom < b.bbox_top)
    throw error("label: inverted 2D bbox");
  return b;
}

std::string serialize_label(const BoxLabel& label) {
  char buf[320];
  int n = std::snprintf(buf, sizeof(buf),
                        "%s %.2f %d %.2f %.2f %.2f %.2f %.2f %.2f %.2f %.2f %.2f %.2f %.2f %.2f",
                        label.class_name.c_str(), label.truncation, label.occlusion, label.alpha,
                        label.bbox_left, label.bbox_top, label.bbox_right, label.bbox_bottom,
                        label.h, label.w, label.l, label.x, label.y, label.z, label.rotation_y);
  std::string out(buf, static_cast<std::size_t>(n));
  if (label.score) {
    n = std::snprintf(buf, sizeof(buf), " %.4f", *label.score);
    out.append(buf, static_cast<std::size_t>(n));
  }
  return out;
}

std::vector<BoxLabel> read_label_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw error("cannot open " + path.string());
  std::vector<BoxLabel> labels;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (split_ws(line).empty()) continue;
    try {
      labels.push_back(parse_label_line(line));
    } catch (const error& e) {
      throw error(path.string() + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return labels;
}

void write_label_file(const std::filesystem::path& path, std::span<const BoxLabel> labels) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw error("cannot write " + path.string());
  for (const auto& label : labels) out << serialize_label(label) << '\n';
  if (!out) throw error("write failed: " + path.string());
}

namespace {

float f32_from_le(const std::uint8_t* p) {
  std::uint32_t u = 0;
  for (int i = 0; i < 4; ++i) u |= std::uint32_t(p[i]) << (8 * i);
  return std::bit_cast<float>(u);
}

void f32_to_le(float v, std::uint8_t* p) {
  const std::uint32_t u = std::bit_cast<std::uint32_t>(v);
  for (int i = 0; i < 4; ++i) p[i] = static_cast<std::uint8_t>((u >> (8 * i)) & 0xff);
}

}  // namespace

PointCloud read_point_cloud(std::span<const std::uint8_t> bytes) {
  if (bytes.size() % 16 != 0)
    throw error("point cloud: byte length " + std::to_string(bytes.size()) +
                " not divisible by 16");
  PointCloud cloud;
  cloud.points.resize(bytes.size() / 16);
  for (std::size_t i = 0; i < cloud.points.size(); ++i) {
    const std::uint8_t* p = bytes.data() + 16 * i;
    auto& pt = cloud.points[i];
    pt.x = f32_from_le(p);
    pt.y = f32_from_le(p + 4);
    pt.z = f32_from_le(p + 8);
    pt.intensity = f32_from_le(p + 12);
    if (!std::isfinite(pt.x) || !std::isfinite(pt.y) || !std::isfinite(pt.z) ||
        !std::isfinite(pt.intensity))
      throw error("point cloud: non-finite value at point " + std::to_string(i));
  }
  return cloud;
}

PointCloud read_point_cloud_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw error("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  try {
    return read_point_cloud(bytes);
  } catch (const error& e) {
    throw error(path.string() + ": " + e.what());
  }
}

std::vector<std::uint8_t> serialize_point_cloud(const PointCloud& cloud) {
  std::vector<std::uint8_t> bytes(cloud.points.size() * 16);
  for (std::size_t i = 0; i < cloud.points.size(); ++i) {
    std::uint8_t* p = bytes.data() + 16 * i;
    f32_to_le(cloud.points[i].x, p);
    f32_to_le(cloud.points[i].y, p + 4);
    f32_to_le(cloud.points[i].z, p + 8);
    f32_to_le(cloud.points[i].intensity, p + 12);
  }
  return bytes;
}

void write_point_cloud_file(const std::filesystem::path& path, const PointCloud& cloud) {
  const auto bytes = serialize_point_cloud(cloud);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw error("cannot write " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw error("write failed: " + path.string());
}

PointCloud normalize_intensity(const PointCloud& cloud, IntensityMode mode, double divisor) {
  PointCloud out = cloud;
  if (mode == IntensityMode::divisor) {
    if (divisor <= 0.0) throw error("normalize_intensity: divisor must be > 0");
    for (auto& p : out.points) {
      const double v = p.intensity / divisor;
      p.intensity = static_cast<float>(std::clamp(v, 0.0, 1.0));
    }
  } else {
    if (out.points.empty()) return out;
    float lo = out.points[0].intensity, hi = out.points[0].intensity;
    for (const auto& p : out.points) {
      lo = std::min(lo, p.intensity);
      hi = std::max(hi, p.intensity);
    }
    if (hi == lo) {
      for (auto& p : out.points) p.intensity = 0.0f;
    } else {
      const double range = static_cast<double>(hi) - static_cast<double>(lo);
      for (auto& p : out.points) {
        const double v = (static_cast<double>(p.intensity) - lo) / range;
        p.intensity = static_cast<float>(std::clamp(v, 0.0, 1.0));
      }
    }
  }
  return out;
}

std::string_view to_string(BoxRole role) {
  switch (role) {
    case BoxRole::gt: return "gt";
    case BoxRole::tp: return "tp";
    case BoxRole::fp: return "fp";
    case BoxRole::det: return "det";
  }
  throw error("invalid BoxRole value");
}

BoxRole box_role_from_string(std::string_view s) {
  if (s == "gt") return BoxRole::gt;
  if (s == "tp") return BoxRole::tp;
  if (s == "fp") return BoxRole::fp;
  if (s == "det") return BoxRole::det;
  throw error("unknown role '" + std::string(s) + "' (expected gt|tp|fp|det)");
}

namespace {

constexpr double kReluTolerance = -1e-9;

void validate_record(const ActivationRecord& rec,
                     std::map<std::string, std::size_t>& layer_dims,
                     const std::string& where) {
  if (rec.values.empty()) throw error(where + ": empty values vector");
  for (std::size_t i = 0; i < rec.values.size(); ++i)
    if (!(rec.values[i] >= kReluTolerance))
      throw error(where + ": negative activation " + std::to_string(rec.values[i]) +
                  " at index " + std::to_string(i) + " (values must be ReLU outputs)");
  const auto [it, inserted] = layer_dims.emplace(rec.layer_id, rec.values.size());
  if (!inserted && it->second != rec.values.size())
    throw error(where + ": layer " + rec.layer_id + " has records with dim " +
                std::to_string(it->second) + " and " + std::to_string(rec.values.size()));
}

std::vector<ActivationRecord> read_dump_jsonl(std::istream& in, const std::string& name) {
  std::vector<ActivationRecord> records;
  std::map<std::string, std::size_t> layer_dims;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = name + ":" + std::to_string(lineno);
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw error(where + ": invalid JSON: " + e.what());
    }
    if (!j.is_object()) throw error(where + ": record must be a JSON object");

    ActivationRecord rec;
    try {
      rec.frame_id = j.at("frame").get<std::string>();
      rec.box_id = j.at("box").get<std::string>();
      rec.layer_id = j.at("layer").get<std::string>();
      rec.role = box_role_from_string(j.at("role").get<std::string>());
      if (j.contains("score") && !j["score"].is_null()) rec.score = j["score"].get<double>();
      const auto& vals = j.at("values");
      if (!vals.is_array()) throw error("'values' must be an array of numbers");
      rec.values.reserve(vals.size());
      for (const auto& v : vals) {
        if (!v.is_number()) throw error("'values' must be an array of numbers");
        rec.values.push_back(v.get<float>());
      }
    } catch (const nlohmann::json::exception& e) {
      throw error(where + ": schema violation: " + e.what());
    } catch (const error& e) {
      throw error(where + ": " + e.what());
    }
    validate_record(rec, layer_dims, where);
    records.push_back(std::move(rec));
  }
  return records;
}

class PackedReader {
 public:
  PackedReader(const std::string& data, std::string name)
      : data_(data), name_(std::move(name)) {}

  std::vector<ActivationRecord> read() {
    expect_magic();
    if (u8() != 1) throw error(name_ + ": unsupported NAPD version");
    const std::uint32_t dim = u32le();
    if (dim == 0) throw error(name_ + ": dim must be >= 1");
    const std::uint64_t count = u64le();

    const std::uint32_t n_strings = u32le();
    std::vector<std::string> table(n_strings);
    for (auto& s : table) {
      const std::uint32_t len = u32le();
      s.assign(take(len), len);
    }

    std::vector<ActivationRecord> records;
    records.reserve(count);
    std::map<std::string, std::size_t> layer_dims;
    for (std::uint64_t i = 0; i < count; ++i) {
      const std::string where = name_ + ": record " + std::to_string(i);
      ActivationRecord rec;
      rec.frame_id = table_at(table, u32le(), where);
      rec.box_id = table_at(table, u32le(), where);
      rec.layer_id = table_at(table, u32le(), where);
      const std::uint8_t role = u8();
      if (role > 3) throw error(where + ": unknown role byte " + std::to_string(role));
      rec.role = static_cast<BoxRole>(role);
      const float score = f32le();
      if (!std::isnan(score)) rec.score = score;
      rec.values.resize(dim);
      for (std::uint32_t v = 0; v < dim; ++v) rec.values[v] = f32le();
      validate_record(rec, layer_dims, where);
      records.push_back(std::move(rec));
    }
    if (pos_ != data_.size()) throw error(name_ + ": trailing bytes after record data");
    return records;
  }

 private:
  void expect_magic() {
    if (std::string(take(4), 4) != "NAPD") throw error(name_ + ": bad magic, expected NAPD");
  }
  static const std::string& table_at(const std::vector<std::string>& table, std::uint32_t idx,
                                     const std::string& where) {
    if (idx >= table.size())
      throw error(where + ": string index " + std::to_string(idx) + " out of range");
    return table[idx];
  }
  const char* take(std::size_t n) {
    if (pos_ + n > data_.size()) throw error(name_ + ": truncated file");
    const char* p = data_.data() + pos_;
    pos_ += n;
    return p;
  }
  std::uint8_t u8() { return static_cast<std::uint8_t>(take(1)[0]); }
  std::uint32_t u32le() {
    const char* p = take(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t(static_cast<unsigned char>(p[i])) << (8 * i);
    return v;
  }
  std::uint64_t u64le() {
    const char* p = take(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(static_cast<unsigned char>(p[i])) << (8 * i);
    return v;
  }
  float f32le() {
    const char* p = take(4);
    return f32_from_le(reinterpret_cast<const std::uint8_t*>(p));
  }

  const std::string& data_;
  std::string name_;
  std::size_t pos_ = 0;
};

}  // namespace

std::vector<ActivationRecord> read_activation_dump(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw error("cannot open " + path.string());
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (data.size() >= 4 && data.compare(0, 4, "NAPD") == 0)
    return PackedReader(data, path.string()).read();
  std::istringstream text(data);
  return read_dump_jsonl(text, path.string());
}

void write_activation_dump_jsonl(const std::filesystem::path& path,
                                 std::span<const ActivationRecord> records) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw error("cannot write " + path.string());
  for (const auto& rec : records) {
    nlohmann::ordered_json j;
    j["frame"] = rec.frame_id;
    j["box"] = rec.box_id;
    j["layer"] = rec.layer_id;
    j["role"] = std::string(to_string(rec.role));
    if (rec.score) j["score"] = *rec.score;
    j["values"] = rec.values;
    out << j.dump() << '\n';
  }
  if (!out) throw error("write failed: " + path.string());
}

void write_activation_dump_packed(const std::filesystem::path& path,
                                  std::span<const ActivationRecord> records) {
  std::size_t dim = 0;
  for (const auto& rec : records) {
    if (dim == 0) dim = rec.values.size();
    if (rec.values.size() != dim)
      throw error("packed dump requires a uniform dimension; got " + std::to_string(dim) +
                  " and " + std::to_string(rec.values.size()));
  }
  if (dim == 0) throw error("packed dump: no records");

  std::vector<std::string> table;
  std::map<std::string, std::uint32_t> index;
  const auto intern = [&](const std::string& s) {
    const auto [it, inserted] = index.emplace(s, static_cast<std::uint32_t>(table.size()));
    if (inserted) table.push_back(s);
    return it->second;
  };

  struct Encoded {
    std::uint32_t frame, box, layer;
  };
  std::vector<Encoded> encoded;
  encoded.reserve(records.size());
  for (const auto& rec : records)
    encoded.push_back({intern(rec.frame_id), intern(rec.box_id), intern(rec.layer_id)});

  std::string out;
  const auto put_u32 = [&](std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  };
  const auto put_u64 = [&](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  };
  const auto put_f32 = [&](float f) {
    std::uint8_t b[4];
    f32_to_le(f, b);
    out.append(reinterpret_cast<const char*>(b), 4);
  };

  out += "NAPD";
  out.push_back(1);
  put_u32(static_cast<std::uint32_t>(dim));
  put_u64(records.size());
  put_u32(static_cast<std::uint32_t>(table.size()));
  for (const auto& s : table) {
    put_u32(static_cast<std::uint32_t>(s.size()));
    out += s;
  }
  for (std::size_t i = 0; i < records.size(); ++i) {
    put_u32(encoded[i].frame);
    put_u32(encoded[i].box);
    put_u32(encoded[i].layer);
    out.push_back(static_cast<char>(records[i].role));
    put_f32(records[i].score ? static_cast<float>(*records[i].score)
                             : std::numeric_limits<float>::quiet_NaN());
    for (float v : records[i].values) put_f32(v);
  }

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw error("cannot write " + path.string());
  f.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!f) throw error("write failed: " + path.string());
}

SizeStats parse_size_stats(const std::string& json_text, const std::string& what) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw error(what + ": invalid JSON: " + e.what());
  }
  if (!j.is_object()) throw error(what + ": expected an object of class -> {l,w,h}");
  SizeStats stats;
  for (const auto& [cls, entry] : j.items()) {
    try {
      Dims d;
      d.l = entry.at("l").get<double>();
      d.w = entry.at("w").get<double>();
      d.h = entry.at("h").get<double>();
      if (d.l <= 0 || d.w <= 0 || d.h <= 0)
        throw error(what + ": non-positive dimension for class " + cls);
      stats.classes[cls] = d;
    } catch (const nlohmann::json::exception& e) {
      throw error(what + ": class " + cls + ": " + e.what());
    }
  }
  return stats;
}

SizeStats read_size_stats(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw error("cannot open " + path.string());
  std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_size_stats(data, path.string());
}

SizeStats builtin_size_stats(std::string_view dataset) {
  SizeStats stats;
  if (dataset == "kitti") {
    stats.classes["Car"] = {4.4, 1.79, 1.49};
  } else if (dataset == "nuscenes") {
    stats.classes["Car"] = {4.61, 1.95, 1.73};
  } else if (dataset == "waymo") {
    stats.classes["Car"] = {5.15, 1.93, 1.71};
  } else {
    throw error("unknown dataset '" + std::string(dataset) +
                "' (bundled stats: kitti, nuscenes, waymo)");
  }
  return stats;
}

SizeStats resolve_size_stats(const std::string& name_or_path) {
  if (name_or_path == "kitti" || name_or_path == "nuscenes" || name_or_path == "waymo")
    return builtin_size_stats(name_or_path);
  return read_size_stats(name_or_path);
}

}  // namespace nap
