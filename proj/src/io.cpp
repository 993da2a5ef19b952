#include "netstate/io.hpp"

#include "netstate/error.hpp"

#include <algorithm>
#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace netstate {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::uint64_t to_little(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::big) {
    std::uint64_t r = 0;
    for (int b = 0; b < 8; ++b) r |= ((v >> (8 * b)) & 0xffULL) << (8 * (7 - b));
    return r;
  }
  return v;
}

std::string read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

template <typename T>
T meta_get(const json& meta, const char* key, const fs::path& where) {
  try {
    return meta.at(key).get<T>();
  } catch (const json::exception& e) {
    fail(ErrorKind::invalid_input, where.string() + ": bad or missing '" + key + "': " + e.what());
  }
}

void check_byte_order(const json& meta, const fs::path& where) {
  if (meta.value("byte_order", std::string("little")) != "little") {
    fail(ErrorKind::invalid_input, where.string() + ": only little-endian payloads are supported");
  }
}

}  // namespace

void write_file_atomic(const fs::path& path, std::string_view bytes) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
    if (ec) fail(ErrorKind::io, "cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::io, "cannot write " + tmp.string());
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) fail(ErrorKind::io, "short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) fail(ErrorKind::io, "cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

void write_json_atomic(const fs::path& path, const json& j) { write_file_atomic(path, j.dump(2) + "\n"); }

json read_json(const fs::path& path) {
  const auto text = read_bytes(path);
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    fail(ErrorKind::invalid_input, path.string() + ": " + e.what());
  }
}

std::string encode_f64(std::span<const double> values) {
  std::string out(values.size() * 8, '\0');
  for (std::size_t i = 0; i < values.size(); ++i) {
    const std::uint64_t bits = to_little(std::bit_cast<std::uint64_t>(values[i]));
    std::memcpy(out.data() + 8 * i, &bits, 8);
  }
  return out;
}

std::vector<double> read_f64(const fs::path& path, std::size_t expected) {
  const auto bytes = read_bytes(path);
  if (bytes.size() != expected * 8) {
    fail(ErrorKind::invalid_input, path.string() + ": expected " + std::to_string(expected * 8) + " bytes, found " +
                                       std::to_string(bytes.size()));
  }
  std::vector<double> out(expected);
  for (std::size_t i = 0; i < expected; ++i) {
    std::uint64_t bits = 0;
    std::memcpy(&bits, bytes.data() + 8 * i, 8);
    out[i] = std::bit_cast<double>(to_little(bits));
  }
  return out;
}

void write_recording(const fs::path& dir, const MultiTrialRecording& rec) {
  validate(rec);
  const json meta = {{"format", "netstate-recording"},
                     {"version", kRecordingFormatVersion},
                     {"subject_id", rec.subject_id},
                     {"channel_labels", rec.channel_labels},
                     {"fs_hz", rec.fs},
                     {"t0_ms", rec.t0_ms},
                     {"n_trials", rec.n_trials},
                     {"n_channels", rec.n_channels},
                     {"n_samples", rec.n_samples},
                     {"dtype", "f64"},
                     {"byte_order", "little"},
                     {"index_order", {"trial", "channel", "sample"}}};
  write_file_atomic(dir / "data.f64", encode_f64(rec.data));
  write_json_atomic(dir / "meta.json", meta);
}

MultiTrialRecording read_recording(const fs::path& dir) {
  const fs::path meta_path = dir / "meta.json";
  const json meta = read_json(meta_path);
  check_byte_order(meta, meta_path);
  MultiTrialRecording rec;
  rec.subject_id = meta.value("subject_id", dir.filename().string());
  rec.channel_labels = meta_get<std::vector<std::string>>(meta, "channel_labels", meta_path);
  rec.fs = meta_get<double>(meta, "fs_hz", meta_path);
  rec.t0_ms = meta_get<double>(meta, "t0_ms", meta_path);
  rec.n_trials = meta_get<std::size_t>(meta, "n_trials", meta_path);
  rec.n_channels = meta.value("n_channels", rec.channel_labels.size());
  rec.n_samples = meta_get<std::size_t>(meta, "n_samples", meta_path);
  rec.data = read_f64(dir / "data.f64", rec.n_trials * rec.n_channels * rec.n_samples);
  validate(rec);
  return rec;
}

std::vector<MultiTrialRecording> read_recordings(const fs::path& root) {
  std::error_code ec;
  if (!fs::is_directory(root, ec)) fail(ErrorKind::io, root.string() + " is not a directory");
  std::vector<fs::path> dirs;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory() && fs::exists(entry.path() / "meta.json")) dirs.push_back(entry.path());
  }
  std::sort(dirs.begin(), dirs.end());
  if (dirs.empty()) fail(ErrorKind::invalid_input, "no recordings found under " + root.string());
  std::vector<MultiTrialRecording> recs;
  for (const auto& d : dirs) recs.push_back(read_recording(d));
  return recs;
}

void write_tensor(const fs::path& dir, const ConnectivityTensor& g, const json& config) {
  const json meta = {{"format", "netstate-tensor"},
                     {"version", kTensorFormatVersion},
                     {"shape", g.values.shape()},
                     {"axes", {"node", "node", "time", "subject"}},
                     {"node_labels", g.node_labels},
                     {"time_axis_ms", g.time_axis_ms},
                     {"subject_ids", g.subject_ids},
                     {"dtype", "f64"},
                     {"byte_order", "little"},
                     {"layout", "first_index_fastest"},
                     {"config", config}};
  write_file_atomic(dir / "data.f64", encode_f64(g.values.data()));
  write_json_atomic(dir / "meta.json", meta);
}

json read_tensor_meta(const fs::path& dir) { return read_json(dir / "meta.json"); }

ConnectivityTensor read_tensor(const fs::path& dir) {
  const fs::path meta_path = dir / "meta.json";
  const json meta = read_json(meta_path);
  check_byte_order(meta, meta_path);
  const auto shape = meta_get<Shape>(meta, "shape", meta_path);
  if (shape.size() != 4) fail(ErrorKind::invalid_input, meta_path.string() + ": tensor must have 4 modes");
  ConnectivityTensor g;
  g.node_labels = meta_get<std::vector<std::string>>(meta, "node_labels", meta_path);
  g.time_axis_ms = meta_get<std::vector<double>>(meta, "time_axis_ms", meta_path);
  g.subject_ids = meta_get<std::vector<std::string>>(meta, "subject_ids", meta_path);
  if (g.node_labels.size() != shape[0] || shape[0] != shape[1] || g.time_axis_ms.size() != shape[2] ||
      g.subject_ids.size() != shape[3]) {
    fail(ErrorKind::invalid_input, meta_path.string() + ": labels do not match the tensor shape");
  }
  g.values = Tensor(shape, read_f64(dir / "data.f64", shape_size(shape)));
  return g;
}

std::string matrix_csv(const Eigen::MatrixXd& m) {
  std::string out;
  char buf[40];
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out += ',';
      std::snprintf(buf, sizeof buf, "%.17g", m(i, j));
      out += buf;
    }
    out += '\n';
  }
  return out;
}

std::string file_digest(const fs::path& path) {
  const auto bytes = read_bytes(path);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace netstate
