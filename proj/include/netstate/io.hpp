#pragma once

#include "netstate/connectivity.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace netstate {

// Writes through a sibling temporary file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view bytes);
void write_json_atomic(const std::filesystem::path& path, const nlohmann::json& j);
nlohmann::json read_json(const std::filesystem::path& path);

// Raw little-endian float64 payloads.
std::string encode_f64(std::span<const double> values);
std::vector<double> read_f64(const std::filesystem::path& path, std::size_t expected);

// Recording container: <dir>/meta.json + <dir>/data.f64 (trial-major, then
// channel, then sample).
void write_recording(const std::filesystem::path& dir, const MultiTrialRecording& rec);
MultiTrialRecording read_recording(const std::filesystem::path& dir);

// Every subdirectory of `root` that holds a meta.json, in name order.
std::vector<MultiTrialRecording> read_recordings(const std::filesystem::path& root);

// Tensor container: <dir>/meta.json + <dir>/data.f64 (first index fastest).
// `config` is echoed verbatim into the metadata.
void write_tensor(const std::filesystem::path& dir, const ConnectivityTensor& g, const nlohmann::json& config);
ConnectivityTensor read_tensor(const std::filesystem::path& dir);
nlohmann::json read_tensor_meta(const std::filesystem::path& dir);

// Row per line, comma separated, 17 significant digits, '\n' endings.
std::string matrix_csv(const Eigen::MatrixXd& m);

// FNV-1a 64-bit digest of a file, as 16 hex digits.
std::string file_digest(const std::filesystem::path& path);

inline constexpr int kRecordingFormatVersion = 1;
inline constexpr int kTensorFormatVersion = 1;

}  // namespace netstate
