#pragma once

#include "netstate/connectivity.hpp"
#include "netstate/timefreq.hpp"

#include <json.hpp>

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace netstate {

enum class TimeUnits { bins, ms };

struct RankConfig {
  double epsilon_rel = 0.01;
  std::optional<std::size_t> n_bar;  // explicit overrides
  std::optional<std::size_t> s_bar;
};

struct SimilarityConfig {
  double lambda = 0.4;
  double sigma_time = 2500.0;
  TimeUnits time_units = TimeUnits::bins;
  std::optional<std::size_t> k_clusters;  // empty = eigengap choice
  std::size_t eigengap_max_k = 10;
  std::size_t kmeans_restarts = 100;
  std::size_t contiguity_window = 5;
  std::size_t contiguity_passes = 10;
};

struct SummarizeConfig {
  std::size_t k_index = 1;
  std::size_t l_index = 1;
  double quantile = 0.01;
  bool rank_by_abs = false;
  bool svg = true;
  // Optional 2-D drawing positions keyed by node label.
  std::map<std::string, std::array<double, 2>> node_positions;
};

struct PlantedState {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  double strength = 1.0;  // 1 = identical phase within the coupled group
};

struct SyntheticSpec {
  std::size_t n_nodes = 16;
  std::size_t n_samples = 200;
  std::size_t n_subjects = 10;
  std::size_t n_trials = 20;
  double fs_hz = 100.0;
  double t0_ms = -1000.0;
  double tone_hz = 6.0;
  // Standard deviation (radians per sample) of the phase random walk.
  double phase_diffusion = 0.3;
  // Oscillation amplitude of a channel outside the states in which it is coupled.
  double background_amplitude = 0.1;
  // 0-based first bin of every state after the first.
  std::vector<std::size_t> boundaries = {67, 134};
  std::vector<PlantedState> states;
  double noise_level = 0.3;
};

// Three disjoint five-node groups, one per state, on 16 nodes.
SyntheticSpec default_synthetic_spec();

struct PipelineConfig {
  std::optional<std::uint64_t> seed;
  BandSpec band;
  KernelParams kernel;
  SelfLoops self_loops = SelfLoops::zero;
  std::size_t decimate_time = 1;
  RankConfig ranks;
  SimilarityConfig similarity;
  SummarizeConfig summarize;
  SyntheticSpec synth = default_synthetic_spec();
};

nlohmann::json to_json(const PipelineConfig& config);
nlohmann::json to_json(const SyntheticSpec& spec);

// Missing keys keep their defaults; unknown keys and wrong types are
// invalid-config errors.
PipelineConfig config_from_json(const nlohmann::json& j);
SyntheticSpec synthetic_spec_from_json(const nlohmann::json& j);

PipelineConfig load_config(const std::filesystem::path& path);

// Checks every invariant, including that a seed is present.
void validate(const PipelineConfig& config);
void validate(const SyntheticSpec& spec);

std::uint64_t require_seed(const PipelineConfig& config);

}  // namespace netstate
