#pragma once

#include "netstate/config.hpp"
#include "netstate/connectivity.hpp"

#include <json.hpp>

#include <cstdint>
#include <filesystem>
#include <vector>

namespace netstate {

// Per-state groups of phase-locked channels: connected components of the
// state's coupled-pair graph (singletons dropped).
std::vector<std::vector<std::vector<std::size_t>>> coupling_groups(const SyntheticSpec& spec);

// State index of every sample.
std::vector<int> planted_labels(const SyntheticSpec& spec);

// One subject's trials. Each channel oscillates at tone_hz with a
// random-walk phase and adds white noise. Inside a planted state the
// channels of a coupling group follow one shared walk (pulled apart by
// 1 - strength) at unit amplitude; a channel outside its coupled states runs
// its own walk at background_amplitude. Draws come from the counter RNG
// keyed by (subject, trial, state, group or channel), so output does not
// depend on generation order.
MultiTrialRecording generate_subject(const SyntheticSpec& spec, std::uint64_t seed, std::size_t subject);
std::vector<MultiTrialRecording> generate_recordings(const SyntheticSpec& spec, std::uint64_t seed);

// Connectivity-like tensor with planted states, bypassing the signal model.
// Time is cut into n_states equal runs; state m has a random symmetric base
// graph B_m with entries uniform in [0, 1). Each slice is
// (1 - noise_level) B_m + noise_level E, E a fresh symmetric uniform draw
// per (time, subject). Diagonal zero; every entry lies in [0, 1].
struct PlantedTensorSpec {
  std::size_t n_nodes = 62;
  std::size_t n_time = 256;
  std::size_t n_subjects = 91;
  std::size_t n_states = 5;
  double noise_level = 0.2;
};

ConnectivityTensor planted_state_tensor(const PlantedTensorSpec& spec, std::uint64_t seed);

// State index (1-based) of every time bin of planted_state_tensor.
std::vector<int> planted_tensor_labels(const PlantedTensorSpec& spec);

nlohmann::json ground_truth(const SyntheticSpec& spec, std::uint64_t seed);

// Writes subject_NNN/ containers and ground_truth.json under out_dir.
void write_synthetic(const std::filesystem::path& out_dir, const SyntheticSpec& spec, std::uint64_t seed);

}  // namespace netstate
