#include "netstate/synth.hpp"

#include "netstate/error.hpp"
#include "netstate/io.hpp"
#include "netstate/parallel.hpp"
#include "netstate/random.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>

namespace netstate {

namespace {

constexpr std::uint64_t kPhaseStream = 1;
constexpr std::uint64_t kNoiseStream = 2;
constexpr std::uint64_t kBaseStream = 3;
constexpr std::uint64_t kSliceStream = 4;
constexpr std::uint64_t kGroupSlot = 1ULL << 32;  // keys group draws apart from channel draws

std::size_t find(std::vector<std::size_t>& parent, std::size_t x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

std::string subject_name(std::size_t s) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "subject_%03zu", s + 1);
  return buf;
}

}  // namespace

std::vector<std::vector<std::vector<std::size_t>>> coupling_groups(const SyntheticSpec& spec) {
  std::vector<std::vector<std::vector<std::size_t>>> out;
  for (const auto& state : spec.states) {
    std::vector<std::size_t> parent(spec.n_nodes);
    std::iota(parent.begin(), parent.end(), 0);
    std::vector<bool> touched(spec.n_nodes, false);
    for (const auto& [a, b] : state.pairs) {
      parent[find(parent, a)] = find(parent, b);
      touched[a] = touched[b] = true;
    }
    std::vector<std::vector<std::size_t>> groups;
    std::vector<std::ptrdiff_t> slot(spec.n_nodes, -1);
    for (std::size_t c = 0; c < spec.n_nodes; ++c) {
      if (!touched[c]) continue;
      const std::size_t root = find(parent, c);
      if (slot[root] < 0) {
        slot[root] = static_cast<std::ptrdiff_t>(groups.size());
        groups.emplace_back();
      }
      groups[static_cast<std::size_t>(slot[root])].push_back(c);
    }
    out.push_back(std::move(groups));
  }
  return out;
}

std::vector<int> planted_labels(const SyntheticSpec& spec) {
  std::vector<int> labels(spec.n_samples);
  std::size_t state = 0;
  for (std::size_t u = 0; u < spec.n_samples; ++u) {
    while (state < spec.boundaries.size() && u >= spec.boundaries[state]) ++state;
    labels[u] = static_cast<int>(state) + 1;
  }
  return labels;
}

MultiTrialRecording generate_subject(const SyntheticSpec& spec, std::uint64_t seed, std::size_t subject) {
  validate(spec);
  const auto groups = coupling_groups(spec);
  const auto labels = planted_labels(spec);
  const std::size_t n_states = spec.states.size();

  MultiTrialRecording rec;
  rec.n_trials = spec.n_trials;
  rec.n_channels = spec.n_nodes;
  rec.n_samples = spec.n_samples;
  rec.fs = spec.fs_hz;
  rec.t0_ms = spec.t0_ms;
  rec.subject_id = subject_name(subject);
  for (std::size_t c = 0; c < spec.n_nodes; ++c) rec.channel_labels.push_back("ch" + std::to_string(c + 1));
  rec.data.assign(rec.n_trials * rec.n_channels * rec.n_samples, 0.0);

  const double two_pi = 2.0 * std::numbers::pi;
  const double omega = two_pi * spec.tone_hz / spec.fs_hz;
  const std::size_t n = spec.n_samples;

  // A phase process: uniform start, then per-sample increment omega plus
  // Gaussian diffusion.
  auto walk = [&](std::uint64_t key) {
    CounterRng rng(seed, key);
    std::vector<double> phi(n);
    phi[0] = two_pi * rng.uniform() - std::numbers::pi;
    for (std::size_t u = 1; u < n; ++u) phi[u] = phi[u - 1] + omega + spec.phase_diffusion * rng.normal();
    return phi;
  };

  for (std::size_t k = 0; k < spec.n_trials; ++k) {
    std::vector<std::vector<double>> own(spec.n_nodes);
    for (std::size_t c = 0; c < spec.n_nodes; ++c) own[c] = walk(stream_key({kPhaseStream, subject, k, c}));
    // shared[state][channel]: group process for channels coupled in that state.
    std::vector<std::vector<std::vector<double>>> shared(n_states, std::vector<std::vector<double>>(spec.n_nodes));
    for (std::size_t m = 0; m < n_states; ++m) {
      const double spread = 1.0 - spec.states[m].strength;
      for (std::size_t g = 0; g < groups[m].size(); ++g) {
        const auto common = walk(stream_key({kPhaseStream, subject, k, m, kGroupSlot + g}));
        for (auto c : groups[m][g]) {
          shared[m][c].resize(n);
          for (std::size_t u = 0; u < n; ++u) shared[m][c][u] = common[u] + spread * (own[c][u] - common[u]);
        }
      }
    }
    for (std::size_t c = 0; c < spec.n_nodes; ++c) {
      CounterRng noise(seed, stream_key({kNoiseStream, subject, k, c}));
      auto trace = rec.trace(k, c);
      for (std::size_t u = 0; u < n; ++u) {
        const auto m = static_cast<std::size_t>(labels[u] - 1);
        const bool coupled = !shared[m][c].empty();
        double v = coupled ? std::cos(shared[m][c][u]) : spec.background_amplitude * std::cos(own[c][u]);
        if (spec.noise_level > 0.0) v += spec.noise_level * noise.normal();
        trace[u] = v;
      }
    }
  }
  return rec;
}

std::vector<MultiTrialRecording> generate_recordings(const SyntheticSpec& spec, std::uint64_t seed) {
  validate(spec);
  std::vector<MultiTrialRecording> recs(spec.n_subjects);
  parallel_for(spec.n_subjects, [&](std::size_t s) { recs[s] = generate_subject(spec, seed, s); });
  return recs;
}

std::vector<int> planted_tensor_labels(const PlantedTensorSpec& spec) {
  std::vector<int> labels(spec.n_time);
  for (std::size_t t = 0; t < spec.n_time; ++t) {
    labels[t] = static_cast<int>(t * spec.n_states / spec.n_time) + 1;
  }
  return labels;
}

ConnectivityTensor planted_state_tensor(const PlantedTensorSpec& spec, std::uint64_t seed) {
  if (spec.n_nodes < 2 || spec.n_time < 1 || spec.n_subjects < 1) {
    fail(ErrorKind::invalid_config, "planted tensor needs >= 2 nodes, >= 1 time bin and >= 1 subject");
  }
  if (spec.n_states < 1 || spec.n_states > spec.n_time) {
    fail(ErrorKind::invalid_config, "planted state count must lie in [1, n_time]");
  }
  if (!(spec.noise_level >= 0.0 && spec.noise_level <= 1.0)) {
    fail(ErrorKind::invalid_config, "planted noise level must lie in [0, 1]");
  }
  const std::size_t n = spec.n_nodes;
  std::vector<std::vector<double>> base(spec.n_states, std::vector<double>(n * n, 0.0));
  for (std::size_t m = 0; m < spec.n_states; ++m) {
    CounterRng rng(seed, stream_key({kBaseStream, m}));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) base[m][i + n * j] = base[m][j + n * i] = rng.uniform();
    }
  }
  const auto labels = planted_tensor_labels(spec);
  ConnectivityTensor out;
  out.values = Tensor({n, n, spec.n_time, spec.n_subjects});
  const double keep = 1.0 - spec.noise_level;
  parallel_for(spec.n_subjects, [&](std::size_t s) {
    for (std::size_t t = 0; t < spec.n_time; ++t) {
      const auto& b = base[static_cast<std::size_t>(labels[t] - 1)];
      CounterRng rng(seed, stream_key({kSliceStream, s, t}));
      double* slice = out.values.data().data() + n * n * (t + spec.n_time * s);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          const double v = keep * b[i + n * j] + spec.noise_level * rng.uniform();
          slice[i + n * j] = slice[j + n * i] = v;
        }
      }
    }
  });
  for (std::size_t c = 0; c < n; ++c) out.node_labels.push_back("n" + std::to_string(c + 1));
  for (std::size_t t = 0; t < spec.n_time; ++t) out.time_axis_ms.push_back(static_cast<double>(t));
  for (std::size_t s = 0; s < spec.n_subjects; ++s) out.subject_ids.push_back(subject_name(s));
  return out;
}

nlohmann::json ground_truth(const SyntheticSpec& spec, std::uint64_t seed) {
  const auto groups = coupling_groups(spec);
  const auto labels = planted_labels(spec);
  nlohmann::json states = nlohmann::json::array();
  std::size_t first = 0;
  for (std::size_t m = 0; m < spec.states.size(); ++m) {
    const std::size_t last = m < spec.boundaries.size() ? spec.boundaries[m] - 1 : spec.n_samples - 1;
    nlohmann::json pairs = nlohmann::json::array();
    for (const auto& [a, b] : spec.states[m].pairs) pairs.push_back({a, b});
    states.push_back({{"label", m + 1},
                      {"start_bin", first},
                      {"end_bin", last},
                      {"coupled_pairs", pairs},
                      {"groups", groups[m]},
                      {"strength", spec.states[m].strength}});
    first = last + 1;
  }
  return {{"seed", seed},
          {"spec", to_json(spec)},
          {"boundaries", spec.boundaries},
          {"states", states},
          {"labels_per_t", labels}};
}

void write_synthetic(const std::filesystem::path& out_dir, const SyntheticSpec& spec, std::uint64_t seed) {
  const auto recs = generate_recordings(spec, seed);
  for (std::size_t s = 0; s < recs.size(); ++s) write_recording(out_dir / subject_name(s), recs[s]);
  write_json_atomic(out_dir / "ground_truth.json", ground_truth(spec, seed));
}

}  // namespace netstate
