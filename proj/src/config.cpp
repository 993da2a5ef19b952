#include "netstate/config.hpp"

#include "netstate/error.hpp"

#include <fstream>
#include <numeric>
#include <set>

namespace netstate {

using nlohmann::json;

namespace {

void reject_unknown(const json& j, const std::string& where, std::initializer_list<const char*> known) {
  if (!j.is_object()) fail(ErrorKind::invalid_config, where + " must be a JSON object");
  std::set<std::string> allowed(known.begin(), known.end());
  for (const auto& [key, value] : j.items()) {
    if (!allowed.contains(key)) fail(ErrorKind::invalid_config, "unknown key '" + key + "' in " + where);
  }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

template <typename T>
void read_optional(const json& j, const char* key, std::optional<T>& out) {
  if (!j.contains(key)) return;
  if (j.at(key).is_null()) {
    out.reset();
  } else {
    out = j.at(key).get<T>();
  }
}

const char* to_string(SelfLoops s) { return s == SelfLoops::one ? "one" : "zero"; }
const char* to_string(TimeUnits u) { return u == TimeUnits::ms ? "ms" : "bins"; }

json optional_json(const std::optional<std::size_t>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

SyntheticSpec default_synthetic_spec() {
  SyntheticSpec spec;
  for (std::size_t g = 0; g < 3; ++g) {
    PlantedState state;
    for (std::size_t a = 0; a < 5; ++a) {
      for (std::size_t b = a + 1; b < 5; ++b) state.pairs.emplace_back(5 * g + a, 5 * g + b);
    }
    spec.states.push_back(std::move(state));
  }
  return spec;
}

json to_json(const SyntheticSpec& spec) {
  json states = json::array();
  for (const auto& s : spec.states) {
    json pairs = json::array();
    for (const auto& [a, b] : s.pairs) pairs.push_back({a, b});
    states.push_back({{"pairs", pairs}, {"strength", s.strength}});
  }
  return {{"n_nodes", spec.n_nodes},       {"n_samples", spec.n_samples}, {"n_subjects", spec.n_subjects},
          {"n_trials", spec.n_trials},     {"fs_hz", spec.fs_hz},         {"t0_ms", spec.t0_ms},
          {"tone_hz", spec.tone_hz},       {"phase_diffusion", spec.phase_diffusion},
          {"background_amplitude", spec.background_amplitude}, {"boundaries", spec.boundaries}, {"states", states},
          {"noise_level", spec.noise_level}};
}

json to_json(const PipelineConfig& c) {
  json positions = json::object();
  for (const auto& [label, xy] : c.summarize.node_positions) positions[label] = {xy[0], xy[1]};
  return {
      {"seed", c.seed ? json(*c.seed) : json(nullptr)},
      {"band", {{"low_hz", c.band.low_hz}, {"high_hz", c.band.high_hz}}},
      {"kernel", {{"sigma_cw", c.kernel.sigma_cw}}},
      {"self_loops", to_string(c.self_loops)},
      {"decimate_time", c.decimate_time},
      {"ranks",
       {{"epsilon_rel", c.ranks.epsilon_rel}, {"n_bar", optional_json(c.ranks.n_bar)}, {"s_bar", optional_json(c.ranks.s_bar)}}},
      {"similarity",
       {{"lambda", c.similarity.lambda},
        {"sigma_time", c.similarity.sigma_time},
        {"time_units", to_string(c.similarity.time_units)},
        {"k_clusters", c.similarity.k_clusters ? json(*c.similarity.k_clusters) : json("auto")},
        {"eigengap_max_k", c.similarity.eigengap_max_k},
        {"kmeans_restarts", c.similarity.kmeans_restarts},
        {"contiguity_window", c.similarity.contiguity_window},
        {"contiguity_passes", c.similarity.contiguity_passes}}},
      {"summarize",
       {{"k_index", c.summarize.k_index},
        {"l_index", c.summarize.l_index},
        {"quantile", c.summarize.quantile},
        {"rank_by_abs", c.summarize.rank_by_abs},
        {"svg", c.summarize.svg},
        {"node_positions", positions}}},
      {"synth", to_json(c.synth)},
  };
}

SyntheticSpec synthetic_spec_from_json(const json& j) {
  try {
    reject_unknown(j, "synth", {"n_nodes", "n_samples", "n_subjects", "n_trials", "fs_hz", "t0_ms", "tone_hz",
                                "phase_diffusion", "background_amplitude", "boundaries", "states", "noise_level"});
    SyntheticSpec spec = default_synthetic_spec();
    read(j, "n_nodes", spec.n_nodes);
    read(j, "n_samples", spec.n_samples);
    read(j, "n_subjects", spec.n_subjects);
    read(j, "n_trials", spec.n_trials);
    read(j, "fs_hz", spec.fs_hz);
    read(j, "t0_ms", spec.t0_ms);
    read(j, "tone_hz", spec.tone_hz);
    read(j, "phase_diffusion", spec.phase_diffusion);
    read(j, "background_amplitude", spec.background_amplitude);
    read(j, "boundaries", spec.boundaries);
    read(j, "noise_level", spec.noise_level);
    if (j.contains("states")) {
      spec.states.clear();
      for (const auto& s : j.at("states")) {
        reject_unknown(s, "synth.states[]", {"pairs", "strength"});
        PlantedState state;
        read(s, "strength", state.strength);
        if (s.contains("pairs")) {
          for (const auto& p : s.at("pairs")) {
            if (!p.is_array() || p.size() != 2) fail(ErrorKind::invalid_config, "coupled pairs must be [i, j]");
            state.pairs.emplace_back(p[0].get<std::size_t>(), p[1].get<std::size_t>());
          }
        }
        spec.states.push_back(std::move(state));
      }
    }
    return spec;
  } catch (const json::exception& e) {
    fail(ErrorKind::invalid_config, std::string("synth: ") + e.what());
  }
}

PipelineConfig config_from_json(const json& j) {
  try {
    reject_unknown(j, "config", {"seed", "band", "kernel", "self_loops", "decimate_time", "ranks", "similarity",
                                 "summarize", "synth"});
    PipelineConfig c;
    read_optional(j, "seed", c.seed);
    if (j.contains("band")) {
      const auto& b = j.at("band");
      reject_unknown(b, "band", {"low_hz", "high_hz"});
      read(b, "low_hz", c.band.low_hz);
      read(b, "high_hz", c.band.high_hz);
    }
    if (j.contains("kernel")) {
      const auto& k = j.at("kernel");
      reject_unknown(k, "kernel", {"sigma_cw"});
      read(k, "sigma_cw", c.kernel.sigma_cw);
    }
    if (j.contains("self_loops")) {
      const auto s = j.at("self_loops").get<std::string>();
      if (s == "zero") {
        c.self_loops = SelfLoops::zero;
      } else if (s == "one") {
        c.self_loops = SelfLoops::one;
      } else {
        fail(ErrorKind::invalid_config, "self_loops must be \"zero\" or \"one\"");
      }
    }
    read(j, "decimate_time", c.decimate_time);
    if (j.contains("ranks")) {
      const auto& r = j.at("ranks");
      reject_unknown(r, "ranks", {"epsilon_rel", "n_bar", "s_bar"});
      read(r, "epsilon_rel", c.ranks.epsilon_rel);
      read_optional(r, "n_bar", c.ranks.n_bar);
      read_optional(r, "s_bar", c.ranks.s_bar);
    }
    if (j.contains("similarity")) {
      const auto& s = j.at("similarity");
      reject_unknown(s, "similarity", {"lambda", "sigma_time", "time_units", "k_clusters", "eigengap_max_k",
                                       "kmeans_restarts", "contiguity_window", "contiguity_passes"});
      read(s, "lambda", c.similarity.lambda);
      read(s, "sigma_time", c.similarity.sigma_time);
      if (s.contains("time_units")) {
        const auto u = s.at("time_units").get<std::string>();
        if (u == "bins") {
          c.similarity.time_units = TimeUnits::bins;
        } else if (u == "ms") {
          c.similarity.time_units = TimeUnits::ms;
        } else {
          fail(ErrorKind::invalid_config, "time_units must be \"bins\" or \"ms\"");
        }
      }
      if (s.contains("k_clusters")) {
        const auto& k = s.at("k_clusters");
        if (k.is_string() && k.get<std::string>() == "auto") {
          c.similarity.k_clusters.reset();
        } else if (k.is_number_unsigned()) {
          c.similarity.k_clusters = k.get<std::size_t>();
        } else {
          fail(ErrorKind::invalid_config, "k_clusters must be a positive integer or \"auto\"");
        }
      }
      read(s, "eigengap_max_k", c.similarity.eigengap_max_k);
      read(s, "kmeans_restarts", c.similarity.kmeans_restarts);
      read(s, "contiguity_window", c.similarity.contiguity_window);
      read(s, "contiguity_passes", c.similarity.contiguity_passes);
    }
    if (j.contains("summarize")) {
      const auto& s = j.at("summarize");
      reject_unknown(s, "summarize", {"k_index", "l_index", "quantile", "rank_by_abs", "svg", "node_positions"});
      read(s, "k_index", c.summarize.k_index);
      read(s, "l_index", c.summarize.l_index);
      read(s, "quantile", c.summarize.quantile);
      read(s, "rank_by_abs", c.summarize.rank_by_abs);
      read(s, "svg", c.summarize.svg);
      if (s.contains("node_positions")) {
        for (const auto& [label, xy] : s.at("node_positions").items()) {
          c.summarize.node_positions[label] = {xy.at(0).get<double>(), xy.at(1).get<double>()};
        }
      }
    }
    if (j.contains("synth")) c.synth = synthetic_spec_from_json(j.at("synth"));
    return c;
  } catch (const json::exception& e) {
    fail(ErrorKind::invalid_config, std::string("config: ") + e.what());
  }
}

PipelineConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::invalid_config, "cannot open config file " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    fail(ErrorKind::invalid_config, path.string() + ": " + e.what());
  }
  return config_from_json(j);
}

void validate(const SyntheticSpec& s) {
  auto bad = [](const std::string& what) { fail(ErrorKind::invalid_config, "synth: " + what); };
  if (s.n_nodes < 2) bad("n_nodes must be >= 2");
  if (s.n_samples < 2) bad("n_samples must be >= 2");
  if (s.n_subjects < 1) bad("n_subjects must be >= 1");
  if (s.n_trials < 1) bad("n_trials must be >= 1");
  if (!(s.fs_hz > 0.0)) bad("fs_hz must be positive");
  if (!(s.tone_hz > 0.0 && s.tone_hz < s.fs_hz / 2.0)) bad("tone_hz must lie in (0, fs/2)");
  if (!(s.noise_level >= 0.0)) bad("noise_level must be >= 0");
  if (!(s.phase_diffusion >= 0.0)) bad("phase_diffusion must be >= 0");
  if (!(s.background_amplitude >= 0.0)) bad("background_amplitude must be >= 0");
  for (std::size_t b = 0; b < s.boundaries.size(); ++b) {
    if (s.boundaries[b] == 0 || s.boundaries[b] >= s.n_samples) bad("boundaries must lie in [1, n_samples)");
    if (b > 0 && s.boundaries[b] <= s.boundaries[b - 1]) bad("boundaries must be strictly increasing");
  }
  if (s.states.size() != s.boundaries.size() + 1) bad("need exactly one state per planted interval");
  for (const auto& st : s.states) {
    if (!(st.strength >= 0.0 && st.strength <= 1.0)) bad("coupling strength must lie in [0, 1]");
    for (const auto& [a, b] : st.pairs) {
      if (a >= s.n_nodes || b >= s.n_nodes || a == b) bad("coupled pair out of range or self-pair");
    }
  }
}

void validate(const PipelineConfig& c) {
  require_seed(c);
  if (!(c.band.low_hz >= 0.0 && c.band.low_hz < c.band.high_hz)) {
    fail(ErrorKind::invalid_config, "band must satisfy 0 <= low_hz < high_hz");
  }
  validate(c.kernel);
  if (c.decimate_time < 1) fail(ErrorKind::invalid_config, "decimate_time must be >= 1");
  if (!(c.ranks.epsilon_rel > 0.0 && c.ranks.epsilon_rel < 1.0)) {
    fail(ErrorKind::invalid_config, "epsilon_rel must lie in (0, 1)");
  }
  if ((c.ranks.n_bar && *c.ranks.n_bar == 0) || (c.ranks.s_bar && *c.ranks.s_bar == 0)) {
    fail(ErrorKind::invalid_config, "explicit ranks must be positive");
  }
  const auto& s = c.similarity;
  if (!(s.lambda > 0.0 && s.lambda < 1.0)) fail(ErrorKind::invalid_config, "lambda must lie in (0, 1)");
  if (!(s.sigma_time > 0.0)) fail(ErrorKind::invalid_config, "sigma_time must be positive");
  if (s.k_clusters && *s.k_clusters == 0) fail(ErrorKind::invalid_config, "k_clusters must be positive");
  if (s.eigengap_max_k < 2) fail(ErrorKind::invalid_config, "eigengap_max_k must be >= 2");
  if (s.contiguity_window < 1) fail(ErrorKind::invalid_config, "contiguity_window must be >= 1");
  const auto& m = c.summarize;
  if (m.k_index < 1 || m.l_index < 1) fail(ErrorKind::invalid_config, "k_index and l_index are 1-based");
  if (!(m.quantile > 0.0 && m.quantile < 1.0)) fail(ErrorKind::invalid_config, "quantile must lie in (0, 1)");
  validate(c.synth);
}

std::uint64_t require_seed(const PipelineConfig& config) {
  if (!config.seed) fail(ErrorKind::invalid_config, "a seed is required (config \"seed\" or --seed)");
  return *config.seed;
}

}  // namespace netstate
