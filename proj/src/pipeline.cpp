#include "netstate/pipeline.hpp"

#include "netstate/error.hpp"
#include "netstate/io.hpp"
#include "netstate/parallel.hpp"

#include <chrono>
#include <cstdio>
#include <string>

namespace netstate {

namespace {

using json = nlohmann::json;

inline constexpr int kStatesFormatVersion = 1;
inline constexpr int kSummaryFormatVersion = 1;

double bin_spacing_ms(const ConnectivityTensor& g) {
  if (g.time_axis_ms.size() < 2) return 1.0;
  return g.time_axis_ms[1] - g.time_axis_ms[0];
}

json interval_json(const StateInterval& iv, std::size_t index, const ConnectivityTensor& g) {
  json j = {{"index", index}, {"label", iv.label}, {"start_bin", iv.first_bin}, {"end_bin", iv.last_bin}};
  if (iv.last_bin < g.time_axis_ms.size()) {
    j["start_ms"] = g.time_axis_ms[iv.first_bin];
    j["end_ms"] = g.time_axis_ms[iv.last_bin];
  }
  return j;
}

json matrix_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string summary_stem(std::size_t index) { return "summary_" + std::to_string(index); }

template <class F>
double timed(F&& f) {
  const auto start = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

}  // namespace

ConnectivityOptions connectivity_options(const PipelineConfig& config) {
  ConnectivityOptions o;
  o.band = config.band;
  o.kernel = config.kernel;
  o.self_loops = config.self_loops;
  o.decimate_time = config.decimate_time;
  return o;
}

ConnectivityTensor run_connectivity(std::span<const MultiTrialRecording> recs, const PipelineConfig& config) {
  return build_tensor(recs, connectivity_options(config));
}

DetectResult run_detect(const ConnectivityTensor& g, const PipelineConfig& config) {
  const Tensor& x = g.values;
  if (x.order() != 4) fail(ErrorKind::invalid_input, "state detection needs a node x node x time x subject tensor");
  const std::size_t n_time = x.dim(2);
  const auto& sim = config.similarity;

  DetectResult r;
  const bool explicit_ranks = config.ranks.n_bar && config.ranks.s_bar;
  r.ranks_from_config = explicit_ranks;
  Tensor reduced;
  if (explicit_ranks) {
    r.ranks = {*config.ranks.n_bar, *config.ranks.s_bar, config.ranks.epsilon_rel};
    const std::size_t ranks[4] = {r.ranks.n_bar, r.ranks.n_bar, n_time, r.ranks.s_bar};
    reduced = truncate_reconstruct(x, ranks);
  } else {
    const TuckerModel model = hosvd(x);
    r.ranks = select_ranks(model, config.ranks.epsilon_rel);
    if (config.ranks.n_bar) r.ranks.n_bar = *config.ranks.n_bar;
    if (config.ranks.s_bar) r.ranks.s_bar = *config.ranks.s_bar;
    const std::size_t ranks[4] = {r.ranks.n_bar, r.ranks.n_bar, n_time, r.ranks.s_bar};
    reduced = truncate_reconstruct(x, model, ranks);
  }

  const double spacing = sim.time_units == TimeUnits::ms ? bin_spacing_ms(g) : 1.0;
  r.similarity.delta = delta_matrix(reduced, 2);
  reduced = Tensor();
  r.similarity.theta = theta_matrix(n_time, sim.sigma_time, spacing);
  r.similarity.psi = combine(r.similarity.delta, r.similarity.theta, sim.lambda);
  r.spectrum = affinity_spectrum(r.similarity.psi);

  if (sim.k_clusters) {
    r.k = *sim.k_clusters;
    r.k_from_config = true;
  } else {
    r.k = choose_k_from_spectrum(r.spectrum, sim.eigengap_max_k);
  }
  KMeansOptions km;
  km.seed = require_seed(config);
  km.restarts = sim.kmeans_restarts;
  const auto labels = spectral_cluster(r.similarity.psi, r.k, km);
  r.partition = enforce_contiguity(labels, sim.contiguity_window, sim.contiguity_passes);
  return r;
}

std::vector<StateSummary> run_summarize(const ConnectivityTensor& g, const StatePartition& partition,
                                        const PipelineConfig& config) {
  const auto& sc = config.summarize;
  for (const auto& iv : partition.intervals) {
    if (iv.first_bin > iv.last_bin || iv.last_bin >= g.values.dim(2)) {
      fail(ErrorKind::invalid_index, "interval [" + std::to_string(iv.first_bin) + ", " + std::to_string(iv.last_bin) +
                                         "] lies outside the tensor's " + std::to_string(g.values.dim(2)) + " time bins");
    }
  }
  std::vector<StateSummary> out(partition.intervals.size());
  parallel_for(out.size(), [&](std::size_t i) {
    const auto& iv = partition.intervals[i];
    out[i] = summarize_interval(g.values, iv.first_bin, iv.last_bin, sc.k_index, sc.l_index, sc.quantile,
                                sc.rank_by_abs);
  });
  return out;
}

json states_json(const DetectResult& r, const ConnectivityTensor& g, const PipelineConfig& config) {
  json intervals = json::array();
  for (std::size_t i = 0; i < r.partition.intervals.size(); ++i) {
    intervals.push_back(interval_json(r.partition.intervals[i], i + 1, g));
  }
  const std::size_t shown =
      std::min<std::size_t>(static_cast<std::size_t>(r.spectrum.size()), config.similarity.eigengap_max_k + 1);
  json eigen = json::array();
  for (std::size_t i = 0; i < shown; ++i) eigen.push_back(r.spectrum(static_cast<Eigen::Index>(i)));
  return {{"format_version", kStatesFormatVersion},
          {"config", to_json(config)},
          {"psi_shape", {r.similarity.psi.rows(), r.similarity.psi.cols()}},
          {"ranks",
           {{"n_bar", r.ranks.n_bar},
            {"s_bar", r.ranks.s_bar},
            {"epsilon_rel", r.ranks.epsilon_rel},
            {"source", r.ranks_from_config ? "config" : "epsilon_rel"}}},
          {"eigenvalues", eigen},
          {"k", r.k},
          {"k_source", r.k_from_config ? "config" : "eigengap"},
          {"n_states", r.partition.k},
          {"intervals", intervals},
          {"labels_per_t", r.partition.labels_per_t},
          {"time_axis_ms", g.time_axis_ms}};
}

void write_detect(const std::filesystem::path& out_dir, const DetectResult& r, const ConnectivityTensor& g,
                  const PipelineConfig& config) {
  std::filesystem::create_directories(out_dir);
  write_json_atomic(out_dir / "states.json", states_json(r, g, config));
  write_file_atomic(out_dir / "psi.csv", matrix_csv(r.similarity.psi));
}

StatePartition read_states(const std::filesystem::path& path) {
  const json j = read_json(path);
  try {
    StatePartition p;
    p.k = j.at("n_states").get<std::size_t>();
    p.labels_per_t = j.at("labels_per_t").get<std::vector<int>>();
    for (const auto& iv : j.at("intervals")) {
      p.intervals.push_back(
          {iv.at("start_bin").get<std::size_t>(), iv.at("end_bin").get<std::size_t>(), iv.at("label").get<int>()});
    }
    return p;
  } catch (const json::exception& e) {
    fail(ErrorKind::io, path.string() + ": malformed states file (" + e.what() + ")");
  }
}

json summary_json(const StateSummary& s, const StateInterval& iv, std::size_t index, const ConnectivityTensor& g,
                  const PipelineConfig& config) {
  const auto& labels = g.node_labels;
  json edges = json::array();
  for (const auto& e : s.edges) {
    edges.push_back({{"i", e.i}, {"j", e.j}, {"node_i", labels.at(e.i)}, {"node_j", labels.at(e.j)}, {"weight", e.weight}});
  }
  json degrees = json::array();
  for (std::size_t n = 0; n < s.degrees.size(); ++n) {
    degrees.push_back({{"node", labels.at(n)},
                       {"degree", s.degrees[n]},
                       {"weighted_degree", s.weighted_degrees(static_cast<Eigen::Index>(n))}});
  }
  return {{"format_version", kSummaryFormatVersion},
          {"interval", interval_json(iv, index, g)},
          {"k_index", s.k_index},
          {"l_index", s.l_index},
          {"quantile", config.summarize.quantile},
          {"rank_by_abs", config.summarize.rank_by_abs},
          {"node_labels", labels},
          {"map", matrix_json(s.map)},
          {"edges", edges},
          {"degrees", degrees}};
}

std::string summary_csv(const StateSummary& s, const std::vector<std::string>& node_labels) {
  std::string out = "node_i,node_j,weight\n";
  char buf[40];
  for (const auto& e : s.edges) {
    std::snprintf(buf, sizeof buf, "%.17g", e.weight);
    out += node_labels.at(e.i) + ',' + node_labels.at(e.j) + ',' + buf + '\n';
  }
  return out;
}

void write_summaries(const std::filesystem::path& out_dir, const std::vector<StateSummary>& summaries,
                     const StatePartition& partition, const ConnectivityTensor& g, const PipelineConfig& config) {
  if (summaries.size() != partition.intervals.size()) {
    fail(ErrorKind::invalid_input, "one summary per interval expected");
  }
  std::filesystem::create_directories(out_dir);
  for (std::size_t i = 0; i < summaries.size(); ++i) {
    const auto stem = summary_stem(i + 1);
    write_file_atomic(out_dir / (stem + ".csv"), summary_csv(summaries[i], g.node_labels));
    write_json_atomic(out_dir / (stem + ".json"),
                      summary_json(summaries[i], partition.intervals[i], i + 1, g, config));
    if (config.summarize.svg) {
      write_file_atomic(out_dir / (stem + ".svg"), summary_svg(summaries[i], g.node_labels, config.summarize));
    }
  }
}

void run_pipeline(const std::filesystem::path& in_dir, const PipelineConfig& config,
                  const std::filesystem::path& out_dir) {
  validate(config);
  std::vector<StageTiming> timings;
  std::vector<MultiTrialRecording> recs;
  ConnectivityTensor g;
  DetectResult detected;
  std::vector<StateSummary> summaries;

  timings.push_back({"read", timed([&] { recs = read_recordings(in_dir); })});
  timings.push_back({"connectivity", timed([&] {
                       g = run_connectivity(recs, config);
                       write_tensor(out_dir / "tensor", g, to_json(config));
                     })});
  recs.clear();
  timings.push_back({"detect", timed([&] {
                       detected = run_detect(g, config);
                       write_detect(out_dir, detected, g, config);
                     })});
  timings.push_back({"summarize", timed([&] {
                       summaries = run_summarize(g, detected.partition, config);
                       write_summaries(out_dir, summaries, detected.partition, g, config);
                     })});

  json stages = json::array();
  for (const auto& t : timings) stages.push_back({{"stage", t.stage}, {"seconds", t.seconds}});
  json outputs = json::object();
  std::vector<std::string> files = {"tensor/meta.json", "tensor/data.f64", "states.json", "psi.csv"};
  for (std::size_t i = 0; i < summaries.size(); ++i) {
    const auto stem = summary_stem(i + 1);
    files.push_back(stem + ".csv");
    files.push_back(stem + ".json");
    if (config.summarize.svg) files.push_back(stem + ".svg");
  }
  for (const auto& f : files) outputs[f] = file_digest(out_dir / f);
  write_json_atomic(out_dir / "run_manifest.json",
                    {{"config", to_json(config)},
                     {"input", in_dir.string()},
                     {"formats",
                      {{"recording", kRecordingFormatVersion},
                       {"tensor", kTensorFormatVersion},
                       {"states", kStatesFormatVersion},
                       {"summary", kSummaryFormatVersion}}},
                     {"stages", stages},
                     {"outputs", outputs}});
}

}  // namespace netstate
