#include "netstate/config.hpp"
#include "netstate/error.hpp"
#include "netstate/io.hpp"
#include "netstate/pipeline.hpp"
#include "netstate/synth.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

using namespace netstate;
namespace fs = std::filesystem;

namespace {

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("expected an error");
  return ErrorKind::io;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(NETSTATE_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

SyntheticSpec small_spec() {
  SyntheticSpec spec;
  spec.n_nodes = 6;
  spec.n_samples = 60;
  spec.n_subjects = 3;
  spec.n_trials = 8;
  spec.fs_hz = 50.0;
  spec.t0_ms = 0.0;
  spec.boundaries = {20, 40};
  spec.states = {PlantedState{{{0, 1}, {1, 2}}, 1.0}, PlantedState{{{3, 4}}, 1.0}, PlantedState{{{2, 5}}, 1.0}};
  return spec;
}

PipelineConfig small_config() {
  PipelineConfig c;
  c.seed = 5;
  c.synth = small_spec();
  c.ranks.n_bar = 3;
  c.ranks.s_bar = 2;
  c.similarity.kmeans_restarts = 10;
  c.summarize.quantile = 0.2;
  return c;
}

}  // namespace

TEST_SUITE("pipeline") {
  TEST_CASE("config round trip") {
    PipelineConfig c = small_config();
    c.similarity.k_clusters = 3;
    c.similarity.time_units = TimeUnits::ms;
    c.self_loops = SelfLoops::one;
    c.summarize.node_positions["n1"] = {0.5, -1.0};
    const auto j = to_json(c);
    const auto back = config_from_json(j);
    CHECK(to_json(back) == j);
    CHECK(back.ranks.n_bar == 3u);
    CHECK(back.similarity.k_clusters == 3u);
    CHECK(back.synth.boundaries == std::vector<std::size_t>{20, 40});
  }

  TEST_CASE("config rejects unknown keys, wrong types and a missing seed") {
    CHECK(kind_of([] { config_from_json(nlohmann::json{{"seed", 1}, {"bogus", 2}}); }) == ErrorKind::invalid_config);
    CHECK(kind_of([] { config_from_json(nlohmann::json{{"band", {{"low", 4}}}}); }) == ErrorKind::invalid_config);
    CHECK(kind_of([] { config_from_json(nlohmann::json{{"seed", "x"}}); }) == ErrorKind::invalid_config);
    CHECK(kind_of([] { validate(PipelineConfig{}); }) == ErrorKind::invalid_config);
    PipelineConfig c = small_config();
    CHECK_NOTHROW(validate(c));
    c.similarity.lambda = 1.5;
    CHECK(kind_of([&] { validate(c); }) == ErrorKind::invalid_config);
    c = small_config();
    c.synth.background_amplitude = -1.0;
    CHECK(kind_of([&] { validate(c); }) == ErrorKind::invalid_config);
  }

  TEST_CASE("shipped configuration files load") {
    const auto c = load_config(fs::path(NETSTATE_CONFIG_DIR) / "synthetic.json");
    CHECK(c.seed == 42u);
    CHECK(c.ranks.n_bar == 4u);
    CHECK(c.ranks.s_bar == 3u);
  }

  TEST_CASE("recording container round trip is bitwise") {
    const auto dir = oracle::temp_dir("rec");
    const auto rec = generate_subject(small_spec(), 3, 1);
    write_recording(dir / "r", rec);
    const auto back = read_recording(dir / "r");
    CHECK(back.data == rec.data);
    CHECK(back.n_trials == rec.n_trials);
    CHECK(back.n_channels == rec.n_channels);
    CHECK(back.n_samples == rec.n_samples);
    CHECK(back.fs == rec.fs);
    CHECK(back.t0_ms == rec.t0_ms);
    CHECK(back.channel_labels == rec.channel_labels);
    CHECK(back.subject_id == rec.subject_id);
    fs::remove_all(dir);
  }

  TEST_CASE("tensor container round trip is bitwise") {
    const auto dir = oracle::temp_dir("tensor");
    PlantedTensorSpec spec;
    spec.n_nodes = 5;
    spec.n_time = 12;
    spec.n_subjects = 2;
    spec.n_states = 3;
    const auto g = planted_state_tensor(spec, 4);
    write_tensor(dir / "t", g, to_json(small_config()));
    CHECK(read_tensor(dir / "t") == g);
    CHECK(read_tensor_meta(dir / "t")["config"] == to_json(small_config()));
    CHECK(kind_of([&] { read_tensor(dir / "missing"); }) == ErrorKind::io);
    fs::remove_all(dir);
  }

  TEST_CASE("synthetic dataset layout and reproducibility") {
    const auto dir = oracle::temp_dir("synth");
    const auto spec = default_synthetic_spec();
    write_synthetic(dir / "a", spec, 42);
    write_synthetic(dir / "b", spec, 42);
    const auto recs = read_recordings(dir / "a");
    CHECK(recs.size() == 10);
    CHECK(recs[0].n_channels == 16);
    CHECK(recs[0].n_samples == 200);
    CHECK(recs[0].n_trials == 20);
    const auto truth = read_json(dir / "a" / "ground_truth.json");
    CHECK(truth["boundaries"].size() == 2);
    CHECK(truth["states"].size() == 3);
    CHECK(truth["labels_per_t"].size() == 200);
    for (const auto& entry : fs::recursive_directory_iterator(dir / "a")) {
      if (!entry.is_regular_file()) continue;
      const auto rel = fs::relative(entry.path(), dir / "a");
      CHECK(slurp(entry.path()) == slurp(dir / "b" / rel));
    }
    fs::remove_all(dir);
  }

  TEST_CASE("noise-free identical coupling gives perfect locking inside each state") {
    // Disjoint groups keep each coupled pair identical over the whole trial.
    SyntheticSpec spec = small_spec();
    spec.states = {PlantedState{{{0, 1}}, 1.0}, PlantedState{{{2, 3}}, 1.0}, PlantedState{{{4, 5}}, 1.0}};
    spec.noise_level = 0.0;
    spec.background_amplitude = 0.0;
    spec.n_subjects = 1;
    const auto recs = generate_recordings(spec, 9);
    PipelineConfig c = small_config();
    c.synth = spec;
    const auto g = run_connectivity(recs, c);
    const auto truth = planted_labels(spec);
    for (std::size_t t = 0; t < spec.n_samples; ++t) {
      const auto& pairs = spec.states[static_cast<std::size_t>(truth[t] - 1)].pairs;
      for (const auto& [a, b] : pairs) CHECK(std::abs(g.values(a, b, t, 0) - 1.0) <= 1e-9);
    }
  }

  TEST_CASE("generator validation") {
    SyntheticSpec spec = small_spec();
    spec.boundaries = {40, 20};
    CHECK(kind_of([&] { validate(spec); }) == ErrorKind::invalid_config);
    spec = small_spec();
    spec.states[0].pairs.push_back({0, 6});
    CHECK(kind_of([&] { validate(spec); }) == ErrorKind::invalid_config);
    PlantedTensorSpec planted;
    planted.n_states = 0;
    CHECK(kind_of([&] { planted_state_tensor(planted, 1); }) == ErrorKind::invalid_config);
  }

  TEST_CASE("stages run from files match the in-process result") {
    const auto dir = oracle::temp_dir("stages");
    const auto config = small_config();
    const auto recs = generate_recordings(config.synth, 5);
    const auto g = run_connectivity(recs, config);
    write_tensor(dir / "tensor", g, to_json(config));
    const auto stored = read_tensor(dir / "tensor");
    const auto direct = run_detect(g, config);
    const auto staged = run_detect(stored, config);
    CHECK(staged.similarity.psi == direct.similarity.psi);
    CHECK(staged.partition.labels_per_t == direct.partition.labels_per_t);
    write_detect(dir, staged, stored, config);
    const auto partition = read_states(dir / "states.json");
    CHECK(partition.intervals == direct.partition.intervals);
    CHECK(partition.labels_per_t == direct.partition.labels_per_t);
    CHECK(partition.k == direct.partition.k);
    const auto a = run_summarize(g, direct.partition, config);
    const auto b = run_summarize(stored, partition, config);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(summary_csv(a[i], g.node_labels) == summary_csv(b[i], g.node_labels));
    fs::remove_all(dir);
  }

  TEST_CASE("detect result is consistent") {
    const auto config = small_config();
    const auto g = run_connectivity(generate_recordings(config.synth, 5), config);
    const auto r = run_detect(g, config);
    CHECK(r.ranks_from_config);
    CHECK(r.ranks.n_bar == 3);
    CHECK(r.similarity.psi.rows() == 60);
    CHECK(r.k >= 2);
    CHECK(r.spectrum.size() == 60);
    CHECK(r.partition.labels_per_t.size() == 60);
    const auto j = states_json(r, g, config);
    CHECK(j["intervals"].size() == r.partition.intervals.size());
    CHECK(j["k_source"] == "eigengap");
    CHECK(j["ranks"]["source"] == "config");
  }

  TEST_CASE("summary outputs") {
    const auto config = small_config();
    PlantedTensorSpec spec;
    spec.n_nodes = 6;
    spec.n_time = 20;
    spec.n_subjects = 3;
    spec.n_states = 2;
    const auto g = planted_state_tensor(spec, 8);
    StatePartition p;
    p.k = 2;
    p.intervals = {{0, 9, 1}, {10, 19, 2}};
    const auto sums = run_summarize(g, p, config);
    REQUIRE(sums.size() == 2);
    const auto csv = summary_csv(sums[0], g.node_labels);
    CHECK(csv.rfind("node_i,node_j,weight\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 3);  // ceil(0.2 * 15)
    const auto svg = summary_svg(sums[0], g.node_labels, config.summarize);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(std::count(svg.begin(), svg.end(), '\n') > 0);
    const auto j = summary_json(sums[1], p.intervals[1], 2, g, config);
    CHECK(j["interval"]["index"] == 2);
    CHECK(j["edges"].size() == 3);
    CHECK(j["map"].size() == 6);

    StatePartition bad = p;
    bad.intervals = {{0, 25, 1}};
    CHECK(kind_of([&] { run_summarize(g, bad, config); }) == ErrorKind::invalid_index);
  }

  TEST_CASE("full pipeline writes every artefact") {
    const auto dir = oracle::temp_dir("full");
    const auto config = small_config();
    write_synthetic(dir / "in", config.synth, 5);
    run_pipeline(dir / "in", config, dir / "out");
    for (const char* f : {"tensor/meta.json", "tensor/data.f64", "states.json", "psi.csv", "run_manifest.json",
                          "summary_1.csv", "summary_1.json", "summary_1.svg"}) {
      CHECK_MESSAGE(fs::exists(dir / "out" / f), f);
    }
    const auto manifest = read_json(dir / "out" / "run_manifest.json");
    CHECK(manifest["stages"].size() == 4);
    CHECK(manifest["outputs"]["states.json"] == file_digest(dir / "out" / "states.json"));
    fs::remove_all(dir);
  }

  TEST_CASE("command line exit codes") {
    const auto dir = oracle::temp_dir("cli");
    {
      std::ofstream(dir / "good.json") << to_json(small_config()).dump();
      std::ofstream(dir / "unknown.json") << R"({"seed": 1, "nope": true})";
      std::ofstream(dir / "noseed.json") << R"({"ranks": {"n_bar": 2}})";
    }
    const std::string d = dir.string();
    CHECK(run_cli("synth --config " + d + "/good.json --out " + d + "/data") == 0);
    CHECK(run_cli("connectivity --config " + d + "/good.json --in " + d + "/data --out " + d + "/tensor") == 0);
    CHECK(run_cli("detect --config " + d + "/good.json --in " + d + "/tensor --out " + d + "/res --threads 2") == 0);
    CHECK(run_cli("summarize --config " + d + "/good.json --in " + d + "/tensor --out " + d + "/res") == 0);
    CHECK(fs::exists(dir / "res" / "summary_1.csv"));

    CHECK(run_cli("detect --config " + d + "/unknown.json --in " + d + "/tensor --out " + d + "/x") == 2);
    CHECK(run_cli("detect --config " + d + "/noseed.json --in " + d + "/tensor --out " + d + "/x") == 2);
    CHECK(run_cli("detect --in " + d + "/tensor") == 2);
    CHECK(run_cli("frobnicate") == 2);

    CHECK(run_cli("detect --config " + d + "/good.json --in " + d + "/nothing --out " + d + "/x") == 3);

    ConnectivityTensor zero;
    zero.values = Tensor({3, 3, 6, 2});
    zero.node_labels = {"a", "b", "c"};
    zero.subject_ids = {"s1", "s2"};
    zero.time_axis_ms = {0, 1, 2, 3, 4, 5};
    write_tensor(dir / "zero", zero, nlohmann::json::object());
    CHECK(run_cli("detect --seed 1 --in " + d + "/zero --out " + d + "/x") == 4);
    fs::remove_all(dir);
  }

  TEST_CASE("seed on the command line overrides the configuration") {
    const auto dir = oracle::temp_dir("seed");
    {
      std::ofstream(dir / "good.json") << to_json(small_config()).dump();
    }
    const std::string d = dir.string();
    REQUIRE(run_cli("synth --config " + d + "/good.json --out " + d + "/a --seed 11") == 0);
    REQUIRE(run_cli("synth --config " + d + "/good.json --out " + d + "/b --seed 12") == 0);
    CHECK(read_json(dir / "a" / "ground_truth.json")["seed"] == 11);
    CHECK(slurp(dir / "a" / "subject_001" / "data.f64") != slurp(dir / "b" / "subject_001" / "data.f64"));
    fs::remove_all(dir);
  }
}
