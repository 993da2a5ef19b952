#include "netstate/config.hpp"
#include "netstate/error.hpp"
#include "netstate/io.hpp"
#include "netstate/parallel.hpp"
#include "netstate/pipeline.hpp"
#include "netstate/synth.hpp"

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

namespace fs = std::filesystem;
using namespace netstate;

namespace {

struct Options {
  std::string config;
  std::string in;
  std::string out;
  std::string states;
  std::optional<std::uint64_t> seed;
  std::size_t threads = 1;
  bool verbose = false;
};

void add_common(CLI::App* cmd, Options& o, bool needs_input) {
  cmd->add_option("--config", o.config, "JSON configuration file")->check(CLI::ExistingFile);
  auto* in = cmd->add_option("--in", o.in, "input path");
  if (needs_input) in->required();
  cmd->add_option("--out", o.out, "output path")->required();
  cmd->add_option("--seed", o.seed, "overrides the configured seed");
  cmd->add_option("--threads", o.threads, "worker threads")->check(CLI::PositiveNumber);
  cmd->add_flag("--verbose", o.verbose, "progress on stderr");
}

PipelineConfig resolve(const Options& o) {
  PipelineConfig c = o.config.empty() ? PipelineConfig{} : load_config(o.config);
  if (o.seed) c.seed = *o.seed;
  validate(c);
  return c;
}

void log(const Options& o, const std::string& msg) {
  if (o.verbose) std::cerr << "netstate: " << msg << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Brain network state detection from multi-trial recordings"};
  app.require_subcommand(1);
  Options o;

  auto* synth = app.add_subcommand("synth", "write a synthetic dataset with planted states");
  add_common(synth, o, false);
  auto* conn = app.add_subcommand("connectivity", "recordings -> connectivity tensor");
  add_common(conn, o, true);
  auto* detect = app.add_subcommand("detect", "connectivity tensor -> states.json, psi.csv");
  add_common(detect, o, true);
  auto* summarize = app.add_subcommand("summarize", "connectivity tensor + states -> per-state summaries");
  add_common(summarize, o, true);
  summarize->add_option("--states", o.states, "states.json (default: <out>/states.json)");
  auto* pipeline = app.add_subcommand("pipeline", "recordings -> every artifact");
  add_common(pipeline, o, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    set_thread_count(static_cast<int>(o.threads));
    const PipelineConfig config = resolve(o);
    const fs::path out = o.out;

    if (synth->parsed()) {
      log(o, "generating " + std::to_string(config.synth.n_subjects) + " subjects into " + out.string());
      write_synthetic(out, config.synth, require_seed(config));
    } else if (conn->parsed()) {
      log(o, "reading recordings from " + o.in);
      const auto recs = read_recordings(o.in);
      log(o, "computing connectivity for " + std::to_string(recs.size()) + " subjects");
      write_tensor(out, run_connectivity(recs, config), to_json(config));
    } else if (detect->parsed()) {
      const auto g = read_tensor(o.in);
      const auto result = run_detect(g, config);
      log(o, "k = " + std::to_string(result.k) + ", " + std::to_string(result.partition.intervals.size()) +
                 " intervals");
      write_detect(out, result, g, config);
    } else if (summarize->parsed()) {
      const auto g = read_tensor(o.in);
      const fs::path states = o.states.empty() ? out / "states.json" : fs::path(o.states);
      const auto partition = read_states(states);
      write_summaries(out, run_summarize(g, partition, config), partition, g, config);
      log(o, "wrote " + std::to_string(partition.intervals.size()) + " summaries");
    } else if (pipeline->parsed()) {
      log(o, "running all stages from " + o.in);
      run_pipeline(o.in, config, out);
    }
    return 0;
  } catch (const Error& e) {
    std::cerr << "netstate: " << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "netstate: " << e.what() << '\n';
    return 3;
  }
}
