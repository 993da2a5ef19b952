#pragma once

#include "netstate/config.hpp"
#include "netstate/connectivity.hpp"
#include "netstate/states.hpp"
#include "netstate/summarize.hpp"
#include "netstate/tucker.hpp"

#include <Eigen/Dense>
#include <json.hpp>

#include <filesystem>
#include <span>
#include <string>
#include <vector>

namespace netstate {

ConnectivityOptions connectivity_options(const PipelineConfig& config);

ConnectivityTensor run_connectivity(std::span<const MultiTrialRecording> recs, const PipelineConfig& config);

struct DetectResult {
  RankSelection ranks;
  bool ranks_from_config = false;
  SimilarityMatrix similarity;
  Eigen::VectorXd spectrum;  // normalized affinity eigenvalues, descending
  std::size_t k = 0;
  bool k_from_config = false;
  StatePartition partition;
};

// hosvd -> rank selection (or explicit ranks) -> truncation with the time
// mode kept whole -> Delta, Theta, Psi -> k -> spectral clustering ->
// contiguity repair.
DetectResult run_detect(const ConnectivityTensor& g, const PipelineConfig& config);

// One summary per interval, in interval order.
std::vector<StateSummary> run_summarize(const ConnectivityTensor& g, const StatePartition& partition,
                                        const PipelineConfig& config);

nlohmann::json states_json(const DetectResult& result, const ConnectivityTensor& g, const PipelineConfig& config);

// states.json and psi.csv.
void write_detect(const std::filesystem::path& out_dir, const DetectResult& result, const ConnectivityTensor& g,
                  const PipelineConfig& config);

StatePartition read_states(const std::filesystem::path& states_json);

nlohmann::json summary_json(const StateSummary& summary, const StateInterval& interval, std::size_t index,
                            const ConnectivityTensor& g, const PipelineConfig& config);
std::string summary_csv(const StateSummary& summary, const std::vector<std::string>& node_labels);

// summary_<n>.csv / .json / .svg for interval n (1-based).
void write_summaries(const std::filesystem::path& out_dir, const std::vector<StateSummary>& summaries,
                     const StatePartition& partition, const ConnectivityTensor& g, const PipelineConfig& config);

// Circle layout unless every node has a configured position; edge width
// grows with rank.
std::string summary_svg(const StateSummary& summary, const std::vector<std::string>& node_labels,
                        const SummarizeConfig& config);

struct StageTiming {
  std::string stage;
  double seconds = 0.0;
};

// Reads recordings from in_dir and writes tensor/, states.json, psi.csv,
// summary files and run_manifest.json into out_dir.
void run_pipeline(const std::filesystem::path& in_dir, const PipelineConfig& config,
                  const std::filesystem::path& out_dir);

}  // namespace netstate
