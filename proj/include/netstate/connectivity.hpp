#pragma once

#include "netstate/tensor.hpp"
#include "netstate/timefreq.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace netstate {

// Trials x channels x samples of one subject. Sample u of channel c in trial
// k lives at data[(k * n_channels + c) * n_samples + u].
struct MultiTrialRecording {
  std::vector<double> data;
  std::size_t n_trials = 0;
  std::size_t n_channels = 0;
  std::size_t n_samples = 0;
  double fs = 1.0;
  double t0_ms = 0.0;
  std::vector<std::string> channel_labels;
  std::string subject_id;

  std::span<const double> trace(std::size_t trial, std::size_t channel) const {
    return {data.data() + (trial * n_channels + channel) * n_samples, n_samples};
  }
  std::span<double> trace(std::size_t trial, std::size_t channel) {
    return {data.data() + (trial * n_channels + channel) * n_samples, n_samples};
  }
};

void validate(const MultiTrialRecording& rec);

struct BandSpec {
  double low_hz = 4.0;
  double high_hz = 8.0;
};

void validate(const BandSpec& band, double fs);

// Indices of frequency bins whose centre lies in [low_hz, high_hz].
// Throws empty-band when there are none.
std::vector<std::size_t> band_bins(const BandSpec& band, std::span<const double> freq_axis_hz);

enum class SelfLoops { zero, one };

struct ConnectivityTensor {
  Tensor values;  // node x node x time x subject
  std::vector<std::string> node_labels;
  std::vector<double> time_axis_ms;
  std::vector<std::string> subject_ids;

  friend bool operator==(const ConnectivityTensor&, const ConnectivityTensor&) = default;
};

// PLV(t, w) = |(1/L) sum_k exp(j |phi_i^k(t, w) - phi_j^k(t, w)|)| from
// per-trial phase matrices of two channels.
Eigen::MatrixXd plv_from_phases(std::span<const Eigen::MatrixXd> phases_i,
                                std::span<const Eigen::MatrixXd> phases_j);

// Time x frequency PLV between channels i and j over all trials, using the
// RID-Rihaczek phase of every trial.
Eigen::MatrixXd plv_pair(const MultiTrialRecording& rec, std::size_t i, std::size_t j, const KernelParams& kernel);

// G(t) = mean of plv(t, w) over the bins of the band.
Eigen::VectorXd band_average(const Eigen::MatrixXd& plv, const BandSpec& band,
                             std::span<const double> freq_axis_hz);

struct ConnectivityOptions {
  BandSpec band;
  KernelParams kernel;
  SelfLoops self_loops = SelfLoops::zero;
  std::size_t decimate_time = 1;  // mean-pool factor over time bins
};

// Band-averaged PLV graphs of every subject stacked into a node x node x
// time x subject tensor. Parallel over (trial, channel) and channel pairs.
ConnectivityTensor build_tensor(std::span<const MultiTrialRecording> recs, const ConnectivityOptions& options);

// Mean-pools mode 2 (time) of a 4-mode tensor in blocks of `factor` bins;
// a trailing partial block is dropped.
Tensor decimate_time(const Tensor& x, std::size_t factor);

}  // namespace netstate
