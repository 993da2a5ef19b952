#include "netstate/connectivity.hpp"

#include "netstate/error.hpp"
#include "netstate/parallel.hpp"

#include <cmath>
#include <complex>
#include <set>
#include <string>

namespace netstate {

namespace {

// Column means over the selected bins, summed in bin order.
Eigen::VectorXd mean_over(const Eigen::MatrixXd& plv, std::span<const std::size_t> bins) {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(plv.rows());
  for (auto b : bins) g += plv.col(static_cast<Eigen::Index>(b));
  return g / static_cast<double>(bins.size());
}

void check_same_geometry(const MultiTrialRecording& ref, const MultiTrialRecording& rec, std::size_t s) {
  const auto who = "subject " + std::to_string(s) + (rec.subject_id.empty() ? "" : " (" + rec.subject_id + ")");
  if (rec.n_channels != ref.n_channels) fail(ErrorKind::geometry_mismatch, who + ": channel count differs");
  if (rec.n_samples != ref.n_samples) fail(ErrorKind::geometry_mismatch, who + ": sample count differs");
  if (rec.fs != ref.fs) fail(ErrorKind::geometry_mismatch, who + ": sampling rate differs");
  if (rec.t0_ms != ref.t0_ms) fail(ErrorKind::geometry_mismatch, who + ": t0_ms differs");
}

}  // namespace

void validate(const MultiTrialRecording& rec) {
  if (rec.n_trials < 1) fail(ErrorKind::invalid_input, "recording needs at least one trial");
  if (rec.n_channels < 2) fail(ErrorKind::invalid_input, "recording needs at least two channels");
  if (rec.n_samples < 2) fail(ErrorKind::invalid_input, "recording needs at least two samples");
  if (!(rec.fs > 0.0)) fail(ErrorKind::invalid_input, "sampling rate must be positive");
  if (rec.data.size() != rec.n_trials * rec.n_channels * rec.n_samples) {
    fail(ErrorKind::invalid_input, "recording data size does not match trials x channels x samples");
  }
  if (rec.channel_labels.size() != rec.n_channels) {
    fail(ErrorKind::invalid_input, "expected " + std::to_string(rec.n_channels) + " channel labels");
  }
  std::set<std::string> seen(rec.channel_labels.begin(), rec.channel_labels.end());
  if (seen.size() != rec.channel_labels.size()) fail(ErrorKind::invalid_input, "channel labels are not unique");
}

void validate(const BandSpec& band, double fs) {
  if (!(band.low_hz >= 0.0 && band.low_hz < band.high_hz && band.high_hz <= fs / 2.0)) {
    fail(ErrorKind::invalid_config, "band [" + std::to_string(band.low_hz) + ", " + std::to_string(band.high_hz) +
                                        "] Hz must satisfy 0 <= low < high <= fs/2");
  }
}

std::vector<std::size_t> band_bins(const BandSpec& band, std::span<const double> freq_axis_hz) {
  std::vector<std::size_t> bins;
  for (std::size_t k = 0; k < freq_axis_hz.size(); ++k) {
    if (freq_axis_hz[k] >= band.low_hz && freq_axis_hz[k] <= band.high_hz) bins.push_back(k);
  }
  if (bins.empty()) {
    fail(ErrorKind::empty_band, "no frequency bin lies in [" + std::to_string(band.low_hz) + ", " +
                                    std::to_string(band.high_hz) + "] Hz");
  }
  return bins;
}

Eigen::MatrixXd plv_from_phases(std::span<const Eigen::MatrixXd> phases_i,
                                std::span<const Eigen::MatrixXd> phases_j) {
  if (phases_i.empty() || phases_i.size() != phases_j.size()) {
    fail(ErrorKind::invalid_input, "phase stacks must be non-empty and of equal trial count");
  }
  const Eigen::Index rows = phases_i[0].rows();
  const Eigen::Index cols = phases_i[0].cols();
  Eigen::MatrixXd re = Eigen::MatrixXd::Zero(rows, cols);
  Eigen::MatrixXd im = Eigen::MatrixXd::Zero(rows, cols);
  for (std::size_t k = 0; k < phases_i.size(); ++k) {
    if (phases_i[k].rows() != rows || phases_i[k].cols() != cols || phases_j[k].rows() != rows ||
        phases_j[k].cols() != cols) {
      fail(ErrorKind::invalid_input, "phase matrices differ in shape");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      for (Eigen::Index r = 0; r < rows; ++r) {
        const double d = std::abs(phases_i[k](r, c) - phases_j[k](r, c));
        re(r, c) += std::cos(d);
        im(r, c) += std::sin(d);
      }
    }
  }
  const double inv_l = 1.0 / static_cast<double>(phases_i.size());
  Eigen::MatrixXd plv(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) plv(r, c) = std::min(1.0, std::hypot(re(r, c), im(r, c)) * inv_l);
  }
  return plv;
}

Eigen::MatrixXd plv_pair(const MultiTrialRecording& rec, std::size_t i, std::size_t j, const KernelParams& kernel) {
  validate(rec);
  if (i >= rec.n_channels || j >= rec.n_channels) {
    fail(ErrorKind::invalid_input, "channel index out of range (" + std::to_string(rec.n_channels) + " channels)");
  }
  if (i == j) fail(ErrorKind::invalid_pair, "PLV needs two distinct channels, got " + std::to_string(i) + " twice");
  const RidTransform rid(rec.n_samples, rec.fs, kernel);
  std::vector<Eigen::MatrixXd> pi(rec.n_trials), pj(rec.n_trials);
  for (std::size_t k = 0; k < rec.n_trials; ++k) {
    pi[k] = phase(rid.apply(rec.trace(k, i)));
    pj[k] = phase(rid.apply(rec.trace(k, j)));
  }
  return plv_from_phases(pi, pj);
}

Eigen::VectorXd band_average(const Eigen::MatrixXd& plv, const BandSpec& band,
                             std::span<const double> freq_axis_hz) {
  if (static_cast<std::size_t>(plv.cols()) != freq_axis_hz.size()) {
    fail(ErrorKind::invalid_input, "PLV column count does not match the frequency axis");
  }
  const auto bins = band_bins(band, freq_axis_hz);
  return mean_over(plv, bins);
}

Tensor decimate_time(const Tensor& x, std::size_t factor) {
  if (x.order() != 4) fail(ErrorKind::invalid_input, "time decimation needs a 4-mode tensor");
  if (factor == 0) fail(ErrorKind::invalid_config, "decimation factor must be >= 1");
  if (factor == 1) return x;
  const std::size_t t_out = x.dim(2) / factor;
  if (t_out == 0) fail(ErrorKind::invalid_config, "decimation factor exceeds the number of time bins");
  Tensor out({x.dim(0), x.dim(1), t_out, x.dim(3)});
  const std::size_t plane = x.dim(0) * x.dim(1);
  const double inv = 1.0 / static_cast<double>(factor);
  for (std::size_t s = 0; s < x.dim(3); ++s) {
    for (std::size_t t = 0; t < t_out; ++t) {
      double* dst = out.data().data() + plane * (t + t_out * s);
      for (std::size_t f = 0; f < factor; ++f) {
        const double* src = x.data().data() + plane * (t * factor + f + x.dim(2) * s);
        for (std::size_t e = 0; e < plane; ++e) dst[e] += src[e];
      }
      for (std::size_t e = 0; e < plane; ++e) dst[e] *= inv;
    }
  }
  return out;
}

ConnectivityTensor build_tensor(std::span<const MultiTrialRecording> recs, const ConnectivityOptions& options) {
  if (recs.empty()) fail(ErrorKind::invalid_input, "no recordings given");
  for (std::size_t s = 0; s < recs.size(); ++s) {
    validate(recs[s]);
    check_same_geometry(recs[0], recs[s], s);
  }
  const auto& ref = recs[0];
  validate(options.band, ref.fs);
  validate(options.kernel);

  const std::size_t n_nodes = ref.n_channels;
  const std::size_t n_time = ref.n_samples;
  const std::size_t n_subj = recs.size();
  const RidTransform rid(n_time, ref.fs, options.kernel);

  std::vector<double> freq_axis(frequency_bins(n_time));
  for (std::size_t k = 0; k < freq_axis.size(); ++k) {
    freq_axis[k] = static_cast<double>(k) * ref.fs / static_cast<double>(n_time);
  }
  const auto bins = band_bins(options.band, freq_axis);

  Tensor g({n_nodes, n_nodes, n_time, n_subj});
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < n_nodes; ++i) {
    for (std::size_t j = i + 1; j < n_nodes; ++j) pairs.emplace_back(i, j);
  }

  for (std::size_t s = 0; s < n_subj; ++s) {
    const auto& rec = recs[s];
    // phases[channel][trial], restricted to band bins.
    std::vector<std::vector<Eigen::MatrixXd>> phases(n_nodes, std::vector<Eigen::MatrixXd>(rec.n_trials));
    parallel_for(n_nodes * rec.n_trials, [&](std::size_t task) {
      const std::size_t c = task / rec.n_trials;
      const std::size_t k = task % rec.n_trials;
      phases[c][k] = phase(rid.apply_bins(rec.trace(k, c), bins));
    });

    std::vector<std::size_t> all(bins.size());
    for (std::size_t b = 0; b < all.size(); ++b) all[b] = b;
    parallel_for(pairs.size(), [&](std::size_t p) {
      const auto [i, j] = pairs[p];
      const Eigen::VectorXd row = mean_over(plv_from_phases(phases[i], phases[j]), all);
      for (std::size_t t = 0; t < n_time; ++t) {
        const double v = row(static_cast<Eigen::Index>(t));
        g(i, j, t, s) = v;
        g(j, i, t, s) = v;
      }
    });
    if (options.self_loops == SelfLoops::one) {
      for (std::size_t t = 0; t < n_time; ++t) {
        for (std::size_t i = 0; i < n_nodes; ++i) g(i, i, t, s) = 1.0;
      }
    }
  }

  ConnectivityTensor out;
  out.node_labels = ref.channel_labels;
  for (std::size_t s = 0; s < n_subj; ++s) {
    out.subject_ids.push_back(recs[s].subject_id.empty() ? "s" + std::to_string(s + 1) : recs[s].subject_id);
  }
  const std::size_t factor = options.decimate_time == 0 ? 1 : options.decimate_time;
  out.values = decimate_time(g, factor);
  const double dt_ms = 1000.0 / ref.fs;
  for (std::size_t t = 0; t < out.values.dim(2); ++t) {
    double sum = 0.0;
    for (std::size_t f = 0; f < factor; ++f) sum += ref.t0_ms + static_cast<double>(t * factor + f) * dt_ms;
    out.time_axis_ms.push_back(sum / static_cast<double>(factor));
  }
  return out;
}

}  // namespace netstate
