#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace netstate {

struct Signal {
  std::vector<double> samples;
  double fs = 1.0;     // Hz
  double t0_ms = 0.0;  // time of the first sample relative to the event
};

void validate(const Signal& signal);

struct KernelParams {
  // Choi-Williams spread. +infinity turns the kernel off, leaving the plain
  // Rihaczek distribution.
  double sigma_cw = 0.01;
};

void validate(const KernelParams& kernel);

// Complex time-frequency distribution restricted to frequencies in
// [0, fs/2]. values(t, k) is time bin t, frequency bin k; bin k sits at
// k * fs / n Hz for an n-sample input.
struct Tfd {
  Eigen::MatrixXcd values;
  std::size_t n_time = 0;
  std::size_t n_freq = 0;
  double fs = 1.0;
  std::vector<double> freq_axis_hz;
};

// Discrete grid conventions for an n-sample input. Row p of an ambiguity
// matrix is lag-frequency theta_p = 2 pi c(p) / n and column m is lag
// tau_m = c(m) samples, where c(i) = i for i < (n + 1) / 2 and i - n
// otherwise (FFT ordering).
std::ptrdiff_t centered_index(std::size_t i, std::size_t n);
std::size_t frequency_bins(std::size_t n);

// A(theta, tau) = sum_v s[v] conj(s[v - tau]) exp(j theta (v - tau / 2)),
// i.e. s(u + tau/2) s*(u - tau/2) summed over u = v - tau/2, with samples
// outside [0, n) taken as zero.
Eigen::MatrixXcd ambiguity(std::span<const std::complex<double>> samples);
Eigen::MatrixXcd ambiguity(const Signal& signal);

// Precomputed kernel tables for one (length, kernel) pair. Reusable across
// signals and threads.
class RidTransform {
 public:
  RidTransform(std::size_t n, double fs, const KernelParams& kernel);

  std::size_t length() const { return n_; }

  // Ambiguity-domain weights exp(-(theta tau)^2 / sigma) exp(j theta tau / 2).
  const Eigen::MatrixXcd& kernel_weights() const { return weights_; }

  Eigen::MatrixXcd ambiguity(std::span<const std::complex<double>> samples) const;

  // C(t, omega) = sum_theta sum_tau Phi(theta, tau) A(theta, tau)
  //               exp(-j (theta t + tau omega)).
  Tfd apply(std::span<const std::complex<double>> samples) const;
  Tfd apply(std::span<const double> samples) const;

  // Columns of C(t, omega) for the listed frequency bins only, in list order.
  Eigen::MatrixXcd apply_bins(std::span<const double> samples, std::span<const std::size_t> bins) const;

 private:
  // Kernel-weighted ambiguity transformed back along theta: rows are time,
  // columns are lags.
  Eigen::MatrixXcd time_lag(std::span<const std::complex<double>> samples) const;
  Eigen::MatrixXcd apply_real(std::span<const double> samples) const;
  Tfd make_tfd(Eigen::MatrixXcd values) const;

  std::size_t n_;
  double fs_;
  Eigen::MatrixXcd half_lag_;  // exp(-j theta tau / 2)
  Eigen::MatrixXcd weights_;
  Eigen::MatrixXd envelope_;   // exp(-(theta tau)^2 / sigma), the product of the two tables above
};

Tfd rid_rihaczek(const Signal& signal, const KernelParams& kernel);
Tfd rid_rihaczek(std::span<const std::complex<double>> samples, double fs, const KernelParams& kernel);

// Entrywise argument in (-pi, pi]; zero entries map to 0.
Eigen::MatrixXd phase(const Tfd& tfd);
Eigen::MatrixXd phase(const Eigen::MatrixXcd& values);

}  // namespace netstate
