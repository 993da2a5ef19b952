#include "netstate/timefreq.hpp"

#include "netstate/error.hpp"

#include "fft.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace netstate {

namespace {

using cd = std::complex<double>;
using detail::FftDirection;
using detail::fft_many;

std::vector<cd> to_complex(std::span<const double> x) { return {x.begin(), x.end()}; }

void check_length(std::size_t n) {
  if (n < 2) fail(ErrorKind::invalid_input, "signal needs at least 2 samples, got " + std::to_string(n));
}

}  // namespace

void validate(const Signal& signal) {
  check_length(signal.samples.size());
  if (!(signal.fs > 0.0) || !std::isfinite(signal.fs)) fail(ErrorKind::invalid_input, "sampling rate must be positive");
  for (double v : signal.samples) {
    if (!std::isfinite(v)) fail(ErrorKind::invalid_input, "signal contains non-finite samples");
  }
}

void validate(const KernelParams& kernel) {
  if (!(kernel.sigma_cw > 0.0)) fail(ErrorKind::invalid_config, "sigma_cw must be positive");
}

std::ptrdiff_t centered_index(std::size_t i, std::size_t n) {
  const auto si = static_cast<std::ptrdiff_t>(i);
  return i < (n + 1) / 2 ? si : si - static_cast<std::ptrdiff_t>(n);
}

std::size_t frequency_bins(std::size_t n) { return n / 2 + 1; }

RidTransform::RidTransform(std::size_t n, double fs, const KernelParams& kernel) : n_(n), fs_(fs) {
  check_length(n);
  validate(kernel);
  const auto m = static_cast<Eigen::Index>(n);
  half_lag_.resize(m, m);
  weights_.resize(m, m);
  envelope_.resize(m, m);
  for (std::size_t p = 0; p < n; ++p) {
    const double theta = 2.0 * std::numbers::pi * static_cast<double>(centered_index(p, n)) / static_cast<double>(n);
    for (std::size_t q = 0; q < n; ++q) {
      const double tau = static_cast<double>(centered_index(q, n));
      const double tt = theta * tau;
      const auto i = static_cast<Eigen::Index>(p);
      const auto j = static_cast<Eigen::Index>(q);
      half_lag_(i, j) = std::polar(1.0, -0.5 * tt);
      envelope_(i, j) = std::exp(-(tt * tt) / kernel.sigma_cw);
      weights_(i, j) = envelope_(i, j) * std::polar(1.0, 0.5 * tt);
    }
  }
}

namespace {

Eigen::MatrixXcd lag_products(std::span<const cd> s, std::size_t n_) {
  const auto n = static_cast<std::ptrdiff_t>(n_);
  Eigen::MatrixXcd a(n, n);
  // Column m holds the instantaneous autocorrelation at lag tau_m.
  for (std::ptrdiff_t m = 0; m < n; ++m) {
    const std::ptrdiff_t tau = centered_index(static_cast<std::size_t>(m), n_);
    for (std::ptrdiff_t v = 0; v < n; ++v) {
      const std::ptrdiff_t w = v - tau;
      a(v, m) = (w >= 0 && w < n) ? s[static_cast<std::size_t>(v)] * std::conj(s[static_cast<std::size_t>(w)]) : cd{};
    }
  }
  return a;
}

}  // namespace

Eigen::MatrixXcd RidTransform::ambiguity(std::span<const cd> s) const {
  if (s.size() != n_) fail(ErrorKind::invalid_input, "signal length does not match transform length");
  Eigen::MatrixXcd a = lag_products(s, n_);
  // DFT over v with exp(+j theta v), then the half-lag shift.
  fft_many(a.data(), n_, n_, 1, n_, FftDirection::backward);
  a.array() *= half_lag_.array();
  return a;
}

Eigen::MatrixXcd RidTransform::time_lag(std::span<const cd> s) const {
  if (s.size() != n_) fail(ErrorKind::invalid_input, "signal length does not match transform length");
  Eigen::MatrixXcd b = lag_products(s, n_);
  fft_many(b.data(), n_, n_, 1, n_, FftDirection::backward);
  b.array() *= envelope_.array();
  fft_many(b.data(), n_, n_, 1, n_, FftDirection::forward);
  return b;
}

Eigen::MatrixXcd RidTransform::apply_real(std::span<const double> s) const {
  if (s.size() != n_) fail(ErrorKind::invalid_input, "signal length does not match transform length");
  // For real input the lag products are real and the envelope is real and
  // even in theta, so the smoothing along time stays real.
  const auto n = static_cast<std::ptrdiff_t>(n_);
  const std::size_t h = frequency_bins(n_);
  const auto hi = static_cast<Eigen::Index>(h);
  Eigen::MatrixXd r(n, n);
  for (std::ptrdiff_t m = 0; m < n; ++m) {
    const std::ptrdiff_t tau = centered_index(static_cast<std::size_t>(m), n_);
    for (std::ptrdiff_t v = 0; v < n; ++v) {
      const std::ptrdiff_t w = v - tau;
      r(v, m) = (w >= 0 && w < n) ? s[static_cast<std::size_t>(v)] * s[static_cast<std::size_t>(w)] : 0.0;
    }
  }
  Eigen::MatrixXcd f(hi, n);
  detail::rfft_many(r.data(), 1, n_, f.data(), 1, h, n_, n_);
  f.array() *= envelope_.topRows(hi).array();
  detail::irfft_many(f.data(), 1, h, r.data(), 1, n_, n_, n_);
  Eigen::MatrixXcd c(n, hi);
  detail::rfft_many(r.data(), n_, 1, c.data(), n_, 1, n_, n_);
  return c;
}

Eigen::MatrixXcd RidTransform::apply_bins(std::span<const double> s, std::span<const std::size_t> bins) const {
  const Eigen::MatrixXcd c = apply_real(s);
  Eigen::MatrixXcd out(c.rows(), static_cast<Eigen::Index>(bins.size()));
  for (std::size_t q = 0; q < bins.size(); ++q) {
    if (bins[q] >= static_cast<std::size_t>(c.cols())) fail(ErrorKind::invalid_input, "frequency bin out of range");
    out.col(static_cast<Eigen::Index>(q)) = c.col(static_cast<Eigen::Index>(bins[q]));
  }
  return out;
}

Tfd RidTransform::apply(std::span<const cd> s) const {
  Eigen::MatrixXcd b = time_lag(s);
  fft_many(b.data(), n_, n_, n_, 1, FftDirection::forward);

  return make_tfd(b.leftCols(static_cast<Eigen::Index>(frequency_bins(n_))));
}

Tfd RidTransform::apply(std::span<const double> s) const { return make_tfd(apply_real(s)); }

Tfd RidTransform::make_tfd(Eigen::MatrixXcd values) const {
  Tfd out;
  out.n_time = n_;
  out.n_freq = frequency_bins(n_);
  out.fs = fs_;
  out.values = std::move(values);
  out.freq_axis_hz.resize(out.n_freq);
  for (std::size_t k = 0; k < out.n_freq; ++k) {
    out.freq_axis_hz[k] = static_cast<double>(k) * fs_ / static_cast<double>(n_);
  }
  return out;
}

Eigen::MatrixXcd ambiguity(std::span<const cd> samples) {
  check_length(samples.size());
  return RidTransform(samples.size(), 1.0, KernelParams{}).ambiguity(samples);
}

Eigen::MatrixXcd ambiguity(const Signal& signal) {
  validate(signal);
  const auto c = to_complex(signal.samples);
  return ambiguity(std::span<const cd>(c));
}

Tfd rid_rihaczek(std::span<const cd> samples, double fs, const KernelParams& kernel) {
  check_length(samples.size());
  return RidTransform(samples.size(), fs, kernel).apply(samples);
}

Tfd rid_rihaczek(const Signal& signal, const KernelParams& kernel) {
  validate(signal);
  return RidTransform(signal.samples.size(), signal.fs, kernel).apply(std::span<const double>(signal.samples));
}

Eigen::MatrixXd phase(const Tfd& tfd) { return phase(tfd.values); }

Eigen::MatrixXd phase(const Eigen::MatrixXcd& values) {
  Eigen::MatrixXd out(values.rows(), values.cols());
  for (Eigen::Index j = 0; j < out.cols(); ++j) {
    for (Eigen::Index i = 0; i < out.rows(); ++i) {
      const cd c = values(i, j);
      double a = (c == cd{}) ? 0.0 : std::arg(c);
      if (a <= -std::numbers::pi) a = std::numbers::pi;
      out(i, j) = a;
    }
  }
  return out;
}

}  // namespace netstate
