#pragma once

// Direct, deliberately naive reference implementations used as test oracles.
// None of these share code paths with the library beyond the Tensor type.

#include "netstate/tensor.hpp"

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace oracle {

using cd = std::complex<double>;

// A[p, m] = sum_v s[v] conj(s[v - tau_m]) exp(j theta_p (v - tau_m / 2)).
Eigen::MatrixXcd ambiguity(std::span<const cd> s);

// C[t, k] = sum_p sum_m Phi(theta_p, tau_m) A[p, m] exp(-j (theta_p t + tau_m omega_k))
// for k = 0..n/2, by quadruple summation.
Eigen::MatrixXcd rid(std::span<const cd> s, double sigma_cw);

// Rihaczek distribution in time-lag form:
// n s[t] sum_m conj(s[t - tau_m]) exp(-j omega_k tau_m), k = 0..n/2.
Eigen::MatrixXcd rihaczek(std::span<const cd> s);

// atan2-based phase with 0 for vanishing entries.
Eigen::MatrixXd phase(const Eigen::MatrixXcd& c);

// |(1/L) sum_k exp(j |phi_i^k - phi_j^k|)| per entry.
Eigen::MatrixXd plv(const std::vector<Eigen::MatrixXd>& phi_i, const std::vector<Eigen::MatrixXd>& phi_j);

// Full connectivity tensor by direct evaluation of the transform, PLV and
// band mean. data[s] is trial-major, channel, sample.
netstate::Tensor connectivity(const std::vector<std::vector<double>>& data, std::size_t n_trials,
                              std::size_t n_channels, std::size_t n_samples, double fs, double low_hz,
                              double high_hz, double sigma_cw);

// Explicit mode-k unfolding built entry by entry.
Eigen::MatrixXd unfolding(const netstate::Tensor& x, std::size_t mode);

// Singular values of the explicit unfolding, descending (JacobiSVD).
Eigen::VectorXd singular_values(const netstate::Tensor& x, std::size_t mode);

// Cosine similarity of every pair of slices by explicit loops.
Eigen::MatrixXd delta(const std::vector<netstate::Tensor>& slices);

double adjusted_rand_index(std::span<const int> a, std::span<const int> b);

// Seeded helpers (std::mt19937_64 based; independent of the library RNG).
netstate::Tensor random_tensor(const netstate::Shape& shape, std::uint64_t seed, double lo = -1.0, double hi = 1.0);
std::vector<cd> random_signal(std::size_t n, std::uint64_t seed);

// Fresh empty directory under the system temp dir.
std::filesystem::path temp_dir(const std::string& name);

}  // namespace oracle
