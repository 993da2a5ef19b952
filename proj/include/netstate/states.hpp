#pragma once

#include "netstate/tensor.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace netstate {

// Delta(t1, t2): cosine similarity between time slices. Throws zero-norm
// naming the first vanishing slice.
Eigen::MatrixXd delta_matrix(std::span<const Tensor> slices);

// Same quantity for the slices of `x` along `time_mode`, computed from the
// mode Gram matrix so the slices are never materialised.
Eigen::MatrixXd delta_matrix(const Tensor& x, std::size_t time_mode);

// Theta(t1, t2) = exp(-((t1 - t2) * spacing)^2 / (2 sigma^2)) on the bin grid.
// spacing = 1 measures separation in bins; pass the bin width in ms for
// millisecond units. Underflow to 0 for far-apart bins is expected.
Eigen::MatrixXd theta_matrix(std::size_t n_time, double sigma_time, double spacing = 1.0);

// Psi = lambda Theta + (1 - lambda) Delta.
Eigen::MatrixXd combine(const Eigen::MatrixXd& delta, const Eigen::MatrixXd& theta, double lambda);

struct SimilarityMatrix {
  Eigen::MatrixXd psi;
  Eigen::MatrixXd delta;
  Eigen::MatrixXd theta;
};

// D^{-1/2} Psi D^{-1/2} with D the row sums of Psi.
Eigen::MatrixXd normalized_affinity(const Eigen::MatrixXd& psi);

// Eigenvalues of the normalized affinity, descending.
Eigen::VectorXd affinity_spectrum(const Eigen::MatrixXd& psi);

// Eigengap choice: argmax over k in [2, max_k] of lambda_k - lambda_{k+1}
// (1-based, descending spectrum); ties resolve to the smallest k.
std::size_t choose_k(const Eigen::MatrixXd& psi, std::size_t max_k);
std::size_t choose_k_from_spectrum(const Eigen::VectorXd& descending, std::size_t max_k);

struct KMeansOptions {
  std::uint64_t seed = 0;
  std::size_t restarts = 100;
  std::size_t max_iterations = 300;
};

struct KMeansResult {
  std::vector<int> labels;  // 0-based cluster per row
  Eigen::MatrixXd centers;
  double inertia = 0.0;
};

// Lloyd's k-means on the rows of `points`. Each restart seeds its first
// centre from the counter RNG and the rest by farthest-point selection; the
// restart with the lowest within-cluster sum of squares wins.
KMeansResult kmeans(const Eigen::MatrixXd& points, std::size_t k, const KMeansOptions& options);

// Normalized spectral clustering: top-k eigenvectors of the normalized
// affinity, rows scaled to unit length, then k-means. Labels are 1..k,
// numbered in order of first appearance along time.
std::vector<int> spectral_cluster(const Eigen::MatrixXd& psi, std::size_t k, const KMeansOptions& options);

struct StateInterval {
  std::size_t first_bin = 0;  // 0-based, inclusive
  std::size_t last_bin = 0;   // inclusive
  int label = 0;

  friend bool operator==(const StateInterval&, const StateInterval&) = default;
};

struct StatePartition {
  std::vector<StateInterval> intervals;
  std::size_t k = 0;
  std::vector<int> labels_per_t;
};

// Centered sliding majority filter (edge-truncated window), repeated until
// nothing changes or max_passes is reached, then run-length extraction.
// Window ties go to the label that is most frequent in the whole input,
// then to the smallest label.
StatePartition enforce_contiguity(std::span<const int> labels, std::size_t window = 5, std::size_t max_passes = 10);

}  // namespace netstate
