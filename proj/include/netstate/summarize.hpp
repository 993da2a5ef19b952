#pragma once

#include "netstate/tensor.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <vector>

namespace netstate {

struct Edge {
  std::size_t i = 0;
  std::size_t j = 0;
  double weight = 0.0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

struct StateSummary {
  Eigen::MatrixXd map;  // N x N, symmetrised
  std::size_t k_index = 1;
  std::size_t l_index = 1;
  std::vector<Edge> edges;
  std::vector<std::size_t> degrees;
  Eigen::VectorXd weighted_degrees;  // row sums of map
};

// Topographic map of the interval [first_bin, last_bin] of a node x node x
// time x subject tensor: the interval tensor projected onto the k-th
// time-mode and l-th subject-mode singular vectors (both 1-based), then
// symmetrised as (M + M^T) / 2. Only `map`, `k_index` and `l_index` are set.
StateSummary summarize_state(const Tensor& g, std::size_t first_bin, std::size_t last_bin, std::size_t k_index,
                             std::size_t l_index);

// Number of edges kept for quantile q out of `pairs` candidates:
// ceil(q * pairs), with products within 1e-9 of an integer taken as exact.
std::size_t edge_count(double q, std::size_t pairs);

// Upper-triangle entries ranked by value (or |value|), descending, ties in
// (i, j) lexicographic order; the first edge_count(q, N(N-1)/2) are kept.
std::vector<Edge> threshold_edges(const Eigen::MatrixXd& map, double q, bool rank_by_abs = false);

std::vector<std::size_t> node_degrees(const std::vector<Edge>& edges, std::size_t n_nodes);

// Full summary: map, thresholded edges, degree tables.
StateSummary summarize_interval(const Tensor& g, std::size_t first_bin, std::size_t last_bin, std::size_t k_index,
                                std::size_t l_index, double q, bool rank_by_abs = false);

}  // namespace netstate
