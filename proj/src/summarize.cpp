#include "netstate/summarize.hpp"

#include "netstate/error.hpp"
#include "netstate/tucker.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace netstate {

StateSummary summarize_state(const Tensor& g, std::size_t first_bin, std::size_t last_bin, std::size_t k_index,
                             std::size_t l_index) {
  if (g.order() != 4) fail(ErrorKind::invalid_input, "summarize needs a 4-mode tensor");
  const Tensor interval = slice_range(g, 2, first_bin, last_bin);
  const std::size_t len = interval.dim(2);
  if (k_index < 1 || k_index > len) {
    fail(ErrorKind::invalid_index, "k_index " + std::to_string(k_index) + " outside [1, " + std::to_string(len) + "]");
  }
  if (l_index < 1 || l_index > interval.dim(3)) {
    fail(ErrorKind::invalid_index,
         "l_index " + std::to_string(l_index) + " outside [1, " + std::to_string(interval.dim(3)) + "]");
  }
  // Only the time and subject bases of the full decomposition enter the
  // projection.
  const Eigen::MatrixXd u_time = mode_basis(interval, 2).vectors.col(static_cast<Eigen::Index>(k_index - 1)).transpose();
  const Eigen::MatrixXd u_subj = mode_basis(interval, 3).vectors.col(static_cast<Eigen::Index>(l_index - 1)).transpose();
  const Tensor projected = mode_product(mode_product(interval, u_time, 2), u_subj, 3);

  const auto n = static_cast<Eigen::Index>(g.dim(0));
  const Eigen::Map<const Eigen::MatrixXd> raw(projected.data().data(), n, static_cast<Eigen::Index>(g.dim(1)));
  StateSummary out;
  if (g.dim(0) == g.dim(1)) {
    out.map = 0.5 * (raw + raw.transpose());
  } else {
    out.map = raw;
  }
  out.k_index = k_index;
  out.l_index = l_index;
  return out;
}

std::size_t edge_count(double q, std::size_t pairs) {
  if (!(q > 0.0 && q < 1.0)) fail(ErrorKind::invalid_config, "edge quantile must lie in (0, 1)");
  const double raw = q * static_cast<double>(pairs);
  const double nearest = std::round(raw);
  const double count = std::abs(raw - nearest) < 1e-9 ? nearest : std::ceil(raw);
  return std::min(pairs, static_cast<std::size_t>(count));
}

std::vector<Edge> threshold_edges(const Eigen::MatrixXd& map, double q, bool rank_by_abs) {
  if (map.rows() != map.cols()) fail(ErrorKind::invalid_input, "edge thresholding needs a square map");
  const auto n = static_cast<std::size_t>(map.rows());
  std::vector<Edge> all;
  all.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      all.push_back({i, j, map(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))});
    }
  }
  const std::size_t keep = edge_count(q, all.size());
  auto key = [rank_by_abs](const Edge& e) { return rank_by_abs ? std::abs(e.weight) : e.weight; };
  // `all` is already in lexicographic order, so a stable sort breaks ties.
  std::stable_sort(all.begin(), all.end(), [&](const Edge& a, const Edge& b) { return key(a) > key(b); });
  all.resize(keep);
  return all;
}

std::vector<std::size_t> node_degrees(const std::vector<Edge>& edges, std::size_t n_nodes) {
  std::vector<std::size_t> deg(n_nodes, 0);
  for (const auto& e : edges) {
    if (e.i >= n_nodes || e.j >= n_nodes) fail(ErrorKind::invalid_index, "edge endpoint out of range");
    ++deg[e.i];
    ++deg[e.j];
  }
  return deg;
}

StateSummary summarize_interval(const Tensor& g, std::size_t first_bin, std::size_t last_bin, std::size_t k_index,
                                std::size_t l_index, double q, bool rank_by_abs) {
  StateSummary out = summarize_state(g, first_bin, last_bin, k_index, l_index);
  out.edges = threshold_edges(out.map, q, rank_by_abs);
  out.degrees = node_degrees(out.edges, static_cast<std::size_t>(out.map.rows()));
  out.weighted_degrees = out.map.rowwise().sum();
  return out;
}

}  // namespace netstate
