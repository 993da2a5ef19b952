#include "netstate/states.hpp"

#include "netstate/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

namespace netstate {

namespace {

void check_square(const Eigen::MatrixXd& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) fail(ErrorKind::invalid_input, std::string(what) + " must be square and non-empty");
}

void check_symmetric(const Eigen::MatrixXd& m) {
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    fail(ErrorKind::invalid_input, "similarity matrix is not symmetric");
  }
}

Eigen::MatrixXd cosine_from_gram(const Eigen::MatrixXd& gram) {
  const Eigen::Index n = gram.rows();
  Eigen::VectorXd norms(n);
  for (Eigen::Index t = 0; t < n; ++t) {
    const double sq = gram(t, t);
    if (!(sq > 0.0)) fail(ErrorKind::zero_norm, "time slice " + std::to_string(t) + " has zero norm");
    norms(t) = std::sqrt(sq);
  }
  Eigen::MatrixXd delta(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    delta(j, j) = 1.0;
    for (Eigen::Index i = j + 1; i < n; ++i) {
      const double v = std::clamp(gram(i, j) / (norms(i) * norms(j)), -1.0, 1.0);
      delta(i, j) = v;
      delta(j, i) = v;
    }
  }
  return delta;
}

}  // namespace

Eigen::MatrixXd delta_matrix(std::span<const Tensor> slices) {
  const auto n = static_cast<Eigen::Index>(slices.size());
  if (n == 0) fail(ErrorKind::invalid_input, "no slices given");
  for (const auto& s : slices) {
    if (s.shape() != slices[0].shape()) fail(ErrorKind::invalid_input, "slices differ in shape");
  }
  Eigen::MatrixXd gram(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = j; i < n; ++i) {
      const double v = inner(slices[static_cast<std::size_t>(i)], slices[static_cast<std::size_t>(j)]);
      gram(i, j) = v;
      gram(j, i) = v;
    }
  }
  return cosine_from_gram(gram);
}

Eigen::MatrixXd delta_matrix(const Tensor& x, std::size_t time_mode) {
  return cosine_from_gram(mode_gram(x, time_mode));
}

Eigen::MatrixXd theta_matrix(std::size_t n_time, double sigma_time, double spacing) {
  if (n_time == 0) fail(ErrorKind::invalid_input, "theta matrix needs at least one time bin");
  if (!(sigma_time > 0.0)) fail(ErrorKind::invalid_config, "sigma_time must be positive");
  const auto n = static_cast<Eigen::Index>(n_time);
  Eigen::MatrixXd theta(n, n);
  const double denom = 2.0 * sigma_time * sigma_time;
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      const double d = static_cast<double>(i - j) * spacing;
      theta(i, j) = std::exp(-(d * d) / denom);
    }
  }
  return theta;
}

Eigen::MatrixXd combine(const Eigen::MatrixXd& delta, const Eigen::MatrixXd& theta, double lambda) {
  if (delta.rows() != theta.rows() || delta.cols() != theta.cols()) {
    fail(ErrorKind::invalid_input, "delta and theta differ in shape");
  }
  if (!(lambda > 0.0 && lambda < 1.0)) fail(ErrorKind::invalid_config, "lambda must lie in (0, 1)");
  return lambda * theta + (1.0 - lambda) * delta;
}

Eigen::MatrixXd normalized_affinity(const Eigen::MatrixXd& psi) {
  check_square(psi, "psi");
  check_symmetric(psi);
  const Eigen::VectorXd degree = psi.rowwise().sum();
  for (Eigen::Index t = 0; t < degree.size(); ++t) {
    if (!(degree(t) > 0.0)) fail(ErrorKind::zero_norm, "time point " + std::to_string(t) + " has non-positive degree");
  }
  const Eigen::VectorXd inv_sqrt = degree.cwiseSqrt().cwiseInverse();
  Eigen::MatrixXd m = inv_sqrt.asDiagonal() * psi * inv_sqrt.asDiagonal();
  // Restore exact symmetry lost to rounding.
  return 0.5 * (m + m.transpose());
}

Eigen::VectorXd affinity_spectrum(const Eigen::MatrixXd& psi) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(normalized_affinity(psi), Eigen::EigenvaluesOnly);
  return eig.eigenvalues().reverse();
}

std::size_t choose_k_from_spectrum(const Eigen::VectorXd& ev, std::size_t max_k) {
  if (max_k < 2) fail(ErrorKind::invalid_config, "eigengap_max_k must be >= 2");
  const auto n = static_cast<std::size_t>(ev.size());
  if (n < 3) fail(ErrorKind::invalid_input, "eigengap selection needs at least 3 time points");
  const std::size_t top = std::min(max_k, n - 1);
  std::size_t best = 2;
  double best_gap = -std::numeric_limits<double>::infinity();
  for (std::size_t k = 2; k <= top; ++k) {
    const double gap = ev(static_cast<Eigen::Index>(k - 1)) - ev(static_cast<Eigen::Index>(k));
    if (gap > best_gap) {
      best_gap = gap;
      best = k;
    }
  }
  return best;
}

std::size_t choose_k(const Eigen::MatrixXd& psi, std::size_t max_k) {
  return choose_k_from_spectrum(affinity_spectrum(psi), max_k);
}

std::vector<int> spectral_cluster(const Eigen::MatrixXd& psi, std::size_t k, const KMeansOptions& options) {
  check_square(psi, "psi");
  const auto n = static_cast<std::size_t>(psi.rows());
  if (k == 0 || k > n) {
    fail(ErrorKind::invalid_input, "cluster count " + std::to_string(k) + " must lie in [1, " + std::to_string(n) + "]");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(normalized_affinity(psi));
  const auto kk = static_cast<Eigen::Index>(k);
  Eigen::MatrixXd embed = eig.eigenvectors().rightCols(kk).rowwise().reverse();
  for (Eigen::Index r = 0; r < embed.rows(); ++r) {
    const double norm = embed.row(r).norm();
    if (norm > 0.0) embed.row(r) /= norm;
  }
  const auto result = kmeans(embed, k, options);

  std::map<int, int> relabel;
  std::vector<int> labels(n);
  for (std::size_t t = 0; t < n; ++t) {
    auto it = relabel.find(result.labels[t]);
    if (it == relabel.end()) it = relabel.emplace(result.labels[t], static_cast<int>(relabel.size()) + 1).first;
    labels[t] = it->second;
  }
  return labels;
}

StatePartition enforce_contiguity(std::span<const int> labels, std::size_t window, std::size_t max_passes) {
  StatePartition out;
  std::vector<int> cur(labels.begin(), labels.end());
  std::map<int, std::size_t> global;
  for (int l : cur) ++global[l];
  out.k = global.size();
  if (cur.empty()) return out;

  const std::size_t half = window / 2;
  for (std::size_t pass = 0; pass < max_passes && window > 1; ++pass) {
    std::vector<int> next(cur.size());
    for (std::size_t t = 0; t < cur.size(); ++t) {
      const std::size_t lo = t >= half ? t - half : 0;
      const std::size_t hi = std::min(cur.size() - 1, t + half);
      std::map<int, std::size_t> counts;
      for (std::size_t u = lo; u <= hi; ++u) ++counts[cur[u]];
      int best = 0;
      std::size_t best_count = 0;
      for (const auto& [label, count] : counts) {
        // map iterates labels ascending, so equal global counts keep the smaller label
        if (count > best_count || (count == best_count && global[label] > global[best])) {
          best = label;
          best_count = count;
        }
      }
      next[t] = best;
    }
    if (next == cur) break;
    cur = std::move(next);
  }

  for (std::size_t t = 0; t < cur.size(); ++t) {
    if (out.intervals.empty() || out.intervals.back().label != cur[t]) {
      out.intervals.push_back({t, t, cur[t]});
    } else {
      out.intervals.back().last_bin = t;
    }
  }
  out.labels_per_t = std::move(cur);
  return out;
}

}  // namespace netstate
