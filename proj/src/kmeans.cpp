#include "netstate/error.hpp"
#include "netstate/random.hpp"
#include "netstate/states.hpp"

#include <algorithm>
#include <limits>
#include <string>

namespace netstate {

namespace {

constexpr std::uint64_t kKMeansStream = 0x6b6d65616e73ULL;  // "kmeans"

struct Run {
  std::vector<int> labels;
  Eigen::MatrixXd centers;
  double inertia;
};

Run lloyd(const Eigen::MatrixXd& x, Eigen::MatrixXd centers, std::size_t max_iterations) {
  const Eigen::Index n = x.rows();
  const Eigen::Index k = centers.rows();
  std::vector<int> labels(static_cast<std::size_t>(n), -1);
  Eigen::VectorXd dist(n);

  for (std::size_t iter = 0; iter < max_iterations; ++iter) {
    bool changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      int best = 0;
      double best_d = std::numeric_limits<double>::infinity();
      for (Eigen::Index c = 0; c < k; ++c) {
        const double d = (x.row(i) - centers.row(c)).squaredNorm();
        if (d < best_d) {
          best_d = d;
          best = static_cast<int>(c);
        }
      }
      dist(i) = best_d;
      if (labels[static_cast<std::size_t>(i)] != best) {
        labels[static_cast<std::size_t>(i)] = best;
        changed = true;
      }
    }
    if (!changed && iter > 0) break;

    Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(k, x.cols());
    std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      sums.row(labels[static_cast<std::size_t>(i)]) += x.row(i);
      ++counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(i)])];
    }
    for (Eigen::Index c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) {
        centers.row(c) = sums.row(c) / static_cast<double>(counts[static_cast<std::size_t>(c)]);
      } else {
        // Empty cluster: move it onto the worst-served point.
        Eigen::Index far = 0;
        dist.maxCoeff(&far);
        centers.row(c) = x.row(far);
        dist(far) = 0.0;
      }
    }
  }

  double inertia = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    inertia += (x.row(i) - centers.row(labels[static_cast<std::size_t>(i)])).squaredNorm();
  }
  return {std::move(labels), std::move(centers), inertia};
}

Eigen::MatrixXd farthest_point_seeds(const Eigen::MatrixXd& x, std::size_t k, std::size_t first) {
  const Eigen::Index n = x.rows();
  Eigen::MatrixXd centers(static_cast<Eigen::Index>(k), x.cols());
  centers.row(0) = x.row(static_cast<Eigen::Index>(first));
  Eigen::VectorXd nearest(n);
  for (Eigen::Index i = 0; i < n; ++i) nearest(i) = (x.row(i) - centers.row(0)).squaredNorm();
  for (std::size_t c = 1; c < k; ++c) {
    Eigen::Index far = 0;
    nearest.maxCoeff(&far);  // first maximum wins
    centers.row(static_cast<Eigen::Index>(c)) = x.row(far);
    for (Eigen::Index i = 0; i < n; ++i) {
      nearest(i) = std::min(nearest(i), (x.row(i) - x.row(far)).squaredNorm());
    }
  }
  return centers;
}

}  // namespace

KMeansResult kmeans(const Eigen::MatrixXd& points, std::size_t k, const KMeansOptions& options) {
  const auto n = static_cast<std::size_t>(points.rows());
  if (k == 0 || k > n) fail(ErrorKind::invalid_input, "k-means needs 1 <= k <= " + std::to_string(n));
  const std::size_t restarts = std::max<std::size_t>(1, options.restarts);

  KMeansResult best;
  best.inertia = std::numeric_limits<double>::infinity();
  for (std::size_t r = 0; r < restarts; ++r) {
    CounterRng rng(options.seed, stream_key({kKMeansStream, r}));
    const auto first = static_cast<std::size_t>(rng.below(n));
    auto run = lloyd(points, farthest_point_seeds(points, k, first), options.max_iterations);
    if (run.inertia < best.inertia) {
      best.labels = std::move(run.labels);
      best.centers = std::move(run.centers);
      best.inertia = run.inertia;
    }
  }
  return best;
}

}  // namespace netstate
