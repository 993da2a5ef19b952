#include "netstate/tucker.hpp"

#include "netstate/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <string>

namespace netstate {

namespace {

void fix_sign(Eigen::Ref<Eigen::VectorXd> v) {
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < v.size(); ++i) {
    if (std::abs(v(i)) > std::abs(v(best))) best = i;
  }
  if (v(best) < 0.0) v = -v;
}

void check_ranks(const Shape& shape, std::span<const std::size_t> ranks) {
  if (ranks.size() != shape.size()) {
    fail(ErrorKind::invalid_rank, "expected " + std::to_string(shape.size()) + " ranks, got " +
                                      std::to_string(ranks.size()));
  }
  for (std::size_t k = 0; k < ranks.size(); ++k) {
    if (ranks[k] == 0 || ranks[k] > shape[k]) {
      fail(ErrorKind::invalid_rank, "rank " + std::to_string(ranks[k]) + " invalid for mode " +
                                        std::to_string(k) + " of size " + std::to_string(shape[k]));
    }
  }
}

Tensor project(const Tensor& x, const std::vector<Eigen::MatrixXd>& factors,
               std::span<const std::size_t> ranks) {
  Tensor out = x;
  for (std::size_t k = 0; k < ranks.size(); ++k) {
    if (ranks[k] == x.dim(k)) continue;
    const auto r = static_cast<Eigen::Index>(ranks[k]);
    const Eigen::MatrixXd lead = factors[k].leftCols(r);
    // Two thin products are cheaper than one m_k x m_k projector.
    out = mode_product(mode_product(out, lead.transpose(), k), lead, k);
  }
  return out;
}

}  // namespace

ModeBasis mode_basis(const Tensor& x, std::size_t mode) {
  const Eigen::MatrixXd gram = mode_gram(x, mode);
  const Eigen::Index m = gram.rows();
  ModeBasis basis;
  if (gram.isZero(0.0)) {
    basis.vectors = Eigen::MatrixXd::Identity(m, m);
    basis.singular_values = Eigen::VectorXd::Zero(m);
    return basis;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram);
  // Eigen sorts ascending; reverse for descending singular values.
  basis.vectors = eig.eigenvectors().rowwise().reverse();
  basis.singular_values = eig.eigenvalues().reverse().cwiseMax(0.0).cwiseSqrt();
  for (Eigen::Index j = 0; j < m; ++j) fix_sign(basis.vectors.col(j));
  return basis;
}

TuckerModel hosvd(const Tensor& x) {
  TuckerModel model;
  const std::size_t d = x.order();
  model.factors.resize(d);
  for (std::size_t k = 0; k < d; ++k) model.factors[k] = mode_basis(x, k).vectors;

  Tensor core = x;
  for (std::size_t k = 0; k < d; ++k) core = mode_product(core, model.factors[k].transpose(), k);

  model.singular_values.resize(d);
  for (std::size_t k = 0; k < d; ++k) {
    const std::size_t stride = core.stride(k);
    const std::size_t dim = core.dim(k);
    Eigen::VectorXd sq = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim));
    const auto data = core.data();
    for (std::size_t off = 0; off < data.size(); ++off) {
      const std::size_t i = (off / stride) % dim;
      sq(static_cast<Eigen::Index>(i)) += data[off] * data[off];
    }
    model.singular_values[k] = sq.cwiseSqrt();
  }
  model.core = std::move(core);
  model.residual_fro = 0.0;
  return model;
}

Tensor reconstruct(const TuckerModel& model) {
  Tensor out = model.core;
  for (std::size_t k = 0; k < model.factors.size(); ++k) out = mode_product(out, model.factors[k], k);
  return out;
}

RankSelection select_ranks(const TuckerModel& model, double epsilon_rel) {
  const Tensor& c = model.core;
  if (c.order() != 4) fail(ErrorKind::invalid_input, "rank selection needs a 4-mode model");
  if (!(epsilon_rel > 0.0 && epsilon_rel < 1.0)) {
    fail(ErrorKind::invalid_config, "epsilon_rel must lie in (0, 1)");
  }
  const double lead = std::abs(c(0, 0, 0, 0));
  if (lead == 0.0) fail(ErrorKind::degenerate_core, "core[0,0,0,0] is zero; ranks are undefined");
  const double cut = epsilon_rel * lead;

  RankSelection sel;
  sel.epsilon_rel = epsilon_rel;
  const std::size_t nodes = std::max(c.dim(0), c.dim(1));
  for (std::size_t j = 0; j < nodes; ++j) {
    const double a = j < c.dim(0) ? std::abs(c(j, 0, 0, 0)) : 0.0;
    const double b = j < c.dim(1) ? std::abs(c(0, j, 0, 0)) : 0.0;
    if (std::max(a, b) >= cut) sel.n_bar = j + 1;
  }
  sel.n_bar = std::min({sel.n_bar, c.dim(0), c.dim(1)});
  for (std::size_t s = 0; s < c.dim(3); ++s) {
    if (std::abs(c(0, 0, 0, s)) >= cut) sel.s_bar = s + 1;
  }
  return sel;
}

Tensor truncate_reconstruct(const Tensor& x, std::span<const std::size_t> ranks) {
  check_ranks(x.shape(), ranks);
  std::vector<Eigen::MatrixXd> factors(x.order());
  for (std::size_t k = 0; k < x.order(); ++k) {
    if (ranks[k] != x.dim(k)) factors[k] = mode_basis(x, k).vectors;
  }
  return project(x, factors, ranks);
}

Tensor truncate_reconstruct(const Tensor& x, const TuckerModel& model, std::span<const std::size_t> ranks) {
  check_ranks(x.shape(), ranks);
  if (model.factors.size() != x.order()) fail(ErrorKind::invalid_input, "model order does not match tensor");
  for (std::size_t k = 0; k < x.order(); ++k) {
    if (static_cast<std::size_t>(model.factors[k].rows()) != x.dim(k) ||
        static_cast<std::size_t>(model.factors[k].cols()) < ranks[k]) {
      fail(ErrorKind::invalid_rank, "model factor " + std::to_string(k) + " cannot supply rank " +
                                        std::to_string(ranks[k]));
    }
  }
  return project(x, model.factors, ranks);
}

}  // namespace netstate
