#pragma once

#include "netstate/tensor.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <span>
#include <vector>

namespace netstate {

// Orthonormal basis for one mode: left singular vectors of the mode
// unfolding, columns ordered by descending singular value.
//
// Computed from the symmetric eigendecomposition of the mode Gram matrix.
// Each column is sign-normalised so that its entry of largest magnitude is
// nonnegative (ties go to the lowest row). A zero unfolding yields the
// identity basis.
struct ModeBasis {
  Eigen::MatrixXd vectors;
  Eigen::VectorXd singular_values;  // sqrt of the Gram eigenvalues, clamped at 0
};

ModeBasis mode_basis(const Tensor& x, std::size_t mode);

struct TuckerModel {
  Tensor core;
  std::vector<Eigen::MatrixXd> factors;  // factors[k] is m_k x r_k
  // Per-mode singular values. For a full HOSVD these are the Frobenius
  // norms of the core slices, which equal the unfolding singular values.
  std::vector<Eigen::VectorXd> singular_values;
  double residual_fro = 0.0;
};

// Full-rank higher-order SVD: factors from every mode unfolding and
// core = x ×_0 U0^T ×_1 U1^T ... .
TuckerModel hosvd(const Tensor& x);

// core ×_0 U0 ×_1 U1 ...
Tensor reconstruct(const TuckerModel& model);

struct RankSelection {
  std::size_t n_bar = 0;  // shared rank of the two node modes
  std::size_t s_bar = 0;  // rank of the subject mode
  double epsilon_rel = 0.0;
};

// Rank selection on a 4-mode (node, node, time, subject) model. A node-mode
// index j is kept when max(|C[j,0,0,0]|, |C[0,j,0,0]|) >= epsilon_rel *
// |C[0,0,0,0]|; n_bar is the largest kept count. The subject mode uses the
// fibre C[0,0,0,s]. The time mode is never truncated.
RankSelection select_ranks(const TuckerModel& model, double epsilon_rel);

// x ×_k (U_k U_k^T) over every mode, with U_k the leading ranks[k] columns
// of the mode basis. Modes kept at full rank are left untouched.
Tensor truncate_reconstruct(const Tensor& x, std::span<const std::size_t> ranks);

// Same projection using the factors of an existing model of x.
Tensor truncate_reconstruct(const Tensor& x, const TuckerModel& model, std::span<const std::size_t> ranks);

}  // namespace netstate
