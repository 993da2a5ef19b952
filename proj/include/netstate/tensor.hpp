#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace netstate {

using Shape = std::vector<std::size_t>;

// Dense real d-mode array. Storage is a single contiguous buffer with the
// first index varying fastest: entry (i_0, ..., i_{d-1}) lives at
// i_0 + m_0 * (i_1 + m_1 * (i_2 + ...)). Modes are numbered from 0.
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(Shape shape);
  Tensor(Shape shape, std::vector<double> data);

  const Shape& shape() const { return shape_; }
  std::size_t order() const { return shape_.size(); }
  std::size_t dim(std::size_t mode) const { return shape_.at(mode); }
  std::size_t size() const { return data_.size(); }

  // Product of the dimensions of modes [0, mode).
  std::size_t stride(std::size_t mode) const;

  std::span<double> data() { return data_; }
  std::span<const double> data() const { return data_; }

  double& operator[](std::size_t linear) { return data_[linear]; }
  double operator[](std::size_t linear) const { return data_[linear]; }

  std::size_t offset(std::span<const std::size_t> index) const;

  template <typename... I>
  double& operator()(I... index) {
    const std::size_t idx[] = {static_cast<std::size_t>(index)...};
    return data_[offset(idx)];
  }
  template <typename... I>
  double operator()(I... index) const {
    const std::size_t idx[] = {static_cast<std::size_t>(index)...};
    return data_[offset(idx)];
  }

  friend bool operator==(const Tensor&, const Tensor&) = default;

 private:
  Shape shape_;
  std::vector<double> data_;
};

std::size_t shape_size(const Shape& shape);

// Mode-k unfolding, m_k x (prod_{j != k} m_j). Column index runs over the
// remaining modes in increasing mode order, earliest mode fastest.
Eigen::MatrixXd unfold(const Tensor& x, std::size_t mode);

// Inverse of unfold for a tensor of the given shape.
Tensor fold(const Eigen::MatrixXd& m, std::size_t mode, const Shape& shape);

// x ×_k m. m must have x.dim(mode) columns; the result has m.rows() in
// place of that dimension.
Tensor mode_product(const Tensor& x, const Eigen::MatrixXd& m, std::size_t mode);

// Gram matrix X_(k) X_(k)^T of the mode-k unfolding, computed without
// materialising the unfolding.
Eigen::MatrixXd mode_gram(const Tensor& x, std::size_t mode);

// Sub-tensor with mode `mode` restricted to [first, last].
Tensor slice_range(const Tensor& x, std::size_t mode, std::size_t first, std::size_t last);

double inner(const Tensor& a, const Tensor& b);
double frobenius_norm(const Tensor& x);

// <a, b> / (||a|| ||b||). Throws zero-norm if either operand vanishes.
double cosine_similarity(const Tensor& a, const Tensor& b);

}  // namespace netstate
