#include "netstate/tensor.hpp"

#include "netstate/error.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace netstate {

namespace {

using ConstMap = Eigen::Map<const Eigen::MatrixXd>;
using Map = Eigen::Map<Eigen::MatrixXd>;

void check_mode(const Tensor& x, std::size_t mode) {
  if (mode >= x.order()) {
    fail(ErrorKind::invalid_mode, "mode " + std::to_string(mode) + " out of range for order-" +
                                      std::to_string(x.order()) + " tensor");
  }
}

// View of x as (before, m_k, after) for mode k.
struct Split {
  std::size_t before;
  std::size_t dim;
  std::size_t after;
};

Split split(const Shape& shape, std::size_t mode) {
  Split s{1, shape[mode], 1};
  for (std::size_t j = 0; j < mode; ++j) s.before *= shape[j];
  for (std::size_t j = mode + 1; j < shape.size(); ++j) s.after *= shape[j];
  return s;
}

}  // namespace

std::size_t shape_size(const Shape& shape) {
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>());
}

Tensor::Tensor(Shape shape) : shape_(std::move(shape)) {
  for (auto m : shape_) {
    if (m == 0) fail(ErrorKind::invalid_input, "tensor dimensions must be positive");
  }
  data_.assign(shape_size(shape_), 0.0);
}

Tensor::Tensor(Shape shape, std::vector<double> data) : shape_(std::move(shape)), data_(std::move(data)) {
  for (auto m : shape_) {
    if (m == 0) fail(ErrorKind::invalid_input, "tensor dimensions must be positive");
  }
  if (data_.size() != shape_size(shape_)) {
    fail(ErrorKind::invalid_input, "tensor data length " + std::to_string(data_.size()) +
                                       " does not match shape size " + std::to_string(shape_size(shape_)));
  }
}

std::size_t Tensor::stride(std::size_t mode) const {
  std::size_t s = 1;
  for (std::size_t j = 0; j < mode; ++j) s *= shape_[j];
  return s;
}

std::size_t Tensor::offset(std::span<const std::size_t> index) const {
  if (index.size() != shape_.size()) fail(ErrorKind::invalid_index, "index arity does not match tensor order");
  std::size_t off = 0;
  for (std::size_t j = shape_.size(); j-- > 0;) {
    if (index[j] >= shape_[j]) fail(ErrorKind::invalid_index, "tensor index out of range");
    off = off * shape_[j] + index[j];
  }
  return off;
}

Eigen::MatrixXd unfold(const Tensor& x, std::size_t mode) {
  check_mode(x, mode);
  const auto s = split(x.shape(), mode);
  Eigen::MatrixXd out(s.dim, s.before * s.after);
  const double* src = x.data().data();
  for (std::size_t b = 0; b < s.after; ++b) {
    for (std::size_t i = 0; i < s.dim; ++i) {
      const double* row = src + s.before * (i + s.dim * b);
      for (std::size_t a = 0; a < s.before; ++a) out(i, a + s.before * b) = row[a];
    }
  }
  return out;
}

Tensor fold(const Eigen::MatrixXd& m, std::size_t mode, const Shape& shape) {
  Tensor out(shape);
  check_mode(out, mode);
  const auto s = split(shape, mode);
  if (static_cast<std::size_t>(m.rows()) != s.dim ||
      static_cast<std::size_t>(m.cols()) != s.before * s.after) {
    fail(ErrorKind::invalid_input, "unfolded matrix does not match target shape");
  }
  double* dst = out.data().data();
  for (std::size_t b = 0; b < s.after; ++b) {
    for (std::size_t i = 0; i < s.dim; ++i) {
      double* row = dst + s.before * (i + s.dim * b);
      for (std::size_t a = 0; a < s.before; ++a) row[a] = m(i, a + s.before * b);
    }
  }
  return out;
}

Tensor mode_product(const Tensor& x, const Eigen::MatrixXd& m, std::size_t mode) {
  check_mode(x, mode);
  const auto s = split(x.shape(), mode);
  if (static_cast<std::size_t>(m.cols()) != s.dim) {
    fail(ErrorKind::invalid_input, "mode_product: matrix has " + std::to_string(m.cols()) +
                                       " columns, mode " + std::to_string(mode) + " has size " +
                                       std::to_string(s.dim));
  }
  Shape out_shape = x.shape();
  out_shape[mode] = static_cast<std::size_t>(m.rows());
  Tensor out(out_shape);
  const auto r = static_cast<Eigen::Index>(m.rows());
  const auto before = static_cast<Eigen::Index>(s.before);
  const auto dim = static_cast<Eigen::Index>(s.dim);

  if (s.before == 1) {
    ConstMap in(x.data().data(), dim, static_cast<Eigen::Index>(s.after));
    Map dst(out.data().data(), r, static_cast<Eigen::Index>(s.after));
    dst.noalias() = m * in;
    return out;
  }
  for (std::size_t b = 0; b < s.after; ++b) {
    ConstMap in(x.data().data() + b * s.before * s.dim, before, dim);
    Map dst(out.data().data() + b * s.before * static_cast<std::size_t>(r), before, r);
    dst.noalias() = in * m.transpose();
  }
  return out;
}

Eigen::MatrixXd mode_gram(const Tensor& x, std::size_t mode) {
  check_mode(x, mode);
  const auto s = split(x.shape(), mode);
  const auto dim = static_cast<Eigen::Index>(s.dim);
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(dim, dim);
  if (s.before == 1) {
    ConstMap in(x.data().data(), dim, static_cast<Eigen::Index>(s.after));
    gram.selfadjointView<Eigen::Lower>().rankUpdate(in);
  } else {
    for (std::size_t b = 0; b < s.after; ++b) {
      ConstMap in(x.data().data() + b * s.before * s.dim, static_cast<Eigen::Index>(s.before), dim);
      gram.selfadjointView<Eigen::Lower>().rankUpdate(in.transpose());
    }
  }
  gram.triangularView<Eigen::StrictlyUpper>() = gram.transpose();
  return gram;
}

Tensor slice_range(const Tensor& x, std::size_t mode, std::size_t first, std::size_t last) {
  check_mode(x, mode);
  if (first > last || last >= x.dim(mode)) {
    fail(ErrorKind::invalid_index, "slice range [" + std::to_string(first) + ", " + std::to_string(last) +
                                       "] outside mode " + std::to_string(mode));
  }
  const auto s = split(x.shape(), mode);
  Shape out_shape = x.shape();
  out_shape[mode] = last - first + 1;
  Tensor out(out_shape);
  const double* src = x.data().data();
  double* dst = out.data().data();
  const std::size_t len = last - first + 1;
  for (std::size_t b = 0; b < s.after; ++b) {
    const double* from = src + s.before * (first + s.dim * b);
    std::copy(from, from + s.before * len, dst + s.before * len * b);
  }
  return out;
}

double inner(const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) fail(ErrorKind::invalid_input, "inner product of tensors with different shapes");
  const auto n = static_cast<Eigen::Index>(a.size());
  return Eigen::Map<const Eigen::VectorXd>(a.data().data(), n)
      .dot(Eigen::Map<const Eigen::VectorXd>(b.data().data(), n));
}

double frobenius_norm(const Tensor& x) {
  return Eigen::Map<const Eigen::VectorXd>(x.data().data(), static_cast<Eigen::Index>(x.size())).norm();
}

double cosine_similarity(const Tensor& a, const Tensor& b) {
  if (a.shape() != b.shape()) fail(ErrorKind::invalid_input, "cosine similarity of tensors with different shapes");
  const double na = frobenius_norm(a);
  const double nb = frobenius_norm(b);
  if (na == 0.0 || nb == 0.0) fail(ErrorKind::zero_norm, "cosine similarity with a zero-norm operand");
  return std::clamp(inner(a, b) / (na * nb), -1.0, 1.0);
}

}  // namespace netstate
