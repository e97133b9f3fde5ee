#include "gm/dense.hpp"

#include <stdexcept>

#include "gm/kernels.hpp"

namespace gm {

DenseMatrix::DenseMatrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ ? rows.begin()->size() : 0;
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw std::invalid_argument("ragged initializer");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

DenseMatrix DenseMatrix::transposed() const {
  DenseMatrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double frob_dot(const DenseMatrix& a, const DenseMatrix& b) {
  return kernels::dot(a.data(), b.data(), a.size());
}

double frob_diff_sq(const DenseMatrix& a, const DenseMatrix& b) {
  return kernels::sumsq_diff(a.data(), b.data(), a.size());
}

double frob_norm_sq(const DenseMatrix& a) { return kernels::dot(a.data(), a.data(), a.size()); }

void add_scaled(DenseMatrix& b, double alpha, const DenseMatrix& a) {
  kernels::axpy(alpha, a.data(), b.data(), b.size());
}

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  DenseMatrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double* ci = c.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double v = a(i, k);
      if (v != 0.0) kernels::axpy(v, b.row(k), ci, b.cols());
    }
  }
  return c;
}

}  // namespace gm
