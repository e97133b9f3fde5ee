#include "gm/splr.hpp"

#include <stdexcept>

#include "gm/kernels.hpp"

namespace gm {

SplrMatrix::SplrMatrix(SparseMatrix sparse)
    : sparse_(std::move(sparse)), sparse_t_(sparse_.transposed()) {}

SplrMatrix::SplrMatrix(SparseMatrix sparse, DenseMatrix left, DenseMatrix right)
    : sparse_(std::move(sparse)),
      sparse_t_(sparse_.transposed()),
      left_(std::move(left)),
      right_(std::move(right)) {
  if (left_.cols() != right_.cols()) throw std::invalid_argument("factor rank mismatch");
  if (left_.rows() != sparse_.rows() || right_.rows() != sparse_.cols())
    throw std::invalid_argument("factor dimensions do not match sparse part");
}

DenseMatrix SplrMatrix::mul(const DenseMatrix& d) const {
  DenseMatrix out = sparse_.times_dense(d);
  if (rank() > 0) {
    // left * (right^T * d)
    DenseMatrix rtd(rank(), d.cols());
    for (std::size_t i = 0; i < right_.rows(); ++i) {
      for (std::size_t k = 0; k < rank(); ++k) {
        kernels::axpy(right_(i, k), d.row(i), rtd.row(k), d.cols());
      }
    }
    for (std::size_t i = 0; i < left_.rows(); ++i) {
      for (std::size_t k = 0; k < rank(); ++k) {
        kernels::axpy(left_(i, k), rtd.row(k), out.row(i), d.cols());
      }
    }
  }
  return out;
}

DenseMatrix SplrMatrix::tmul(const DenseMatrix& d) const {
  DenseMatrix out = sparse_t_.times_dense(d);
  if (rank() > 0) {
    DenseMatrix ltd(rank(), d.cols());
    for (std::size_t i = 0; i < left_.rows(); ++i) {
      for (std::size_t k = 0; k < rank(); ++k) {
        kernels::axpy(left_(i, k), d.row(i), ltd.row(k), d.cols());
      }
    }
    for (std::size_t i = 0; i < right_.rows(); ++i) {
      for (std::size_t k = 0; k < rank(); ++k) {
        kernels::axpy(right_(i, k), ltd.row(k), out.row(i), d.cols());
      }
    }
  }
  return out;
}

DenseMatrix SplrMatrix::dense() const {
  DenseMatrix out = sparse_.dense();
  for (std::size_t i = 0; i < out.rows(); ++i)
    for (std::size_t j = 0; j < out.cols(); ++j)
      for (std::size_t k = 0; k < rank(); ++k) out(i, j) += left_(i, k) * right_(j, k);
  return out;
}

SplrMatrix SplrMatrix::block(std::span<const std::size_t> row_ids,
                             std::span<const std::size_t> col_ids) const {
  SparseMatrix sub = sparse_.submatrix(row_ids, col_ids);
  if (rank() == 0) return SplrMatrix(std::move(sub));
  DenseMatrix l(row_ids.size(), rank());
  DenseMatrix r(col_ids.size(), rank());
  for (std::size_t i = 0; i < row_ids.size(); ++i)
    for (std::size_t k = 0; k < rank(); ++k) l(i, k) = left_(row_ids[i], k);
  for (std::size_t j = 0; j < col_ids.size(); ++j)
    for (std::size_t k = 0; k < rank(); ++k) r(j, k) = right_(col_ids[j], k);
  return SplrMatrix(std::move(sub), std::move(l), std::move(r));
}

SplrMatrix SplrMatrix::padded(std::size_t target_n) const {
  if (target_n < rows()) throw std::invalid_argument("pad target smaller than matrix");
  auto trips = sparse_.triplets();
  SparseMatrix sub(target_n, target_n, trips);
  if (rank() == 0) return SplrMatrix(std::move(sub));
  DenseMatrix l(target_n, rank());
  DenseMatrix r(target_n, rank());
  for (std::size_t i = 0; i < rows(); ++i)
    for (std::size_t k = 0; k < rank(); ++k) l(i, k) = left_(i, k);
  for (std::size_t j = 0; j < cols(); ++j)
    for (std::size_t k = 0; k < rank(); ++k) r(j, k) = right_(j, k);
  return SplrMatrix(std::move(sub), std::move(l), std::move(r));
}

DenseMatrix dense_times_splr(const DenseMatrix& x, const SplrMatrix& m) {
  return m.tmul(x.transposed()).transposed();
}

DenseMatrix dense_times_splr_t(const DenseMatrix& x, const SplrMatrix& m) {
  return m.mul(x.transposed()).transposed();
}

}  // namespace gm
