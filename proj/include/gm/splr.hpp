#pragma once

#include <cstddef>
#include <vector>

#include "gm/dense.hpp"
#include "gm/sparse.hpp"

namespace gm {

/// Sparse-plus-low-rank matrix: sparse + left * right^T, with left and right
/// n-by-d dense factors (d may be zero, leaving a plain sparse matrix).
/// Products run structured, never materializing the low-rank outer product.
class SplrMatrix {
 public:
  SplrMatrix() = default;
  explicit SplrMatrix(SparseMatrix sparse);
  SplrMatrix(SparseMatrix sparse, DenseMatrix left, DenseMatrix right);

  std::size_t rows() const { return sparse_.rows(); }
  std::size_t cols() const { return sparse_.cols(); }
  std::size_t rank() const { return left_.cols(); }

  const SparseMatrix& sparse_part() const { return sparse_; }
  const DenseMatrix& left_factor() const { return left_; }
  const DenseMatrix& right_factor() const { return right_; }

  /// this * d
  DenseMatrix mul(const DenseMatrix& d) const;
  /// this^T * d
  DenseMatrix tmul(const DenseMatrix& d) const;

  DenseMatrix dense() const;

  SplrMatrix block(std::span<const std::size_t> row_ids,
                   std::span<const std::size_t> col_ids) const;

  /// Embed into a target_n square matrix; new rows and columns are zero.
  SplrMatrix padded(std::size_t target_n) const;

 private:
  SparseMatrix sparse_;
  SparseMatrix sparse_t_;
  DenseMatrix left_;   // n x d
  DenseMatrix right_;  // n x d
};

/// x * m with m sparse-plus-low-rank (computed via transposes).
DenseMatrix dense_times_splr(const DenseMatrix& x, const SplrMatrix& m);
/// x * m^T
DenseMatrix dense_times_splr_t(const DenseMatrix& x, const SplrMatrix& m);

}  // namespace gm
