#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "gm/dense.hpp"

namespace gm {

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

/// Immutable CSR matrix. Duplicate (row, col) pairs are summed at build time;
/// entries come out row-sorted so equal inputs produce identical storage.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(std::size_t rows, std::size_t cols, std::span<const Triplet> entries);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t nnz() const { return col_.size(); }

  std::span<const std::size_t> row_cols(std::size_t i) const {
    return {col_.data() + row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]};
  }
  std::span<const double> row_values(std::size_t i) const {
    return {val_.data() + row_ptr_[i], row_ptr_[i + 1] - row_ptr_[i]};
  }

  SparseMatrix transposed() const;
  SparseMatrix submatrix(std::span<const std::size_t> rows,
                         std::span<const std::size_t> cols) const;

  DenseMatrix dense() const;
  std::vector<Triplet> triplets() const;

  /// Weighted row sums (out-degree vector when this is an adjacency matrix).
  std::vector<double> row_sums() const;
  std::vector<double> col_sums() const;

  /// out = this * d   (rows x d.cols), accumulated row-wise via kernels.
  DenseMatrix times_dense(const DenseMatrix& d) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::size_t> col_;
  std::vector<double> val_;
};

}  // namespace gm
