#include "gm/sparse.hpp"

#include <algorithm>
#include <stdexcept>

#include "gm/kernels.hpp"

namespace gm {

SparseMatrix::SparseMatrix(std::size_t rows, std::size_t cols, std::span<const Triplet> entries)
    : rows_(rows), cols_(cols) {
  std::vector<Triplet> sorted(entries.begin(), entries.end());
  for (const auto& t : sorted) {
    if (t.row >= rows || t.col >= cols) throw std::out_of_range("triplet outside matrix");
  }
  std::sort(sorted.begin(), sorted.end(), [](const Triplet& a, const Triplet& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  row_ptr_.assign(rows + 1, 0);
  col_.reserve(sorted.size());
  val_.reserve(sorted.size());
  std::size_t last_row = rows;  // sentinel: no previous entry
  for (const auto& t : sorted) {
    if (!val_.empty() && t.row == last_row && col_.back() == t.col) {
      val_.back() += t.value;  // merge duplicates
      continue;
    }
    last_row = t.row;
    ++row_ptr_[t.row + 1];
    col_.push_back(t.col);
    val_.push_back(t.value);
  }
  for (std::size_t i = 0; i < rows; ++i) row_ptr_[i + 1] += row_ptr_[i];
}

SparseMatrix SparseMatrix::transposed() const {
  std::vector<Triplet> flipped;
  flipped.reserve(nnz());
  for (std::size_t i = 0; i < rows_; ++i) {
    const auto cols = row_cols(i);
    const auto vals = row_values(i);
    for (std::size_t k = 0; k < cols.size(); ++k) flipped.push_back({cols[k], i, vals[k]});
  }
  return SparseMatrix(cols_, rows_, flipped);
}

SparseMatrix SparseMatrix::submatrix(std::span<const std::size_t> rows,
                                     std::span<const std::size_t> cols) const {
  std::vector<std::ptrdiff_t> col_map(cols_, -1);
  for (std::size_t j = 0; j < cols.size(); ++j) col_map[cols[j]] = static_cast<std::ptrdiff_t>(j);
  std::vector<Triplet> kept;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto cs = row_cols(rows[i]);
    const auto vs = row_values(rows[i]);
    for (std::size_t k = 0; k < cs.size(); ++k) {
      if (col_map[cs[k]] >= 0)
        kept.push_back({i, static_cast<std::size_t>(col_map[cs[k]]), vs[k]});
    }
  }
  return SparseMatrix(rows.size(), cols.size(), kept);
}

DenseMatrix SparseMatrix::dense() const {
  DenseMatrix d(rows_, cols_);
  for (std::size_t i = 0; i < rows_; ++i) {
    const auto cs = row_cols(i);
    const auto vs = row_values(i);
    for (std::size_t k = 0; k < cs.size(); ++k) d(i, cs[k]) = vs[k];
  }
  return d;
}

std::vector<Triplet> SparseMatrix::triplets() const {
  std::vector<Triplet> out;
  out.reserve(nnz());
  for (std::size_t i = 0; i < rows_; ++i) {
    const auto cs = row_cols(i);
    const auto vs = row_values(i);
    for (std::size_t k = 0; k < cs.size(); ++k) out.push_back({i, cs[k], vs[k]});
  }
  return out;
}

std::vector<double> SparseMatrix::row_sums() const {
  std::vector<double> sums(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    const auto vs = row_values(i);
    sums[i] = kernels::sum(vs.data(), vs.size());
  }
  return sums;
}

std::vector<double> SparseMatrix::col_sums() const {
  std::vector<double> sums(cols_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    const auto cs = row_cols(i);
    const auto vs = row_values(i);
    for (std::size_t k = 0; k < cs.size(); ++k) sums[cs[k]] += vs[k];
  }
  return sums;
}

DenseMatrix SparseMatrix::times_dense(const DenseMatrix& d) const {
  if (cols_ != d.rows()) throw std::invalid_argument("sparse*dense shape mismatch");
  DenseMatrix out(rows_, d.cols());
  for (std::size_t i = 0; i < rows_; ++i) {
    const auto cs = row_cols(i);
    const auto vs = row_values(i);
    double* oi = out.row(i);
    for (std::size_t k = 0; k < cs.size(); ++k) {
      kernels::axpy(vs[k], d.row(cs[k]), oi, d.cols());
    }
  }
  return out;
}

}  // namespace gm
