#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace gm {

/// Row-major dense matrix of doubles. The arithmetic helpers below route
/// their inner loops through gm::kernels.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(std::size_t rows, std::size_t cols, double value = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, value) {}
  DenseMatrix(std::initializer_list<std::initializer_list<double>> rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  double* row(std::size_t i) { return data_.data() + i * cols_; }
  const double* row(std::size_t i) const { return data_.data() + i * cols_; }
  std::span<const double> row_span(std::size_t i) const { return {row(i), cols_}; }

  double* data() { return data_.data(); }
  const double* data() const { return data_.data(); }

  void fill(double value) { data_.assign(data_.size(), value); }

  DenseMatrix transposed() const;

  bool operator==(const DenseMatrix&) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// sum_ij A_ij * B_ij
double frob_dot(const DenseMatrix& a, const DenseMatrix& b);
/// ||A - B||_F^2
double frob_diff_sq(const DenseMatrix& a, const DenseMatrix& b);
double frob_norm_sq(const DenseMatrix& a);

/// B += alpha * A
void add_scaled(DenseMatrix& b, double alpha, const DenseMatrix& a);

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);

}  // namespace gm
