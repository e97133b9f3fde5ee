#pragma once

#include <string>
#include <vector>

#include "gm/dense.hpp"
#include "gm/sparse.hpp"

namespace gm {

enum class LapSense { min, max };
enum class LapMethod { dense, sparse, auto_pick };

/// Profit/cost matrix for assignment. Dense storage holds every entry;
/// sparse storage treats absent entries as forbidden.
class CostMatrix {
 public:
  static CostMatrix from_dense(DenseMatrix values);
  static CostMatrix from_sparse(std::size_t rows, std::size_t cols,
                                std::vector<Triplet> entries);

  bool is_dense() const { return is_dense_; }
  std::size_t rows() const;
  std::size_t cols() const;
  /// Stored entries over total cells.
  double density() const;

  const DenseMatrix& dense_values() const { return dense_; }
  const SparseMatrix& sparse_values() const { return sparse_; }

 private:
  bool is_dense_ = true;
  DenseMatrix dense_;
  SparseMatrix sparse_;
};

struct Assignment {
  /// mapping[i] is the column assigned to row i (rows of the original,
  /// unpadded matrix).
  std::vector<std::size_t> mapping;
  double objective = 0.0;
  std::string method_used;
};

/// Jonker-Volgenant style solver (column reduction followed by shortest
/// augmenting paths on reduced costs) for dense cost matrices. Rectangular
/// inputs with rows <= cols are padded square with a large sentinel.
Assignment solve_lap_dense(const CostMatrix& c, LapSense sense);

/// Sparse solver over stored entries only; raises PreconditionError when no
/// perfect matching exists on them.
Assignment solve_lap_sparse(const CostMatrix& c, LapSense sense);

/// Dispatch: auto picks the sparse path when stored density < 0.5. Dense
/// method on sparse storage densifies absent entries with the sentinel.
Assignment do_lap(const CostMatrix& c, LapMethod method, LapSense sense);

const char* to_string(LapMethod m);

}  // namespace gm
