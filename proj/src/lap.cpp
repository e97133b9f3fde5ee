#include "gm/lap.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "gm/errors.hpp"

namespace gm {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Shortest augmenting path solver on reduced costs. RowScan is called as
// row_scan(i, f) and must invoke f(j, cost) for every admissible column j of
// row i. Requires v initialized so that all reduced costs are nonnegative
// (column minima do). Augments every unassigned row in [0, n_rows); throws
// when a row cannot reach a free column.
template <typename RowScan>
void augment(std::size_t n_rows, std::size_t n_cols, const RowScan& row_scan,
             std::vector<double>& u, std::vector<double>& v,
             std::vector<std::ptrdiff_t>& row_of_col, std::vector<std::ptrdiff_t>& col_of_row) {
  std::vector<double> dist(n_cols);
  std::vector<std::ptrdiff_t> pred_col(n_cols);
  std::vector<char> visited(n_cols);

  for (std::size_t r = 0; r < n_rows; ++r) {
    if (col_of_row[r] >= 0) continue;
    std::fill(dist.begin(), dist.end(), kInf);
    std::fill(pred_col.begin(), pred_col.end(), std::ptrdiff_t{-1});
    std::fill(visited.begin(), visited.end(), char{0});
    row_scan(r, [&](std::size_t j, double c) {
      dist[j] = c - u[r] - v[j];
      pred_col[j] = -1;
    });

    std::ptrdiff_t end_col = -1;
    double final_delta = 0.0;
    while (true) {
      std::ptrdiff_t jmin = -1;
      double delta = kInf;
      for (std::size_t j = 0; j < n_cols; ++j) {
        if (!visited[j] && dist[j] < delta) {
          delta = dist[j];
          jmin = static_cast<std::ptrdiff_t>(j);
        }
      }
      if (jmin < 0) throw PreconditionError("assignment infeasible on admissible entries");
      visited[static_cast<std::size_t>(jmin)] = 1;
      if (row_of_col[static_cast<std::size_t>(jmin)] < 0) {
        end_col = jmin;
        final_delta = delta;
        break;
      }
      const auto i = static_cast<std::size_t>(row_of_col[static_cast<std::size_t>(jmin)]);
      row_scan(i, [&](std::size_t j, double c) {
        if (visited[j]) return;
        const double nd = delta + c - u[i] - v[j];
        if (nd < dist[j]) {
          dist[j] = nd;
          pred_col[j] = jmin;
        }
      });
    }

    // dual update keeps reduced costs nonnegative and makes the path tight
    u[r] += final_delta;
    for (std::size_t j = 0; j < n_cols; ++j) {
      if (!visited[j] || static_cast<std::ptrdiff_t>(j) == end_col) continue;
      v[j] += dist[j] - final_delta;
      const auto i = row_of_col[j];
      if (i >= 0) u[static_cast<std::size_t>(i)] += final_delta - dist[j];
    }

    std::ptrdiff_t j = end_col;
    while (true) {
      const std::ptrdiff_t pc = pred_col[static_cast<std::size_t>(j)];
      const std::ptrdiff_t i =
          pc < 0 ? static_cast<std::ptrdiff_t>(r) : row_of_col[static_cast<std::size_t>(pc)];
      row_of_col[static_cast<std::size_t>(j)] = i;
      col_of_row[static_cast<std::size_t>(i)] = j;
      if (pc < 0) break;
      j = pc;
    }
  }
}

double sentinel_for(const DenseMatrix& c) {
  double mx = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) mx = std::max(mx, std::fabs(c.data()[k]));
  return mx * static_cast<double>(std::max<std::size_t>(c.cols(), 1)) + 1.0;
}

Assignment solve_dense_min(const DenseMatrix& costs) {
  const std::size_t n_real = costs.rows();
  const std::size_t n = costs.cols();
  // pad to square with a sentinel; padded rows are interchangeable so the
  // optimum over real rows is unchanged
  DenseMatrix c(n, n, sentinel_for(costs));
  for (std::size_t i = 0; i < n_real; ++i)
    for (std::size_t j = 0; j < n; ++j) c(i, j) = costs(i, j);

  std::vector<double> u(n, 0.0), v(n, 0.0);
  std::vector<std::ptrdiff_t> row_of_col(n, -1), col_of_row(n, -1);

  // column reduction: v[j] = column minimum, assigning the first argmin row
  // when still free (processed in reverse column order)
  for (std::size_t jj = n; jj-- > 0;) {
    double best = kInf;
    std::size_t bi = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (c(i, jj) < best) {
        best = c(i, jj);
        bi = i;
      }
    }
    v[jj] = best;
    if (col_of_row[bi] < 0 && row_of_col[jj] < 0) {
      row_of_col[jj] = static_cast<std::ptrdiff_t>(bi);
      col_of_row[bi] = static_cast<std::ptrdiff_t>(jj);
    }
  }

  auto row_scan = [&](std::size_t i, auto&& f) {
    for (std::size_t j = 0; j < n; ++j) f(j, c(i, j));
  };
  augment(n, n, row_scan, u, v, row_of_col, col_of_row);

  Assignment out;
  out.mapping.resize(n_real);
  out.objective = 0.0;
  for (std::size_t i = 0; i < n_real; ++i) {
    out.mapping[i] = static_cast<std::size_t>(col_of_row[i]);
    out.objective += costs(i, out.mapping[i]);
  }
  out.method_used = "dense";
  return out;
}

Assignment solve_sparse_min(const SparseMatrix& costs) {
  const std::size_t n_rows = costs.rows();
  const std::size_t n_cols = costs.cols();
  std::vector<double> u(n_rows, 0.0), v(n_cols, 0.0);
  std::vector<std::ptrdiff_t> row_of_col(n_cols, -1), col_of_row(n_rows, -1);

  // column minima from the transpose; an empty column among <= n_rows
  // candidates is caught during augmentation
  const SparseMatrix t = costs.transposed();
  for (std::size_t jj = n_cols; jj-- > 0;) {
    const auto rows = t.row_cols(jj);
    const auto vals = t.row_values(jj);
    if (rows.empty()) continue;
    double best = kInf;
    std::size_t bi = 0;
    for (std::size_t k = 0; k < rows.size(); ++k) {
      if (vals[k] < best) {
        best = vals[k];
        bi = rows[k];
      }
    }
    v[jj] = best;
    if (col_of_row[bi] < 0 && row_of_col[jj] < 0) {
      row_of_col[jj] = static_cast<std::ptrdiff_t>(bi);
      col_of_row[bi] = static_cast<std::ptrdiff_t>(jj);
    }
  }

  auto row_scan = [&](std::size_t i, auto&& f) {
    const auto cols = costs.row_cols(i);
    const auto vals = costs.row_values(i);
    for (std::size_t k = 0; k < cols.size(); ++k) f(cols[k], vals[k]);
  };
  augment(n_rows, n_cols, row_scan, u, v, row_of_col, col_of_row);

  Assignment out;
  out.mapping.resize(n_rows);
  out.objective = 0.0;
  for (std::size_t i = 0; i < n_rows; ++i) {
    out.mapping[i] = static_cast<std::size_t>(col_of_row[i]);
    const auto cols = costs.row_cols(i);
    const auto vals = costs.row_values(i);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      if (cols[k] == out.mapping[i]) {
        out.objective += vals[k];
        break;
      }
    }
  }
  out.method_used = "sparse";
  return out;
}

DenseMatrix negated(const DenseMatrix& m) {
  DenseMatrix out = m;
  for (std::size_t k = 0; k < out.size(); ++k) out.data()[k] = -out.data()[k];
  return out;
}

}  // namespace

CostMatrix CostMatrix::from_dense(DenseMatrix values) {
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (!std::isfinite(values.data()[k])) throw InputError("non-finite cost entry");
  }
  if (values.rows() > values.cols())
    throw InputError("cost matrix needs rows <= cols; transpose or pad the input");
  CostMatrix c;
  c.is_dense_ = true;
  c.dense_ = std::move(values);
  return c;
}

CostMatrix CostMatrix::from_sparse(std::size_t rows, std::size_t cols,
                                   std::vector<Triplet> entries) {
  for (const auto& t : entries) {
    if (!std::isfinite(t.value)) throw InputError("non-finite cost entry");
  }
  if (rows > cols) throw InputError("cost matrix needs rows <= cols; transpose or pad the input");
  CostMatrix c;
  c.is_dense_ = false;
  c.sparse_ = SparseMatrix(rows, cols, entries);
  return c;
}

std::size_t CostMatrix::rows() const { return is_dense_ ? dense_.rows() : sparse_.rows(); }
std::size_t CostMatrix::cols() const { return is_dense_ ? dense_.cols() : sparse_.cols(); }

double CostMatrix::density() const {
  const double total = static_cast<double>(rows()) * static_cast<double>(cols());
  if (total == 0.0) return 1.0;
  return is_dense_ ? 1.0 : static_cast<double>(sparse_.nnz()) / total;
}

Assignment solve_lap_dense(const CostMatrix& c, LapSense sense) {
  DenseMatrix values;
  if (c.is_dense()) {
    values = c.dense_values();
  } else {
    // densify: absent entries get the sentinel (repelling for the given
    // sense) so they are never chosen when a feasible alternative exists
    values = c.sparse_values().dense();
    const double sent = (sense == LapSense::max ? -1.0 : 1.0) * sentinel_for(values);
    DenseMatrix mask(c.rows(), c.cols(), 0.0);
    for (std::size_t i = 0; i < c.rows(); ++i) {
      const auto cols = c.sparse_values().row_cols(i);
      for (const auto j : cols) mask(i, j) = 1.0;
    }
    for (std::size_t i = 0; i < c.rows(); ++i)
      for (std::size_t j = 0; j < c.cols(); ++j)
        if (mask(i, j) == 0.0) values(i, j) = sent;
  }
  if (sense == LapSense::max) {
    Assignment out = solve_dense_min(negated(values));
    out.objective = 0.0;
    for (std::size_t i = 0; i < out.mapping.size(); ++i)
      out.objective += values(i, out.mapping[i]);
    return out;
  }
  return solve_dense_min(values);
}

Assignment solve_lap_sparse(const CostMatrix& c, LapSense sense) {
  if (c.is_dense()) {
    // treat every dense entry as admissible
    std::vector<Triplet> trips;
    trips.reserve(c.rows() * c.cols());
    for (std::size_t i = 0; i < c.rows(); ++i)
      for (std::size_t j = 0; j < c.cols(); ++j) trips.push_back({i, j, c.dense_values()(i, j)});
    return solve_lap_sparse(CostMatrix::from_sparse(c.rows(), c.cols(), std::move(trips)), sense);
  }
  const SparseMatrix& s = c.sparse_values();
  if (sense == LapSense::max) {
    auto trips = s.triplets();
    for (auto& t : trips) t.value = -t.value;
    Assignment out = solve_sparse_min(SparseMatrix(s.rows(), s.cols(), trips));
    out.objective = -out.objective;
    return out;
  }
  return solve_sparse_min(s);
}

Assignment do_lap(const CostMatrix& c, LapMethod method, LapSense sense) {
  switch (method) {
    case LapMethod::dense:
      return solve_lap_dense(c, sense);
    case LapMethod::sparse:
      return solve_lap_sparse(c, sense);
    case LapMethod::auto_pick:
      return c.density() < 0.5 ? solve_lap_sparse(c, sense) : solve_lap_dense(c, sense);
  }
  throw InputError("unknown LAP method");
}

const char* to_string(LapMethod m) {
  switch (m) {
    case LapMethod::dense:
      return "dense";
    case LapMethod::sparse:
      return "sparse";
    case LapMethod::auto_pick:
      return "auto";
  }
  return "?";
}

}  // namespace gm
