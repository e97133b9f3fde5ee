#include "gm/relax.hpp"

#include <algorithm>
#include <cmath>

#include "gm/errors.hpp"
#include "gm/kernels.hpp"

namespace gm {
namespace {

SplrMatrix splr_of(const Graph& g) { return SplrMatrix(g.adjacency()); }

/// L = diag(row sums) - M, kept in sparse-plus-low-rank form.
SplrMatrix laplacian_of(const SplrMatrix& m) {
  const std::size_t n = m.rows();
  DenseMatrix ones(n, 1, 1.0);
  DenseMatrix deg = m.mul(ones);
  std::vector<Triplet> trips = m.sparse_part().triplets();
  for (auto& t : trips) t.value = -t.value;
  for (std::size_t i = 0; i < n; ++i) trips.push_back({i, i, deg(i, 0)});
  SparseMatrix s(n, n, trips);
  if (m.rank() == 0) return SplrMatrix(std::move(s));
  DenseMatrix neg_left = m.left_factor();
  for (std::size_t k = 0; k < neg_left.size(); ++k) neg_left.data()[k] = -neg_left.data()[k];
  return SplrMatrix(std::move(s), std::move(neg_left), m.right_factor());
}

struct LayerOps {
  SplrMatrix a22, b22;  // quadratic part
  SplrMatrix a12, b21;  // convex residual operators
  DenseMatrix a21_d;    // ns x s
  DenseMatrix b12_d;    // s x ns
};

struct Engine {
  std::size_t n = 0;   // padded order
  std::size_t s = 0;   // seeds
  std::size_t ns = 0;  // nonseeds
  Objective kind = Objective::indefinite;
  double lambda = 0.0;
  bool maximize = false;

  std::vector<LayerOps> adj;
  std::vector<LayerOps> lap;     // concave part, from Laplacians
  DenseMatrix lin_fixed;         // linear gradient term independent of lambda
  DenseMatrix lin_f1;            // concave linear term, weighted by lambda

  std::vector<std::size_t> nonseed_a, nonseed_b;
  std::vector<std::pair<std::size_t, std::size_t>> seed_pairs;
  std::pair<std::size_t, std::size_t> nnodes{0, 0};

  DenseMatrix linear() const {
    DenseMatrix l = lin_fixed;
    if (lin_f1.size() > 0 && lambda != 0.0) add_scaled(l, lambda, lin_f1);
    return l;
  }

  double value(const DenseMatrix& d) const;
  DenseMatrix grad(const DenseMatrix& d) const;
  void line_coeffs(const DenseMatrix& d, const DenseMatrix& r, double& lin_c,
                   double& quad_c) const;
};

// trace-form pieces: N_x = A22^T x B22, so tr(A22^T d B22 d^T) = <N_d, d>
DenseMatrix trace_form(const LayerOps& ops, const DenseMatrix& x) {
  return dense_times_splr(ops.a22.tmul(x), ops.b22);
}

struct ConvexResiduals {
  DenseMatrix x1;  // a12 d - b12            (s x ns)
  DenseMatrix x2;  // a21 - d b21            (ns x s)
  DenseMatrix x3;  // a22 d - d b22          (ns x ns)
};

ConvexResiduals residuals_at(const LayerOps& ops, const DenseMatrix& d) {
  ConvexResiduals r;
  r.x1 = ops.a12.mul(d);
  add_scaled(r.x1, -1.0, ops.b12_d);
  r.x2 = dense_times_splr(d, ops.b21);
  kernels::scale(r.x2.data(), -1.0, r.x2.size());
  add_scaled(r.x2, 1.0, ops.a21_d);
  r.x3 = ops.a22.mul(d);
  add_scaled(r.x3, -1.0, dense_times_splr(d, ops.b22));
  return r;
}

// direction images: the residuals of d + alpha r move by alpha times these
ConvexResiduals directions_at(const LayerOps& ops, const DenseMatrix& r) {
  ConvexResiduals y;
  y.x1 = ops.a12.mul(r);
  y.x2 = dense_times_splr(r, ops.b21);
  kernels::scale(y.x2.data(), -1.0, y.x2.size());
  y.x3 = ops.a22.mul(r);
  add_scaled(y.x3, -1.0, dense_times_splr(r, ops.b22));
  return y;
}

double Engine::value(const DenseMatrix& d) const {
  double val = frob_dot(linear(), d);
  switch (kind) {
    case Objective::indefinite:
      for (const auto& ops : adj) val += frob_dot(trace_form(ops, d), d);
      break;
    case Objective::convex:
      for (const auto& ops : adj) {
        const auto r = residuals_at(ops, d);
        val += frob_norm_sq(r.x1) + frob_norm_sq(r.x2) + frob_norm_sq(r.x3);
      }
      break;
    case Objective::concave_mix: {
      double cval = 0.0;
      for (const auto& ops : adj) {
        const auto r = residuals_at(ops, d);
        cval += frob_norm_sq(r.x1) + frob_norm_sq(r.x2) + frob_norm_sq(r.x3);
      }
      double qval = 0.0;
      for (const auto& ops : lap) qval += frob_dot(trace_form(ops, d), d);
      val += (1.0 - lambda) * cval - 2.0 * lambda * qval;
      break;
    }
  }
  return val;
}

DenseMatrix Engine::grad(const DenseMatrix& d) const {
  DenseMatrix g = linear();
  auto add_trace_grad = [&](const LayerOps& ops, double w) {
    add_scaled(g, w, dense_times_splr_t(ops.a22.mul(d), ops.b22));
    add_scaled(g, w, dense_times_splr(ops.a22.tmul(d), ops.b22));
  };
  auto add_convex_grad = [&](const LayerOps& ops, double w) {
    const auto r = residuals_at(ops, d);
    add_scaled(g, 2.0 * w, ops.a12.tmul(r.x1));
    add_scaled(g, -2.0 * w, dense_times_splr_t(r.x2, ops.b21));
    add_scaled(g, 2.0 * w, ops.a22.tmul(r.x3));
    add_scaled(g, -2.0 * w, dense_times_splr_t(r.x3, ops.b22));
  };
  switch (kind) {
    case Objective::indefinite:
      for (const auto& ops : adj) add_trace_grad(ops, 1.0);
      break;
    case Objective::convex:
      for (const auto& ops : adj) add_convex_grad(ops, 1.0);
      break;
    case Objective::concave_mix:
      for (const auto& ops : adj) add_convex_grad(ops, 1.0 - lambda);
      for (const auto& ops : lap) add_trace_grad(ops, -2.0 * lambda);
      break;
  }
  return g;
}

void Engine::line_coeffs(const DenseMatrix& d, const DenseMatrix& r, double& lin_c,
                         double& quad_c) const {
  lin_c = frob_dot(linear(), r);
  quad_c = 0.0;
  auto add_trace = [&](const LayerOps& ops, double w) {
    const DenseMatrix nd = trace_form(ops, d);
    const DenseMatrix nr = trace_form(ops, r);
    lin_c += w * (frob_dot(nd, r) + frob_dot(nr, d));
    quad_c += w * frob_dot(nr, r);
  };
  auto add_convex = [&](const LayerOps& ops, double w) {
    const auto x = residuals_at(ops, d);
    const auto y = directions_at(ops, r);
    lin_c += 2.0 * w * (frob_dot(x.x1, y.x1) + frob_dot(x.x2, y.x2) + frob_dot(x.x3, y.x3));
    quad_c += w * (frob_norm_sq(y.x1) + frob_norm_sq(y.x2) + frob_norm_sq(y.x3));
  };
  switch (kind) {
    case Objective::indefinite:
      for (const auto& ops : adj) add_trace(ops, 1.0);
      break;
    case Objective::convex:
      for (const auto& ops : adj) add_convex(ops, 1.0);
      break;
    case Objective::concave_mix:
      for (const auto& ops : adj) add_convex(ops, 1.0 - lambda);
      for (const auto& ops : lap) add_trace(ops, -2.0 * lambda);
      break;
  }
}

LayerOps make_blocks(const SplrMatrix& a, const SplrMatrix& b,
                     const std::vector<std::size_t>& seed_a,
                     const std::vector<std::size_t>& seed_b,
                     const std::vector<std::size_t>& nonseed_a,
                     const std::vector<std::size_t>& nonseed_b) {
  LayerOps ops;
  ops.a22 = a.block(nonseed_a, nonseed_a);
  ops.b22 = b.block(nonseed_b, nonseed_b);
  ops.a12 = a.block(seed_a, nonseed_a);
  ops.b21 = b.block(nonseed_b, seed_b);
  ops.a21_d = a.block(nonseed_a, seed_a).dense();
  ops.b12_d = b.block(seed_b, nonseed_b).dense();
  return ops;
}

Engine assemble(const RelaxProblem& p) {
  if (p.a.empty() || p.a.size() != p.b.size())
    throw InputError("layer counts must match and be nonzero");
  const std::size_t n_a = p.a.front().rows();
  const std::size_t n_b = p.b.front().rows();
  for (const auto& m : p.a) {
    if (m.rows() != m.cols() || m.rows() != n_a) throw InputError("layer shape mismatch in A");
  }
  for (const auto& m : p.b) {
    if (m.rows() != m.cols() || m.rows() != n_b) throw InputError("layer shape mismatch in B");
  }
  Engine e;
  e.kind = p.objective;
  e.lambda = p.lambda;
  e.maximize = p.objective == Objective::indefinite;
  e.n = std::max(n_a, n_b);
  e.nnodes = {n_a, n_b};

  // re-validate seeds against the actual sizes
  std::vector<std::pair<std::size_t, std::size_t>> sp(p.seeds.pairs().begin(),
                                                      p.seeds.pairs().end());
  SeedSet seeds(sp, n_a, n_b);
  e.seed_pairs = sp;
  e.s = seeds.size();
  e.ns = e.n - e.s;

  std::vector<bool> is_seed_a(e.n, false), is_seed_b(e.n, false);
  std::vector<std::size_t> seed_a, seed_b;
  for (const auto& [a, b] : sp) {
    seed_a.push_back(a);
    seed_b.push_back(b);
    is_seed_a[a] = true;
    is_seed_b[b] = true;
  }
  for (std::size_t v = 0; v < e.n; ++v) {
    if (!is_seed_a[v]) e.nonseed_a.push_back(v);
    if (!is_seed_b[v]) e.nonseed_b.push_back(v);
  }

  std::vector<SplrMatrix> a_pad, b_pad;
  for (const auto& m : p.a) a_pad.push_back(m.rows() < e.n ? m.padded(e.n) : m);
  for (const auto& m : p.b) b_pad.push_back(m.rows() < e.n ? m.padded(e.n) : m);

  for (std::size_t l = 0; l < a_pad.size(); ++l)
    e.adj.push_back(make_blocks(a_pad[l], b_pad[l], seed_a, seed_b, e.nonseed_a, e.nonseed_b));

  // nonseed block of the similarity prior
  DenseMatrix s22(e.ns, e.ns, 0.0);
  bool have_sim = false;
  if (p.similarity) {
    if (p.similarity->rows() != n_a || p.similarity->cols() != n_b)
      throw InputError("similarity must be nA x nB");
    have_sim = true;
    for (std::size_t i = 0; i < e.ns; ++i) {
      for (std::size_t j = 0; j < e.ns; ++j) {
        const std::size_t oa = e.nonseed_a[i];
        const std::size_t ob = e.nonseed_b[j];
        if (oa < n_a && ob < n_b) s22(i, j) = (*p.similarity)(oa, ob);
      }
    }
  }

  e.lin_fixed = DenseMatrix(e.ns, e.ns, 0.0);
  if (p.objective == Objective::indefinite) {
    for (const auto& ops : e.adj) {
      // seed information: A21 B21^T + A12^T B12 (the two coincide for
      // undirected graphs, giving the usual factor two)
      add_scaled(e.lin_fixed, 1.0, dense_times_splr_t(ops.a21_d, ops.b21));
      add_scaled(e.lin_fixed, 1.0, ops.a12.tmul(ops.b12_d));
    }
    if (have_sim) add_scaled(e.lin_fixed, 1.0, s22);
  } else {
    if (have_sim) add_scaled(e.lin_fixed, -1.0, s22);
  }

  if (p.objective == Objective::concave_mix) {
    std::vector<double> deg_a(e.n), deg_b(e.n);
    DenseMatrix ones(e.n, 1, 1.0);
    e.lin_f1 = DenseMatrix(e.ns, e.ns, 0.0);
    for (std::size_t l = 0; l < a_pad.size(); ++l) {
      const SplrMatrix la = laplacian_of(a_pad[l]);
      const SplrMatrix lb = laplacian_of(b_pad[l]);
      LayerOps lops = make_blocks(la, lb, seed_a, seed_b, e.nonseed_a, e.nonseed_b);
      // linear concave term: -Delta22 - 2 (L1_21 L2_21^T + L1_12^T L2_12)
      const DenseMatrix da = a_pad[l].mul(ones);
      const DenseMatrix db = b_pad[l].mul(ones);
      for (std::size_t i = 0; i < e.ns; ++i) {
        for (std::size_t j = 0; j < e.ns; ++j) {
          const double diff = db(e.nonseed_b[j], 0) - da(e.nonseed_a[i], 0);
          e.lin_f1(i, j) -= diff * diff;
        }
      }
      add_scaled(e.lin_f1, -2.0, dense_times_splr_t(lops.a21_d, lops.b21));
      add_scaled(e.lin_f1, -2.0, lops.a12.tmul(lops.b12_d));
      e.lap.push_back(std::move(lops));
    }
  }
  return e;
}

double optimize_segment(const Engine& e, const DenseMatrix& d, const DenseMatrix& q) {
  DenseMatrix r = q;
  add_scaled(r, -1.0, d);
  double b = 0.0, a = 0.0;
  e.line_coeffs(d, r, b, a);
  auto g = [&](double alpha) { return b * alpha + a * alpha * alpha; };
  double best_alpha = 1.0;
  double best_val = g(1.0);
  auto consider = [&](double alpha) {
    const double val = g(alpha);
    const bool better = e.maximize ? val > best_val : val < best_val;
    if (better) {
      best_val = val;
      best_alpha = alpha;
    }
  };
  if (a != 0.0) consider(std::clamp(-b / (2.0 * a), 0.0, 1.0));
  consider(0.0);
  return best_alpha;
}

struct FwOutcome {
  DenseMatrix d;
  nlohmann::json details;
};

DenseMatrix dense_from_assignment(const Assignment& asg, std::size_t n) {
  DenseMatrix p(n, n, 0.0);
  for (std::size_t i = 0; i < n; ++i) p(i, asg.mapping[i]) = 1.0;
  return p;
}

FwOutcome fw_loop(const Engine& e, DenseMatrix d, const FwConfig& config) {
  if (config.max_iter < 1) throw InputError("max_iter must be at least 1");
  if (!(config.tol > 0)) throw InputError("tol must be positive");
  nlohmann::json details;
  details["renormalizations"] = 0;
  details["objective_trace"] = nlohmann::json::array();
  details["objective_trace"].push_back(e.value(d));
  int renorms = 0;
  int iters = 0;
  bool converged = false;
  double final_step = 0.0;
  std::string lap_used = "none";
  const std::size_t ns = e.ns;
  for (int iter = 1; iter <= config.max_iter; ++iter) {
    const DenseMatrix g = e.grad(d);
    const Assignment dir = do_lap(CostMatrix::from_dense(g), config.lap_method,
                                  e.maximize ? LapSense::max : LapSense::min);
    lap_used = dir.method_used;
    const DenseMatrix p = dense_from_assignment(dir, ns);
    const double alpha = optimize_segment(e, d, p);
    const double seg_sq = frob_diff_sq(p, d);
    kernels::mix(d.data(), p.data(), alpha, d.size());
    iters = iter;
    final_step = alpha * alpha * seg_sq;
    details["objective_trace"].push_back(e.value(d));

    // numerical drift guard on the polytope constraints
    double worst = 0.0;
    for (std::size_t i = 0; i < ns; ++i)
      worst = std::max(worst, std::fabs(kernels::sum(d.row(i), ns) - 1.0));
    for (std::size_t j = 0; j < ns; ++j) {
      double cs = 0.0;
      for (std::size_t i = 0; i < ns; ++i) cs += d(i, j);
      worst = std::max(worst, std::fabs(cs - 1.0));
    }
    if (worst > 1e-6) {
      sinkhorn_balance(d, 1e-8);
      ++renorms;
    }
    if (final_step < config.tol) {
      converged = true;
      break;
    }
  }
  details["iter"] = iters;
  details["converged"] = converged;
  details["final_step"] = final_step;
  details["renormalizations"] = renorms;
  details["lap_method"] = to_string(config.lap_method);
  details["lap_used"] = lap_used;
  FwOutcome out;
  out.d = std::move(d);
  out.details = std::move(details);
  return out;
}

DenseMatrix start_matrix_for(const Engine& e, const RelaxProblem& p, const FwConfig& config);

MatchResult finish(const Engine& e, DenseMatrix d, nlohmann::json details,
                   const FwConfig& config) {
  std::vector<std::pair<std::size_t, std::size_t>> corr(e.seed_pairs);
  if (e.ns > 0) {
    const Assignment proj =
        do_lap(CostMatrix::from_dense(d), config.lap_method, LapSense::max);
    for (std::size_t i = 0; i < e.ns; ++i)
      corr.emplace_back(e.nonseed_a[i], e.nonseed_b[proj.mapping[i]]);
  }
  DenseMatrix soft(e.n, e.n, 0.0);
  for (const auto& [a, b] : e.seed_pairs) soft(a, b) = 1.0;
  for (std::size_t i = 0; i < e.ns; ++i)
    for (std::size_t j = 0; j < e.ns; ++j) soft(e.nonseed_a[i], e.nonseed_b[j]) = d(i, j);
  SeedSet seeds(e.seed_pairs, e.n, e.n);
  return make_match(std::move(corr), e.nnodes, seeds, std::move(soft), std::move(details));
}

DenseMatrix start_matrix_for(const Engine& e, const RelaxProblem& p, const FwConfig& config) {
  switch (config.start) {
    case FwStart::bari:
      return DenseMatrix(e.ns, e.ns, 1.0 / static_cast<double>(e.ns));
    case FwStart::rds:
      return init_start(StartKind::rds, e.ns, SeedSet{}, config.rng_seed).values();
    case FwStart::matrix: {
      if (!config.start_matrix) throw InputError("matrix start requires start_matrix");
      if (config.start_matrix->rows() != e.ns || config.start_matrix->cols() != e.ns)
        throw InputError("start matrix must cover the nonseed block");
      return DoublyStochastic(*config.start_matrix).values();
    }
    case FwStart::convex: {
      RelaxProblem pc = p;
      pc.objective = Objective::convex;
      const Engine ec = assemble(pc);
      FwConfig inner = config;
      inner.start = FwStart::bari;
      auto outcome =
          fw_loop(ec, DenseMatrix(ec.ns, ec.ns, 1.0 / static_cast<double>(ec.ns)), inner);
      return std::move(outcome.d);
    }
  }
  throw InputError("unknown start kind");
}

}  // namespace

MatrixList matrix_list(const Graph& g) { return {splr_of(g)}; }

MatrixList matrix_list(const LayeredGraph& g) {
  MatrixList out;
  out.reserve(g.layer_count());
  for (const auto& layer : g.layers()) out.push_back(splr_of(layer));
  return out;
}

RelaxProblem RelaxProblem::from_graphs(const LayeredGraph& a, const LayeredGraph& b,
                                       SeedSet seeds, std::optional<DenseMatrix> similarity,
                                       Objective objective) {
  if (a.layer_count() != b.layer_count()) throw InputError("layer counts must match");
  RelaxProblem p;
  p.a = matrix_list(a);
  p.b = matrix_list(b);
  p.seeds = std::move(seeds);
  p.similarity = std::move(similarity);
  p.objective = objective;
  for (const auto& g : a.layers()) p.directed = p.directed || g.directed();
  for (const auto& g : b.layers()) p.directed = p.directed || g.directed();
  return p;
}

RelaxProblem RelaxProblem::from_matrices(MatrixList a, MatrixList b, SeedSet seeds,
                                         std::optional<DenseMatrix> similarity,
                                         Objective objective, bool directed) {
  RelaxProblem p;
  p.a = std::move(a);
  p.b = std::move(b);
  p.seeds = std::move(seeds);
  p.similarity = std::move(similarity);
  p.objective = objective;
  p.directed = directed;
  return p;
}

double relax_objective(const RelaxProblem& p, const DenseMatrix& d) {
  const Engine e = assemble(p);
  if (d.rows() != e.ns || d.cols() != e.ns) throw InputError("iterate must cover the nonseed block");
  return e.value(d);
}

DenseMatrix gradient(const RelaxProblem& p, const DenseMatrix& d) {
  const Engine e = assemble(p);
  if (d.rows() != e.ns || d.cols() != e.ns) throw InputError("iterate must cover the nonseed block");
  return e.grad(d);
}

double line_search(const RelaxProblem& p, const DenseMatrix& d, const DenseMatrix& q) {
  const Engine e = assemble(p);
  return optimize_segment(e, d, q);
}

MatchResult gm_fw(const RelaxProblem& p, const FwConfig& config) {
  const Engine e = assemble(p);
  nlohmann::json details;
  if (e.ns == 0) {
    details["iter"] = 0;
    details["converged"] = true;
    return finish(e, DenseMatrix(0, 0), std::move(details), config);
  }
  DenseMatrix d0 = start_matrix_for(e, p, config);
  auto outcome = fw_loop(e, std::move(d0), config);
  outcome.details["method"] =
      p.objective == Objective::indefinite ? "indefinite" : "convex";
  outcome.details["start"] = static_cast<int>(config.start);
  outcome.details["rng_seed"] = config.rng_seed;
  outcome.details["tol"] = config.tol;
  outcome.details["max_iter"] = config.max_iter;
  return finish(e, std::move(outcome.d), std::move(outcome.details), config);
}

MatchResult gm_path(const RelaxProblem& p, const PathConfig& config) {
  if (p.directed) throw PreconditionError("path continuation needs undirected graphs");
  if (p.a.size() != 1) throw PreconditionError("path continuation is single-layer only");
  if (!(config.lambda_step > 0.0 && config.lambda_step <= 1.0))
    throw InputError("lambda_step must lie in (0, 1]");

  RelaxProblem pc = p;
  pc.objective = Objective::convex;
  const Engine ec = assemble(pc);
  nlohmann::json details;
  if (ec.ns == 0) {
    details["iter"] = 0;
    details["converged"] = true;
    return finish(ec, DenseMatrix(0, 0), std::move(details), config.inner);
  }
  FwConfig stage_cfg = config.inner;
  if (stage_cfg.start == FwStart::convex) stage_cfg.start = FwStart::bari;
  DenseMatrix d = start_matrix_for(ec, pc, stage_cfg);
  auto convex_outcome = fw_loop(ec, std::move(d), stage_cfg);
  d = std::move(convex_outcome.d);

  RelaxProblem pm = p;
  pm.objective = Objective::concave_mix;
  Engine em = assemble(pm);

  int stages = 0;
  double lambda = 0.0;
  bool early_switch = false;
  nlohmann::json trace = nlohmann::json::array();
  for (std::size_t k = 1;; ++k) {
    lambda = std::min(1.0, static_cast<double>(k) * config.lambda_step);
    if (early_switch) lambda = 1.0;
    em.lambda = lambda;
    auto outcome = fw_loop(em, std::move(d), config.inner);
    d = std::move(outcome.d);
    ++stages;
    trace.push_back({{"lambda", lambda}, {"iter", outcome.details["iter"]}});
    if (lambda >= 1.0) break;
    // once the iterate is essentially a vertex, later blends cannot move it
    const Assignment proj = do_lap(CostMatrix::from_dense(d), config.inner.lap_method,
                                   LapSense::max);
    const DenseMatrix pd = dense_from_assignment(proj, em.ns);
    if (frob_diff_sq(d, pd) <= config.epsilon) early_switch = true;
  }
  details["method"] = "path";
  details["stages"] = stages;
  details["lambda_final"] = lambda;
  details["early_switch"] = early_switch;
  details["lambda_step"] = config.lambda_step;
  details["epsilon"] = config.epsilon;
  details["stage_trace"] = std::move(trace);
  return finish(em, std::move(d), std::move(details), config.inner);
}

}  // namespace gm
