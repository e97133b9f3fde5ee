// gmatch: batch graph matching over edge-list files.
//
// Exit codes: 0 success, 2 input error, 3 algorithm precondition violation,
// 4 numerical failure.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "gm/errors.hpp"
#include "gm/gm.hpp"
#include "gm/io.hpp"
#include "gm/metrics.hpp"
#include "gm/models.hpp"
#include "gm/rng.hpp"

using nlohmann::json;

namespace {

constexpr int kSchemaVersion = 1;

struct GraphCliOptions {
  bool one_based = false;
  bool directed = false;
  bool loops = false;
  std::optional<std::size_t> layer_column;
};

gm::LayeredGraph load_graph(const std::string& path, const GraphCliOptions& opts,
                            std::optional<std::size_t> n_override) {
  gm::EdgeListOptions eopts;
  eopts.one_based = opts.one_based;
  eopts.n = n_override;
  eopts.layer_column = opts.layer_column;
  const gm::EdgeListFile file = gm::read_edge_list(path, eopts);
  auto parsed = gm::graph_from_edge_list(file.records, file.n, opts.directed, opts.loops);
  if (std::holds_alternative<gm::LayeredGraph>(parsed))
    return std::get<gm::LayeredGraph>(std::move(parsed));
  return gm::LayeredGraph({std::get<gm::Graph>(std::move(parsed))});
}

gm::CenterScheme parse_scheme(const std::string& text) {
  if (text == "center") return gm::CenterScheme::center();
  if (text == "naive") return gm::CenterScheme::naive();
  if (text.rfind("pair:", 0) == 0) {
    double lo, hi;
    if (std::sscanf(text.c_str(), "pair:%lf,%lf", &lo, &hi) != 2)
      throw gm::InputError("bad scheme '" + text + "', expected pair:lo,hi");
    return gm::CenterScheme::pair(lo, hi);
  }
  if (text.rfind("rank:", 0) == 0) {
    unsigned long r = 0;
    if (std::sscanf(text.c_str(), "rank:%lu", &r) != 1)
      throw gm::InputError("bad scheme '" + text + "', expected rank:r");
    return gm::CenterScheme::rank(r);
  }
  throw gm::InputError("unknown centering scheme '" + text + "'");
}

gm::LapMethod parse_lap_method(const std::string& text) {
  if (text == "dense") return gm::LapMethod::dense;
  if (text == "sparse") return gm::LapMethod::sparse;
  if (text == "auto") return gm::LapMethod::auto_pick;
  throw gm::InputError("unknown lap method '" + text + "'");
}

std::vector<std::size_t> truth_vector(const std::string& path, bool one_based,
                                      std::size_t n_a, std::size_t n_b) {
  std::vector<std::size_t> truth(n_a, n_b);  // sentinel: no counterpart
  for (const auto& [a, b] : gm::read_pairs(path, one_based)) {
    if (a >= n_a || b >= n_b) throw gm::InputError(path + ": truth pair out of range");
    truth[a] = b;
  }
  return truth;
}

gm::SeedSet load_seeds(const std::string& path, bool one_based, std::size_t n_a,
                       std::size_t n_b) {
  if (path.empty()) return {};
  return gm::SeedSet(gm::read_pairs(path, one_based), n_a, n_b);
}

json summary_json(const gm::EdgeSummary& s) {
  json layers = json::array();
  for (const auto& st : s.layers) {
    layers.push_back({{"common_edges", st.common_edges},
                      {"missing_edges", st.missing_edges},
                      {"extra_edges", st.extra_edges},
                      {"common_non_edges", st.common_non_edges},
                      {"fnorm", st.fnorm},
                      {"e1_count", st.e1_count},
                      {"e2_count", st.e2_count}});
  }
  json out{{"schema_version", kSchemaVersion},
           {"n_matches", s.n_matches},
           {"n_seeds", s.n_seeds},
           {"layers", layers}};
  if (s.n_true_matches) out["n_true_matches"] = *s.n_true_matches;
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw gm::InputError("cannot write " + path);
  out << text;
}

std::string csv_of(const gm::DenseMatrix& m) {
  std::string text;
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      char buf[48];
      std::snprintf(buf, sizeof(buf), "%.17g", m(i, j));
      text += std::string(j ? "," : "") + buf;
    }
    text += "\n";
  }
  return text;
}

std::vector<std::size_t> parse_size_list(const std::string& text) {
  std::vector<std::size_t> out;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t next = text.find(',', pos);
    if (next == std::string::npos) next = text.size();
    out.push_back(std::stoul(text.substr(pos, next - pos)));
    pos = next + 1;
  }
  return out;
}

struct MatchArgs {
  std::string a_path, b_path, seeds_path, similarity_path, candidates_path;
  std::string method = "indefinite";
  std::string start = "bari";
  std::string start_matrix_path;
  std::string center_a = "naive", center_b = "naive";
  std::string lap_method = "dense";
  std::string extraction = "greedy";
  GraphCliOptions gopts;
  std::optional<std::size_t> n_a, n_b;
  double scale = 1.0;
  int max_iter = 20;
  double tol = 1e-5;
  double r = 2.0;
  double lambda_step = 0.01;
  double epsilon = 1e-8;
  double isorank_tol = 1e-6;
  std::uint64_t seed = 0;
  std::string out_corr = "corr.csv", out_details, out_soft;
};

gm::RelaxProblem relax_input(const gm::LayeredGraph& a, const gm::LayeredGraph& b,
                             const gm::SeedSet& seeds,
                             const std::optional<gm::DenseMatrix>& similarity,
                             const std::string& center_a, const std::string& center_b,
                             gm::Objective objective) {
  if (center_a == "naive" && center_b == "naive")
    return gm::RelaxProblem::from_graphs(a, b, seeds, similarity, objective);
  gm::MatrixList la, lb;
  for (const auto& layer : a.layers()) la.push_back(center_graph(layer, parse_scheme(center_a)));
  for (const auto& layer : b.layers()) lb.push_back(center_graph(layer, parse_scheme(center_b)));
  bool directed = false;
  for (const auto& layer : a.layers()) directed = directed || layer.directed();
  for (const auto& layer : b.layers()) directed = directed || layer.directed();
  return gm::RelaxProblem::from_matrices(std::move(la), std::move(lb), seeds, similarity,
                                         objective, directed);
}

gm::MatchResult run_match(const MatchArgs& args) {
  const gm::LayeredGraph a = load_graph(args.a_path, args.gopts, args.n_a);
  const gm::LayeredGraph b = load_graph(args.b_path, args.gopts, args.n_b);
  const gm::SeedSet seeds =
      load_seeds(args.seeds_path, args.gopts.one_based, a.order(), b.order());
  std::optional<gm::DenseMatrix> similarity;
  if (!args.similarity_path.empty())
    similarity =
        gm::read_similarity(args.similarity_path, a.order(), b.order(), args.gopts.one_based);
  else if (!args.candidates_path.empty())
    similarity = gm::candidates_to_similarity(args.candidates_path, a.order(), b.order(),
                                              args.gopts.one_based, args.scale);

  gm::FwConfig fw;
  fw.max_iter = args.max_iter;
  fw.tol = args.tol;
  fw.lap_method = parse_lap_method(args.lap_method);
  fw.rng_seed = args.seed;
  if (args.start == "bari") {
    fw.start = gm::FwStart::bari;
  } else if (args.start == "rds") {
    fw.start = gm::FwStart::rds;
  } else if (args.start == "convex") {
    fw.start = gm::FwStart::convex;
  } else if (args.start == "matrix") {
    fw.start = gm::FwStart::matrix;
    if (args.start_matrix_path.empty())
      throw gm::InputError("--start matrix needs --start-matrix FILE");
    fw.start_matrix = gm::read_dense_csv(args.start_matrix_path);
  } else {
    throw gm::InputError("unknown start '" + args.start + "'");
  }

  const bool centered = args.center_a != "naive" || args.center_b != "naive";
  auto relax = [&](gm::Objective objective) {
    return relax_input(a, b, seeds, similarity, args.center_a, args.center_b, objective);
  };

  if (args.method == "indefinite") return gm_fw(relax(gm::Objective::indefinite), fw);
  if (args.method == "convex") return gm_fw(relax(gm::Objective::convex), fw);
  if (args.method == "path") {
    gm::PathConfig cfg;
    cfg.lambda_step = args.lambda_step;
    cfg.epsilon = args.epsilon;
    cfg.inner = fw;
    return gm_path(relax(gm::Objective::convex), cfg);
  }
  if (centered) throw gm::InputError("--center-a/--center-b apply to relaxation methods only");
  if (args.method == "percolation") return gm_percolation(a, b, seeds, similarity, args.r);
  if (args.method == "expand") return gm_expand_when_stuck(a, b, seeds, similarity, args.r);
  if (args.method == "isorank") {
    gm::IsoRankConfig cfg;
    cfg.max_iter = args.max_iter;
    cfg.tol = args.isorank_tol;
    cfg.extraction = args.extraction == "lap" ? gm::Extraction::lap : gm::Extraction::greedy;
    cfg.lap_method = parse_lap_method(args.lap_method);
    return gm_isorank(a, b, seeds, similarity, cfg);
  }
  if (args.method == "umeyama") return gm_umeyama(a, b, seeds, similarity);
  throw gm::InputError("unknown method '" + args.method + "'");
}

void emit_match(const gm::MatchResult& m, const MatchArgs& args) {
  gm::write_corr_csv(args.out_corr, m, args.gopts.one_based);
  if (!args.out_details.empty()) {
    json details = m.details();
    details["schema_version"] = kSchemaVersion;
    details["n_a"] = m.nnodes().first;
    details["n_b"] = m.nnodes().second;
    details["n_seeds"] = m.n_seeds();
    details["n_matches"] = m.n_matches();
    write_text(args.out_details, details.dump(2) + "\n");
  }
  if (!args.out_soft.empty()) {
    if (!m.soft()) throw gm::PreconditionError("method produces no soft matrix");
    gm::write_dense_csv(args.out_soft, *m.soft());
  }
}

gm::MatchResult match_from_corr(const std::string& corr_path, bool one_based,
                                const gm::LayeredGraph& a, const gm::LayeredGraph& b) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<std::pair<std::size_t, std::size_t>> seed_pairs;
  for (const auto& row : gm::read_corr_csv(corr_path, one_based)) {
    pairs.emplace_back(row.a, row.b);
    if (row.seed) seed_pairs.emplace_back(row.a, row.b);
  }
  const std::size_t n = std::max(a.order(), b.order());
  return gm::make_match(std::move(pairs), {a.order(), b.order()},
                        gm::SeedSet(std::move(seed_pairs), n, n));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"graph matching toolkit"};
  app.require_subcommand(1);

  // ---- match ---------------------------------------------------------------
  MatchArgs margs;
  auto* match = app.add_subcommand("match", "match two graphs");
  match->add_option("--a", margs.a_path, "first graph edge list")->required();
  match->add_option("--b", margs.b_path, "second graph edge list")->required();
  match->add_option("--n-a", margs.n_a, "vertex count of the first graph");
  match->add_option("--n-b", margs.n_b, "vertex count of the second graph");
  match->add_option("--seeds", margs.seeds_path, "hard seed pairs CSV");
  match->add_option("--similarity", margs.similarity_path,
                    "similarity matrix (CSV or triplets)");
  match->add_option("--similarity-from-candidates", margs.candidates_path,
                    "candidate pair list expanded into a row-stochastic prior");
  match->add_option("--scale", margs.scale, "candidate prior scale");
  match->add_option("--method", margs.method,
                    "indefinite|convex|path|percolation|expand|isorank|umeyama");
  match->add_option("--start", margs.start, "bari|rds|convex|matrix");
  match->add_option("--start-matrix", margs.start_matrix_path, "explicit start matrix CSV");
  match->add_option("--center-a", margs.center_a, "centering scheme for the first graph");
  match->add_option("--center-b", margs.center_b, "centering scheme for the second graph");
  match->add_option("--max-iter", margs.max_iter, "iteration budget");
  match->add_option("--tol", margs.tol, "convergence tolerance (squared step norm)");
  match->add_option("--lap-method", margs.lap_method, "dense|sparse|auto");
  match->add_option("--r", margs.r, "percolation threshold");
  match->add_option("--lambda-step", margs.lambda_step, "continuation step");
  match->add_option("--epsilon", margs.epsilon, "continuation vertex tolerance");
  match->add_option("--extraction", margs.extraction, "greedy|lap");
  match->add_option("--isorank-tol", margs.isorank_tol, "power iteration tolerance");
  match->add_option("--seed", margs.seed, "random seed");
  match->add_option("--layer-column", margs.gopts.layer_column, "1-based layer column index");
  match->add_flag("--directed", margs.gopts.directed, "read graphs as directed");
  match->add_flag("--loops", margs.gopts.loops, "allow self loops");
  match->add_flag("--one-based", margs.gopts.one_based, "one-based vertex ids in all files");
  match->add_option("--out-corr", margs.out_corr, "correspondence CSV output");
  match->add_option("--out-details", margs.out_details, "details JSON output");
  match->add_option("--out-soft", margs.out_soft, "soft matrix CSV output");

  // ---- sample ----------------------------------------------------------------
  struct {
    std::string model = "gnp";
    std::size_t n = 0;
    double p = 0.5, corr = 0.0;
    std::optional<std::size_t> ncore;
    std::string block_sizes, core_block_sizes, pref_matrix, p_mat, c_mat, latent;
    std::string permutation = "identity";
    bool directed = false, loops = false, one_based = false;
    std::uint64_t seed = 0;
    std::string out_a = "a.tsv", out_b = "b.tsv", out_truth = "truth.csv";
  } sargs;
  auto* sample = app.add_subcommand("sample", "sample a correlated graph pair");
  sample->add_option("--model", sargs.model, "gnp|ieg|sbm|rdpg");
  sample->add_option("--n", sargs.n, "vertex count (gnp/ieg)");
  sample->add_option("--p", sargs.p, "edge probability (gnp)");
  sample->add_option("--corr", sargs.corr, "aligned-entry correlation");
  sample->add_option("--ncore", sargs.ncore, "correlated core size (gnp)");
  sample->add_option("--block-sizes", sargs.block_sizes, "comma list, e.g. 2,3 (sbm)");
  sample->add_option("--core-block-sizes", sargs.core_block_sizes, "comma list (sbm)");
  sample->add_option("--pref-matrix", sargs.pref_matrix, "K x K CSV (sbm)");
  sample->add_option("--p-mat", sargs.p_mat, "n x n probability CSV (ieg)");
  sample->add_option("--c-mat", sargs.c_mat, "n x n correlation CSV (ieg)");
  sample->add_option("--latent", sargs.latent, "n x d latent position CSV (rdpg)");
  sample->add_option("--permutation", sargs.permutation, "identity|shuffle");
  sample->add_flag("--directed", sargs.directed, "sample directed graphs");
  sample->add_flag("--loops", sargs.loops, "allow self loops");
  sample->add_flag("--one-based", sargs.one_based, "one-based ids in outputs");
  sample->add_option("--seed", sargs.seed, "random seed")->required();
  sample->add_option("--out-a", sargs.out_a, "first graph output");
  sample->add_option("--out-b", sargs.out_b, "second graph output");
  sample->add_option("--out-truth", sargs.out_truth, "ground truth CSV output");

  // ---- lap ---------------------------------------------------------------------
  struct {
    std::string cost, sense = "min", method = "auto", out;
    bool one_based = false, triplets = false;
  } largs;
  auto* lap = app.add_subcommand("lap", "solve one assignment problem");
  lap->add_option("--cost", largs.cost, "cost matrix CSV (or triplet file)")->required();
  lap->add_option("--sense", largs.sense, "min|max");
  lap->add_option("--method", largs.method, "dense|sparse|auto");
  lap->add_flag("--triplets", largs.triplets, "cost file holds `a b value` triplets");
  lap->add_flag("--one-based", largs.one_based, "one-based ids");
  lap->add_option("--out", largs.out, "output file (default stdout)");

  // ---- summary --------------------------------------------------------------
  struct {
    std::string a_path, b_path, corr, true_label, discrepancy, out;
    GraphCliOptions gopts;
    std::optional<std::size_t> n_a, n_b;
  } suargs;
  auto* summary = app.add_subcommand("summary", "edge statistics of a match");
  summary->add_option("--a", suargs.a_path)->required();
  summary->add_option("--b", suargs.b_path)->required();
  summary->add_option("--corr", suargs.corr, "correspondence CSV")->required();
  summary->add_option("--true-label", suargs.true_label, "true correspondence CSV");
  summary->add_option("--emit-discrepancy", suargs.discrepancy,
                      "write the edge-discrepancy matrix CSV");
  summary->add_option("--n-a", suargs.n_a);
  summary->add_option("--n-b", suargs.n_b);
  summary->add_option("--layer-column", suargs.gopts.layer_column);
  summary->add_flag("--directed", suargs.gopts.directed);
  summary->add_flag("--loops", suargs.gopts.loops);
  summary->add_flag("--one-based", suargs.gopts.one_based);
  summary->add_option("--out", suargs.out, "JSON output (default stdout)");

  // ---- best-matches ------------------------------------------------------------
  struct {
    std::string a_path, b_path, corr, measure = "row_perm_stat", true_label, out;
    GraphCliOptions gopts;
    std::optional<std::size_t> n_a, n_b, num;
    int n_mc = 200;
    std::uint64_t seed = 0;
  } bmargs;
  auto* bm = app.add_subcommand("best-matches", "rank matches by vertex statistics");
  bm->add_option("--a", bmargs.a_path)->required();
  bm->add_option("--b", bmargs.b_path)->required();
  bm->add_option("--corr", bmargs.corr)->required();
  bm->add_option("--measure", bmargs.measure, "row_diff|row_cor|row_perm_stat");
  bm->add_option("--num", bmargs.num, "keep the best NUM rows");
  bm->add_option("--true-label", bmargs.true_label);
  bm->add_option("--n-mc", bmargs.n_mc, "Monte Carlo samples for row_perm_stat");
  bm->add_option("--seed", bmargs.seed);
  bm->add_option("--n-a", bmargs.n_a);
  bm->add_option("--n-b", bmargs.n_b);
  bm->add_option("--layer-column", bmargs.gopts.layer_column);
  bm->add_flag("--directed", bmargs.gopts.directed);
  bm->add_flag("--loops", bmargs.gopts.loops);
  bm->add_flag("--one-based", bmargs.gopts.one_based);
  bm->add_option("--out", bmargs.out, "CSV output (default stdout)");

  // ---- init-start -----------------------------------------------------------------
  struct {
    std::string kind = "bari", soft_seeds, out;
    std::size_t nns = 0, ns = 0;
    std::uint64_t seed = 0;
    bool one_based = false;
  } isargs;
  auto* init = app.add_subcommand("init-start", "build a start matrix");
  init->add_option("--kind", isargs.kind, "bari|rds");
  init->add_option("--nns", isargs.nns, "nonseed block size")->required();
  init->add_option("--ns", isargs.ns, "hard seeds occupying the first labels");
  init->add_option("--soft-seeds", isargs.soft_seeds, "soft seed pairs CSV, original labels");
  init->add_option("--seed", isargs.seed);
  init->add_flag("--one-based", isargs.one_based);
  init->add_option("--out", isargs.out, "CSV output (default stdout)");

  // ---- center-graph ------------------------------------------------------------------
  struct {
    std::string input, scheme = "center", out;
    GraphCliOptions gopts;
    std::optional<std::size_t> n;
  } cgargs;
  auto* cg = app.add_subcommand("center-graph", "recode an adjacency for matching");
  cg->add_option("--input", cgargs.input)->required();
  cg->add_option("--scheme", cgargs.scheme, "center|naive|pair:lo,hi|rank:r");
  cg->add_option("--n", cgargs.n);
  cg->add_flag("--directed", cgargs.gopts.directed);
  cg->add_flag("--loops", cgargs.gopts.loops);
  cg->add_flag("--one-based", cgargs.gopts.one_based);
  cg->add_option("--out", cgargs.out, "CSV output (default stdout)");

  // ---- experiment ---------------------------------------------------------------------
  auto* experiment = app.add_subcommand("experiment", "matching recipes");
  experiment->require_subcommand(1);

  struct {
    std::string a_path, b_path, center_a = "naive", center_b = "naive";
    std::string ns_list = "0,20,40,60,80";
    std::string measure = "row_perm_stat", true_label, out;
    bool soft = false;
    GraphCliOptions gopts;
    std::optional<std::size_t> n_a, n_b;
    int max_iter = 20, n_mc = 200;
    std::uint64_t seed = 0;
  } adargs;
  auto* adaptive = experiment->add_subcommand("adaptive-seeds",
                                              "re-match with the best-ranked pairs as seeds");
  adaptive->add_option("--a", adargs.a_path)->required();
  adaptive->add_option("--b", adargs.b_path)->required();
  adaptive->add_option("--center-a", adargs.center_a);
  adaptive->add_option("--center-b", adargs.center_b);
  adaptive->add_option("--ns", adargs.ns_list, "comma list of adaptive seed counts");
  adaptive->add_option("--measure", adargs.measure);
  adaptive->add_option("--true-label", adargs.true_label);
  adaptive->add_flag("--soft", adargs.soft, "feed adaptive seeds through the start matrix");
  adaptive->add_option("--max-iter", adargs.max_iter);
  adaptive->add_option("--n-mc", adargs.n_mc);
  adaptive->add_option("--seed", adargs.seed);
  adaptive->add_option("--n-a", adargs.n_a);
  adaptive->add_option("--n-b", adargs.n_b);
  adaptive->add_option("--layer-column", adargs.gopts.layer_column);
  adaptive->add_flag("--directed", adargs.gopts.directed);
  adaptive->add_flag("--loops", adargs.gopts.loops);
  adaptive->add_flag("--one-based", adargs.gopts.one_based);
  adaptive->add_option("--out", adargs.out, "CSV report (default stdout)");

  struct {
    std::string a_path, b_path, method = "indefinite", seeds, similarity, true_label, out;
    std::size_t k = 3;
    GraphCliOptions gopts;
    std::optional<std::size_t> n_a, n_b;
    int max_iter = 20;
    std::uint64_t seed = 0;
  } mkargs;
  auto* mapk = experiment->add_subcommand("map-at-k", "soft matching precision report");
  mapk->add_option("--a", mkargs.a_path)->required();
  mapk->add_option("--b", mkargs.b_path)->required();
  mapk->add_option("--method", mkargs.method, "any soft-matrix method");
  mapk->add_option("--k", mkargs.k);
  mapk->add_option("--seeds", mkargs.seeds);
  mapk->add_option("--similarity", mkargs.similarity);
  mapk->add_option("--true-label", mkargs.true_label)->required();
  mapk->add_option("--max-iter", mkargs.max_iter);
  mapk->add_option("--seed", mkargs.seed);
  mapk->add_option("--n-a", mkargs.n_a);
  mapk->add_option("--n-b", mkargs.n_b);
  mapk->add_option("--layer-column", mkargs.gopts.layer_column);
  mapk->add_flag("--directed", mkargs.gopts.directed);
  mapk->add_flag("--loops", mkargs.gopts.loops);
  mapk->add_flag("--one-based", mkargs.gopts.one_based);
  mapk->add_option("--out", mkargs.out, "JSON output (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (match->parsed()) {
      emit_match(run_match(margs), margs);
      return 0;
    }

    if (sample->parsed()) {
      gm::SampleFlags flags{sargs.directed, sargs.loops};
      std::pair<gm::Graph, gm::Graph> pair = [&] {
        if (sargs.model == "gnp") {
          gm::CorrGnpParams params;
          params.n = sargs.n;
          params.p = sargs.p;
          params.corr = sargs.corr;
          params.ncore = sargs.ncore;
          params.directed = sargs.directed;
          params.loops = sargs.loops;
          return sample_correlated_gnp_pair(params, sargs.seed);
        }
        if (sargs.model == "ieg") {
          if (sargs.p_mat.empty() || sargs.c_mat.empty())
            throw gm::InputError("ieg needs --p-mat and --c-mat");
          return sample_correlated_ieg_pair(sargs.n, gm::read_dense_csv(sargs.p_mat),
                                            gm::read_dense_csv(sargs.c_mat), flags, sargs.seed);
        }
        if (sargs.model == "sbm") {
          if (sargs.pref_matrix.empty() || sargs.block_sizes.empty())
            throw gm::InputError("sbm needs --pref-matrix and --block-sizes");
          std::optional<std::vector<std::size_t>> core;
          if (!sargs.core_block_sizes.empty()) core = parse_size_list(sargs.core_block_sizes);
          return sample_correlated_sbm_pair(parse_size_list(sargs.block_sizes),
                                            gm::read_dense_csv(sargs.pref_matrix), sargs.corr,
                                            core, flags, sargs.seed);
        }
        if (sargs.model == "rdpg") {
          if (sargs.latent.empty()) throw gm::InputError("rdpg needs --latent");
          return sample_correlated_rdpg_pair(gm::read_dense_csv(sargs.latent), sargs.corr,
                                             flags, sargs.seed);
        }
        throw gm::InputError("unknown model '" + sargs.model + "'");
      }();

      std::vector<std::size_t> relabel(pair.second.order());
      for (std::size_t i = 0; i < relabel.size(); ++i) relabel[i] = i;
      if (sargs.permutation == "shuffle") {
        gm::Rng rng = gm::Rng::derive(sargs.seed, 0x7065726dULL);
        relabel = rng.permutation(pair.second.order());
        pair.second = pair.second.relabeled(relabel);
      } else if (sargs.permutation != "identity") {
        throw gm::InputError("unknown permutation mode '" + sargs.permutation + "'");
      }

      gm::write_edge_list(sargs.out_a, pair.first, sargs.one_based);
      gm::write_edge_list(sargs.out_b, pair.second, sargs.one_based);
      std::ofstream truth(sargs.out_truth);
      if (!truth) throw gm::InputError("cannot write " + sargs.out_truth);
      const std::size_t shift = sargs.one_based ? 1 : 0;
      truth << "corr_A,corr_B\n";
      for (std::size_t i = 0; i < relabel.size(); ++i)
        truth << (i + shift) << "," << (relabel[i] + shift) << "\n";
      return 0;
    }

    if (lap->parsed()) {
      gm::CostMatrix cost = [&] {
        if (!largs.triplets) return gm::CostMatrix::from_dense(gm::read_dense_csv(largs.cost));
        const gm::DenseMatrix probe = gm::read_dense_csv(largs.cost);
        if (probe.cols() != 3)
          throw gm::InputError("triplet cost file needs `a b value` rows");
        const std::size_t shift = largs.one_based ? 1 : 0;
        std::vector<gm::Triplet> trips;
        std::size_t rows = 0, cols = 0;
        for (std::size_t k = 0; k < probe.rows(); ++k) {
          const auto a = static_cast<std::size_t>(probe(k, 0)) - shift;
          const auto b = static_cast<std::size_t>(probe(k, 1)) - shift;
          trips.push_back({a, b, probe(k, 2)});
          rows = std::max(rows, a + 1);
          cols = std::max(cols, b + 1);
        }
        return gm::CostMatrix::from_sparse(rows, std::max(rows, cols), std::move(trips));
      }();
      const gm::Assignment asg =
          do_lap(cost, parse_lap_method(largs.method),
                 largs.sense == "max" ? gm::LapSense::max : gm::LapSense::min);
      std::string text = "row,col\n";
      const std::size_t shift = largs.one_based ? 1 : 0;
      for (std::size_t i = 0; i < asg.mapping.size(); ++i)
        text += std::to_string(i + shift) + "," + std::to_string(asg.mapping[i] + shift) + "\n";
      char buf[80];
      std::snprintf(buf, sizeof(buf), "# objective %.17g method %s\n", asg.objective,
                    asg.method_used.c_str());
      write_text(largs.out, text + buf);
      return 0;
    }

    if (summary->parsed()) {
      const gm::LayeredGraph a = load_graph(suargs.a_path, suargs.gopts, suargs.n_a);
      const gm::LayeredGraph b = load_graph(suargs.b_path, suargs.gopts, suargs.n_b);
      const gm::MatchResult m = match_from_corr(suargs.corr, suargs.gopts.one_based, a, b);
      std::optional<std::vector<std::size_t>> truth;
      if (!suargs.true_label.empty())
        truth = truth_vector(suargs.true_label, suargs.gopts.one_based, a.order(), b.order());
      const gm::EdgeSummary s = match_summary(
          m, a, b,
          truth ? std::optional<std::span<const std::size_t>>(*truth) : std::nullopt);
      write_text(suargs.out, summary_json(s).dump(2) + "\n");
      if (!suargs.discrepancy.empty()) {
        for (std::size_t l = 0; l < a.layer_count(); ++l) {
          const gm::DenseMatrix d = discrepancy_matrix(m, a.layer(l), b.layer(l));
          const std::string path = a.layer_count() == 1
                                       ? suargs.discrepancy
                                       : suargs.discrepancy + ".layer" + std::to_string(l);
          gm::write_dense_csv(path, d);
        }
      }
      return 0;
    }

    if (bm->parsed()) {
      const gm::LayeredGraph a = load_graph(bmargs.a_path, bmargs.gopts, bmargs.n_a);
      const gm::LayeredGraph b = load_graph(bmargs.b_path, bmargs.gopts, bmargs.n_b);
      const gm::MatchResult m = match_from_corr(bmargs.corr, bmargs.gopts.one_based, a, b);
      gm::Measure measure;
      if (bmargs.measure == "row_diff") {
        measure = gm::Measure::row_diff;
      } else if (bmargs.measure == "row_cor") {
        measure = gm::Measure::row_cor;
      } else if (bmargs.measure == "row_perm_stat") {
        measure = gm::Measure::row_perm_stat;
      } else {
        throw gm::InputError("unknown measure '" + bmargs.measure + "'");
      }
      std::optional<std::vector<std::size_t>> truth;
      if (!bmargs.true_label.empty())
        truth = truth_vector(bmargs.true_label, bmargs.gopts.one_based, a.order(), b.order());
      const auto rows = best_matches(
          m, a, b, measure, bmargs.num,
          truth ? std::optional<std::span<const std::size_t>>(*truth) : std::nullopt,
          bmargs.n_mc, bmargs.seed);
      std::string text =
          truth ? "A_best,B_best,measure_value,precision\n" : "A_best,B_best,measure_value\n";
      const std::size_t shift = bmargs.gopts.one_based ? 1 : 0;
      for (const auto& r : rows) {
        char buf[48];
        std::snprintf(buf, sizeof(buf), "%.17g", r.value);
        text += std::to_string(r.a_vertex + shift) + "," + std::to_string(r.b_vertex + shift) +
                "," + buf;
        if (r.precision) {
          std::snprintf(buf, sizeof(buf), "%.17g", *r.precision);
          text += std::string(",") + buf;
        }
        text += "\n";
      }
      write_text(bmargs.out, text);
      return 0;
    }

    if (init->parsed()) {
      const gm::StartKind kind =
          isargs.kind == "rds" ? gm::StartKind::rds : gm::StartKind::bari;
      if (isargs.kind != "rds" && isargs.kind != "bari")
        throw gm::InputError("unknown start kind '" + isargs.kind + "'");
      gm::SeedSet rel_soft;
      if (!isargs.soft_seeds.empty()) {
        const std::size_t n = isargs.nns + isargs.ns;
        std::vector<std::pair<std::size_t, std::size_t>> hard_pairs;
        for (std::size_t i = 0; i < isargs.ns; ++i) hard_pairs.emplace_back(i, i);
        const gm::SeedSet hard(hard_pairs, n, n);
        const gm::SeedSet soft(gm::read_pairs(isargs.soft_seeds, isargs.one_based), n, n);
        rel_soft = relative_soft_seeds(soft, hard, n, n);
      }
      const gm::DoublyStochastic start = init_start(kind, isargs.nns, rel_soft, isargs.seed);
      write_text(isargs.out, csv_of(start.values()));
      return 0;
    }

    if (cg->parsed()) {
      const gm::LayeredGraph g = load_graph(cgargs.input, cgargs.gopts, cgargs.n);
      if (g.layer_count() != 1)
        throw gm::InputError("center-graph expects a single-layer input");
      const gm::SplrMatrix c = center_graph(g.layer(0), parse_scheme(cgargs.scheme));
      write_text(cgargs.out, csv_of(c.dense()));
      return 0;
    }

    if (adaptive->parsed()) {
      const gm::LayeredGraph a = load_graph(adargs.a_path, adargs.gopts, adargs.n_a);
      const gm::LayeredGraph b = load_graph(adargs.b_path, adargs.gopts, adargs.n_b);
      std::optional<std::vector<std::size_t>> truth;
      if (!adargs.true_label.empty())
        truth = truth_vector(adargs.true_label, adargs.gopts.one_based, a.order(), b.order());

      gm::FwConfig cfg;
      cfg.max_iter = adargs.max_iter;
      cfg.rng_seed = adargs.seed;
      const gm::MatchResult first =
          gm_fw(relax_input(a, b, gm::SeedSet{}, std::nullopt, adargs.center_a, adargs.center_b,
                            gm::Objective::indefinite),
                cfg);

      const gm::Measure measure = adargs.measure == "row_diff"  ? gm::Measure::row_diff
                                  : adargs.measure == "row_cor" ? gm::Measure::row_cor
                                                                : gm::Measure::row_perm_stat;
      const auto ranking = best_matches(first, a, b, measure, std::nullopt, std::nullopt,
                                        adargs.n_mc, adargs.seed);

      std::string report = "ns,seed_precision,common_edges,missing_edges,extra_edges,fnorm\n";
      for (const std::size_t ns : parse_size_list(adargs.ns_list)) {
        if (ns > ranking.size())
          throw gm::InputError("ns exceeds the number of ranked matches");
        std::vector<std::pair<std::size_t, std::size_t>> top;
        double correct = 0;
        for (std::size_t k = 0; k < ns; ++k) {
          top.emplace_back(ranking[k].a_vertex, ranking[k].b_vertex);
          if (truth && (*truth)[ranking[k].a_vertex] == ranking[k].b_vertex) correct += 1.0;
        }

        gm::MatchResult again = [&] {
          if (!adargs.soft) {
            const gm::SeedSet seeds(top, a.order(), b.order());
            return gm_fw(relax_input(a, b, seeds, std::nullopt, adargs.center_a,
                                     adargs.center_b, gm::Objective::indefinite),
                         cfg);
          }
          const std::size_t n = std::max(a.order(), b.order());
          const gm::SeedSet soft_seeds(top, n, n);
          gm::FwConfig soft_cfg = cfg;
          soft_cfg.start = gm::FwStart::matrix;
          soft_cfg.start_matrix = init_start(gm::StartKind::bari, n, soft_seeds).values();
          return gm_fw(relax_input(a, b, gm::SeedSet{}, std::nullopt, adargs.center_a,
                                   adargs.center_b, gm::Objective::indefinite),
                       soft_cfg);
        }();

        const gm::EdgeSummary s = match_summary(again, a, b);
        double common = 0, missing = 0, extra = 0, fnorm = 0;
        for (const auto& st : s.layers) {
          common += st.common_edges;
          missing += st.missing_edges;
          extra += st.extra_edges;
          fnorm += st.fnorm;
        }
        char buf[200];
        std::snprintf(buf, sizeof(buf), "%zu,%.17g,%.17g,%.17g,%.17g,%.17g\n", ns,
                      (ns && truth) ? correct / static_cast<double>(ns)
                                    : std::numeric_limits<double>::quiet_NaN(),
                      common, missing, extra, fnorm);
        report += buf;
      }
      write_text(adargs.out, report);
      return 0;
    }

    if (mapk->parsed()) {
      MatchArgs pass;
      pass.a_path = mkargs.a_path;
      pass.b_path = mkargs.b_path;
      pass.seeds_path = mkargs.seeds;
      pass.similarity_path = mkargs.similarity;
      pass.method = mkargs.method;
      pass.gopts = mkargs.gopts;
      pass.n_a = mkargs.n_a;
      pass.n_b = mkargs.n_b;
      pass.max_iter = mkargs.max_iter;
      pass.seed = mkargs.seed;
      const gm::MatchResult m = run_match(pass);
      if (!m.soft())
        throw gm::PreconditionError("method '" + mkargs.method + "' produces no soft matrix");

      const gm::LayeredGraph a = load_graph(mkargs.a_path, mkargs.gopts, mkargs.n_a);
      const gm::LayeredGraph b = load_graph(mkargs.b_path, mkargs.gopts, mkargs.n_b);
      const auto truth =
          truth_vector(mkargs.true_label, mkargs.gopts.one_based, a.order(), b.order());

      double correct = 0, hits = 0, total = 0;
      const gm::DenseMatrix& soft = *m.soft();
      for (const auto& p : m.corr()) {
        if (p.seed || p.a >= a.order() || p.b >= b.order()) continue;
        total += 1;
        if (truth[p.a] == p.b) correct += 1;
        std::vector<std::size_t> idx(b.order());
        for (std::size_t j = 0; j < b.order(); ++j) idx[j] = j;
        std::sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
          return soft(p.a, x) != soft(p.a, y) ? soft(p.a, x) > soft(p.a, y) : x < y;
        });
        for (std::size_t k = 0; k < std::min<std::size_t>(mkargs.k, idx.size()); ++k)
          if (idx[k] == truth[p.a]) hits += 1;
      }
      if (total == 0) throw gm::PreconditionError("no non-seed matches to score");
      json out{{"schema_version", kSchemaVersion},
               {"method", mkargs.method},
               {"k", mkargs.k},
               {"precision", correct / total},
               {"map_at_k", hits / total}};
      write_text(mkargs.out, out.dump(2) + "\n");
      return 0;
    }
  } catch (const gm::PreconditionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const gm::InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const gm::NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  }
  return 0;
}
