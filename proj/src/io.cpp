#include "gm/io.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "gm/errors.hpp"

namespace gm {
namespace {

bool parse_double(const std::string& tok, double& out) {
  const char* begin = tok.c_str();
  char* end = nullptr;
  out = std::strtod(begin, &end);
  return end == begin + tok.size() && !tok.empty();
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> toks;
  std::istringstream iss(line);
  std::string t;
  while (iss >> t) toks.push_back(t);
  return toks;
}

std::vector<std::string> split_any(const std::string& line) {
  // comma- or whitespace-separated
  std::string normalized = line;
  std::replace(normalized.begin(), normalized.end(), ',', ' ');
  return split_ws(normalized);
}

std::size_t parse_vertex(const std::string& tok, bool one_based, const std::string& path,
                         std::size_t lineno) {
  double v;
  if (!parse_double(tok, v) || v < (one_based ? 1 : 0) || v != static_cast<double>(static_cast<long long>(v)))
    throw InputError(path + ":" + std::to_string(lineno) + ": bad vertex id '" + tok + "'");
  return static_cast<std::size_t>(v) - (one_based ? 1 : 0);
}

std::ifstream open_or_throw(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  return in;
}

void format_real(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

}  // namespace

EdgeListFile read_edge_list(const std::string& path, const EdgeListOptions& opts) {
  auto in = open_or_throw(path);
  EdgeListFile out;
  std::string line;
  std::size_t lineno = 0;
  std::size_t max_id = 0;
  bool any = false;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto toks = split_ws(line);
    if (toks.empty()) continue;
    if (first_content) {
      first_content = false;
      double probe;
      if (!parse_double(toks[0], probe)) continue;  // header line
    }
    if (toks.size() < 2) throw InputError(path + ":" + std::to_string(lineno) + ": need src and dst");
    EdgeRecord rec;
    rec.src = parse_vertex(toks[0], opts.one_based, path, lineno);
    rec.dst = parse_vertex(toks[1], opts.one_based, path, lineno);
    if (opts.layer_column) {
      const std::size_t lc = *opts.layer_column - 1;
      if (lc < toks.size()) rec.layer = toks[lc];
      if (lc != 2 && toks.size() > 2) {
        if (!parse_double(toks[2], rec.weight))
          throw InputError(path + ":" + std::to_string(lineno) + ": bad weight '" + toks[2] + "'");
      }
    } else if (toks.size() > 2) {
      double w;
      if (parse_double(toks[2], w)) {
        rec.weight = w;
        if (toks.size() > 3) rec.layer = toks[3];
      } else {
        rec.layer = toks[2];
      }
    }
    out.has_layers = out.has_layers || !rec.layer.empty();
    max_id = std::max({max_id, rec.src, rec.dst});
    any = true;
    out.records.push_back(std::move(rec));
  }
  out.n = opts.n.value_or(any ? max_id + 1 : 0);
  if (opts.n && any && max_id >= *opts.n)
    throw InputError(path + ": vertex id " + std::to_string(max_id) + " outside n=" +
                     std::to_string(*opts.n));
  return out;
}

namespace {

void write_edges(std::ofstream& outf, const Graph& g, bool one_based, const std::string& layer) {
  const std::size_t shift = one_based ? 1 : 0;
  for (const auto& e : g.edges()) {
    std::string line = std::to_string(e.row + shift) + " " + std::to_string(e.col + shift);
    if (g.weighted() || !layer.empty()) {
      line += " ";
      format_real(line, e.weight);
    }
    if (!layer.empty()) line += " " + layer;
    outf << line << "\n";
  }
}

}  // namespace

void write_edge_list(const std::string& path, const Graph& g, bool one_based) {
  std::ofstream outf(path);
  if (!outf) throw InputError("cannot write " + path);
  outf << "# n=" << g.order() << (g.directed() ? " directed" : " undirected") << "\n";
  write_edges(outf, g, one_based, {});
}

void write_edge_list(const std::string& path, const LayeredGraph& g, bool one_based) {
  std::ofstream outf(path);
  if (!outf) throw InputError("cannot write " + path);
  outf << "# n=" << g.order() << (g.layer(0).directed() ? " directed" : " undirected") << "\n";
  for (std::size_t l = 0; l < g.layer_count(); ++l) {
    const std::string name =
        g.layer_names()[l].empty() ? "L" + std::to_string(l) : g.layer_names()[l];
    write_edges(outf, g.layer(l), one_based, name);
  }
}

DenseMatrix read_dense_csv(const std::string& path) {
  auto in = open_or_throw(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto toks = split_any(line);
    if (toks.empty()) continue;
    std::vector<double> row;
    row.reserve(toks.size());
    for (const auto& t : toks) {
      double v;
      if (!parse_double(t, v)) {
        if (lineno == 1) {
          row.clear();
          break;  // header
        }
        throw InputError(path + ":" + std::to_string(lineno) + ": bad number '" + t + "'");
      }
      row.push_back(v);
    }
    if (row.empty()) continue;
    if (!rows.empty() && row.size() != rows.front().size())
      throw InputError(path + ":" + std::to_string(lineno) + ": ragged row");
    rows.push_back(std::move(row));
  }
  DenseMatrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m(i, j) = rows[i][j];
  return m;
}

void write_dense_csv(const std::string& path, const DenseMatrix& m) {
  std::ofstream outf(path);
  if (!outf) throw InputError("cannot write " + path);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    std::string line;
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (j) line += ",";
      format_real(line, m(i, j));
    }
    outf << line << "\n";
  }
}

void write_corr_csv(const std::string& path, const MatchResult& m, bool one_based) {
  std::ofstream outf(path);
  if (!outf) throw InputError("cannot write " + path);
  const std::size_t shift = one_based ? 1 : 0;
  outf << "corr_A,corr_B,seed\n";
  for (const auto& p : m.corr())
    outf << (p.a + shift) << "," << (p.b + shift) << "," << (p.seed ? 1 : 0) << "\n";
}

std::vector<CorrRow> read_corr_csv(const std::string& path, bool one_based) {
  auto in = open_or_throw(path);
  std::vector<CorrRow> rows;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = split_any(line);
    if (toks.empty()) continue;
    double probe;
    if (!parse_double(toks[0], probe)) continue;  // header
    if (toks.size() < 2) throw InputError(path + ":" + std::to_string(lineno) + ": need two columns");
    CorrRow r;
    r.a = parse_vertex(toks[0], one_based, path, lineno);
    r.b = parse_vertex(toks[1], one_based, path, lineno);
    r.seed = toks.size() > 2 && toks[2] == "1";
    rows.push_back(r);
  }
  return rows;
}

std::vector<std::pair<std::size_t, std::size_t>> read_pairs(const std::string& path,
                                                            bool one_based) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (const auto& r : read_corr_csv(path, one_based)) out.emplace_back(r.a, r.b);
  return out;
}

DenseMatrix read_similarity(const std::string& path, std::size_t n_a, std::size_t n_b,
                            bool one_based) {
  // sniff: triplet files have (up to) three columns everywhere and no commas
  auto in = open_or_throw(path);
  std::string first;
  bool triplet = true;
  {
    std::string line;
    std::size_t content = 0;
    while (std::getline(in, line) && content < 8) {
      const auto hash = line.find('#');
      if (hash != std::string::npos) line = line.substr(0, hash);
      if (split_ws(line).empty()) continue;
      ++content;
      if (line.find(',') != std::string::npos || split_ws(line).size() > 3) triplet = false;
    }
  }
  if (!triplet) {
    DenseMatrix m = read_dense_csv(path);
    if (m.rows() != n_a || m.cols() != n_b)
      throw InputError(path + ": similarity must be " + std::to_string(n_a) + "x" +
                       std::to_string(n_b));
    return m;
  }
  DenseMatrix m(n_a, n_b, 0.0);
  auto in2 = open_or_throw(path);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in2, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    auto toks = split_ws(line);
    if (toks.empty()) continue;
    double probe;
    if (!parse_double(toks[0], probe)) continue;
    if (toks.size() < 3)
      throw InputError(path + ":" + std::to_string(lineno) + ": need `a b value`");
    const std::size_t a = parse_vertex(toks[0], one_based, path, lineno);
    const std::size_t b = parse_vertex(toks[1], one_based, path, lineno);
    double v;
    if (!parse_double(toks[2], v))
      throw InputError(path + ":" + std::to_string(lineno) + ": bad value");
    if (a >= n_a || b >= n_b)
      throw InputError(path + ":" + std::to_string(lineno) + ": similarity index out of range");
    m(a, b) = v;
  }
  return m;
}

DenseMatrix candidates_to_similarity(const std::string& path, std::size_t n_a, std::size_t n_b,
                                     bool one_based, double scale) {
  auto pairs = read_pairs(path, one_based);
  std::vector<std::vector<std::size_t>> cands(n_a);
  for (const auto& [a, b] : pairs) {
    if (a >= n_a || b >= n_b) throw InputError(path + ": candidate index out of range");
    cands[a].push_back(b);
  }
  DenseMatrix m(n_a, n_b, 0.0);
  for (std::size_t a = 0; a < n_a; ++a) {
    if (cands[a].empty()) continue;
    const double v = scale / static_cast<double>(cands[a].size());
    for (std::size_t b : cands[a]) m(a, b) = v;
  }
  return m;
}

}  // namespace gm
