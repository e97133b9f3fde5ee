#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct Sandbox {
  fs::path dir;
  Sandbox() {
    dir = fs::temp_directory_path() / ("gm_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  ~Sandbox() { fs::remove_all(dir); }
  std::string path(const std::string& name) const { return (dir / name).string(); }
};

int run(const std::string& args) {
  const std::string cmd = std::string(GMATCH_BIN) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

}  // namespace

TEST_CASE("sample then match then summarize") {
  Sandbox sb;
  const std::string a = sb.path("a.tsv"), b = sb.path("b.tsv"), truth = sb.path("truth.csv");
  REQUIRE(run("sample --model gnp --n 15 --p 0.4 --corr 0.9 --seed 5 --out-a " + a +
              " --out-b " + b + " --out-truth " + truth) == 0);
  CHECK(fs::exists(a));
  CHECK(fs::exists(b));

  const std::string corr = sb.path("corr.csv"), details = sb.path("det.json");
  spit(sb.path("seeds.csv"), "corr_A,corr_B\n0,0\n1,1\n2,2\n");
  REQUIRE(run("match --a " + a + " --b " + b + " --seeds " + sb.path("seeds.csv") +
              " --method indefinite --start bari --seed 11 --out-corr " + corr +
              " --out-details " + details) == 0);
  const auto det = nlohmann::json::parse(slurp(details));
  CHECK(det["schema_version"] == 1);
  CHECK(det["n_seeds"] == 3);
  CHECK(det.contains("iter"));

  const std::string report = sb.path("summary.json");
  REQUIRE(run("summary --a " + a + " --b " + b + " --corr " + corr + " --true-label " + truth +
              " --out " + report) == 0);
  const auto s = nlohmann::json::parse(slurp(report));
  CHECK(s["n_matches"] == 15);
  CHECK(s["layers"].size() == 1);
  CHECK(s.contains("n_true_matches"));
}

TEST_CASE("outputs are deterministic for a fixed seed") {
  Sandbox sb;
  const std::string a = sb.path("a.tsv"), b = sb.path("b.tsv");
  REQUIRE(run("sample --model gnp --n 12 --p 0.4 --corr 0.7 --seed 9 --out-a " + a +
              " --out-b " + b + " --out-truth " + sb.path("t.csv")) == 0);
  REQUIRE(run("match --a " + a + " --b " + b +
              " --method indefinite --start rds --seed 4 --out-corr " + sb.path("c1.csv")) == 0);
  REQUIRE(run("match --a " + a + " --b " + b +
              " --method indefinite --start rds --seed 4 --out-corr " + sb.path("c2.csv")) == 0);
  CHECK(slurp(sb.path("c1.csv")) == slurp(sb.path("c2.csv")));

  // sampling is deterministic too
  REQUIRE(run("sample --model gnp --n 12 --p 0.4 --corr 0.7 --seed 9 --out-a " +
              sb.path("a2.tsv") + " --out-b " + sb.path("b2.tsv") + " --out-truth " +
              sb.path("t2.csv")) == 0);
  CHECK(slurp(a) == slurp(sb.path("a2.tsv")));
  CHECK(slurp(b) == slurp(sb.path("b2.tsv")));
}

TEST_CASE("exit codes distinguish input and precondition failures") {
  Sandbox sb;
  const std::string a = sb.path("a.tsv"), b = sb.path("b.tsv");
  REQUIRE(run("sample --model gnp --n 8 --p 0.5 --corr 0.5 --seed 2 --out-a " + a + " --out-b " +
              b + " --out-truth " + sb.path("t.csv")) == 0);
  // missing file -> 2
  CHECK(run("match --a " + sb.path("nope.tsv") + " --b " + b + " --out-corr " +
            sb.path("c.csv")) == 2);
  // percolation without prior -> 3
  CHECK(run("match --a " + a + " --b " + b + " --method percolation --out-corr " +
            sb.path("c.csv")) == 3);
  // soft matrix requested from a method that has none -> 3
  spit(sb.path("seeds.csv"), "0,0\n1,1\n");
  CHECK(run("match --a " + a + " --b " + b + " --seeds " + sb.path("seeds.csv") +
            " --method percolation --out-corr " + sb.path("c.csv") + " --out-soft " +
            sb.path("s.csv")) == 3);
  // malformed edge list -> 2
  spit(sb.path("bad.tsv"), "0 not_a_vertex\n");
  CHECK(run("match --a " + sb.path("bad.tsv") + " --b " + b + " --out-corr " +
            sb.path("c.csv")) == 2);
  // map-at-k on percolation -> 3
  CHECK(run("experiment map-at-k --a " + a + " --b " + b + " --method percolation " +
            " --seeds " + sb.path("seeds.csv") + " --true-label " + sb.path("t.csv")) == 3);
}

TEST_CASE("one-based flag shifts every interface") {
  Sandbox sb;
  spit(sb.path("a.tsv"), "1 2\n2 3\n");
  spit(sb.path("b.tsv"), "1 2\n2 3\n");
  const std::string corr = sb.path("corr.csv");
  REQUIRE(run("match --a " + sb.path("a.tsv") + " --b " + sb.path("b.tsv") +
              " --one-based --method indefinite --out-corr " + corr) == 0);
  const std::string text = slurp(corr);
  CHECK(text.find("corr_A,corr_B,seed") == 0);
  CHECK(text.find("0,") == std::string::npos);  // ids stay one-based
}

TEST_CASE("layered files produce per-layer summaries") {
  Sandbox sb;
  spit(sb.path("a.tsv"), "0 1 1 x\n1 2 1 x\n0 2 1 y\n");
  spit(sb.path("b.tsv"), "0 1 1 x\n1 2 1 x\n0 2 1 y\n");
  spit(sb.path("corr.csv"), "corr_A,corr_B\n0,0\n1,1\n2,2\n");
  const std::string report = sb.path("summary.json");
  REQUIRE(run("summary --a " + sb.path("a.tsv") + " --b " + sb.path("b.tsv") + " --corr " +
              sb.path("corr.csv") + " --out " + report) == 0);
  const auto s = nlohmann::json::parse(slurp(report));
  REQUIRE(s["layers"].size() == 2);
  CHECK(s["layers"][0]["common_edges"] == 2.0);
  CHECK(s["layers"][1]["common_edges"] == 1.0);
}

TEST_CASE("round trips: corr csv and soft matrix feed back in") {
  Sandbox sb;
  const std::string a = sb.path("a.tsv"), b = sb.path("b.tsv");
  REQUIRE(run("sample --model gnp --n 10 --p 0.4 --corr 0.8 --seed 3 --out-a " + a +
              " --out-b " + b + " --out-truth " + sb.path("t.csv")) == 0);
  const std::string corr = sb.path("corr.csv");
  REQUIRE(run("match --a " + a + " --b " + b + " --method umeyama --out-corr " + corr) == 0);
  // the emitted correspondence is a valid input for downstream commands
  CHECK(run("best-matches --a " + a + " --b " + b + " --corr " + corr +
            " --measure row_diff --out " + sb.path("bm.csv")) == 0);
  const std::string bm_text = slurp(sb.path("bm.csv"));
  CHECK(bm_text.find("A_best,B_best,measure_value") == 0);

  // discrepancy matrix lands as a square CSV with coded entries
  REQUIRE(run("summary --a " + a + " --b " + b + " --corr " + corr + " --emit-discrepancy " +
              sb.path("disc.csv") + " --out " + sb.path("s.json")) == 0);
  std::ifstream disc(sb.path("disc.csv"));
  std::string line;
  std::size_t lines = 0;
  while (std::getline(disc, line)) ++lines;
  CHECK(lines == 10);
}

TEST_CASE("shuffled sampling round-trips through the truth file") {
  Sandbox sb;
  const std::string a = sb.path("a.tsv"), b = sb.path("b.tsv"), t = sb.path("t.csv");
  REQUIRE(run("sample --model gnp --n 12 --p 0.5 --corr 1 --permutation shuffle --seed 8 "
              "--out-a " + a + " --out-b " + b + " --out-truth " + t) == 0);
  // matching back with the truth as the correspondence must be perfect
  const std::string report = sb.path("s.json");
  REQUIRE(run("summary --a " + a + " --b " + b + " --corr " + t + " --out " + report) == 0);
  const auto s = nlohmann::json::parse(slurp(report));
  CHECK(s["layers"][0]["missing_edges"] == 0.0);
  CHECK(s["layers"][0]["extra_edges"] == 0.0);
  CHECK(s["layers"][0]["fnorm"] == 0.0);
}

namespace {

// parse "ns,precision,common,missing,extra,fnorm" rows into vectors
std::vector<std::vector<double>> parse_report(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::stringstream ss(text);
  std::string line;
  std::getline(ss, line);  // header
  while (std::getline(ss, line)) {
    std::vector<double> row;
    std::stringstream ls(line);
    std::string tok;
    while (std::getline(ls, tok, ',')) row.push_back(std::strtod(tok.c_str(), nullptr));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

TEST_CASE("adaptive seed experiment emits the table") {
  Sandbox sb;
  const std::string a = sb.path("a.tsv"), b = sb.path("b.tsv"), t = sb.path("t.csv");
  REQUIRE(run("sample --model gnp --n 15 --p 0.4 --corr 0.9 --seed 6 --out-a " + a +
              " --out-b " + b + " --out-truth " + t) == 0);
  const std::string report = sb.path("report.csv");
  REQUIRE(run("experiment adaptive-seeds --a " + a + " --b " + b + " --ns 0,3 --true-label " +
              t + " --seed 2 --n-mc 50 --out " + report) == 0);
  const std::string text = slurp(report);
  CHECK(text.find("ns,seed_precision,common_edges") == 0);
  const auto rows = parse_report(text);
  REQUIRE(rows.size() == 2);

  // the zero-seed row reproduces the plain first-pass baseline
  const std::string corr = sb.path("corr.csv");
  REQUIRE(run("match --a " + a + " --b " + b + " --method indefinite --seed 2 --out-corr " +
              corr) == 0);
  const std::string sjson = sb.path("s.json");
  REQUIRE(run("summary --a " + a + " --b " + b + " --corr " + corr + " --out " + sjson) == 0);
  const auto s = nlohmann::json::parse(slurp(sjson));
  CHECK(rows[0][2] == s["layers"][0]["common_edges"].get<double>());

  // soft variant runs too
  REQUIRE(run("experiment adaptive-seeds --a " + a + " --b " + b + " --ns 0,3 --soft "
              "--true-label " + t + " --seed 2 --n-mc 50 --out " + sb.path("r2.csv")) == 0);
}

TEST_CASE("perfect adaptive seeds do not hurt the matched edge count") {
  Sandbox sb;
  std::vector<double> deltas;
  for (int trial = 0; trial < 10; ++trial) {
    const std::string a = sb.path("a" + std::to_string(trial) + ".tsv");
    const std::string b = sb.path("b" + std::to_string(trial) + ".tsv");
    const std::string t = sb.path("t" + std::to_string(trial) + ".csv");
    REQUIRE(run("sample --model gnp --n 30 --p 0.3 --corr 0.9 --seed " +
                std::to_string(100 + trial) + " --out-a " + a + " --out-b " + b +
                " --out-truth " + t) == 0);
    const std::string report = sb.path("rep" + std::to_string(trial) + ".csv");
    REQUIRE(run("experiment adaptive-seeds --a " + a + " --b " + b +
                " --ns 0,5 --true-label " + t + " --seed 3 --n-mc 50 --out " + report) == 0);
    const auto rows = parse_report(slurp(report));
    REQUIRE(rows.size() == 2);
    if (rows[1][1] == 1.0) deltas.push_back(rows[1][2] - rows[0][2]);
  }
  REQUIRE(deltas.size() >= 3);  // high correlation makes perfect seeds common
  std::sort(deltas.begin(), deltas.end());
  CHECK(deltas[deltas.size() / 2] >= 0.0);  // median never drops
}

TEST_CASE("explicit layer column splits the graphs") {
  Sandbox sb;
  spit(sb.path("a.tsv"), "0 1 1.5 red\n1 2 1 red\n0 2 1 blue\n");
  spit(sb.path("corr.csv"), "corr_A,corr_B\n0,0\n1,1\n2,2\n");
  const std::string report = sb.path("s.json");
  REQUIRE(run("summary --a " + sb.path("a.tsv") + " --b " + sb.path("a.tsv") +
              " --layer-column 4 --corr " + sb.path("corr.csv") + " --out " + report) == 0);
  const auto s = nlohmann::json::parse(slurp(report));
  REQUIRE(s["layers"].size() == 2);
}

TEST_CASE("map at one equals row-argmax precision by definition") {
  Sandbox sb;
  const std::string a = sb.path("a.tsv"), b = sb.path("b.tsv"), t = sb.path("t.csv");
  REQUIRE(run("sample --model gnp --n 14 --p 0.4 --corr 0.9 --seed 21 --out-a " + a +
              " --out-b " + b + " --out-truth " + t) == 0);
  spit(sb.path("seeds.csv"), "corr_A,corr_B\n0,0\n1,1\n");
  const std::string soft = sb.path("soft.csv"), corr = sb.path("corr.csv");
  REQUIRE(run("match --a " + a + " --b " + b + " --seeds " + sb.path("seeds.csv") +
              " --method indefinite --seed 1 --out-corr " + corr + " --out-soft " + soft) == 0);
  const std::string rep = sb.path("map.json");
  REQUIRE(run("experiment map-at-k --a " + a + " --b " + b + " --seeds " +
              sb.path("seeds.csv") + " --method indefinite --seed 1 --k 1 --true-label " + t +
              " --out " + rep) == 0);
  const auto j = nlohmann::json::parse(slurp(rep));

  // recompute the row-argmax hit rate from the emitted soft matrix
  std::ifstream in(soft);
  std::vector<std::vector<double>> m;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) row.push_back(std::stod(tok));
    m.push_back(row);
  }
  double hits = 0, total = 0;
  for (std::size_t i = 2; i < m.size(); ++i) {  // rows 0,1 are seeds
    std::size_t arg = 0;
    for (std::size_t jx = 1; jx < m[i].size(); ++jx)
      if (m[i][jx] > m[i][arg]) arg = jx;
    total += 1;
    if (arg == i) hits += 1;  // identity truth from the sampler
  }
  CHECK(j["map_at_k"].get<double>() == doctest::Approx(hits / total).epsilon(1e-12));
}

TEST_CASE("assignment subcommand solves files") {
  Sandbox sb;
  spit(sb.path("cost.csv"), "1,2,3\n2,4,6\n3,6,9\n");
  const std::string out = sb.path("lap.csv");
  REQUIRE(run("lap --cost " + sb.path("cost.csv") + " --sense min --out " + out) == 0);
  const std::string text = slurp(out);
  CHECK(text.find("row,col") == 0);
  CHECK(text.find("# objective") != std::string::npos);

  spit(sb.path("trip.txt"), "0 0 5\n1 1 7\n0 1 1\n1 0 1\n");
  REQUIRE(run("lap --cost " + sb.path("trip.txt") + " --triplets --sense min --out " +
              sb.path("lap2.csv")) == 0);
  CHECK(slurp(sb.path("lap2.csv")).find("# objective 2") != std::string::npos);
}
