#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "graphhardy/harness.hpp"
#include "graphhardy/io.hpp"
#include "graphhardy/sampling.hpp"

using namespace graphhardy;
namespace gh = graphhardy::harness;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::path(::testing::TempDir()) / ("graphhardy_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

}  // namespace

TEST(HarnessParse, Graphs) {
  auto a = gh::build_graph("lattice:2:8");
  EXPECT_EQ(a.graph->size(), 64u);
  EXPECT_EQ(a.D, 2.0);
  auto b = gh::build_graph("lattice:1:10:0.5:reflect");
  EXPECT_EQ(b.graph->boundary_mode(), BoundaryMode::Reflecting);
  auto c = gh::build_graph("twocopies:4");
  EXPECT_EQ(c.graph->size(), 32u);
  auto d = gh::build_graph("path:5");
  EXPECT_EQ(d.graph->diameter(), 4);
  for (const char* bad : {"lattice", "lattice:0:4", "lattice:1:x", "lattice:1:8:1:klein", "cube:3", "path:2.5"}) {
    EXPECT_THROW(gh::build_graph(bad), std::invalid_argument) << bad;
  }
}

TEST(HarnessParse, EdgeListFile) {
  const fs::path dir = scratch("edges");
  {
    std::ofstream out(dir / "g.txt");
    out << "# u v w\n";
    for (int i = 0; i < 16; ++i) out << i << ' ' << (i + 1) % 16 << " 1\n" << i << ' ' << i << " 1\n";
  }
  const auto bg = gh::build_graph("file:" + (dir / "g.txt").string());
  EXPECT_EQ(bg.graph->size(), 16u);
  EXPECT_GT(bg.D, 0.0);
}

TEST(HarnessParse, Exponents) {
  const auto bg = gh::build_graph("lattice:1:16");
  EXPECT_DOUBLE_EQ(gh::build_exponent(*bg.graph, "constant:1.5").p_plus(), 1.5);
  const auto p = gh::build_exponent(*bg.graph, "logfamily:1.2:0.6:0");
  EXPECT_DOUBLE_EQ(p(0), 1.8);
  EXPECT_THROW(gh::build_exponent(*bg.graph, "constant"), std::invalid_argument);
  EXPECT_THROW(gh::build_exponent(*bg.graph, "logfamily:1:2"), std::invalid_argument);
  EXPECT_THROW(gh::build_exponent(*bg.graph, "wild:2"), std::invalid_argument);
}

TEST(HarnessParse, Tolerances) {
  const auto t = gh::parse_tolerances({"stability=3", "residual=1e-4"});
  EXPECT_EQ(t.stability, 3.0);
  EXPECT_EQ(t.residual, 1e-4);
  EXPECT_EQ(t.rescale, 100.0);
  EXPECT_THROW(gh::parse_tolerances({"speed=1"}), std::invalid_argument);
  EXPECT_THROW(gh::parse_tolerances({"stability"}), std::invalid_argument);
}

TEST(HarnessVerify, Selectors) {
  gh::RunConfig cfg;
  cfg.graph = "lattice:1:16";
  EXPECT_THROW(gh::run_verify(cfg), std::invalid_argument);
  cfg.checks = {"thm-9.9"};
  EXPECT_THROW(gh::run_verify(cfg), std::invalid_argument);
  EXPECT_EQ(gh::check_names().size(), 19u);
}

TEST(HarnessVerify, ReportIsDeterministic) {
  gh::RunConfig cfg;
  cfg.graph = "lattice:1:32";
  cfg.p = "logfamily:1.2:0.6:0";
  cfg.checks = {"lemma-2.1", "prop-g", "hyp-ue"};
  cfg.trials = 4;
  const auto a = gh::run_verify(cfg);
  const auto b = gh::run_verify(cfg);
  EXPECT_EQ(gh::dump(a.report), gh::dump(b.report));
  EXPECT_EQ(a.report["schema"], gh::kSchema);
  EXPECT_EQ(a.report["checks"].size(), 3u);
  for (const auto& rec : a.report["checks"]) {
    EXPECT_TRUE(rec.contains("hypotheses"));
    EXPECT_TRUE(rec.contains("worst_case"));
    EXPECT_EQ(rec["worst_input_seed"], 1);
    EXPECT_TRUE(rec["pass"].get<bool>()) << rec.dump();
  }
}

TEST(HarnessVerify, WorstCaseReplays) {
  gh::RunConfig cfg;
  cfg.graph = "lattice:1:32";
  cfg.p = "logfamily:1.2:0.6:0";
  cfg.checks = {"lemma-2.1"};
  cfg.trials = 8;
  const auto full = gh::run_verify(cfg).report["checks"][0];
  cfg.first = full["worst_case"]["trial"].get<int>();
  cfg.trials = 1;
  const auto replay = gh::run_verify(cfg).report["checks"][0];
  EXPECT_NEAR(replay["constants"]["C"].get<double>(), full["constants"]["C"].get<double>(),
              1e-12 * full["constants"]["C"].get<double>());
}

TEST(HarnessVerify, PreconditionsPropagate) {
  gh::RunConfig cfg;
  cfg.graph = "lattice:1:16";
  cfg.p = "logfamily:1.2:0.6:0";
  cfg.checks = {"prop-sl"};
  EXPECT_THROW(gh::run_verify(cfg), PreconditionError);
}

TEST(HarnessIo, AtomicWrite) {
  const fs::path dir = scratch("atomic");
  gh::write_atomic(dir / "sub" / "x.json", "{}\n");
  EXPECT_EQ(slurp(dir / "sub" / "x.json"), "{}\n");
  EXPECT_FALSE(fs::exists(dir / "sub" / "x.json.tmp"));
}

TEST(HarnessDecompose, ZeroFunction) {
  const fs::path dir = scratch("zero");
  {
    std::ofstream out(dir / "f.txt");
    for (int x = 0; x < 16; ++x) out << x << " 0\n";
  }
  gh::DecomposeConfig cfg;
  cfg.graph = "lattice:1:16";
  cfg.p = "logfamily:1.2:0.6:0";
  cfg.input = (dir / "f.txt").string();
  cfg.out = dir;
  const auto s = gh::run_decompose(cfg);
  EXPECT_EQ(s.atoms, 0u);
  EXPECT_EQ(s.residual, 0.0);
  EXPECT_EQ(slurp(dir / "atoms.csv"), "j,center,radius,lambda\n");
}

TEST(HarnessDecompose, HardyRoundTrip) {
  const fs::path dir = scratch("roundtrip");
  const auto bg = gh::build_graph("lattice:1:32");
  const auto& g = *bg.graph;
  Rng rng(11);
  const auto f = random_mean_zero_on_ball(g, rng, {5, 5});
  {
    std::ofstream out(dir / "f.txt");
    out.precision(17);
    for (std::size_t x = 0; x < f.size(); ++x) out << x << ' ' << f[x] << '\n';
  }
  gh::DecomposeConfig cfg;
  cfg.graph = "lattice:1:32";
  cfg.p = "logfamily:1.2:0.6:0";
  cfg.input = (dir / "f.txt").string();
  cfg.out = dir;
  const auto s = gh::run_decompose(cfg);
  ASSERT_GT(s.atoms, 0u);
  const auto doc = nlohmann::json::parse(slurp(dir / "decomposition.json"));
  ASSERT_EQ(doc["atoms"].size(), s.atoms);
  EXPECT_EQ(doc["atoms"][0]["payload_ref"], "atom_values.csv#0");
  EXPECT_TRUE(doc["atoms"][0]["ball"].contains("radius"));

  std::vector<double> lambda(s.atoms);
  {
    std::ifstream in(dir / "atoms.csv");
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
      std::replace(line.begin(), line.end(), ',', ' ');
      std::istringstream ls(line);
      std::size_t j;
      int c, r;
      double l;
      ls >> j >> c >> r >> l;
      lambda.at(j) = l;
    }
  }
  VertexFunction sum(g.size(), 0.0);
  {
    std::ifstream in(dir / "atom_values.csv");
    std::string line;
    std::getline(in, line);
    while (std::getline(in, line)) {
      std::replace(line.begin(), line.end(), ',', ' ');
      std::istringstream ls(line);
      std::size_t j, x;
      double a, b;
      ls >> j >> x >> a >> b;
      sum.at(x) += lambda.at(j) * a;
    }
  }
  double err = 0.0, norm = 0.0;
  for (std::size_t x = 0; x < f.size(); ++x) {
    err += (sum[x] - f[x]) * (sum[x] - f[x]) * g.mu(static_cast<VertexId>(x));
    norm += f[x] * f[x] * g.mu(static_cast<VertexId>(x));
  }
  EXPECT_LT(std::sqrt(err / norm), 1e-3);
  EXPECT_NEAR(std::sqrt(err / norm), s.residual, 1e-9);
}

TEST(HarnessDecompose, TentInput) {
  const fs::path dir = scratch("tent");
  {
    std::ofstream out(dir / "F.csv");
    out << "x k value\n3 1 1.0\n4 1 -2.0\n4 2 0.5\n";
  }
  gh::DecomposeConfig cfg;
  cfg.graph = "lattice:1:16";
  cfg.input = (dir / "F.csv").string();
  cfg.tent_input = true;
  cfg.out = dir;
  const auto s = gh::run_decompose(cfg);
  EXPECT_GT(s.atoms, 0u);
  EXPECT_LT(s.residual, 1e-12);
}

// Translation invariance of the torus: every source sees the same heat rows.
TEST(HarnessHeatmap, TorusSymmetry) {
  const fs::path dir = scratch("heat");
  gh::HeatmapConfig cfg;
  cfg.graph = "lattice:1:24";
  cfg.horizon = 12;
  cfg.sources = {0, 7};
  cfg.out = dir;
  const auto j = gh::run_heatmap(cfg);
  EXPECT_TRUE(j["fit"].contains("C"));
  std::ifstream in(dir / "heat.csv");
  std::string line;
  std::getline(in, line);
  std::map<std::pair<int, int>, double> by_offset[2];
  while (std::getline(in, line)) {
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    int n, x, y;
    ls >> n >> x >> y;
    double pn;
    ls >> pn;
    by_offset[x == 0 ? 0 : 1][{n, ((y - x) % 24 + 24) % 24}] = pn;
  }
  ASSERT_EQ(by_offset[0].size(), by_offset[1].size());
  for (const auto& [key, v] : by_offset[0]) EXPECT_NEAR(v, by_offset[1].at(key), 1e-15);
  EXPECT_THROW(gh::run_heatmap({"lattice:1:8", 4, {9}, dir}), PreconditionError);
}
