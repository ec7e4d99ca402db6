#include <CLI11.hpp>
#include <chrono>
#include <cstdio>
#include <iostream>

#include "graphhardy/harness.hpp"
#include "graphhardy/parallel.hpp"

namespace gh = graphhardy::harness;

namespace {

std::vector<graphhardy::VertexId> parse_sources(const std::string& s) {
  std::vector<graphhardy::VertexId> out;
  std::size_t pos = 0;
  while (pos <= s.size()) {
    const auto comma = s.find(',', pos);
    const std::string item = s.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    if (!item.empty()) out.push_back(static_cast<graphhardy::VertexId>(std::stoul(item)));
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (out.empty()) throw std::invalid_argument("--sources is empty");
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  graphhardy::configure_threads_from_env();

  CLI::App app{"Hardy spaces with variable exponents on weighted graphs: verifiers and decompositions"};
  app.require_subcommand(1);

  gh::RunConfig run;
  std::vector<std::string> tol_items;
  std::string out_dir = ".";
  auto* verify = app.add_subcommand("verify", "Run theorem verifiers and write report.json");
  verify->add_option("--graph", run.graph, "lattice:dim:side[:laziness[:torus|reflect|open]], twocopies:side, path:n, file:path");
  verify->add_option("--p", run.p, "constant:q, logfamily:a:b:x0, file:path");
  verify->add_option("--check", run.checks, "Selectors (repeatable or comma separated; `all` selects every check)");
  verify->add_option("--trials", run.trials, "Random trials per sweep");
  verify->add_option("--seed", run.seed, "Seed of the counter-based generator");
  verify->add_option("--first", run.first, "First trial index (replays a stored worst case)");
  verify->add_option("--levels", run.levels, "Level cap K (0 picks each check's default)");
  verify->add_option("--multiplier", run.multiplier, "identity, heat:n, imaginary-power:tau, step, file:path");
  verify->add_option("--weight", run.weight, "Weight file for prop-sl (`x w(x)` lines)");
  verify->add_option("--tol", tol_items, "Overrides: stability=, residual=, reconstruction=, rescale=");
  verify->add_option("--out", out_dir, "Output directory");

  gh::DecomposeConfig dec;
  std::string dec_out = ".";
  auto* decompose = app.add_subcommand("decompose", "Atomic decomposition of an input function");
  decompose->add_option("--graph", dec.graph, "Graph spec");
  decompose->add_option("--p", dec.p, "Exponent spec");
  decompose->add_option("--input", dec.input, "Vertex function (`x value`) or tent CSV with --tent")->required();
  decompose->add_flag("--tent", dec.tent_input, "Input is a tent function `x k value`");
  decompose->add_option("--levels", dec.levels, "Level cap K");
  decompose->add_option("--out", dec_out, "Output directory");

  gh::HeatmapConfig heat;
  std::string heat_out = ".", sources = "0";
  auto* heatmap = app.add_subcommand("heatmap", "Heat kernel rows with the fitted Gaussian bound");
  heatmap->add_option("--graph", heat.graph, "Graph spec");
  heatmap->add_option("--horizon", heat.horizon, "Largest n");
  heatmap->add_option("--sources", sources, "Comma separated source vertices");
  heatmap->add_option("--out", heat_out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*verify) {
      if (run.checks.empty()) {
        std::cerr << "error: no checks selected\n" << verify->help();
        return 2;
      }
      run.tol = gh::parse_tolerances(tol_items);
      const auto t0 = std::chrono::steady_clock::now();
      const gh::VerifyResult res = gh::run_verify(run);
      const std::filesystem::path path = std::filesystem::path(out_dir) / "report.json";
      gh::write_atomic(path, gh::dump(res.report));
      for (const auto& rec : res.report["checks"]) {
        std::cout << rec["name"].get<std::string>() << ": " << (rec["pass"].get<bool>() ? "pass" : "FAIL") << "\n";
      }
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      std::fprintf(stderr, "wall time %.2f s, report %s\n", secs, path.c_str());
      return res.all_pass ? 0 : 1;
    }
    if (*decompose) {
      dec.out = dec_out;
      const gh::DecomposeSummary s = gh::run_decompose(dec);
      std::cout << "atoms " << s.atoms << "\nresidual " << s.residual << "\naggregate " << s.aggregate << "\n";
      return 0;
    }
    if (*heatmap) {
      heat.out = heat_out;
      heat.sources = parse_sources(sources);
      const auto j = gh::run_heatmap(heat);
      std::cout << "C " << j["fit"]["C"] << "\nc " << j["fit"]["c"] << "\n";
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
