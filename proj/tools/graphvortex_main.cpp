// graphvortex: generate graphs, check solvability, and solve the vortex
// equation Δu = e^u − 1 + 4π Σ n_s δ_{z_s} on weighted graphs.

#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "graphvortex/commands.hpp"

namespace cli = graphvortex::cli;

int main(int argc, char** argv) {
  CLI::App app{"Vortex equation solver on weighted finite graphs"};
  app.require_subcommand(1);

  // generate
  cli::GenerateOptions gen;
  std::string kind = "path";
  auto* generate = app.add_subcommand("generate", "Write a generated graph file");
  generate->add_option("--kind", kind, "path | cycle | complete | grid2d | random_gnp")
      ->check(CLI::IsMember({"path", "cycle", "complete", "grid2d", "random_gnp"}));
  generate->add_option("--n", gen.spec.n, "Vertex count");
  generate->add_option("--rows", gen.spec.rows, "Grid rows");
  generate->add_option("--cols", gen.spec.cols, "Grid columns");
  generate->add_option("--p", gen.spec.p, "Edge probability for random_gnp");
  generate->add_option("--seed", gen.spec.seed, "Seed for random_gnp");
  generate->add_option("--weight", gen.spec.weight, "Edge weight");
  generate->add_option("--measure", gen.spec.measure, "Vertex measure");
  generate->add_option("--out", gen.out, "Output path (stdout when omitted)");

  // check
  cli::CheckOptions chk;
  auto* check = app.add_subcommand("check", "Report |V|, 4πN and the existence verdict");
  check->add_option("--graph", chk.graph)->required();
  check->add_option("--vortices", chk.vortices)->required();

  // solve
  cli::SolveOptions slv;
  std::string oracle = "none";
  auto* solve = app.add_subcommand("solve", "Solve and write the solution CSV");
  solve->add_option("--graph", slv.graph)->required();
  solve->add_option("--vortices", slv.vortices)->required();
  solve->add_option("--tol", slv.tol, "Convergence tolerance")->capture_default_str();
  solve->add_option("--max-iters", slv.max_iters, "Iteration cap")->capture_default_str();
  solve->add_option("--out", slv.out, "Solution CSV path");
  solve->add_option("--trace", slv.trace, "Iteration trace path");
  solve->add_option("--oracle", oracle, "Cross-check with an independent solver")
      ->check(CLI::IsMember({"none", "newton"}));

  // sweep
  cli::SweepOptions swp;
  auto* sweep = app.add_subcommand("sweep", "Solve with multiplicity n = 1..n-max at one vertex");
  sweep->add_option("--graph", swp.graph)->required();
  sweep->add_option("--vertex", swp.vertex)->required();
  sweep->add_option("--n-max", swp.n_max)->required();
  sweep->add_option("--tol", swp.tol)->capture_default_str();
  sweep->add_option("--max-iters", swp.max_iters)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitInput;
  }

  if (*generate) {
    gen.spec.kind = *graphvortex::parse_graph_kind(kind);
    return cli::cmd_generate(gen, std::cout, std::cerr);
  }
  if (*check)
    return cli::cmd_check(chk, std::cout, std::cerr);
  if (*solve) {
    slv.oracle = oracle == "newton" ? cli::Oracle::newton : cli::Oracle::none;
    return cli::cmd_solve(slv, std::cout, std::cerr);
  }
  return cli::cmd_sweep(swp, std::cout, std::cerr);
}
