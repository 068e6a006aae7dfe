// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "cli_runner.hpp"
#include "graphvortex/error.hpp"
#include "graphvortex/generators.hpp"
#include "graphvortex/io.hpp"
#include "graphvortex/linear_ops.hpp"
#include "graphvortex/vortex_solver.hpp"
#include "instances.hpp"

using namespace graphvortex;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass)
        detail << "failed: ";
      else
        detail << "; ";
      detail << what;
      pass = false;
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

double sup_diff(const VertexFunction& a, const VertexFunction& b) {
  return sup_norm((a - b).values());
}

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

VortexConfig at(const WeightedGraph& g, std::vector<Vortex> v) { return {g, std::move(v)}; }

WeightedGraph grid(std::size_t r, std::size_t c, double measure = 1.0) {
  return build({.kind = GraphKind::grid2d, .rows = r, .cols = c, .measure = measure});
}

// criterion 1
void threshold_sharpness(Outcome& o) {
  const auto t0 = Clock::now();
  const auto g = grid(5, 5);
  const auto solvable = solve(g, at(g, {{g.index_of("r2c2"), 1}}));
  o.require(std::holds_alternative<SolveReport>(solvable), "N=1 did not converge");
  const auto none = solve(g, at(g, {{g.index_of("r2c2"), 2}}));
  const double arithmetic = 25.0 - 8.0 * pi;
  if (const auto* ns = std::get_if<NoSolution>(&none))
    o.require(std::abs(ns->margin - arithmetic) <= 1e-12, "margin off by " +
                                                               sci(ns->margin - arithmetic));
  else
    o.require(false, "N=2 did not return NoSolution");
  const double elapsed = seconds_since(t0);
  o.require(elapsed < 1.0, "runtime " + sci(elapsed) + " s");
  o.detail << " runtime " << sci(elapsed) << " s";
}

// criterion 2
void closed_forms(Outcome& o) {
  const auto one = WeightedGraph::validate({{{"z", 20.0}}, {}});
  const auto r1 = solve(one, at(one, {{0, 1}}));
  double e1 = std::numeric_limits<double>::infinity();
  if (const auto* rep = std::get_if<SolveReport>(&r1))
    e1 = std::abs(rep->u[0] - std::log(1.0 - pi / 5.0));
  o.require(e1 <= 1e-10, "single vertex error " + sci(e1));

  const auto c4 = build({.kind = GraphKind::cycle, .n = 4, .measure = 13.0});
  const auto r4 = solve(c4, at(c4, {{0, 1}, {1, 1}, {2, 1}, {3, 1}}));
  double e4 = std::numeric_limits<double>::infinity();
  if (const auto* rep = std::get_if<SolveReport>(&r4))
    e4 = sup_diff(rep->u, VertexFunction(c4, std::log(1.0 - 16.0 * pi / 52.0)));
  o.require(e4 <= 1e-10, "cycle error " + sci(e4));
  o.detail << " single-vertex error " << sci(e1) << ", cycle error " << sci(e4);
}

struct SuiteResult {
  double worst_gap_rel = 0.0;
  double worst_oracle = 0.0;
  double worst_shift = 0.0;
  bool all_monotone = true;
  bool all_sandwiched = true;
  std::size_t records = 0;
  std::size_t instances = 0;
  std::vector<std::string> failures;
};

// Shared randomized instance set for criteria 3 to 5.
const SuiteResult& random_suite() {
  static const SuiteResult result = [] {
    SuiteResult r;
    SeededRng rng(20261015);
    SolverSettings s;
    s.max_iters = 200000;
    constexpr int kInstances = 24;
    for (int i = 0; i < kInstances; ++i) {
      const auto inst = testing::random_vortex_instance(rng, 64, 0.1, 0.9);
      const auto& g = inst.graph;
      const auto N = inst.vortices.total();
      try {
        const auto outcome = solve(g, inst.vortices, s);
        const auto& rep = std::get<SolveReport>(outcome);
        ++r.instances;
        r.worst_gap_rel = std::max(r.worst_gap_rel, rep.integral_gap / g.total_volume());

        const auto v = newton_oracle(g, rep.u0, rep.f, N, s);
        r.worst_oracle = std::max(r.worst_oracle, sup_diff(v, rep.W));

        // The shift raises K by about e^5 and slows the contraction accordingly.
        SolverSettings shifted = s;
        shifted.max_iters = 5000000;
        const auto shifted_u0 = rep.u0 + 5.0;
        const auto moved = monotone_solve(g, shifted_u0, rep.f, N, shifted);
        r.worst_shift = std::max(r.worst_shift, sup_diff(shifted_u0 + moved.W, rep.u));

        for (const auto* trace : {&rep.trace, &moved.trace}) {
          r.all_monotone = r.all_monotone && trace->all_monotone();
          r.all_sandwiched = r.all_sandwiched && trace->all_sandwiched();
          r.records += trace->records.size();
        }
      } catch (const std::exception& e) {
        r.failures.push_back("instance " + std::to_string(i) + ": " + e.what());
      }
    }
    return r;
  }();
  return result;
}

void report_failures(Outcome& o, const SuiteResult& r) {
  for (const auto& f : r.failures)
    o.require(false, f);
  o.require(r.instances >= 20, "only " + std::to_string(r.instances) + " instances solved");
}

// criterion 3
void integral_identity(Outcome& o) {
  const auto& r = random_suite();
  report_failures(o, r);
  o.require(r.worst_gap_rel <= 1e-8, "gap/|V| " + sci(r.worst_gap_rel));
  o.detail << " " << r.instances << " instances, max gap/|V| " << sci(r.worst_gap_rel);
}

// criterion 4
void dual_solvers(Outcome& o) {
  const auto& r = random_suite();
  report_failures(o, r);
  o.require(r.worst_oracle <= 1e-8, "oracle disagreement " + sci(r.worst_oracle));
  o.require(r.worst_shift <= 1e-9, "u0 shift changes u by " + sci(r.worst_shift));
  o.detail << " max oracle disagreement " << sci(r.worst_oracle) << ", max u0+5 change "
           << sci(r.worst_shift);
}

// criterion 5
void monotone_structure(Outcome& o) {
  const auto& r = random_suite();
  report_failures(o, r);
  // The anchors and the threshold instances belong to the suite as well.
  std::size_t records = r.records;
  bool monotone = r.all_monotone, sandwiched = r.all_sandwiched;
  const auto one = WeightedGraph::validate({{{"z", 20.0}}, {}});
  const auto c4 = build({.kind = GraphKind::cycle, .n = 4, .measure = 13.0});
  const auto g5 = grid(5, 5);
  const std::vector<std::pair<WeightedGraph, VortexConfig>> extra{
      {one, at(one, {{0, 1}})},
      {c4, at(c4, {{0, 1}, {1, 1}, {2, 1}, {3, 1}})},
      {g5, at(g5, {{0, 1}})},
  };
  for (const auto& [g, vc] : extra) {
    const auto& rep = std::get<SolveReport>(solve(g, vc));
    monotone = monotone && rep.trace.all_monotone();
    sandwiched = sandwiched && rep.trace.all_sandwiched();
    records += rep.trace.records.size();
  }
  o.require(monotone, "monotonicity violated");
  o.require(sandwiched, "sandwich violated");
  o.detail << " " << records << " iterates checked";
}

// criterion 6
void maximum_principle(Outcome& o) {
  SeededRng rng(6);
  double worst = -std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < 200; ++trial) {
    const auto g = testing::random_weighted_graph(rng, 1 + rng.index(80), 0.05, 20.0, 0.05, 20.0);
    const double k = 10.0 * (1.0 - rng.uniform());
    std::vector<double> rhs(g.size());
    for (auto& v : rhs)
      v = (trial % 2 == 1 && rng.uniform() < 0.8) ? 0.0 : rng.uniform(0.0, 10.0);
    worst = std::max(worst, solve_shifted(g, k, VertexFunction(g, std::move(rhs))).max());
  }
  o.require(worst <= 1e-10, "max u " + sci(worst));
  o.detail << " 200 trials, largest max u " << sci(worst);
}

// criterion 7
void calculus_identities(Outcome& o) {
  SeededRng rng(7);
  double worst_div = 0.0, worst_green = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const auto g = testing::random_weighted_graph(rng, 1 + rng.index(80), 0.01, 10.0, 0.01, 10.0);
    const auto u = testing::random_function(g, rng, -10.0, 10.0);
    const auto psi = testing::random_function(g, rng, -10.0, 10.0);
    const auto lap = laplacian(g, u);

    double weight_scale = 0.0, green_scale = 0.0;
    for (const auto& e : g.to_listing().edges) {
      const auto a = g.index_of(e.from), b = g.index_of(e.to);
      weight_scale += e.weight;
      green_scale += e.weight * std::abs(u[a] - u[b]) * std::abs(psi[a] - psi[b]);
    }
    worst_div = std::max(worst_div, std::abs(integrate(g, lap)) /
                                        ((1.0 + sup_norm(u.values())) * weight_scale + 1e-300));

    double rhs = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
      rhs -= g.measure(i) * psi[i] * lap[i];
    const double lhs = integrate(g, gradient_form(g, u, psi));
    if (green_scale > 0.0)
      worst_green = std::max(worst_green, std::abs(lhs - rhs) / green_scale);
  }
  o.require(worst_div <= 1e-10, "divergence " + sci(worst_div));
  o.require(worst_green <= 1e-10, "Green " + sci(worst_green));
  o.detail << " 100 pairs, divergence " << sci(worst_div) << ", Green " << sci(worst_green);
}

// criterion 8
void poisson_contract(Outcome& o) {
  SeededRng rng(8);
  int raised = 0, imbalanced = 0;
  double worst_mean = 0.0, worst_agree = 0.0;
  LinearSolveSettings direct, cg;
  direct.method = LinearMethod::direct;
  cg.method = LinearMethod::conjugate_gradient;
  for (int trial = 0; trial < 60; ++trial) {
    const auto g = testing::random_weighted_graph(rng, 2 + rng.index(trial < 50 ? 60 : 600));
    auto f = testing::random_function(g, rng, -3.0, 3.0);
    f = f - integrate(g, f) / g.total_volume();

    for (double factor : {1.5, 10.0, 1e6}) {
      const double tol = 1e-9 * (1.0 + sup_norm(f.values())) * g.total_volume();
      const auto bad = f + factor * tol / g.total_volume();
      ++imbalanced;
      try {
        solve_poisson(g, bad);
      } catch (const Error& e) {
        raised += e.kind() == ErrorKind::IncompatibleSource;
      }
    }

    const auto a = solve_poisson(g, f, direct);
    const auto b = solve_poisson(g, f, cg);
    for (const auto* u : {&a, &b})
      worst_mean = std::max(worst_mean, std::abs(integrate(g, *u)) /
                                            (g.total_volume() * (1.0 + sup_norm(u->values()))));
    worst_agree = std::max(worst_agree, sup_diff(a, b));
  }
  o.require(raised == imbalanced, std::to_string(imbalanced - raised) + " imbalanced sources accepted");
  o.require(worst_mean <= 1e-10, "mean " + sci(worst_mean));
  o.require(worst_agree <= 1e-8, "direct vs iterative " + sci(worst_agree));
  o.detail << " " << raised << "/" << imbalanced << " rejected, mean " << sci(worst_mean)
           << ", direct vs iterative " << sci(worst_agree);
}

// criterion 9
void performance(Outcome& o) {
  const double measure = 4.0 * pi / (0.5 * 2500.0);
  const auto g = grid(50, 50, measure);
  const auto vc = at(g, {{g.index_of("r0c0"), 1}});
  const auto t0 = Clock::now();
  SolverSettings s;
  const auto outcome = solve(g, vc, s);
  const auto* rep = std::get_if<SolveReport>(&outcome);
  o.require(rep != nullptr, "no solution returned");
  if (rep == nullptr)
    return;
  const auto v = newton_oracle(g, rep->u0, rep->f, 1, s);
  const double elapsed = seconds_since(t0);
  const double disagreement = sup_diff(v, rep->W);
  o.require(elapsed < 10.0, "runtime " + sci(elapsed) + " s");
  o.require(rep->residual_sup <= 1e-8, "residual " + sci(rep->residual_sup));
  o.require(disagreement <= 1e-8, "oracle disagreement " + sci(disagreement));
  o.detail << " runtime " << sci(elapsed) << " s, residual " << sci(rep->residual_sup)
           << ", " << rep->trace.iterations << " iterations, oracle disagreement "
           << sci(disagreement);
}

// criterion 10
void cli_round_trips(Outcome& o) {
  SeededRng rng(10);
  int identical = 0;
  constexpr GraphKind kinds[] = {GraphKind::path, GraphKind::cycle, GraphKind::complete,
                                 GraphKind::grid2d, GraphKind::random_gnp};
  for (int i = 0; i < 100; ++i) {
    GraphSpec spec{.kind = kinds[i % 5],
                   .n = 3 + rng.index(40),
                   .rows = 1 + rng.index(8),
                   .cols = 1 + rng.index(8),
                   .p = rng.uniform(0.1, 0.6),
                   .seed = rng.next(),
                   .weight = rng.uniform(1e-3, 1e3),
                   .measure = rng.uniform(1e-3, 1e3)};
    auto g = build(spec);
    if (i % 2 == 1)
      g = testing::random_weighted_graph(rng, g.size(), 1e-6, 1e6, 1e-6, 1e6);
    const auto back = parse_graph(serialize_graph(g));
    identical += back == g && serialize_graph(back) == serialize_graph(g);
  }
  o.require(identical == 100, std::to_string(100 - identical) + " round trips differ");

  testing::ScratchDir dir("graphvortex_acceptance");
  const auto graph = dir.file("g.txt");
  const auto gen = testing::run_cli(
      {"generate", "--kind", "grid2d", "--rows", "5", "--cols", "5", "--out", graph});
  const auto one = dir.file("one.txt", "r0c0 1\n");
  const auto two = dir.file("two.txt", "r0c0 2\n");
  const auto bad = dir.file("bad.txt", "r0c0 x\n");
  struct Expect {
    const char* name;
    int got;
    int want;
  };
  const Expect cases[] = {
      {"generate", gen.exit_code, 0},
      {"check solvable", testing::run_cli({"check", "--graph", graph, "--vortices", one}).exit_code, 0},
      {"check unsolvable", testing::run_cli({"check", "--graph", graph, "--vortices", two}).exit_code, 2},
      {"solve", testing::run_cli({"solve", "--graph", graph, "--vortices", one}).exit_code, 0},
      {"solve unsolvable", testing::run_cli({"solve", "--graph", graph, "--vortices", two}).exit_code, 2},
      {"parse error", testing::run_cli({"solve", "--graph", graph, "--vortices", bad}).exit_code, 1},
      {"missing file", testing::run_cli({"check", "--graph", dir.file("none.txt"), "--vortices", one}).exit_code, 1},
      {"iteration limit", testing::run_cli({"solve", "--graph", graph, "--vortices", one, "--max-iters", "2"}).exit_code, 3},
  };
  int matched = 0;
  for (const auto& c : cases) {
    o.require(c.got == c.want, std::string(c.name) + " exited " + std::to_string(c.got));
    matched += c.got == c.want;
  }
  o.detail << " " << identical << "/100 round trips, " << matched << "/" << std::size(cases)
           << " exit codes";
}

} // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    std::function<void(Outcome&)> run;
  };
  const std::vector<Criterion> criteria{
      {1, "threshold sharpness on the 5x5 grid", threshold_sharpness},
      {2, "closed-form anchors", closed_forms},
      {3, "integral identity on random instances", integral_identity},
      {4, "monotone iteration vs Newton, u0 normalization", dual_solvers},
      {5, "monotone and sandwiched iterates", monotone_structure},
      {6, "maximum principle", maximum_principle},
      {7, "divergence and Green identities", calculus_identities},
      {8, "Poisson contract", poisson_contract},
      {9, "50x50 grid performance", performance},
      {10, "formats and CLI exit codes", cli_round_trips},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Outcome o;
    try {
      c.run(o);
    } catch (const std::exception& e) {
      o.require(false, std::string("exception: ") + e.what());
    }
    failed += !o.pass;
    std::printf("criterion %2d %-48s %s |%s\n", c.id, c.name, o.pass ? "PASS" : "FAIL",
                o.detail.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed,
              criteria.size());
  return failed == 0 ? 0 : 1;
}
