#ifndef GRAPHVORTEX_VORTEX_SOLVER_HPP
#define GRAPHVORTEX_VORTEX_SOLVER_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "graphvortex/error.hpp"
#include "graphvortex/graph.hpp"
#include "graphvortex/linear_ops.hpp"

// Solver for the vortex equation
//
//     Δu = e^u − 1 + 4π Σ_s n_s δ_{z_s}
//
// on a connected weighted graph. A solution exists, and is then unique, iff
// 4πN < |V| with N = Σ n_s. The pipeline splits off the singular part with a
// background potential u0 (Δu0 = −4πN f + 4π Σ n_s δ_{z_s}, ∫f dμ = 1), which
// leaves the regular problem
//
//     Δv = e^{v + u0} − 1 + 4πN f,       u = u0 + v,
//
// solved by monotone iteration from a supersolution U down to the solution,
// bounded below by a subsolution Z. A damped Newton iteration is available as
// an independent cross-check.
namespace graphvortex {

struct Vortex {
  std::size_t vertex;
  int multiplicity;
};

struct VortexEntry {
  std::string vertex;
  long long multiplicity;
  std::size_t line = 0;
};

// Distinct vortex vertices with positive multiplicities. The empty
// configuration (N = 0) is valid on every graph.
class VortexConfig {
public:
  VortexConfig() = default;
  // Throws UnknownVertex, DuplicateVortex, NonPositiveMultiplicity.
  VortexConfig(const WeightedGraph& g, std::span<const VortexEntry> entries);
  VortexConfig(const WeightedGraph& g, std::vector<Vortex> vortices);

  std::span<const Vortex> vortices() const noexcept { return vortices_; }
  long long total() const noexcept { return total_; }
  bool empty() const noexcept { return vortices_.empty(); }

  // Throws GraphMismatch when a non-empty configuration was built on another graph.
  void require_graph(const WeightedGraph& g) const;

private:
  std::vector<Vortex> vortices_;
  long long total_ = 0;
  std::uint64_t graph_token_ = 0;
};

enum class NewtonStart { subsolution, supersolution };

struct SolverSettings {
  // Source function f with ∫f dμ = 1; uniform 1/|V| when unset.
  std::optional<VertexFunction> source_f;
  // Stopping tolerance on successive monotone iterates (sup norm).
  double conv_tol = 1e-10;
  std::size_t max_iters = 10000;
  // K = max e^{u0 + U} + k_margin.
  double k_margin = 1.0;
  NewtonStart newton_start = NewtonStart::subsolution;
  LinearSolveSettings linear;

  // Throws InvalidSettings, or IncompatibleSource for a custom f with ∫f dμ != 1.
  void validate(const WeightedGraph& g) const;
};

struct IterationRecord {
  std::size_t iteration;
  double sup_diff; // ||w_n − w_{n−1}||_inf
  double max_w;
  double min_w;
  bool monotone;   // w_n <= w_{n−1} + 1e-12
  bool sandwiched; // Z − 1e-12 <= w_n <= U + 1e-12
};

struct IterationTrace {
  std::vector<IterationRecord> records;
  std::size_t iterations = 0;

  bool all_monotone() const;
  bool all_sandwiched() const;
};

inline constexpr double kOrderingSlack = 1e-12;

// Raised when an iteration hits max_iters; carries the trace for diagnosis.
class IterationLimitError : public Error {
public:
  IterationLimitError(const std::string& message, IterationTrace trace);
  const IterationTrace& trace() const noexcept { return trace_; }

private:
  IterationTrace trace_;
};

struct MonotoneResult {
  VertexFunction W;
  IterationTrace trace;
  double K_used;
  // ||ΔW − e^{W+u0} + 1 − 4πN f||_inf at the returned iterate.
  double residual_sup;
};

struct AssembledSolution {
  VertexFunction u;
  double residual_sup;
  double integral_gap;
};

struct SolveReport {
  VertexFunction u;
  VertexFunction u0;
  VertexFunction U;
  VertexFunction Z;
  VertexFunction W;
  VertexFunction f;
  double existence_margin;
  double K_used;
  IterationTrace trace;
  double residual_sup;
  double integral_gap;
};

// Certified non-existence: 4πN >= |V|.
struct NoSolution {
  double margin;
  double volume;
  double four_pi_n;
};

using SolveOutcome = std::variant<SolveReport, NoSolution>;

// 4π·N in double precision.
double four_pi_times(long long n);

// |V| − 4πN; positive iff the equation is solvable.
double existence_check(const WeightedGraph& g, const VortexConfig& vc);

// The configured f, or 1/|V| everywhere.
VertexFunction source_function(const WeightedGraph& g, const SolverSettings& s);

// Mean-zero solution of Δu0 = −4πN f + 4π Σ n_s δ_{z_s}.
VertexFunction background_potential(const WeightedGraph& g, const VortexConfig& vc,
                                    const VertexFunction& f, const SolverSettings& s);

// Δv − e^{v+u0} + 1 − 4πN f, pointwise. Nonpositive for supersolutions,
// nonnegative for subsolutions, zero at the solution.
VertexFunction regular_defect(const WeightedGraph& g, const VertexFunction& u0,
                              const VertexFunction& f, long long n_total,
                              const VertexFunction& v);

// U solving (Δ − e^{u0}) U = 4πN f − 1. Exists for every N.
VertexFunction supersolution(const WeightedGraph& g, const VertexFunction& u0,
                             const VertexFunction& f, long long n_total,
                             const SolverSettings& s);

// Z = Z0 + c where ΔZ0 = 4πN f − 4πN/|V| (mean zero) and c is the largest
// shift with Z + u0 <= log(1 − 4πN/|V|). Throws ThresholdViolated if 4πN >= |V|.
VertexFunction subsolution(const WeightedGraph& g, const VertexFunction& u0,
                           const VertexFunction& f, long long n_total,
                           const SolverSettings& s);

// Monotone iteration (Δ − K) w_{n+1} = e^{u0 + w_n} − K w_n + 4πN f − 1 from
// w_0 = U. Throws ThresholdViolated, IterationLimitError (MaxItersExceeded),
// SolverDivergence.
MonotoneResult monotone_solve(const WeightedGraph& g, const VertexFunction& u0,
                              const VertexFunction& f, long long n_total,
                              const VertexFunction& U, const VertexFunction& Z,
                              const SolverSettings& s);
MonotoneResult monotone_solve(const WeightedGraph& g, const VertexFunction& u0,
                              const VertexFunction& f, long long n_total,
                              const SolverSettings& s);

// Damped Newton on the regular problem, started from Z or U per
// s.newton_start. Independent of the monotone iteration.
VertexFunction newton_oracle(const WeightedGraph& g, const VertexFunction& u0,
                             const VertexFunction& f, long long n_total,
                             const SolverSettings& s);
VertexFunction newton_oracle(const WeightedGraph& g, const VertexFunction& u0,
                             const VertexFunction& f, long long n_total,
                             const VertexFunction& start, const SolverSettings& s);

// Δu − e^u + 1 − 4π Σ n_s δ_{z_s}, pointwise.
VertexFunction equation_residual(const WeightedGraph& g, const VortexConfig& vc,
                                 const VertexFunction& u);

AssembledSolution assemble_solution(const WeightedGraph& g, const VortexConfig& vc,
                                    const VertexFunction& u0, const VertexFunction& W);

SolveOutcome solve(const WeightedGraph& g, const VortexConfig& vc, const SolverSettings& s = {});

} // namespace graphvortex

#endif
