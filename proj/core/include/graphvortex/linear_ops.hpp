#ifndef GRAPHVORTEX_LINEAR_OPS_HPP
#define GRAPHVORTEX_LINEAR_OPS_HPP

#include <cstddef>
#include <memory>
#include <optional>

#include "graphvortex/graph.hpp"

namespace graphvortex {

enum class LinearMethod { direct, conjugate_gradient, automatic };

// `automatic` picks the dense factorization up to this many vertices.
inline constexpr std::size_t kDirectSolveMaxVertices = 512;

struct LinearSolveSettings {
  // Bound on ||residual||_inf relative to ||rhs||_inf + 1.
  double residual_tol = 1e-12;
  // Conjugate gradient iteration cap; unset means 10 * vertex count.
  std::optional<std::size_t> max_cg_iters;
  LinearMethod method = LinearMethod::automatic;

  // Throws InvalidSettings.
  void validate() const;
};

// Solves −Δu = f for the unique u with ∫u dμ = 0. Requires
// |∫f dμ| <= 1e-9 (1 + ||f||_inf) |V|, otherwise IncompatibleSource.
VertexFunction solve_poisson(const WeightedGraph& g, const VertexFunction& f,
                             const LinearSolveSettings& s = {});

// Solver for Δu − c·u = rhs with c > 0 pointwise. The factorization (or the
// preconditioner) is built once and reused across right-hand sides.
class ShiftedSolver {
public:
  // Throws NonPositiveShift, GraphMismatch, InvalidSettings.
  ShiftedSolver(const WeightedGraph& g, const VertexFunction& c,
                const LinearSolveSettings& s = {});
  ~ShiftedSolver();
  ShiftedSolver(ShiftedSolver&&) noexcept;
  ShiftedSolver& operator=(ShiftedSolver&&) noexcept;

  // Throws SolverDivergence when the residual contract cannot be met.
  VertexFunction solve(const VertexFunction& rhs) const;

  LinearMethod method() const noexcept;

private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

VertexFunction solve_shifted(const WeightedGraph& g, const VertexFunction& c,
                             const VertexFunction& rhs, const LinearSolveSettings& s = {});
VertexFunction solve_shifted(const WeightedGraph& g, double c, const VertexFunction& rhs,
                             const LinearSolveSettings& s = {});

// ||Δu − c·u − rhs||_inf
double residual_sup(const WeightedGraph& g, const VertexFunction& c, const VertexFunction& u,
                    const VertexFunction& rhs);
// ||Δu − rhs||_inf
double residual_sup(const WeightedGraph& g, const VertexFunction& u, const VertexFunction& rhs);

} // namespace graphvortex

#endif
