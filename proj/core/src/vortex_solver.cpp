#include "graphvortex/vortex_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <unordered_set>
#include <utility>

namespace graphvortex {

VortexConfig::VortexConfig(const WeightedGraph& g, std::span<const VortexEntry> entries)
    : graph_token_(g.token()) {
  std::unordered_set<std::size_t> seen;
  for (const auto& e : entries) {
    const auto index = g.find(e.vertex);
    if (!index)
      throw Error(ErrorKind::UnknownVertex, "vortex vertex '" + e.vertex + "'", e.line);
    if (e.multiplicity < 1 || e.multiplicity > std::numeric_limits<int>::max())
      throw Error(ErrorKind::NonPositiveMultiplicity,
                  "vortex '" + e.vertex + "' has multiplicity " + std::to_string(e.multiplicity),
                  e.line);
    if (!seen.insert(*index).second)
      throw Error(ErrorKind::DuplicateVortex, "vortex vertex '" + e.vertex + "'", e.line);
    vortices_.push_back({*index, static_cast<int>(e.multiplicity)});
    total_ += e.multiplicity;
  }
}

VortexConfig::VortexConfig(const WeightedGraph& g, std::vector<Vortex> vortices)
    : graph_token_(g.token()) {
  std::unordered_set<std::size_t> seen;
  for (const auto& v : vortices) {
    if (v.vertex >= g.size())
      throw Error(ErrorKind::UnknownVertex, "vortex vertex index " + std::to_string(v.vertex));
    if (v.multiplicity < 1)
      throw Error(ErrorKind::NonPositiveMultiplicity,
                  "multiplicity " + std::to_string(v.multiplicity));
    if (!seen.insert(v.vertex).second)
      throw Error(ErrorKind::DuplicateVortex, "vortex vertex '" + g.id(v.vertex) + "'");
    total_ += v.multiplicity;
  }
  vortices_ = std::move(vortices);
}

void VortexConfig::require_graph(const WeightedGraph& g) const {
  if (!vortices_.empty() && graph_token_ != g.token())
    throw Error(ErrorKind::GraphMismatch, "vortex configuration belongs to another graph");
}

void SolverSettings::validate(const WeightedGraph& g) const {
  if (!(conv_tol > 0.0))
    throw Error(ErrorKind::InvalidSettings, "conv_tol must be positive");
  if (max_iters < 1)
    throw Error(ErrorKind::InvalidSettings, "max_iters must be at least 1");
  if (!(k_margin > 0.0))
    throw Error(ErrorKind::InvalidSettings, "k_margin must be positive");
  linear.validate();
  if (source_f) {
    require_on_graph(g, *source_f);
    const double total = integrate(g, *source_f);
    if (std::abs(total - 1.0) > 1e-9 * (1.0 + sup_norm(source_f->values())) * g.total_volume())
      throw Error(ErrorKind::IncompatibleSource,
                  "source function integrates to " + std::to_string(total) + ", expected 1");
  }
}

bool IterationTrace::all_monotone() const {
  return std::all_of(records.begin(), records.end(),
                     [](const IterationRecord& r) { return r.monotone; });
}

bool IterationTrace::all_sandwiched() const {
  return std::all_of(records.begin(), records.end(),
                     [](const IterationRecord& r) { return r.sandwiched; });
}

IterationLimitError::IterationLimitError(const std::string& message, IterationTrace trace)
    : Error(ErrorKind::MaxItersExceeded, message), trace_(std::move(trace)) {}

// ---------------------------------------------------------------------------

double four_pi_times(long long n) { return 4.0 * std::numbers::pi * static_cast<double>(n); }

double existence_check(const WeightedGraph& g, const VortexConfig& vc) {
  vc.require_graph(g);
  return g.total_volume() - four_pi_times(vc.total());
}

VertexFunction source_function(const WeightedGraph& g, const SolverSettings& s) {
  if (s.source_f) {
    s.validate(g);
    return *s.source_f;
  }
  return VertexFunction(g, 1.0 / g.total_volume());
}

namespace {

// Relative accuracy of the distance-bound solve.
constexpr double kBoundForcing = 1e-9;
// Inexact Newton forcing term. Near the threshold the Jacobian is almost
// singular and tighter relative residuals sit below the rounding floor.
constexpr double kNewtonForcing = 1e-6;

void require_solvable(const WeightedGraph& g, long long n_total) {
  const double four_pi_n = four_pi_times(n_total);
  if (!(four_pi_n < g.total_volume()))
    throw Error(ErrorKind::ThresholdViolated,
                "4πN = " + std::to_string(four_pi_n) + " is not below |V| = " +
                    std::to_string(g.total_volume()));
}

VertexFunction exp_of_sum(const WeightedGraph& g, const VertexFunction& a, const VertexFunction& b) {
  std::vector<double> out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    out[i] = std::exp(a[i] + b[i]);
  return VertexFunction(g, std::move(out));
}

} // namespace

VertexFunction background_potential(const WeightedGraph& g, const VortexConfig& vc,
                                    const VertexFunction& f, const SolverSettings& s) {
  vc.require_graph(g);
  require_on_graph(g, f);
  const double four_pi = 4.0 * std::numbers::pi;
  const double four_pi_n = four_pi_times(vc.total());
  // Poisson form −Δu0 = 4πN f − 4π Σ n_s δ_{z_s}.
  std::vector<double> source(g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    source[i] = four_pi_n * f[i];
  for (const auto& v : vc.vortices())
    source[v.vertex] -= four_pi * v.multiplicity / g.measure(v.vertex);
  return solve_poisson(g, VertexFunction(g, std::move(source)), s.linear);
}

VertexFunction regular_defect(const WeightedGraph& g, const VertexFunction& u0,
                              const VertexFunction& f, long long n_total,
                              const VertexFunction& v) {
  require_on_graph(g, u0);
  require_on_graph(g, f);
  const double four_pi_n = four_pi_times(n_total);
  const auto lap = laplacian(g, v);
  std::vector<double> out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    out[i] = lap[i] - std::exp(v[i] + u0[i]) + 1.0 - four_pi_n * f[i];
  return VertexFunction(g, std::move(out));
}

VertexFunction supersolution(const WeightedGraph& g, const VertexFunction& u0,
                             const VertexFunction& f, long long n_total,
                             const SolverSettings& s) {
  require_on_graph(g, u0);
  require_on_graph(g, f);
  const double four_pi_n = four_pi_times(n_total);
  std::vector<double> c(g.size()), rhs(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    c[i] = std::exp(u0[i]);
    rhs[i] = four_pi_n * f[i] - 1.0;
  }
  auto U = solve_shifted(g, VertexFunction(g, std::move(c)), VertexFunction(g, std::move(rhs)),
                         s.linear);

  const auto defect = regular_defect(g, u0, f, n_total, U);
  if (defect.max() > 1e-9)
    throw Error(ErrorKind::SolverDivergence,
                "supersolution inequality violated by " + std::to_string(defect.max()));
  return U;
}

VertexFunction subsolution(const WeightedGraph& g, const VertexFunction& u0,
                           const VertexFunction& f, long long n_total,
                           const SolverSettings& s) {
  require_on_graph(g, u0);
  require_on_graph(g, f);
  require_solvable(g, n_total);
  const double four_pi_n = four_pi_times(n_total);
  const double volume = g.total_volume();

  // ΔZ0 = 4πN f − 4πN/|V|, i.e. −ΔZ0 = 4πN/|V| − 4πN f.
  std::vector<double> source(g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    source[i] = four_pi_n / volume - four_pi_n * f[i];
  const auto z0 = solve_poisson(g, VertexFunction(g, std::move(source)), s.linear);

  const double ceiling = std::log1p(-four_pi_n / volume);
  double shift = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < g.size(); ++i)
    shift = std::min(shift, ceiling - u0[i] - z0[i]);
  auto Z = z0 + shift;

  const auto defect = regular_defect(g, u0, f, n_total, Z);
  if (defect.min() < -1e-9)
    throw Error(ErrorKind::SolverDivergence,
                "subsolution inequality violated by " + std::to_string(-defect.min()));
  return Z;
}

namespace {

// Iterations without a new smallest defect before the loop gives up.
constexpr std::size_t kStagnationWindow = 1000;

// Iterate kept as hi + lo: with a large K the steps −D/K drop below half an
// ulp of w long before the defect reaches its evaluation floor.
struct CompensatedIterate {
  std::vector<double> hi;
  std::vector<double> lo;

  void add(std::span<const double> step) {
    for (std::size_t i = 0; i < hi.size(); ++i) {
      const double t = step[i] + lo[i];
      const double s = hi[i] + t;
      lo[i] = t - (s - hi[i]);
      hi[i] = s;
    }
  }

  std::vector<double> rounded() const {
    std::vector<double> out(hi.size());
    for (std::size_t i = 0; i < hi.size(); ++i)
      out[i] = hi[i] + lo[i];
    return out;
  }
};

// D(hi + lo), first order in lo.
VertexFunction compensated_defect(const WeightedGraph& g, const VertexFunction& u0,
                                  const VertexFunction& f, long long n_total,
                                  const CompensatedIterate& w) {
  const double four_pi_n = four_pi_times(n_total);
  std::vector<double> out(g.size());
  for (std::size_t x = 0; x < g.size(); ++x) {
    double lap_hi = 0.0, lap_lo = 0.0;
    for (const auto& nb : g.neighbors(x)) {
      lap_hi += nb.weight * (w.hi[nb.index] - w.hi[x]);
      lap_lo += nb.weight * (w.lo[nb.index] - w.lo[x]);
    }
    const double e = std::exp(w.hi[x] + u0[x]);
    out[x] = (lap_hi / g.measure(x) - e) + (1.0 - four_pi_n * f[x]) +
             (lap_lo / g.measure(x) - e * w.lo[x]);
  }
  return VertexFunction(g, std::move(out));
}

} // namespace

MonotoneResult monotone_solve(const WeightedGraph& g, const VertexFunction& u0,
                              const VertexFunction& f, long long n_total,
                              const VertexFunction& U, const VertexFunction& Z,
                              const SolverSettings& s) {
  s.validate(g);
  require_on_graph(g, U);
  require_on_graph(g, Z);
  require_solvable(g, n_total);

  const double K = exp_of_sum(g, u0, U).max() + s.k_margin;
  const ShiftedSolver step_solver(g, VertexFunction(g, K), s.linear);

  // Iterating on the increment: with w_{n+1} = w_n + δ the scheme becomes
  // (Δ − K) δ = −D(w_n), D the regular defect. δ <= 0 because D(w_n) <= 0.
  std::optional<ShiftedSolver> certifier;
  double bound_ratio = 0.0;
  double last_attempt = std::numeric_limits<double>::infinity();
  double best_defect = std::numeric_limits<double>::infinity();
  std::size_t best_at = 0;

  IterationTrace trace;
  CompensatedIterate w{{U.values().begin(), U.values().end()}, std::vector<double>(g.size())};
  std::vector<double> current = w.hi;
  double diff = std::numeric_limits<double>::infinity();

  for (std::size_t it = 0;; ++it) {
    const auto defect = compensated_defect(g, u0, f, n_total, w);
    const double defect_sup = sup_norm(defect.values());
    if (defect_sup < best_defect) {
      best_defect = defect_sup;
      best_at = it;
    }

    if (it > 0 && diff < s.conv_tol && defect_sup <= 100.0 * s.conv_tol) {
      if (defect_sup == 0.0) {
        trace.iterations = it;
        return MonotoneResult{VertexFunction(g, w.rounded()), std::move(trace), K, defect_sup};
      }
      // w is a supersolution, so e = w − W >= 0 and (Δ − e^{u0+ξ}) e = D(w)
      // with ξ >= Z. Comparison with (Δ − e^{u0+Z}) ē = −|D(w)| gives
      // 0 <= e <= ē, which certifies the distance to the limit.
      if (defect_sup * bound_ratio < s.conv_tol || defect_sup <= 0.5 * last_attempt) {
        if (!certifier) {
          LinearSolveSettings bound_settings = s.linear;
          bound_settings.residual_tol = std::max(s.linear.residual_tol, kBoundForcing);
          certifier.emplace(g, exp_of_sum(g, u0, Z), bound_settings);
        }
        std::vector<double> load(g.size());
        for (std::size_t i = 0; i < g.size(); ++i)
          load[i] = -std::abs(defect[i]) / defect_sup;
        bound_ratio = sup_norm(certifier->solve(VertexFunction(g, std::move(load))).values());
        last_attempt = defect_sup;
        if (defect_sup * bound_ratio < s.conv_tol) {
          trace.iterations = it;
          return MonotoneResult{VertexFunction(g, w.rounded()), std::move(trace), K,
                                defect_sup};
        }
      }
      if (it - best_at > kStagnationWindow) {
        trace.iterations = it;
        throw Error(ErrorKind::SolverDivergence,
                    "monotone iteration stagnated with defect " + std::to_string(best_defect) +
                        " and certified distance " +
                        std::to_string(last_attempt * bound_ratio));
      }
    }
    if (it == s.max_iters) {
      trace.iterations = it;
      throw IterationLimitError("monotone iteration did not converge in " +
                                    std::to_string(s.max_iters) + " iterations (last step " +
                                    std::to_string(diff) + ")",
                                std::move(trace));
    }

    const auto delta = step_solver.solve(-defect);
    w.add(delta.values());
    auto next = w.rounded();

    bool monotone = true, sandwiched = true;
    double next_max = -std::numeric_limits<double>::infinity();
    double next_min = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < g.size(); ++i) {
      monotone = monotone && next[i] <= current[i] + kOrderingSlack;
      sandwiched = sandwiched && Z[i] - kOrderingSlack <= next[i] &&
                   next[i] <= U[i] + kOrderingSlack;
      next_max = std::max(next_max, next[i]);
      next_min = std::min(next_min, next[i]);
    }
    diff = sup_norm(delta.values());
    trace.records.push_back({it + 1, diff, next_max, next_min, monotone, sandwiched});
    if (!monotone || !sandwiched) {
      trace.iterations = it + 1;
      throw Error(ErrorKind::SolverDivergence,
                  std::string("monotone iteration lost ") +
                      (monotone ? "the Z <= w <= U bracket" : "monotone descent") +
                      " at step " + std::to_string(it + 1));
    }
    current = std::move(next);
  }
}

MonotoneResult monotone_solve(const WeightedGraph& g, const VertexFunction& u0,
                              const VertexFunction& f, long long n_total,
                              const SolverSettings& s) {
  const auto U = supersolution(g, u0, f, n_total, s);
  const auto Z = subsolution(g, u0, f, n_total, s);
  return monotone_solve(g, u0, f, n_total, U, Z, s);
}

// ---------------------------------------------------------------------------

VertexFunction newton_oracle(const WeightedGraph& g, const VertexFunction& u0,
                             const VertexFunction& f, long long n_total,
                             const VertexFunction& start, const SolverSettings& s) {
  s.validate(g);
  require_on_graph(g, start);
  require_solvable(g, n_total);

  // Trial points may overflow exp(); treat those as rejected steps.
  auto defect_or_inf = [&](const std::vector<double>& v, std::vector<double>& out) {
    const double four_pi_n = four_pi_times(n_total);
    double m = 0.0;
    for (std::size_t x = 0; x < g.size(); ++x) {
      double acc = 0.0;
      for (const auto& nb : g.neighbors(x))
        acc += nb.weight * (v[nb.index] - v[x]);
      out[x] = acc / g.measure(x) - std::exp(v[x] + u0[x]) + 1.0 - four_pi_n * f[x];
      if (!std::isfinite(out[x]))
        return std::numeric_limits<double>::infinity();
      m = std::max(m, std::abs(out[x]));
    }
    return m;
  };

  LinearSolveSettings step_settings = s.linear;
  step_settings.residual_tol = std::max(s.linear.residual_tol, kNewtonForcing);

  std::vector<double> v(start.values().begin(), start.values().end());
  std::vector<double> defect(g.size()), trial(g.size()), trial_defect(g.size());
  double r = defect_or_inf(v, defect);

  for (std::size_t it = 0; it < s.max_iters; ++it) {
    if (r < s.conv_tol)
      return VertexFunction(g, std::move(v));

    // (Δ − e^{v+u0}) δ = −F(v), solved for the normalized right-hand side
    // −F/||F|| so the linear tolerance acts as a relative forcing term.
    std::vector<double> c(g.size()), rhs(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
      c[i] = std::exp(v[i] + u0[i]);
      rhs[i] = -defect[i] / r;
    }
    auto step = solve_shifted(g, VertexFunction(g, std::move(c)),
                              VertexFunction(g, std::move(rhs)), step_settings);
    step *= r;

    double t = 1.0;
    for (;;) {
      for (std::size_t i = 0; i < g.size(); ++i)
        trial[i] = v[i] + t * step[i];
      const double r_trial = defect_or_inf(trial, trial_defect);
      if (r_trial <= (1.0 - 1e-4 * t) * r) {
        v.swap(trial);
        defect.swap(trial_defect);
        r = r_trial;
        break;
      }
      t *= 0.5;
      if (t < 1e-12)
        throw Error(ErrorKind::SolverDivergence,
                    "Newton line search stalled at residual " + std::to_string(r));
    }
  }
  if (r < s.conv_tol)
    return VertexFunction(g, std::move(v));
  throw IterationLimitError("Newton iteration did not converge in " +
                                std::to_string(s.max_iters) + " iterations",
                            IterationTrace{});
}

VertexFunction newton_oracle(const WeightedGraph& g, const VertexFunction& u0,
                             const VertexFunction& f, long long n_total,
                             const SolverSettings& s) {
  const auto start = s.newton_start == NewtonStart::subsolution
                         ? subsolution(g, u0, f, n_total, s)
                         : supersolution(g, u0, f, n_total, s);
  return newton_oracle(g, u0, f, n_total, start, s);
}

// ---------------------------------------------------------------------------

VertexFunction equation_residual(const WeightedGraph& g, const VortexConfig& vc,
                                 const VertexFunction& u) {
  vc.require_graph(g);
  const double four_pi = 4.0 * std::numbers::pi;
  const auto lap = laplacian(g, u);
  std::vector<double> out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    out[i] = lap[i] - std::exp(u[i]) + 1.0;
  for (const auto& v : vc.vortices())
    out[v.vertex] -= four_pi * v.multiplicity / g.measure(v.vertex);
  return VertexFunction(g, std::move(out));
}

AssembledSolution assemble_solution(const WeightedGraph& g, const VortexConfig& vc,
                                    const VertexFunction& u0, const VertexFunction& W) {
  auto u = u0 + W;
  const double residual = sup_norm(equation_residual(g, vc, u).values());
  double exp_integral = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    exp_integral += g.measure(i) * std::exp(u[i]);
  const double gap = std::abs(exp_integral - (g.total_volume() - four_pi_times(vc.total())));
  return AssembledSolution{std::move(u), residual, gap};
}

SolveOutcome solve(const WeightedGraph& g, const VortexConfig& vc, const SolverSettings& s) {
  s.validate(g);
  const double margin = existence_check(g, vc);
  if (!(margin > 0.0))
    return NoSolution{margin, g.total_volume(), four_pi_times(vc.total())};

  const long long n_total = vc.total();
  auto f = source_function(g, s);
  auto u0 = background_potential(g, vc, f, s);
  auto U = supersolution(g, u0, f, n_total, s);
  auto Z = subsolution(g, u0, f, n_total, s);
  for (std::size_t i = 0; i < g.size(); ++i)
    if (Z[i] > U[i] + kOrderingSlack)
      throw Error(ErrorKind::SolverDivergence,
                  "subsolution exceeds supersolution at '" + g.id(i) + "'");
  auto mono = monotone_solve(g, u0, f, n_total, U, Z, s);
  auto assembled = assemble_solution(g, vc, u0, mono.W);

  return SolveReport{std::move(assembled.u), std::move(u0),  std::move(U),
                     std::move(Z),           std::move(mono.W), std::move(f),
                     margin,                 mono.K_used,      std::move(mono.trace),
                     assembled.residual_sup, assembled.integral_gap};
}

} // namespace graphvortex
