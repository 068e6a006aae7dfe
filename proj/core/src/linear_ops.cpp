#include "graphvortex/linear_ops.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "graphvortex/error.hpp"

namespace graphvortex {

void LinearSolveSettings::validate() const {
  if (!(residual_tol > 0.0))
    throw Error(ErrorKind::InvalidSettings, "residual_tol must be positive");
  if (max_cg_iters && *max_cg_iters < 1)
    throw Error(ErrorKind::InvalidSettings, "max_cg_iters must be at least 1");
}

namespace {

// Symmetric form of the operator: (A x)_i = Σ_j ω_ij (x_i − x_j) + shift_i x_i,
// i.e. μ·(−Δ + c) with shift = μ·c. With zero shift this is the weighted graph
// Laplacian matrix L, singular with the constants as kernel.
struct SpdSystem {
  WeightedGraph g;
  std::vector<double> shift;
  bool singular = false;

  void apply(std::span<const double> x, std::span<double> y) const {
    for (std::size_t i = 0; i < g.size(); ++i) {
      double acc = shift[i] * x[i];
      for (const auto& nb : g.neighbors(i))
        acc += nb.weight * (x[i] - x[nb.index]);
      y[i] = acc;
    }
  }

  std::vector<double> diagonal() const {
    std::vector<double> d(shift);
    for (std::size_t i = 0; i < g.size(); ++i)
      for (const auto& nb : g.neighbors(i))
        d[i] += nb.weight;
    return d;
  }

  // max_i |(b − A x)_i| / μ_i, the residual of the unscaled operator equation.
  double operator_residual(std::span<const double> x, std::span<const double> b) const {
    std::vector<double> ax(g.size());
    apply(x, ax);
    double m = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
      m = std::max(m, std::abs(b[i] - ax[i]) / g.measure(i));
    return m;
  }

  Eigen::MatrixXd dense() const {
    const auto n = static_cast<Eigen::Index>(g.size());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const auto ii = static_cast<Eigen::Index>(i);
      a(ii, ii) += shift[i];
      for (const auto& nb : g.neighbors(i)) {
        a(ii, ii) += nb.weight;
        a(ii, static_cast<Eigen::Index>(nb.index)) -= nb.weight;
      }
    }
    if (singular) {
      // Rank-one term α μμᵀ lifts the constant kernel; for a balanced b the
      // solution of the augmented system is the μ-mean-zero solution of L x = b.
      Eigen::Map<const Eigen::VectorXd> mu(g.measures().data(), n);
      const double alpha = a.diagonal().mean() / mu.squaredNorm();
      a.noalias() += alpha * mu * mu.transpose();
    }
    return a;
  }
};

void remove_mean(std::span<double> r) {
  const double mean = std::accumulate(r.begin(), r.end(), 0.0) / static_cast<double>(r.size());
  for (auto& v : r)
    v -= mean;
}

// Jacobi-preconditioned conjugate gradients on the symmetric form. Stops on
// the true operator residual; the recursively updated residual only gates
// when that check is worth doing.
std::vector<double> conjugate_gradient(const SpdSystem& sys, std::span<const double> b,
                                       double tol, std::size_t max_iters) {
  const std::size_t n = sys.g.size();
  const auto diag = sys.diagonal();
  std::vector<double> x(n, 0.0), r(b.begin(), b.end()), z(n), p(n), q(n);
  if (sys.singular)
    remove_mean(r);

  auto scaled_sup = [&](std::span<const double> v) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      m = std::max(m, std::abs(v[i]) / sys.g.measure(i));
    return m;
  };
  auto dot = [](std::span<const double> a, std::span<const double> c) {
    return std::inner_product(a.begin(), a.end(), c.begin(), 0.0);
  };

  if (scaled_sup(r) < tol)
    return x;

  for (std::size_t i = 0; i < n; ++i)
    z[i] = r[i] / diag[i];
  p = z;
  double rz = dot(r, z);

  for (std::size_t it = 0; it < max_iters; ++it) {
    sys.apply(p, q);
    const double pq = dot(p, q);
    if (!(pq > 0.0))
      break;
    const double alpha = rz / pq;
    for (std::size_t i = 0; i < n; ++i) {
      x[i] += alpha * p[i];
      r[i] -= alpha * q[i];
    }
    if (sys.singular)
      remove_mean(r);

    if (scaled_sup(r) < tol) {
      if (sys.operator_residual(x, b) < tol)
        return x;
      // Recursive residual drifted; restart from the true one.
      std::vector<double> ax(n);
      sys.apply(x, ax);
      for (std::size_t i = 0; i < n; ++i)
        r[i] = b[i] - ax[i];
      if (sys.singular)
        remove_mean(r);
    }

    for (std::size_t i = 0; i < n; ++i)
      z[i] = r[i] / diag[i];
    const double rz_next = dot(r, z);
    const double beta = rz_next / rz;
    rz = rz_next;
    for (std::size_t i = 0; i < n; ++i)
      p[i] = z[i] + beta * p[i];
  }
  if (sys.operator_residual(x, b) < tol)
    return x;
  throw Error(ErrorKind::SolverDivergence,
              "conjugate gradients did not reach residual " + std::to_string(tol) + " in " +
                  std::to_string(max_iters) + " iterations");
}

std::vector<double> direct_solve(const SpdSystem& sys, const Eigen::LDLT<Eigen::MatrixXd>& ldlt,
                                 std::span<const double> b, double tol) {
  const auto n = static_cast<Eigen::Index>(sys.g.size());
  Eigen::Map<const Eigen::VectorXd> rhs(b.data(), n);
  Eigen::VectorXd x = ldlt.solve(rhs);
  // A few steps of iterative refinement against the unaugmented operator.
  for (int step = 0; step < 3; ++step) {
    if (sys.operator_residual({x.data(), sys.g.size()}, b) < tol)
      return {x.data(), x.data() + n};
    std::vector<double> ax(sys.g.size());
    sys.apply({x.data(), sys.g.size()}, ax);
    Eigen::VectorXd r(n);
    for (Eigen::Index i = 0; i < n; ++i)
      r(i) = b[static_cast<std::size_t>(i)] - ax[static_cast<std::size_t>(i)];
    x += ldlt.solve(r);
  }
  if (sys.operator_residual({x.data(), sys.g.size()}, b) < tol)
    return {x.data(), x.data() + n};
  throw Error(ErrorKind::SolverDivergence,
              "dense factorization did not reach residual " + std::to_string(tol));
}

LinearMethod resolve(LinearMethod m, std::size_t n) {
  if (m != LinearMethod::automatic)
    return m;
  return n <= kDirectSolveMaxVertices ? LinearMethod::direct : LinearMethod::conjugate_gradient;
}

} // namespace

// ---------------------------------------------------------------------------

VertexFunction solve_poisson(const WeightedGraph& g, const VertexFunction& f,
                             const LinearSolveSettings& s) {
  s.validate();
  require_on_graph(g, f);
  const double total = integrate(g, f);
  const double f_sup = sup_norm(f.values());
  if (std::abs(total) > 1e-9 * (1.0 + f_sup) * g.total_volume())
    throw Error(ErrorKind::IncompatibleSource,
                "integral of source is " + std::to_string(total) + ", expected 0");

  const std::size_t n = g.size();
  SpdSystem sys{g, std::vector<double>(n, 0.0), true};
  // b = μ (f − mean f), which sums to zero.
  const double mean = total / g.total_volume();
  std::vector<double> b(n);
  for (std::size_t i = 0; i < n; ++i)
    b[i] = g.measure(i) * (f[i] - mean);

  const double tol = s.residual_tol * (f_sup + 1.0);
  std::vector<double> x;
  if (n == 1) {
    x.assign(1, 0.0);
  } else if (resolve(s.method, n) == LinearMethod::direct) {
    Eigen::LDLT<Eigen::MatrixXd> ldlt(sys.dense());
    x = direct_solve(sys, ldlt, b, tol);
  } else {
    x = conjugate_gradient(sys, b, tol, s.max_cg_iters.value_or(10 * n));
  }

  double shift = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    shift += g.measure(i) * x[i];
  shift /= g.total_volume();
  for (auto& v : x)
    v -= shift;
  return VertexFunction(g, std::move(x));
}

// ---------------------------------------------------------------------------

struct ShiftedSolver::Impl {
  SpdSystem sys;
  LinearSolveSettings settings;
  LinearMethod method;
  std::optional<Eigen::LDLT<Eigen::MatrixXd>> ldlt;
};

ShiftedSolver::ShiftedSolver(const WeightedGraph& g, const VertexFunction& c,
                             const LinearSolveSettings& s) {
  s.validate();
  require_on_graph(g, c);
  std::vector<double> shift(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!(c[i] > 0.0))
      throw Error(ErrorKind::NonPositiveShift,
                  "shift at vertex '" + g.id(i) + "' is " + std::to_string(c[i]));
    shift[i] = g.measure(i) * c[i];
  }
  impl_ = std::make_unique<Impl>(Impl{SpdSystem{g, std::move(shift), false}, s,
                                      resolve(s.method, g.size()), std::nullopt});
  if (impl_->method == LinearMethod::direct)
    impl_->ldlt.emplace(impl_->sys.dense());
}

ShiftedSolver::~ShiftedSolver() = default;
ShiftedSolver::ShiftedSolver(ShiftedSolver&&) noexcept = default;
ShiftedSolver& ShiftedSolver::operator=(ShiftedSolver&&) noexcept = default;

LinearMethod ShiftedSolver::method() const noexcept { return impl_->method; }

VertexFunction ShiftedSolver::solve(const VertexFunction& rhs) const {
  const auto& g = impl_->sys.g;
  require_on_graph(g, rhs);
  const std::size_t n = g.size();
  std::vector<double> b(n);
  for (std::size_t i = 0; i < n; ++i)
    b[i] = -g.measure(i) * rhs[i];
  const double tol = impl_->settings.residual_tol * (sup_norm(rhs.values()) + 1.0);
  std::vector<double> x =
      impl_->ldlt ? direct_solve(impl_->sys, *impl_->ldlt, b, tol)
                  : conjugate_gradient(impl_->sys, b, tol,
                                       impl_->settings.max_cg_iters.value_or(10 * n));
  return VertexFunction(g, std::move(x));
}

VertexFunction solve_shifted(const WeightedGraph& g, const VertexFunction& c,
                             const VertexFunction& rhs, const LinearSolveSettings& s) {
  return ShiftedSolver(g, c, s).solve(rhs);
}

VertexFunction solve_shifted(const WeightedGraph& g, double c, const VertexFunction& rhs,
                             const LinearSolveSettings& s) {
  if (!(c > 0.0))
    throw Error(ErrorKind::NonPositiveShift, "shift is " + std::to_string(c));
  return ShiftedSolver(g, VertexFunction(g, c), s).solve(rhs);
}

// ---------------------------------------------------------------------------

double residual_sup(const WeightedGraph& g, const VertexFunction& c, const VertexFunction& u,
                    const VertexFunction& rhs) {
  require_on_graph(g, c);
  require_on_graph(g, rhs);
  const auto lap = laplacian(g, u);
  double m = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    m = std::max(m, std::abs(lap[i] - c[i] * u[i] - rhs[i]));
  return m;
}

double residual_sup(const WeightedGraph& g, const VertexFunction& u, const VertexFunction& rhs) {
  require_on_graph(g, rhs);
  const auto lap = laplacian(g, u);
  double m = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i)
    m = std::max(m, std::abs(lap[i] - rhs[i]));
  return m;
}

} // namespace graphvortex
