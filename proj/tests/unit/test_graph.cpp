#include <cmath>
#include <limits>
#include <numbers>

#include "doctest.h"
#include "graphvortex/error.hpp"
#include "graphvortex/graph.hpp"
#include "instances.hpp"

using namespace graphvortex;

namespace {

WeightedGraph pair_graph(double mu_a = 1.0, double mu_b = 1.0, double w = 1.0) {
  return WeightedGraph::validate({{{"a", mu_a}, {"b", mu_b}}, {{"a", "b", w}}});
}

ErrorKind kind_of(const GraphListing& raw) {
  try {
    WeightedGraph::validate(raw);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("listing was accepted");
  return ErrorKind::ParseError;
}

} // namespace

TEST_CASE("validate_graph accepts the smallest connected graphs") {
  const auto g = pair_graph();
  CHECK(g.size() == 2);
  CHECK(g.edge_count() == 1);
  CHECK(g.total_volume() == 2.0);
  CHECK(g.neighbors(0)[0].index == 1);

  const auto single = WeightedGraph::validate({{{"z", 20.0}}, {}});
  CHECK(single.size() == 1);
  CHECK(single.total_volume() == 20.0);
}

TEST_CASE("validate_graph rejects malformed listings") {
  CHECK(kind_of({}) == ErrorKind::EmptyGraph);
  CHECK(kind_of({{{"a", 1.0}, {"b", 1.0}}, {}}) == ErrorKind::DisconnectedGraph);
  CHECK(kind_of({{{"a", 1.0}}, {{"a", "a", 1.0}}}) == ErrorKind::SelfLoop);
  CHECK(kind_of({{{"a", 0.0}}, {}}) == ErrorKind::NonPositiveMeasure);
  CHECK(kind_of({{{"a", -1.0}}, {}}) == ErrorKind::NonPositiveMeasure);
  CHECK(kind_of({{{"a", 1.0}, {"b", 1.0}}, {{"a", "b", 0.0}}}) == ErrorKind::NonPositiveWeight);
  CHECK(kind_of({{{"a", 1.0}, {"b", 1.0}}, {{"a", "b", 1.0}, {"b", "a", 2.0}}}) ==
        ErrorKind::DuplicateEdge);
  CHECK(kind_of({{{"a", 1.0}, {"a", 1.0}}, {}}) == ErrorKind::DuplicateVertex);
  CHECK(kind_of({{{"a", 1.0}}, {{"a", "q", 1.0}}}) == ErrorKind::UnknownVertex);
  CHECK(kind_of({{{"a", std::numeric_limits<double>::quiet_NaN()}}, {}}) ==
        ErrorKind::NonPositiveMeasure);
}

TEST_CASE("repeated edge entries with equal weights denote one symmetric edge") {
  const auto g =
      WeightedGraph::validate({{{"a", 1.0}, {"b", 1.0}}, {{"a", "b", 1.5}, {"b", "a", 1.5}}});
  CHECK(g.edge_count() == 1);
  CHECK(g.total_weight() == 1.5);
}

TEST_CASE("errors carry the source line") {
  GraphListing raw{{{"a", 1.0, 2}}, {{"a", "a", 1.0, 5}}};
  try {
    WeightedGraph::validate(raw);
    FAIL("accepted");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::SelfLoop);
    CHECK(e.line() == 5);
  }
}

TEST_CASE("VertexFunction enforces length and finiteness") {
  const auto g = pair_graph();
  CHECK_THROWS_AS(VertexFunction(g, std::vector<double>{1.0}), Error);
  CHECK_THROWS_AS(VertexFunction(g, std::vector<double>{1.0, std::nan("")}), Error);
  const auto other = pair_graph();
  CHECK_THROWS_AS(VertexFunction(g, 1.0) + VertexFunction(other, 1.0), Error);
}

TEST_CASE("laplacian hand values") {
  const auto g = pair_graph();
  const auto lap = laplacian(g, VertexFunction(g, std::vector<double>{0.0, 1.0}));
  CHECK(lap[0] == 1.0);
  CHECK(lap[1] == -1.0);

  const auto flat = laplacian(g, VertexFunction(g, 3.7));
  CHECK(flat[0] == 0.0);
  CHECK(flat[1] == 0.0);

  CHECK_THROWS_AS(laplacian(g, VertexFunction(pair_graph(), 0.0)), Error);
}

TEST_CASE("gradient form and gradient norm hand values") {
  const auto g = pair_graph();
  const VertexFunction u(g, std::vector<double>{0.0, 1.0});
  const auto gamma = gradient_form(g, u, u);
  CHECK(gamma[0] == 0.5);
  CHECK(gamma[1] == 0.5);
  const auto norm = gradient_norm(g, u);
  CHECK(norm[0] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
  CHECK(norm[1] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));

  const auto zero = gradient_form(g, u, VertexFunction(g, -2.0));
  CHECK(zero[0] == 0.0);
  CHECK(zero[1] == 0.0);
  const auto flat = gradient_norm(g, VertexFunction(g, 5.0));
  CHECK(flat.max() == 0.0);
}

TEST_CASE("integrate and lp norms") {
  const auto g = pair_graph();
  CHECK(integrate(g, VertexFunction(g, 1.0)) == g.total_volume());
  CHECK(integrate(g, VertexFunction(g, 0.0)) == 0.0);
  const auto heavy = pair_graph(10.0, 10.0);
  CHECK(integrate(heavy, VertexFunction(heavy, std::vector<double>{-std::numbers::pi,
                                                                   std::numbers::pi})) == 0.0);

  const VertexFunction u(g, std::vector<double>{3.0, -4.0});
  CHECK(lp_norm(g, u, 2.0) == doctest::Approx(5.0).epsilon(1e-15));
  CHECK(lp_norm(g, u, std::numeric_limits<double>::infinity()) == 4.0);
  CHECK(lp_norm(g, VertexFunction(g, 1.0), 1.0) == g.total_volume());
  CHECK_THROWS_AS(lp_norm(g, u, 0.5), Error);
  CHECK_THROWS_AS(lp_norm(g, u, std::nan("")), Error);
}

TEST_CASE("dirac masses") {
  const auto g = pair_graph(1.0, 10.0);
  const auto at_a = dirac(g, "a");
  CHECK(at_a[0] == 1.0);
  CHECK(at_a[1] == 0.0);
  const auto at_b = dirac(g, "b");
  CHECK(at_b[1] == doctest::Approx(0.1).epsilon(1e-15));
  CHECK_THROWS_AS(dirac(g, "nope"), Error);

  SeededRng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const auto h = testing::random_weighted_graph(rng, 2 + rng.index(30), 0.1, 5.0, 0.01, 100.0);
    const auto z = rng.index(h.size());
    CHECK(std::abs(integrate(h, dirac(h, z)) - 1.0) <= 1e-15);
  }
}

TEST_CASE("laplacian agrees with a dense matrix oracle") {
  SeededRng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto g = testing::random_weighted_graph(rng, 1 + rng.index(40));
    const auto u = testing::random_function(g, rng, -5.0, 5.0);
    const auto m = testing::dense_laplacian(g);
    const auto lap = laplacian(g, u);
    for (std::size_t i = 0; i < g.size(); ++i) {
      double ref = 0.0;
      for (std::size_t j = 0; j < g.size(); ++j)
        ref += m[i][j] * u[j];
      CHECK(lap[i] == doctest::Approx(ref).epsilon(1e-12).scale(10.0));
    }
  }
}

TEST_CASE("discrete calculus identities on random graphs") {
  SeededRng rng(2026);
  for (int trial = 0; trial < 120; ++trial) {
    const auto g = testing::random_weighted_graph(rng, 1 + rng.index(60), 0.01, 10.0, 0.01, 10.0);
    const auto u = testing::random_function(g, rng, -10.0, 10.0);
    const auto psi = testing::random_function(g, rng, -10.0, 10.0);

    // ∫Δu dμ = 0
    const double div = integrate(g, laplacian(g, u));
    CHECK(std::abs(div) <= 1e-10 * (1.0 + sup_norm(u.values())) * g.total_weight());
    CHECK(std::abs(div) <= 1e-12 * sup_norm(u.values()) * g.total_weight() + 1e-300);

    // ∫Γ(u,ψ) dμ = −∫ψ Δu dμ
    const double lhs = integrate(g, gradient_form(g, u, psi));
    const auto lap = laplacian(g, u);
    double rhs = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i)
      rhs -= g.measure(i) * psi[i] * lap[i];
    for (const auto& e : g.to_listing().edges) {
      const auto a = g.index_of(e.from), b = g.index_of(e.to);
      scale += e.weight * std::abs(u[a] - u[b]) * std::abs(psi[a] - psi[b]);
    }
    CHECK(std::abs(lhs - rhs) <= 1e-10 * (scale + 1e-300) + 1e-300);

    // Γ(u,u) >= 0, symmetry, bilinearity
    CHECK(gradient_form(g, u, u).min() >= 0.0);
    const auto uv = gradient_form(g, u, psi);
    const auto vu = gradient_form(g, psi, u);
    for (std::size_t i = 0; i < g.size(); ++i)
      CHECK(uv[i] == vu[i]);
    const auto combo = gradient_form(g, 2.0 * u + psi, psi);
    const auto uu = gradient_form(g, psi, psi);
    for (std::size_t i = 0; i < g.size(); ++i)
      CHECK(combo[i] == doctest::Approx(2.0 * uv[i] + uu[i]).epsilon(1e-12).scale(1.0));

    // |∇u|² = Γ(u,u)
    const auto norm = gradient_norm(g, u);
    const auto gamma = gradient_form(g, u, u);
    for (std::size_t i = 0; i < g.size(); ++i)
      CHECK(norm[i] * norm[i] == doctest::Approx(gamma[i]).epsilon(1e-14).scale(1.0));

    // Δ(u + c) = Δu
    const auto shifted = laplacian(g, u + 0.0);
    for (std::size_t i = 0; i < g.size(); ++i)
      CHECK(shifted[i] == lap[i]);
    const double c = 0.25 * static_cast<double>(trial);
    const auto lap_c = laplacian(g, u + c);
    for (std::size_t i = 0; i < g.size(); ++i)
      CHECK(lap_c[i] == doctest::Approx(lap[i]).epsilon(1e-12).scale(1e-9));
  }
}

TEST_CASE("graph copies share identity, reparsed graphs compare equal") {
  const auto g = pair_graph(1.0, 2.0, 3.0);
  const auto copy = g;
  CHECK(copy.token() == g.token());
  const auto rebuilt = WeightedGraph::validate(g.to_listing());
  CHECK(rebuilt.token() != g.token());
  CHECK(rebuilt == g);
  CHECK_FALSE(pair_graph(1.0, 2.0, 3.5) == g);
}
