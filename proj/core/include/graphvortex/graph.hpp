#ifndef GRAPHVORTEX_GRAPH_HPP
#define GRAPHVORTEX_GRAPH_HPP

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace graphvortex {

// Unvalidated description of a graph, as read from a file or assembled by a
// builder. `line` fields are carried into error reports when nonzero.
struct VertexEntry {
  std::string id;
  double measure = 1.0;
  std::size_t line = 0;
};

struct EdgeEntry {
  std::string from;
  std::string to;
  double weight = 1.0;
  std::size_t line = 0;
};

struct GraphListing {
  std::vector<VertexEntry> vertices;
  std::vector<EdgeEntry> edges;
};

struct Neighbor {
  std::size_t index;
  double weight;
};

// Connected finite graph with symmetric positive edge weights and a positive
// vertex measure. Immutable; copies share storage and identity.
class WeightedGraph {
public:
  // Enforces connectivity, positivity, no self loops and consistent
  // duplicate entries. A single directed entry denotes the symmetric edge.
  static WeightedGraph validate(const GraphListing& raw);

  std::size_t size() const noexcept;
  std::size_t edge_count() const noexcept;

  std::span<const std::string> ids() const noexcept;
  const std::string& id(std::size_t index) const;
  std::optional<std::size_t> find(std::string_view id) const;
  // Throws UnknownVertex.
  std::size_t index_of(std::string_view id) const;

  std::span<const double> measures() const noexcept;
  double measure(std::size_t index) const { return measures()[index]; }

  // Sorted by neighbor index.
  std::span<const Neighbor> neighbors(std::size_t index) const;

  // |V| = sum of measures, accumulated in index order.
  double total_volume() const noexcept;
  // Sum of edge weights, each undirected edge counted once.
  double total_weight() const noexcept;

  // Identity shared by all copies of this graph and by the functions built on it.
  std::uint64_t token() const noexcept;

  GraphListing to_listing() const;

  // Structural equality: same ids in the same order, bit-identical measures
  // and weights.
  friend bool operator==(const WeightedGraph& a, const WeightedGraph& b);

private:
  struct Data;
  explicit WeightedGraph(std::shared_ptr<const Data> data) : data_(std::move(data)) {}
  std::shared_ptr<const Data> data_;
};

inline WeightedGraph validate_graph(const GraphListing& raw) {
  return WeightedGraph::validate(raw);
}

// One finite real value per vertex of a particular graph.
class VertexFunction {
public:
  explicit VertexFunction(const WeightedGraph& g, double fill = 0.0);
  // Throws GraphMismatch on length mismatch and NonFiniteValue on NaN/Inf.
  VertexFunction(const WeightedGraph& g, std::vector<double> values);

  std::size_t size() const noexcept { return values_.size(); }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const double> values() const noexcept { return values_; }
  std::uint64_t graph_token() const noexcept { return token_; }
  bool belongs_to(const WeightedGraph& g) const noexcept { return token_ == g.token(); }

  double max() const;
  double min() const;

  VertexFunction operator-() const;
  VertexFunction& operator+=(const VertexFunction& other);
  VertexFunction& operator-=(const VertexFunction& other);
  VertexFunction& operator+=(double shift);
  VertexFunction& operator*=(double scale);

  friend VertexFunction operator+(VertexFunction a, const VertexFunction& b) { return a += b; }
  friend VertexFunction operator-(VertexFunction a, const VertexFunction& b) { return a -= b; }
  friend VertexFunction operator+(VertexFunction a, double c) { return a += c; }
  friend VertexFunction operator-(VertexFunction a, double c) { return a += -c; }
  friend VertexFunction operator*(double c, VertexFunction a) { return a *= c; }

private:
  void require_same_graph(const VertexFunction& other) const;
  void require_finite() const;

  std::vector<double> values_;
  std::uint64_t token_;
};

// Throws GraphMismatch unless every function belongs to g.
void require_on_graph(const WeightedGraph& g, const VertexFunction& u);

// Δu(x) = (1/μ(x)) Σ_{y~x} ω_xy (u(y) − u(x))
VertexFunction laplacian(const WeightedGraph& g, const VertexFunction& u);

// Γ(u,v)(x) = (1/2μ(x)) Σ_{y~x} ω_xy (u(y) − u(x))(v(y) − v(x))
VertexFunction gradient_form(const WeightedGraph& g, const VertexFunction& u,
                             const VertexFunction& v);

// |∇u| = sqrt(Γ(u,u))
VertexFunction gradient_norm(const WeightedGraph& g, const VertexFunction& u);

// Σ_x μ(x) u(x), summed in index order.
double integrate(const WeightedGraph& g, const VertexFunction& u);

// (∫|u|^p dμ)^{1/p} for p >= 1; p = +inf gives max |u| and ignores μ.
double lp_norm(const WeightedGraph& g, const VertexFunction& u, double p);

// Plain max |u| without the graph argument.
double sup_norm(std::span<const double> u);

// Dirac mass: 1/μ(z) at z, zero elsewhere.
VertexFunction dirac(const WeightedGraph& g, std::size_t z);
VertexFunction dirac(const WeightedGraph& g, std::string_view z);

} // namespace graphvortex

#endif
