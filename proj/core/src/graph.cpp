#include "graphvortex/graph.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <map>
#include <unordered_map>
#include <utility>

#include "graphvortex/error.hpp"

namespace graphvortex {

struct WeightedGraph::Data {
  std::vector<std::string> ids;
  std::unordered_map<std::string, std::size_t> index;
  std::vector<double> measure;
  std::vector<std::size_t> offsets; // CSR, size n + 1
  std::vector<Neighbor> adjacency;
  double total_volume = 0.0;
  double total_weight = 0.0;
  std::uint64_t token = 0;
};

namespace {

std::uint64_t next_token() {
  static std::atomic<std::uint64_t> counter{1};
  return counter.fetch_add(1, std::memory_order_relaxed);
}

} // namespace

WeightedGraph WeightedGraph::validate(const GraphListing& raw) {
  if (raw.vertices.empty())
    throw Error(ErrorKind::EmptyGraph, "graph has no vertices");

  auto data = std::make_shared<Data>();
  const std::size_t n = raw.vertices.size();
  data->ids.reserve(n);
  data->measure.reserve(n);
  for (const auto& v : raw.vertices) {
    if (!(v.measure > 0.0) || !std::isfinite(v.measure))
      throw Error(ErrorKind::NonPositiveMeasure, "vertex '" + v.id + "'", v.line);
    if (!data->index.emplace(v.id, data->ids.size()).second)
      throw Error(ErrorKind::DuplicateVertex, "vertex '" + v.id + "'", v.line);
    data->ids.push_back(v.id);
    data->measure.push_back(v.measure);
  }

  std::map<std::pair<std::size_t, std::size_t>, double> edges;
  for (const auto& e : raw.edges) {
    auto a = data->index.find(e.from);
    if (a == data->index.end())
      throw Error(ErrorKind::UnknownVertex, "edge endpoint '" + e.from + "'", e.line);
    auto b = data->index.find(e.to);
    if (b == data->index.end())
      throw Error(ErrorKind::UnknownVertex, "edge endpoint '" + e.to + "'", e.line);
    if (a->second == b->second)
      throw Error(ErrorKind::SelfLoop, "vertex '" + e.from + "'", e.line);
    if (!(e.weight > 0.0) || !std::isfinite(e.weight))
      throw Error(ErrorKind::NonPositiveWeight, "edge '" + e.from + "'-'" + e.to + "'", e.line);
    auto key = std::minmax(a->second, b->second);
    auto [it, inserted] = edges.emplace(std::pair{key.first, key.second}, e.weight);
    if (!inserted && it->second != e.weight)
      throw Error(ErrorKind::DuplicateEdge,
                  "edge '" + e.from + "'-'" + e.to + "' listed with unequal weights", e.line);
  }

  std::vector<std::vector<Neighbor>> adjacency(n);
  for (const auto& [key, w] : edges) {
    adjacency[key.first].push_back({key.second, w});
    adjacency[key.second].push_back({key.first, w});
    data->total_weight += w;
  }
  data->offsets.assign(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) {
    std::sort(adjacency[i].begin(), adjacency[i].end(),
              [](const Neighbor& l, const Neighbor& r) { return l.index < r.index; });
    data->offsets[i + 1] = data->offsets[i] + adjacency[i].size();
  }
  data->adjacency.reserve(data->offsets[n]);
  for (auto& row : adjacency)
    data->adjacency.insert(data->adjacency.end(), row.begin(), row.end());

  std::vector<char> seen(n, 0);
  std::vector<std::size_t> stack{0};
  seen[0] = 1;
  std::size_t reached = 1;
  while (!stack.empty()) {
    const std::size_t x = stack.back();
    stack.pop_back();
    for (std::size_t k = data->offsets[x]; k < data->offsets[x + 1]; ++k) {
      const std::size_t y = data->adjacency[k].index;
      if (!seen[y]) {
        seen[y] = 1;
        ++reached;
        stack.push_back(y);
      }
    }
  }
  if (reached != n)
    throw Error(ErrorKind::DisconnectedGraph,
                std::to_string(n - reached) + " vertices unreachable from '" + data->ids[0] + "'");

  for (double m : data->measure)
    data->total_volume += m;
  data->token = next_token();
  return WeightedGraph(std::move(data));
}

std::size_t WeightedGraph::size() const noexcept { return data_->ids.size(); }
std::size_t WeightedGraph::edge_count() const noexcept { return data_->adjacency.size() / 2; }
std::span<const std::string> WeightedGraph::ids() const noexcept { return data_->ids; }
const std::string& WeightedGraph::id(std::size_t index) const { return data_->ids.at(index); }

std::optional<std::size_t> WeightedGraph::find(std::string_view id) const {
  auto it = data_->index.find(std::string(id));
  if (it == data_->index.end())
    return std::nullopt;
  return it->second;
}

std::size_t WeightedGraph::index_of(std::string_view id) const {
  if (auto i = find(id))
    return *i;
  throw Error(ErrorKind::UnknownVertex, "vertex '" + std::string(id) + "'");
}

std::span<const double> WeightedGraph::measures() const noexcept { return data_->measure; }

std::span<const Neighbor> WeightedGraph::neighbors(std::size_t index) const {
  const auto& o = data_->offsets;
  return std::span<const Neighbor>(data_->adjacency).subspan(o[index], o[index + 1] - o[index]);
}

double WeightedGraph::total_volume() const noexcept { return data_->total_volume; }
double WeightedGraph::total_weight() const noexcept { return data_->total_weight; }
std::uint64_t WeightedGraph::token() const noexcept { return data_->token; }

GraphListing WeightedGraph::to_listing() const {
  GraphListing out;
  const std::size_t n = size();
  out.vertices.reserve(n);
  for (std::size_t i = 0; i < n; ++i)
    out.vertices.push_back({data_->ids[i], data_->measure[i]});
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& nb : neighbors(i))
      if (nb.index > i)
        out.edges.push_back({data_->ids[i], data_->ids[nb.index], nb.weight});
  return out;
}

bool operator==(const WeightedGraph& a, const WeightedGraph& b) {
  if (a.data_ == b.data_)
    return true;
  const auto& l = *a.data_;
  const auto& r = *b.data_;
  if (l.ids != r.ids || l.offsets != r.offsets)
    return false;
  for (std::size_t i = 0; i < l.measure.size(); ++i)
    if (std::bit_cast<std::uint64_t>(l.measure[i]) != std::bit_cast<std::uint64_t>(r.measure[i]))
      return false;
  for (std::size_t k = 0; k < l.adjacency.size(); ++k)
    if (l.adjacency[k].index != r.adjacency[k].index ||
        std::bit_cast<std::uint64_t>(l.adjacency[k].weight) !=
            std::bit_cast<std::uint64_t>(r.adjacency[k].weight))
      return false;
  return true;
}

// ---------------------------------------------------------------------------

VertexFunction::VertexFunction(const WeightedGraph& g, double fill)
    : values_(g.size(), fill), token_(g.token()) {
  require_finite();
}

VertexFunction::VertexFunction(const WeightedGraph& g, std::vector<double> values)
    : values_(std::move(values)), token_(g.token()) {
  if (values_.size() != g.size())
    throw Error(ErrorKind::GraphMismatch, "function has " + std::to_string(values_.size()) +
                                              " values, graph has " + std::to_string(g.size()) +
                                              " vertices");
  require_finite();
}

double VertexFunction::max() const { return *std::max_element(values_.begin(), values_.end()); }
double VertexFunction::min() const { return *std::min_element(values_.begin(), values_.end()); }

VertexFunction VertexFunction::operator-() const {
  VertexFunction out(*this);
  for (auto& v : out.values_)
    v = -v;
  return out;
}

VertexFunction& VertexFunction::operator+=(const VertexFunction& other) {
  require_same_graph(other);
  for (std::size_t i = 0; i < values_.size(); ++i)
    values_[i] += other.values_[i];
  require_finite();
  return *this;
}

VertexFunction& VertexFunction::operator-=(const VertexFunction& other) {
  require_same_graph(other);
  for (std::size_t i = 0; i < values_.size(); ++i)
    values_[i] -= other.values_[i];
  require_finite();
  return *this;
}

VertexFunction& VertexFunction::operator+=(double shift) {
  for (auto& v : values_)
    v += shift;
  require_finite();
  return *this;
}

VertexFunction& VertexFunction::operator*=(double scale) {
  for (auto& v : values_)
    v *= scale;
  require_finite();
  return *this;
}

void VertexFunction::require_same_graph(const VertexFunction& other) const {
  if (other.token_ != token_)
    throw Error(ErrorKind::GraphMismatch, "functions live on different graphs");
}

void VertexFunction::require_finite() const {
  for (double v : values_)
    if (!std::isfinite(v))
      throw Error(ErrorKind::NonFiniteValue, "vertex function holds a non-finite value");
}

void require_on_graph(const WeightedGraph& g, const VertexFunction& u) {
  if (!u.belongs_to(g))
    throw Error(ErrorKind::GraphMismatch, "function does not belong to this graph");
}

// ---------------------------------------------------------------------------

VertexFunction laplacian(const WeightedGraph& g, const VertexFunction& u) {
  require_on_graph(g, u);
  std::vector<double> out(g.size());
  for (std::size_t x = 0; x < g.size(); ++x) {
    double acc = 0.0;
    for (const auto& nb : g.neighbors(x))
      acc += nb.weight * (u[nb.index] - u[x]);
    out[x] = acc / g.measure(x);
  }
  return VertexFunction(g, std::move(out));
}

VertexFunction gradient_form(const WeightedGraph& g, const VertexFunction& u,
                             const VertexFunction& v) {
  require_on_graph(g, u);
  require_on_graph(g, v);
  std::vector<double> out(g.size());
  for (std::size_t x = 0; x < g.size(); ++x) {
    double acc = 0.0;
    for (const auto& nb : g.neighbors(x))
      acc += nb.weight * ((u[nb.index] - u[x]) * (v[nb.index] - v[x]));
    out[x] = acc / (2.0 * g.measure(x));
  }
  return VertexFunction(g, std::move(out));
}

VertexFunction gradient_norm(const WeightedGraph& g, const VertexFunction& u) {
  auto gamma = gradient_form(g, u, u);
  std::vector<double> out(gamma.values().begin(), gamma.values().end());
  for (auto& v : out)
    v = std::sqrt(std::max(v, 0.0));
  return VertexFunction(g, std::move(out));
}

double integrate(const WeightedGraph& g, const VertexFunction& u) {
  require_on_graph(g, u);
  double acc = 0.0;
  for (std::size_t x = 0; x < g.size(); ++x)
    acc += g.measure(x) * u[x];
  return acc;
}

double sup_norm(std::span<const double> u) {
  double m = 0.0;
  for (double v : u)
    m = std::max(m, std::abs(v));
  return m;
}

double lp_norm(const WeightedGraph& g, const VertexFunction& u, double p) {
  require_on_graph(g, u);
  if (std::isinf(p) && p > 0)
    return sup_norm(u.values());
  if (!(p >= 1.0) || !std::isfinite(p))
    throw Error(ErrorKind::InvalidExponent, "exponent must be >= 1 or +inf");
  double acc = 0.0;
  for (std::size_t x = 0; x < g.size(); ++x)
    acc += g.measure(x) * std::pow(std::abs(u[x]), p);
  return std::pow(acc, 1.0 / p);
}

VertexFunction dirac(const WeightedGraph& g, std::size_t z) {
  if (z >= g.size())
    throw Error(ErrorKind::UnknownVertex, "vertex index " + std::to_string(z));
  std::vector<double> out(g.size(), 0.0);
  out[z] = 1.0 / g.measure(z);
  return VertexFunction(g, std::move(out));
}

VertexFunction dirac(const WeightedGraph& g, std::string_view z) {
  return dirac(g, g.index_of(z));
}

} // namespace graphvortex
