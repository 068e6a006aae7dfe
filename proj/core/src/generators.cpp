#include "graphvortex/generators.hpp"

#include <cmath>
#include <string>

#include "graphvortex/error.hpp"

namespace graphvortex {

std::string_view to_string(GraphKind kind) {
  switch (kind) {
  case GraphKind::path: return "path";
  case GraphKind::cycle: return "cycle";
  case GraphKind::complete: return "complete";
  case GraphKind::grid2d: return "grid2d";
  case GraphKind::random_gnp: return "random_gnp";
  }
  return "unknown";
}

std::optional<GraphKind> parse_graph_kind(std::string_view name) {
  for (auto k : {GraphKind::path, GraphKind::cycle, GraphKind::complete, GraphKind::grid2d,
                 GraphKind::random_gnp})
    if (to_string(k) == name)
      return k;
  return std::nullopt;
}

void GraphSpec::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::InvalidSpec, what); };
  if (!(weight > 0.0) || !std::isfinite(weight))
    fail("weight must be positive");
  if (!(measure > 0.0) || !std::isfinite(measure))
    fail("measure must be positive");
  switch (kind) {
  case GraphKind::grid2d:
    if (rows < 1 || cols < 1)
      fail("grid needs rows, cols >= 1");
    break;
  case GraphKind::cycle:
    if (n < 3)
      fail("cycle needs n >= 3");
    break;
  case GraphKind::random_gnp:
    if (!(p > 0.0 && p <= 1.0))
      fail("edge probability must lie in (0, 1]");
    [[fallthrough]];
  default:
    if (n < 1)
      fail("n must be at least 1");
  }
}

namespace {

GraphListing numbered_vertices(const GraphSpec& spec) {
  GraphListing raw;
  raw.vertices.reserve(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i)
    raw.vertices.push_back({"v" + std::to_string(i), spec.measure});
  return raw;
}

void link(GraphListing& raw, std::size_t a, std::size_t b, double w) {
  raw.edges.push_back({raw.vertices[a].id, raw.vertices[b].id, w});
}

} // namespace

WeightedGraph build(const GraphSpec& spec) {
  spec.validate();
  switch (spec.kind) {
  case GraphKind::path: {
    auto raw = numbered_vertices(spec);
    for (std::size_t i = 0; i + 1 < spec.n; ++i)
      link(raw, i, i + 1, spec.weight);
    return WeightedGraph::validate(raw);
  }
  case GraphKind::cycle: {
    auto raw = numbered_vertices(spec);
    for (std::size_t i = 0; i < spec.n; ++i)
      link(raw, i, (i + 1) % spec.n, spec.weight);
    return WeightedGraph::validate(raw);
  }
  case GraphKind::complete: {
    auto raw = numbered_vertices(spec);
    for (std::size_t i = 0; i < spec.n; ++i)
      for (std::size_t j = i + 1; j < spec.n; ++j)
        link(raw, i, j, spec.weight);
    return WeightedGraph::validate(raw);
  }
  case GraphKind::grid2d: {
    GraphListing raw;
    auto at = [&](std::size_t r, std::size_t c) { return r * spec.cols + c; };
    for (std::size_t r = 0; r < spec.rows; ++r)
      for (std::size_t c = 0; c < spec.cols; ++c)
        raw.vertices.push_back({"r" + std::to_string(r) + "c" + std::to_string(c), spec.measure});
    for (std::size_t r = 0; r < spec.rows; ++r)
      for (std::size_t c = 0; c < spec.cols; ++c) {
        if (c + 1 < spec.cols)
          link(raw, at(r, c), at(r, c + 1), spec.weight);
        if (r + 1 < spec.rows)
          link(raw, at(r, c), at(r + 1, c), spec.weight);
      }
    return WeightedGraph::validate(raw);
  }
  case GraphKind::random_gnp: {
    for (std::size_t attempt = 0; attempt <= spec.max_retries; ++attempt) {
      SeededRng rng(spec.seed + attempt);
      auto raw = numbered_vertices(spec);
      for (std::size_t i = 0; i < spec.n; ++i)
        for (std::size_t j = i + 1; j < spec.n; ++j)
          if (rng.uniform() < spec.p)
            link(raw, i, j, spec.weight);
      try {
        return WeightedGraph::validate(raw);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::DisconnectedGraph)
          throw;
      }
    }
    throw Error(ErrorKind::ConnectivityRetriesExhausted,
                "no connected draw after " + std::to_string(spec.max_retries + 1) + " attempts");
  }
  }
  throw Error(ErrorKind::InvalidSpec, "unknown graph kind");
}

} // namespace graphvortex
