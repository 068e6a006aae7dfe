#ifndef GRAPHVORTEX_GENERATORS_HPP
#define GRAPHVORTEX_GENERATORS_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string_view>

#include "graphvortex/graph.hpp"

namespace graphvortex {

enum class GraphKind { path, cycle, complete, grid2d, random_gnp };

std::string_view to_string(GraphKind kind);
std::optional<GraphKind> parse_graph_kind(std::string_view name);

struct GraphSpec {
  GraphKind kind = GraphKind::path;
  std::size_t n = 2;    // path, cycle, complete, random_gnp
  std::size_t rows = 1; // grid2d
  std::size_t cols = 1; // grid2d
  double p = 0.5;       // random_gnp edge probability
  std::uint64_t seed = 0;
  double weight = 1.0;
  double measure = 1.0;
  std::size_t max_retries = 100;

  // Throws InvalidSpec.
  void validate() const;
};

// Portable uniform draws: mt19937_64 (fully specified by the standard) with
// doubles formed from the top 53 bits, so sequences match across platforms.
class SeededRng {
public:
  explicit SeededRng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Uniform in [0, bound).
  std::size_t index(std::size_t bound) {
    return static_cast<std::size_t>(uniform() * static_cast<double>(bound));
  }

private:
  std::mt19937_64 engine_;
};

// Vertex ids are "v0".."v{n-1}", or "r{i}c{j}" for grids. random_gnp retries
// with seed + 1, seed + 2, ... until the draw is connected.
// Throws InvalidSpec, ConnectivityRetriesExhausted.
WeightedGraph build(const GraphSpec& spec);

} // namespace graphvortex

#endif
