#ifndef GRAPHVORTEX_IO_HPP
#define GRAPHVORTEX_IO_HPP

#include <filesystem>
#include <string>
#include <string_view>

#include "graphvortex/graph.hpp"
#include "graphvortex/vortex_solver.hpp"

// Text formats.
//
// Graph file:
//     [vertices]
//     <id> <mu>
//     [edges]
//     <id1> <id2> <weight>
// Vortex file: one `<vertex-id> <multiplicity>` per line.
// In both, `#` starts a comment and fields are whitespace separated.
//
// Solution CSV: header `vertex,u,exp_u,residual`, one row per vertex in graph
// order. All reals are written in shortest round-trip form.
namespace graphvortex {

// Shortest decimal that parses back to the same double.
std::string format_real(double value);

// Throws ParseError (with line number) and every validate_graph error.
GraphListing parse_graph_listing(std::string_view text);
WeightedGraph parse_graph(std::string_view text);
std::string serialize_graph(const WeightedGraph& g);

// Throws ParseError, UnknownVertex, DuplicateVortex, NonPositiveMultiplicity.
VortexConfig parse_vortices(std::string_view text, const WeightedGraph& g);
std::string serialize_vortices(const WeightedGraph& g, const VortexConfig& vc);

std::string solution_csv(const WeightedGraph& g, const VortexConfig& vc, const VertexFunction& u);
// Reads back the u column. Throws ParseError.
VertexFunction read_solution_csv(std::string_view text, const WeightedGraph& g);

// `iteration,sup_diff` header then one line per monotone step.
std::string trace_text(const IterationTrace& trace);

// Throw Io.
std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

} // namespace graphvortex

#endif
