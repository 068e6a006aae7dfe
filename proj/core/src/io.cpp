#include "graphvortex/io.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "graphvortex/error.hpp"

namespace graphvortex {

std::string format_real(double value) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  if (ec != std::errc{})
    throw Error(ErrorKind::Io, "could not format real");
  return std::string(buf.data(), end);
}

namespace {

struct Line {
  std::size_t number;
  std::vector<std::string_view> fields;
};

// Splits text into non-empty lines of whitespace-separated fields, with
// comments removed.
std::vector<Line> tokenize(std::string_view text) {
  std::vector<Line> lines;
  std::size_t number = 0;
  while (!text.empty()) {
    ++number;
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    if (auto hash = line.find('#'); hash != std::string_view::npos)
      line = line.substr(0, hash);

    Line out{number, {}};
    std::size_t i = 0;
    while (i < line.size()) {
      while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
        ++i;
      const std::size_t start = i;
      while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])))
        ++i;
      if (i > start)
        out.fields.push_back(line.substr(start, i - start));
    }
    if (!out.fields.empty())
      lines.push_back(std::move(out));
  }
  return lines;
}

double parse_real(std::string_view field, std::size_t line) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size())
    throw Error(ErrorKind::ParseError, "expected a real number, got '" + std::string(field) + "'",
                line);
  return value;
}

long long parse_integer(std::string_view field, std::size_t line) {
  long long value = 0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || ptr != field.data() + field.size())
    throw Error(ErrorKind::ParseError, "expected an integer, got '" + std::string(field) + "'",
                line);
  return value;
}

} // namespace

GraphListing parse_graph_listing(std::string_view text) {
  enum class Section { none, vertices, edges } section = Section::none;
  GraphListing raw;
  for (const auto& line : tokenize(text)) {
    const auto& f = line.fields;
    if (f.size() == 1 && f[0] == "[vertices]") {
      section = Section::vertices;
      continue;
    }
    if (f.size() == 1 && f[0] == "[edges]") {
      section = Section::edges;
      continue;
    }
    switch (section) {
    case Section::none:
      throw Error(ErrorKind::ParseError, "data before a [vertices] or [edges] header",
                  line.number);
    case Section::vertices:
      if (f.size() != 2)
        throw Error(ErrorKind::ParseError, "vertex line needs '<id> <mu>'", line.number);
      raw.vertices.push_back({std::string(f[0]), parse_real(f[1], line.number), line.number});
      break;
    case Section::edges:
      if (f.size() != 3)
        throw Error(ErrorKind::ParseError, "edge line needs '<id1> <id2> <weight>'", line.number);
      raw.edges.push_back({std::string(f[0]), std::string(f[1]), parse_real(f[2], line.number),
                           line.number});
      break;
    }
  }
  return raw;
}

WeightedGraph parse_graph(std::string_view text) {
  return WeightedGraph::validate(parse_graph_listing(text));
}

std::string serialize_graph(const WeightedGraph& g) {
  const auto raw = g.to_listing();
  std::string out = "[vertices]\n";
  for (const auto& v : raw.vertices)
    out += v.id + ' ' + format_real(v.measure) + '\n';
  out += "[edges]\n";
  for (const auto& e : raw.edges)
    out += e.from + ' ' + e.to + ' ' + format_real(e.weight) + '\n';
  return out;
}

VortexConfig parse_vortices(std::string_view text, const WeightedGraph& g) {
  std::vector<VortexEntry> entries;
  for (const auto& line : tokenize(text)) {
    if (line.fields.size() != 2)
      throw Error(ErrorKind::ParseError, "vortex line needs '<vertex-id> <multiplicity>'",
                  line.number);
    entries.push_back({std::string(line.fields[0]), parse_integer(line.fields[1], line.number),
                       line.number});
  }
  return VortexConfig(g, entries);
}

std::string serialize_vortices(const WeightedGraph& g, const VortexConfig& vc) {
  vc.require_graph(g);
  std::string out;
  for (const auto& v : vc.vortices())
    out += g.id(v.vertex) + ' ' + std::to_string(v.multiplicity) + '\n';
  return out;
}

std::string solution_csv(const WeightedGraph& g, const VortexConfig& vc,
                         const VertexFunction& u) {
  const auto residual = equation_residual(g, vc, u);
  std::string out = "vertex,u,exp_u,residual\n";
  for (std::size_t i = 0; i < g.size(); ++i)
    out += g.id(i) + ',' + format_real(u[i]) + ',' + format_real(std::exp(u[i])) + ',' +
           format_real(residual[i]) + '\n';
  return out;
}

VertexFunction read_solution_csv(std::string_view text, const WeightedGraph& g) {
  std::vector<double> u;
  std::size_t number = 0;
  bool header = true;
  while (!text.empty()) {
    ++number;
    const auto eol = text.find('\n');
    std::string_view line = text.substr(0, eol);
    text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
    if (line.empty())
      continue;
    if (header) {
      if (line != "vertex,u,exp_u,residual")
        throw Error(ErrorKind::ParseError, "unexpected solution header", number);
      header = false;
      continue;
    }
    const auto c1 = line.find(',');
    const auto c2 = line.find(',', c1 == std::string_view::npos ? c1 : c1 + 1);
    if (c1 == std::string_view::npos || c2 == std::string_view::npos)
      throw Error(ErrorKind::ParseError, "solution row needs four columns", number);
    const auto id = line.substr(0, c1);
    if (u.size() >= g.size() || g.id(u.size()) != id)
      throw Error(ErrorKind::ParseError, "row for '" + std::string(id) + "' out of graph order",
                  number);
    u.push_back(parse_real(line.substr(c1 + 1, c2 - c1 - 1), number));
  }
  if (u.size() != g.size())
    throw Error(ErrorKind::ParseError, "solution has " + std::to_string(u.size()) +
                                           " rows, graph has " + std::to_string(g.size()));
  return VertexFunction(g, std::move(u));
}

std::string trace_text(const IterationTrace& trace) {
  std::string out = "iteration,sup_diff\n";
  for (const auto& r : trace.records)
    out += std::to_string(r.iteration) + ',' + format_real(r.sup_diff) + '\n';
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    throw Error(ErrorKind::Io, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    throw Error(ErrorKind::Io, "cannot write '" + path.string() + "'");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out)
    throw Error(ErrorKind::Io, "write failed for '" + path.string() + "'");
}

} // namespace graphvortex
