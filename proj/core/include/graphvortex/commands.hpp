#ifndef GRAPHVORTEX_COMMANDS_HPP
#define GRAPHVORTEX_COMMANDS_HPP

#include <cstddef>
#include <optional>
#include <ostream>
#include <string>

#include "graphvortex/error.hpp"
#include "graphvortex/generators.hpp"

// Command implementations behind the `graphvortex` executable. Each returns
// the process exit code:
//   0 success, 1 I/O or input error, 2 no solution (4πN >= |V|),
//   3 iteration limit or solver divergence.
namespace graphvortex::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInput = 1;
inline constexpr int kExitNoSolution = 2;
inline constexpr int kExitSolver = 3;

int exit_code_for(const Error& e);

enum class Oracle { none, newton };

struct GenerateOptions {
  GraphSpec spec;
  std::optional<std::string> out; // stdout when unset
};

struct CheckOptions {
  std::string graph;
  std::string vortices;
};

struct SolveOptions {
  std::string graph;
  std::string vortices;
  double tol = 1e-10;
  std::size_t max_iters = 10000;
  std::optional<std::string> out;
  std::optional<std::string> trace;
  Oracle oracle = Oracle::none;
};

struct SweepOptions {
  std::string graph;
  std::string vertex;
  long long n_max = 1;
  double tol = 1e-10;
  std::size_t max_iters = 10000;
};

int cmd_generate(const GenerateOptions& opts, std::ostream& out, std::ostream& err);
int cmd_check(const CheckOptions& opts, std::ostream& out, std::ostream& err);
int cmd_solve(const SolveOptions& opts, std::ostream& out, std::ostream& err);
int cmd_sweep(const SweepOptions& opts, std::ostream& out, std::ostream& err);

} // namespace graphvortex::cli

#endif
