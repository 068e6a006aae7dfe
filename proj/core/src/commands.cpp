#include "graphvortex/commands.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <variant>

#include "graphvortex/io.hpp"
#include "graphvortex/vortex_solver.hpp"

namespace graphvortex::cli {

int exit_code_for(const Error& e) {
  switch (e.kind()) {
  case ErrorKind::ThresholdViolated:
    return kExitNoSolution;
  case ErrorKind::MaxItersExceeded:
  case ErrorKind::SolverDivergence:
    return kExitSolver;
  default:
    return kExitInput;
  }
}

namespace {

template <class Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }
}

void print_verdict(std::ostream& out, double volume, double four_pi_n, double margin) {
  out << "volume " << format_real(volume) << '\n'
      << "four_pi_n " << format_real(four_pi_n) << '\n'
      << "margin " << format_real(margin) << '\n'
      << "verdict " << (margin > 0.0 ? "SOLVABLE" : "NO_SOLUTION") << '\n';
}

SolverSettings settings_with(double tol, std::size_t max_iters) {
  SolverSettings s;
  s.conv_tol = tol;
  s.max_iters = max_iters;
  return s;
}

} // namespace

int cmd_generate(const GenerateOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto text = serialize_graph(build(opts.spec));
    if (opts.out)
      write_text_file(*opts.out, text);
    else
      out << text;
    return kExitOk;
  });
}

int cmd_check(const CheckOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto g = parse_graph(read_text_file(opts.graph));
    const auto vc = parse_vortices(read_text_file(opts.vortices), g);
    const double margin = existence_check(g, vc);
    print_verdict(out, g.total_volume(), four_pi_times(vc.total()), margin);
    return margin > 0.0 ? kExitOk : kExitNoSolution;
  });
}

int cmd_solve(const SolveOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const auto g = parse_graph(read_text_file(opts.graph));
    const auto vc = parse_vortices(read_text_file(opts.vortices), g);
    const auto s = settings_with(opts.tol, opts.max_iters);

    const auto outcome = solve(g, vc, s);
    if (const auto* none = std::get_if<NoSolution>(&outcome)) {
      print_verdict(out, none->volume, none->four_pi_n, none->margin);
      return kExitNoSolution;
    }
    const auto& report = std::get<SolveReport>(outcome);
    if (opts.out)
      write_text_file(*opts.out, solution_csv(g, vc, report.u));
    if (opts.trace)
      write_text_file(*opts.trace, trace_text(report.trace));

    print_verdict(out, g.total_volume(), four_pi_times(vc.total()), report.existence_margin);
    out << "iterations " << report.trace.iterations << '\n'
        << "K " << format_real(report.K_used) << '\n'
        << "residual_sup " << format_real(report.residual_sup) << '\n'
        << "integral_gap " << format_real(report.integral_gap) << '\n';
    if (opts.oracle == Oracle::newton) {
      const auto v = newton_oracle(g, report.u0, report.f, vc.total(), s);
      double gap = 0.0;
      for (std::size_t i = 0; i < g.size(); ++i)
        gap = std::max(gap, std::abs(v[i] - report.W[i]));
      out << "oracle_disagreement " << format_real(gap) << '\n';
    }
    return kExitOk;
  });
}

int cmd_sweep(const SweepOptions& opts, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    if (opts.n_max < 1)
      throw Error(ErrorKind::InvalidSettings, "--n-max must be at least 1");
    const auto g = parse_graph(read_text_file(opts.graph));
    const std::size_t z = g.index_of(opts.vertex);
    const auto s = settings_with(opts.tol, opts.max_iters);

    int code = kExitOk;
    out << "n,four_pi_n,margin,verdict,iterations,min_u,max_u\n";
    for (long long n = 1; n <= opts.n_max; ++n) {
      const VortexConfig vc(g, std::vector<Vortex>{{z, static_cast<int>(n)}});
      out << n << ',' << format_real(four_pi_times(n)) << ','
          << format_real(existence_check(g, vc)) << ',';
      try {
        const auto outcome = solve(g, vc, s);
        if (std::holds_alternative<NoSolution>(outcome)) {
          out << "NO_SOLUTION,-,-,-\n";
          continue;
        }
        const auto& r = std::get<SolveReport>(outcome);
        out << "SOLVABLE," << r.trace.iterations << ',' << format_real(r.u.min()) << ','
            << format_real(r.u.max()) << '\n';
      } catch (const Error& e) {
        out << "SOLVER_ERROR,-,-,-\n";
        err << "error: n=" << n << ": " << e.what() << '\n';
        code = std::max(code, exit_code_for(e));
      }
    }
    return code;
  });
}

} // namespace graphvortex::cli
