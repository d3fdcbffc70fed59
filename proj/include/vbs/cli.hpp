#pragma once

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vbs/error.hpp"
#include "vbs/io.hpp"
#include "vbs/markov_tree.hpp"
#include "vbs/oracle.hpp"
#include "vbs/problem.hpp"
#include "vbs/propagation.hpp"

namespace vbs {

enum ExitCode : int {
  kOk = 0,
  kParseFailure = 1,
  kSolverFailure = 2,
  kCheckMismatch = 3,
  kSizeCap = 4,
};

namespace detail {

inline EliminationOrder parse_order(const std::string& spec, const Problem& p) {
  EliminationOrder order;
  std::stringstream ss(spec);
  std::string name;
  while (std::getline(ss, name, ',')) {
    const auto names = p.names();
    auto it = std::find(names.begin(), names.end(), name);
    if (it == names.end()) throw DomainError("--order names unknown variable '" + name + "'");
    order.push_back(VarId(it - names.begin()));
  }
  return order;
}

inline Problem load_problem(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(0, "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_problem(buf.str());
}

}  // namespace detail

/// Entry point shared by the `vbs` binary and the tests. `args` excludes the
/// program name.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Discrete optimization by local computation on rooted Markov trees", "vbs"};
  app.require_subcommand(1);

  std::string path;
  std::string order_spec;
  bool all_optima = false;
  bool trace = false;
  std::string format = "text";
  std::size_t max_joint = kDefaultMaxJoint;
  std::size_t max_optima = 1024;

  auto add_file = [&](CLI::App* cmd) {
    cmd->add_option("problem", path, "Problem file")->required();
  };
  auto add_order = [&](CLI::App* cmd) {
    cmd->add_option("--order", order_spec, "Comma-separated elimination order");
  };

  CLI::App* solve_cmd = app.add_subcommand("solve", "Solve by local computation");
  add_file(solve_cmd);
  add_order(solve_cmd);
  solve_cmd->add_flag("--all-optima", all_optima, "Enumerate every optimal configuration");
  solve_cmd->add_flag("--trace", trace, "Print inward and outward message tables");
  solve_cmd->add_option("--max-optima", max_optima, "Cap on enumerated optima");

  CLI::App* oracle_cmd = app.add_subcommand("oracle", "Solve by exhaustive search");
  add_file(oracle_cmd);
  oracle_cmd->add_option("--max-joint", max_joint, "Cap on joint table entries");

  CLI::App* check_cmd = app.add_subcommand("check", "Compare the solver against the oracle");
  add_file(check_cmd);
  add_order(check_cmd);
  check_cmd->add_flag("--all-optima", all_optima, "Also compare optima sets");
  check_cmd->add_option("--max-joint", max_joint, "Cap on joint table entries");
  check_cmd->add_option("--max-optima", max_optima, "Cap on enumerated optima");

  CLI::App* tree_cmd = app.add_subcommand("tree", "Print the rooted Markov tree");
  add_file(tree_cmd);
  add_order(tree_cmd);
  tree_cmd->add_option("--format", format, "text or dot")
      ->check(CLI::IsMember({"text", "dot"}));

  std::vector<std::string> argv_store{"vbs"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (std::string& a : argv_store) argv.push_back(a.data());
  try {
    app.parse(int(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    const Problem problem = detail::load_problem(path);
    SolveOptions opts;
    if (!order_spec.empty()) opts.order = detail::parse_order(order_spec, problem);
    opts.all_optima = all_optima;
    opts.trace = trace;
    opts.max_optima = max_optima;

    if (*solve_cmd) {
      const SolveResult r = solve(problem, opts);
      out << format_solve(r, problem);
      if (r.trace) out << format_trace(*r.trace, r.tree, problem);
      return kOk;
    }
    if (*oracle_cmd) {
      out << format_oracle(brute_solve(problem, max_joint), problem);
      return kOk;
    }
    if (*check_cmd) {
      const SolveResult r = solve(problem, opts);
      const OracleResult o = brute_solve(problem, max_joint);
      std::vector<std::string> problems;
      if (r.optimum != o.optimum) {
        problems.push_back("optimum " + format_value(r.optimum) + " vs oracle " +
                           format_value(o.optimum));
      }
      if (evaluate_objective(problem, r.solution) != o.optimum) {
        problems.push_back("solution " + format_configuration(r.solution, problem) +
                           " is not optimal");
      }
      if (r.all_optima && *r.all_optima != o.argopt) {
        problems.push_back("optima sets differ: solver " + std::to_string(r.all_optima->size()) +
                           ", oracle " + std::to_string(o.argopt.size()));
      }
      out << "solver optimum " << format_value(r.optimum) << "\n";
      out << "oracle optimum " << format_value(o.optimum) << "\n";
      if (problems.empty()) {
        out << "check ok\n";
        return kOk;
      }
      for (const std::string& m : problems) out << "mismatch: " << m << "\n";
      return kCheckMismatch;
    }
    if (*tree_cmd) {
      const Hypergraph h = problem.hypergraph();
      const EliminationOrder order = opts.order ? *opts.order : osla_order(h);
      const RootedMarkovTree t = build_tree(h, order);
      const auto names = problem.names();
      if (format == "dot") {
        out << to_dot(t, names);
      } else {
        out << "order";
        for (VarId v : order) out << ' ' << names[v];
        out << "\n" << to_text(t, names);
      }
      return kOk;
    }
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kParseFailure;
  } catch (const LimitError& e) {
    err << "size cap exceeded: " << e.what() << "\n";
    return kSizeCap;
  } catch (const Error& e) {
    err << "solver error: " << e.what() << "\n";
    return kSolverFailure;
  }
  return kSolverFailure;
}

}  // namespace vbs
