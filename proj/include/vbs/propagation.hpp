#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "vbs/algebra.hpp"
#include "vbs/domain.hpp"
#include "vbs/error.hpp"
#include "vbs/markov_tree.hpp"
#include "vbs/problem.hpp"
#include "vbs/valuation.hpp"

namespace vbs {

/// Record of one inward (child -> parent) valuation message.
struct InwardStep {
  std::size_t from = 0;
  std::size_t to = 0;
  Valuation combined;  // own valuation combined with every child message, on `from`
  Valuation message;   // combined marginalized to from & to
  std::optional<SolutionTable> solution;
  std::size_t largest_table = 0;  // largest table read or written at `from`
};

/// Record of one outward (parent -> child) configuration message.
struct OutwardStep {
  std::size_t from = 0;
  std::size_t to = 0;
  Configuration message;
};

struct Trace {
  std::vector<InwardStep> inward;
  std::vector<OutwardStep> outward;
};

/// Per-vertex solution tables, indexed like the tree's vertices.
using SolutionTables = std::vector<std::optional<SolutionTable>>;

struct InwardResult {
  Value optimum = 0.0;
  SolutionTables tables;
};

namespace detail {

inline void require_valid(const RootedMarkovTree& t) {
  const auto violations = validate_markov(t);
  if (!violations.empty()) {
    throw SolverError("not a rooted Markov tree: " + describe(violations.front(), t, {}));
  }
}

// Children before parents; siblings in increasing index order.
inline std::vector<std::size_t> postorder(const RootedMarkovTree& t) {
  std::vector<std::size_t> out;
  std::function<void(std::size_t)> visit = [&](std::size_t v) {
    for (std::size_t c : t.children(v)) visit(c);
    out.push_back(v);
  };
  visit(t.root);
  return out;
}

inline std::vector<std::size_t> preorder(const RootedMarkovTree& t) {
  std::vector<std::size_t> out;
  std::function<void(std::size_t)> visit = [&](std::size_t v) {
    out.push_back(v);
    for (std::size_t c : t.children(v)) visit(c);
  };
  visit(t.root);
  return out;
}

}  // namespace detail

/// Inward pass: every vertex combines its own valuation with its children's
/// messages and sends the marginal on its intersection with the parent.
/// Dropping a single variable is an elimination whose solution table is kept
/// at the vertex. The root's incoming message is the optimum.
template <OptimizationAlgebra Alg>
InwardResult inward_pass(const RootedMarkovTree& t, const Alg& alg, Trace* trace = nullptr) {
  detail::require_valid(t);
  InwardResult result;
  result.tables.resize(t.size());
  std::vector<std::optional<Valuation>> messages(t.size());

  for (std::size_t v : detail::postorder(t)) {
    if (v == t.root) continue;
    const VariableSet& h = t.vertices[v];
    if (!t.valuation[v]) {
      throw SolverError("vertex " + std::to_string(v) + " has no assigned valuation");
    }
    const std::size_t p = *t.parent[v];
    const VariableSet drop = h - t.vertices[p];
    if (drop.size() > 1) {
      throw SolverError("vertex " + std::to_string(v) +
                        " drops more than one variable toward its parent");
    }

    Valuation acc = *t.valuation[v];
    std::size_t largest = acc.size();
    for (std::size_t c : t.children(v)) {
      largest = std::max(largest, messages[c]->size());
      acc = combine(acc, *messages[c], alg);
    }
    if (acc.domain() != h) {
      throw SolverError("vertex " + std::to_string(v) +
                        " received a valuation outside its own domain");
    }

    std::optional<SolutionTable> table;
    Valuation message;
    if (drop.empty()) {
      message = acc;
    } else {
      Elimination e = eliminate(acc, drop[0], alg);
      message = std::move(e.marginal);
      table = std::move(e.solution);
    }
    largest = std::max({largest, acc.size(), message.size()});

    if (trace) {
      trace->inward.push_back({v, p, acc, message, table, largest});
    }
    result.tables[v] = std::move(table);
    messages[v] = std::move(message);
  }

  Valuation at_root = vacuous(VariableSet{}, t.cards, alg);
  for (std::size_t c : t.children(t.root)) at_root = combine(at_root, *messages[c], alg);
  result.optimum = at_root[0];
  return result;
}

namespace detail {

inline std::vector<char> subtree_has_table(const RootedMarkovTree& t,
                                           const SolutionTables& tables) {
  std::vector<char> has(t.size(), 0);
  for (std::size_t v : postorder(t)) {
    has[v] = (v < tables.size() && tables[v]) ? 1 : 0;
    for (std::size_t c : t.children(v)) has[v] |= has[c];
  }
  return has;
}

inline void require_tables(const RootedMarkovTree& t, const SolutionTables& tables) {
  if (tables.size() != t.size()) throw SolverError("solution tables do not match the tree");
  for (std::size_t v = 0; v < t.size(); ++v) {
    if (t.eliminated[v] && !tables[v]) {
      throw SolverError("missing solution table for vertex " + std::to_string(v));
    }
  }
}

inline Configuration full_configuration(std::size_t n, const std::vector<std::optional<StateId>>& picks) {
  std::vector<VarId> ids;
  std::vector<StateId> states;
  for (VarId v = 0; v < n; ++v) {
    if (!picks[v]) {
      throw SolverError("variable " + std::to_string(v) + " has no solution table");
    }
    ids.push_back(v);
    states.push_back(*picks[v]);
  }
  return Configuration(VariableSet(std::move(ids)), std::move(states));
}

}  // namespace detail

/// Outward pass: the root sends "<>" to its child; a vertex holding a
/// solution for X extends its incoming configuration with X's canonical pick
/// and sends each child the projection onto their intersection. Messages go
/// only into subtrees that still hold a solution table. Returns the
/// configuration of the whole universe assembled from the picks.
inline Configuration outward_pass(const RootedMarkovTree& t, const SolutionTables& tables,
                                  Trace* trace = nullptr) {
  detail::require_tables(t, tables);
  const auto needed = detail::subtree_has_table(t, tables);
  std::vector<std::optional<StateId>> picks(t.cards.size());
  std::vector<std::optional<Configuration>> incoming(t.size());
  incoming[t.root] = Configuration{};

  for (std::size_t v : detail::preorder(t)) {
    if (!incoming[v]) continue;
    Configuration extended = *incoming[v];
    if (tables[v]) {
      const SolutionTable& s = *tables[v];
      const StateId pick = s.pick(extended);
      picks[s.variable()] = pick;
      extended = concat(extended, Configuration(VariableSet{s.variable()}, {pick}));
    }
    for (std::size_t c : t.children(v)) {
      if (!needed[c]) continue;
      Configuration msg = project(extended, t.vertices[v] & t.vertices[c]);
      if (trace) trace->outward.push_back({v, c, msg});
      incoming[c] = std::move(msg);
    }
  }
  return detail::full_configuration(t.cards.size(), picks);
}

/// Every configuration reachable by choosing any tied state wherever the
/// outward recursion consults a solution table, in canonical order. Throws
/// LimitError once more than `max_optima` configurations would be produced.
inline std::vector<Configuration> enumerate_optima(const RootedMarkovTree& t,
                                                   const SolutionTables& tables,
                                                   std::size_t max_optima = 1024) {
  detail::require_tables(t, tables);
  std::vector<std::size_t> holders;
  for (std::size_t v : detail::preorder(t)) {
    if (tables[v]) holders.push_back(v);
  }
  const std::size_t n = t.cards.size();
  std::vector<std::optional<StateId>> picks(n);
  std::vector<Configuration> out;

  std::function<void(std::size_t)> branch = [&](std::size_t k) {
    if (k == holders.size()) {
      if (out.size() >= max_optima) {
        throw LimitError("more than " + std::to_string(max_optima) + " optimal configurations");
      }
      out.push_back(detail::full_configuration(n, picks));
      return;
    }
    const SolutionTable& s = *tables[holders[k]];
    std::vector<StateId> states;
    for (VarId v : s.domain()) states.push_back(*picks[v]);
    const Configuration c(s.domain(), std::move(states));
    for (StateId choice : s.ties(c)) {
      picks[s.variable()] = choice;
      branch(k + 1);
    }
    picks[s.variable()].reset();
  };
  branch(0);
  std::sort(out.begin(), out.end());
  return out;
}

struct SolveOptions {
  std::optional<EliminationOrder> order;  // one-step-look-ahead when unset
  bool all_optima = false;
  bool trace = false;
  std::size_t max_optima = 1024;
};

struct SolveResult {
  Value optimum = 0.0;
  Configuration solution;
  std::optional<std::vector<Configuration>> all_optima;
  std::optional<Trace> trace;
  EliminationOrder order;
  RootedMarkovTree tree;
};

/// Order selection, tree construction, valuation attachment, inward pass
/// and solution recovery in one call.
inline SolveResult solve(const Problem& problem, const SolveOptions& options = {}) {
  return with_algebra(problem.sense, [&](auto alg) {
    const Hypergraph h = problem.hypergraph();
    SolveResult r;
    r.order = options.order ? *options.order : osla_order(h);
    const auto factors = problem.valuations();
    r.tree = attach_valuations(build_tree(h, r.order), factors, alg);

    Trace trace;
    Trace* tp = options.trace ? &trace : nullptr;
    InwardResult in = inward_pass(r.tree, alg, tp);
    r.optimum = in.optimum;
    r.solution = outward_pass(r.tree, in.tables, tp);
    if (options.all_optima) r.all_optima = enumerate_optima(r.tree, in.tables, options.max_optima);
    if (tp) r.trace = std::move(trace);
    return r;
  });
}

}  // namespace vbs
