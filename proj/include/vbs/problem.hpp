#pragma once

#include <string>
#include <vector>

#include "vbs/algebra.hpp"
#include "vbs/domain.hpp"
#include "vbs/markov_tree.hpp"
#include "vbs/valuation.hpp"

namespace vbs {

struct Factor {
  std::string name;
  Valuation valuation;

  friend bool operator==(const Factor&, const Factor&) = default;
};

/// A factored objective: variables in declaration order, the factor
/// valuations, and whether to minimize or maximize their combination.
struct Problem {
  Sense sense = Sense::minimize;
  std::vector<Variable> variables;
  std::vector<Factor> factors;

  std::vector<std::size_t> cards() const {
    std::vector<std::size_t> c;
    for (const Variable& v : variables) c.push_back(v.frame_size());
    return c;
  }
  std::vector<std::string> names() const {
    std::vector<std::string> n;
    for (const Variable& v : variables) n.push_back(v.name);
    return n;
  }
  std::vector<Valuation> valuations() const {
    std::vector<Valuation> out;
    for (const Factor& f : factors) out.push_back(f.valuation);
    return out;
  }
  Hypergraph hypergraph() const {
    Hypergraph h{cards(), {}};
    for (const Factor& f : factors) h.edges.push_back(f.valuation.domain());
    return h;
  }
  VariableSet universe() const {
    std::vector<VarId> ids(variables.size());
    for (VarId v = 0; v < ids.size(); ++v) ids[v] = v;
    return VariableSet(std::move(ids));
  }

  friend bool operator==(const Problem&, const Problem&) = default;
};

/// Value of the joint objective at `x` (which must cover every factor),
/// combining factor values in declaration order.
template <OptimizationAlgebra Alg>
Value evaluate_objective(const Problem& p, const Configuration& x, const Alg& alg) {
  Value acc = alg.identity();
  for (const Factor& f : p.factors) acc = alg.combine(acc, evaluate(f.valuation, x));
  return acc;
}

inline Value evaluate_objective(const Problem& p, const Configuration& x) {
  return with_algebra(p.sense, [&](auto alg) { return evaluate_objective(p, x, alg); });
}

/// "A=~a B=b" rendering; the empty configuration prints as "<>".
inline std::string format_configuration(const Configuration& x, const Problem& p) {
  if (x.size() == 0) return "<>";
  std::string out;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const Variable& var = p.variables[x.domain()[i]];
    if (i) out += ' ';
    out += var.name + "=" + var.states[x.states()[i]];
  }
  return out;
}

}  // namespace vbs
