#pragma once

// Shared test fixtures: the five-variable example problem built directly in
// code (no parser involved), random instance generators, and a naive
// reference evaluator that does its own index arithmetic.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <random>
#include <vector>

#include "vbs/vbs.hpp"

namespace vbs::testing {

enum : VarId { A = 0, B = 1, C = 2, D = 3, E = 4 };

// State 0 is the plain label (a), state 1 the negated one (~a).
inline Variable binary(const std::string& name, const std::string& state) {
  return {name, {state, "~" + state}};
}

inline std::vector<std::size_t> example_cards() { return {2, 2, 2, 2, 2}; }

inline Valuation example_f1() {
  return Valuation::over({A, C, E}, example_cards(), {1, 3, 5, 8, 2, 6, 2, 4});
}
inline Valuation example_f2() {
  return Valuation::over({A, B}, example_cards(), {4, 8, 0, 5});
}
inline Valuation example_f3() {
  return Valuation::over({B, D, E}, example_cards(), {0, 5, 6, 3, 5, 1, 4, 3});
}

inline Problem example_problem(Sense sense = Sense::minimize) {
  Problem p;
  p.sense = sense;
  p.variables = {binary("A", "a"), binary("B", "b"), binary("C", "c"), binary("D", "d"),
                 binary("E", "e")};
  p.factors = {{"F1", example_f1()}, {"F2", example_f2()}, {"F3", example_f3()}};
  return p;
}

/// The order whose tree is the published arrangement.
inline EliminationOrder example_order() { return {C, D, E, B, A}; }

inline Configuration config(VariableSet dom, std::vector<StateId> states) {
  return Configuration(std::move(dom), std::move(states));
}

// ---------------------------------------------------------------------------
// Random generation

using Rng = std::mt19937_64;

inline std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline std::vector<std::size_t> random_cards(Rng& rng, std::size_t n, std::size_t max_frame) {
  std::vector<std::size_t> cards(n);
  for (auto& c : cards) c = uniform(rng, 1, max_frame);
  return cards;
}

inline VariableSet random_subset(Rng& rng, std::size_t n, std::size_t min_size = 0) {
  for (;;) {
    std::vector<VarId> ids;
    for (VarId v = 0; v < n; ++v) {
      if (uniform(rng, 0, 1)) ids.push_back(v);
    }
    if (ids.size() >= min_size) return VariableSet(std::move(ids));
  }
}

inline VariableSet random_subset_of(Rng& rng, const VariableSet& s) {
  std::vector<VarId> ids;
  for (VarId v : s) {
    if (uniform(rng, 0, 1)) ids.push_back(v);
  }
  return VariableSet(std::move(ids));
}

/// Integer-valued table in [-9, 9].
inline Valuation random_valuation(Rng& rng, const VariableSet& dom,
                                  const std::vector<std::size_t>& cards) {
  std::size_t n = frame_size(dom, cards);
  std::vector<Value> table(n);
  for (auto& v : table) v = double(int(uniform(rng, 0, 18)) - 9);
  return Valuation::over(dom, cards, std::move(table));
}

/// Random problem: up to `max_vars` variables, frames up to `max_frame`,
/// up to `max_factors` factors. Every variable lands in some scope.
/// Small value ranges make ties common.
inline Problem random_problem(Rng& rng, std::size_t max_vars = 6, std::size_t max_frame = 3,
                              std::size_t max_factors = 5, Sense sense = Sense::minimize) {
  const std::size_t n = uniform(rng, 1, max_vars);
  const auto cards = random_cards(rng, n, max_frame);
  Problem p;
  p.sense = sense;
  for (VarId v = 0; v < n; ++v) {
    Variable var{"X" + std::to_string(v), {}};
    for (std::size_t s = 0; s < cards[v]; ++s) var.states.push_back("s" + std::to_string(s));
    p.variables.push_back(std::move(var));
  }
  const std::size_t k = uniform(rng, 1, max_factors);
  std::vector<char> used(n, 0);
  std::vector<VariableSet> scopes;
  for (std::size_t i = 0; i < k; ++i) {
    VariableSet s = random_subset(rng, n, 1);
    if (s.size() > 3) {
      std::vector<VarId> ids(s.begin(), s.end());
      std::shuffle(ids.begin(), ids.end(), rng);
      ids.resize(3);
      s = VariableSet(std::move(ids));
    }
    scopes.push_back(s);
  }
  for (const auto& s : scopes) {
    for (VarId v : s) used[v] = 1;
  }
  for (VarId v = 0; v < n; ++v) {
    if (used[v]) continue;
    auto& s = scopes[uniform(rng, 0, scopes.size() - 1)];
    s = s | VariableSet{v};
  }
  for (std::size_t i = 0; i < scopes.size(); ++i) {
    std::size_t m = frame_size(scopes[i], cards);
    std::vector<Value> table(m);
    for (auto& v : table) v = double(uniform(rng, 0, 4));
    p.factors.push_back({"F" + std::to_string(i), Valuation::over(scopes[i], cards, std::move(table))});
  }
  return p;
}

inline EliminationOrder random_order(Rng& rng, std::size_t n) {
  EliminationOrder order(n);
  for (VarId v = 0; v < n; ++v) order[v] = v;
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

// ---------------------------------------------------------------------------
// Naive reference arithmetic, independent of the library's walkers.

/// Visits every assignment of `cards` in row-major order (last fastest).
inline void for_each_assignment(const std::vector<std::size_t>& cards,
                                const std::function<void(const std::vector<StateId>&)>& fn) {
  std::vector<StateId> s(cards.size(), 0);
  for (;;) {
    fn(s);
    std::size_t k = cards.size();
    while (k > 0) {
      --k;
      if (++s[k] < cards[k]) break;
      s[k] = 0;
      if (k == 0) return;
    }
    if (cards.empty()) return;
  }
}

/// Value of `g` at a full-universe assignment, via explicit positional
/// arithmetic over g's sorted domain.
inline Value lookup(const Valuation& g, const std::vector<StateId>& full,
                    const std::vector<std::size_t>& cards) {
  std::size_t idx = 0;
  for (VarId v : g.domain()) idx = idx * cards[v] + full[v];
  return g.table()[idx];
}

}  // namespace vbs::testing
