#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "vbs/algebra.hpp"
#include "vbs/domain.hpp"
#include "vbs/error.hpp"
#include "vbs/problem.hpp"
#include "vbs/valuation.hpp"

namespace vbs {

/// Exhaustive reference solver. It materializes the joint valuation and
/// scans every entry, so it is only meant for desk-scale problems.

inline constexpr std::size_t kDefaultMaxJoint = std::size_t{1} << 24;

struct OracleResult {
  Value optimum = 0.0;
  std::vector<Configuration> argopt;  // canonical (row-major) order
  std::size_t joint_size = 0;
};

/// Left fold of combine over `factors`.
template <OptimizationAlgebra Alg>
Valuation joint(std::span<const Valuation> factors, const Alg& alg,
                std::size_t max_entries = kDefaultMaxJoint) {
  if (factors.empty()) throw DomainError("joint of an empty factor list");
  VariableSet scope;
  for (const Valuation& f : factors) scope = scope | f.domain();
  std::vector<std::size_t> cards;
  for (VarId v : scope) {
    for (const Valuation& f : factors) {
      if (f.domain().contains(v)) {
        cards.push_back(f.card_of(v));
        break;
      }
    }
  }
  std::size_t n = 1;
  for (std::size_t c : cards) {
    if (n > max_entries / c) {
      throw LimitError("joint valuation exceeds " + std::to_string(max_entries) + " entries");
    }
    n *= c;
  }
  if (n > max_entries) {
    throw LimitError("joint valuation exceeds " + std::to_string(max_entries) + " entries");
  }

  Valuation acc = factors.front();
  for (const Valuation& f : factors.subspan(1)) acc = combine(acc, f, alg);
  return acc;
}

template <OptimizationAlgebra Alg>
OracleResult brute_solve(const Problem& p, const Alg& alg,
                         std::size_t max_entries = kDefaultMaxJoint) {
  const auto factors = p.valuations();
  Valuation f = joint(std::span<const Valuation>(factors), alg, max_entries);
  if (f.domain() != p.universe()) {
    f = combine(f, vacuous(p.universe(), p.cards(), alg), alg);
  }

  OracleResult r;
  r.joint_size = f.size();
  r.optimum = f[0];
  for (std::size_t i = 1; i < f.size(); ++i) r.optimum = best_of(alg, r.optimum, f[i]);
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f[i] == r.optimum) r.argopt.push_back(f.configuration(i));
  }
  return r;
}

inline OracleResult brute_solve(const Problem& p, std::size_t max_entries = kDefaultMaxJoint) {
  return with_algebra(p.sense, [&](auto alg) { return brute_solve(p, alg, max_entries); });
}

}  // namespace vbs
