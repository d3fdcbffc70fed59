#pragma once

#include <cmath>
#include <concepts>
#include <limits>
#include <string_view>

#include "vbs/error.hpp"

namespace vbs {

/// Values are 64-bit doubles. Small integers are exact; ties are detected
/// with exact equality, so inputs whose sums round may report fewer ties
/// than a real-arithmetic solver would.
using Value = double;

enum class Sense { minimize, maximize };

constexpr std::string_view to_string(Sense s) {
  return s == Sense::minimize ? "min" : "max";
}

/// An optimization algebra supplies the value-level combination (commutative,
/// associative, with a neutral element) and the order that marginalization
/// optimizes over. Combination must distribute over `better`.
template <class A>
concept OptimizationAlgebra = requires(const A& alg, Value u, Value v) {
  { alg.combine(u, v) } -> std::same_as<Value>;
  { alg.identity() } -> std::same_as<Value>;
  { alg.better(u, v) } -> std::same_as<bool>;
  { A::sense } -> std::convertible_to<Sense>;
};

namespace detail {

inline Value add_values(Value u, Value v) {
  const Value r = u + v;
  if (std::isnan(r)) {
    throw DomainError("combination of opposite infinities is undefined");
  }
  return r;
}

}  // namespace detail

/// Combination is addition, marginalization is minimization. `+inf` encodes
/// a forbidden configuration.
struct MinSum {
  static constexpr Sense sense = Sense::minimize;
  Value combine(Value u, Value v) const { return detail::add_values(u, v); }
  Value identity() const { return 0.0; }
  /// True when `u` is strictly better than `v`.
  bool better(Value u, Value v) const { return u < v; }
};

/// Combination is addition, marginalization is maximization. `-inf` encodes
/// a forbidden configuration.
struct MaxSum {
  static constexpr Sense sense = Sense::maximize;
  Value combine(Value u, Value v) const { return detail::add_values(u, v); }
  Value identity() const { return 0.0; }
  bool better(Value u, Value v) const { return u > v; }
};

/// Best of two values under `alg`; the first argument wins ties.
template <OptimizationAlgebra Alg>
Value best_of(const Alg& alg, Value u, Value v) {
  return alg.better(v, u) ? v : u;
}

/// Invokes `fn` with the built-in algebra for `sense`.
template <class Fn>
decltype(auto) with_algebra(Sense sense, Fn&& fn) {
  if (sense == Sense::maximize) return fn(MaxSum{});
  return fn(MinSum{});
}

}  // namespace vbs
