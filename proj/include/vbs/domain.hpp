#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vbs/error.hpp"

namespace vbs {

/// Index of a variable in its problem's declaration order.
using VarId = std::size_t;
/// Index of a state within a variable's frame.
using StateId = std::size_t;

struct Variable {
  std::string name;
  std::vector<std::string> states;

  std::size_t frame_size() const { return states.size(); }
  friend bool operator==(const Variable&, const Variable&) = default;
};

/// A set of variables, kept sorted by declaration index. That sorted order is
/// the canonical order used for configurations and table layout.
class VariableSet {
public:
  VariableSet() = default;
  VariableSet(std::initializer_list<VarId> ids) : ids_(ids) { normalize(); }
  explicit VariableSet(std::vector<VarId> ids) : ids_(std::move(ids)) {
    normalize();
  }

  std::size_t size() const { return ids_.size(); }
  bool empty() const { return ids_.empty(); }
  auto begin() const { return ids_.begin(); }
  auto end() const { return ids_.end(); }
  VarId operator[](std::size_t i) const { return ids_[i]; }
  std::span<const VarId> ids() const { return ids_; }

  bool contains(VarId v) const {
    return std::binary_search(ids_.begin(), ids_.end(), v);
  }
  /// Position of `v` in canonical order, or `size()` when absent.
  std::size_t position(VarId v) const {
    auto it = std::lower_bound(ids_.begin(), ids_.end(), v);
    return (it != ids_.end() && *it == v) ? std::size_t(it - ids_.begin())
                                          : ids_.size();
  }
  bool subset_of(const VariableSet& other) const {
    return std::includes(other.ids_.begin(), other.ids_.end(), ids_.begin(),
                         ids_.end());
  }

  friend VariableSet operator|(const VariableSet& a, const VariableSet& b) {
    VariableSet r;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(),
                   std::back_inserter(r.ids_));
    return r;
  }
  friend VariableSet operator&(const VariableSet& a, const VariableSet& b) {
    VariableSet r;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                          std::back_inserter(r.ids_));
    return r;
  }
  friend VariableSet operator-(const VariableSet& a, const VariableSet& b) {
    VariableSet r;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(r.ids_));
    return r;
  }
  VariableSet without(VarId v) const { return *this - VariableSet{v}; }

  friend bool operator==(const VariableSet&, const VariableSet&) = default;
  friend auto operator<=>(const VariableSet&, const VariableSet&) = default;

private:
  void normalize() {
    std::sort(ids_.begin(), ids_.end());
    ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
  }

  std::vector<VarId> ids_;
};

inline constexpr std::size_t kSaturated = std::numeric_limits<std::size_t>::max();

/// Product of frame sizes, saturating at `kSaturated`. The empty set has
/// frame size 1.
inline std::size_t frame_size(const VariableSet& h,
                              std::span<const std::size_t> cards) {
  std::size_t n = 1;
  for (VarId v : h) {
    const std::size_t c = cards[v];
    if (c != 0 && n > kSaturated / c) return kSaturated;
    n *= c;
  }
  return n;
}

/// One state per variable of `domain`, aligned with its canonical order.
/// The configuration of the empty set is the distinguished element "<>".
class Configuration {
public:
  Configuration() = default;
  Configuration(VariableSet domain, std::vector<StateId> states)
      : domain_(std::move(domain)), states_(std::move(states)) {
    if (states_.size() != domain_.size()) {
      throw DomainError("configuration arity does not match its domain");
    }
  }

  const VariableSet& domain() const { return domain_; }
  std::span<const StateId> states() const { return states_; }
  std::size_t size() const { return states_.size(); }

  /// State of variable `v`; throws when `v` is not in the domain.
  StateId state_of(VarId v) const {
    const std::size_t p = domain_.position(v);
    if (p == domain_.size()) {
      throw DomainError("variable " + std::to_string(v) +
                        " is not in the configuration's domain");
    }
    return states_[p];
  }

  friend bool operator==(const Configuration&, const Configuration&) = default;
  friend auto operator<=>(const Configuration&, const Configuration&) = default;

private:
  VariableSet domain_;
  std::vector<StateId> states_;
};

/// Restriction of `x` to `h`. Throws DomainError unless h is a subset of
/// x's domain.
inline Configuration project(const Configuration& x, const VariableSet& h) {
  if (!h.subset_of(x.domain())) {
    throw DomainError("projection target is not a subset of the domain");
  }
  std::vector<StateId> out;
  out.reserve(h.size());
  std::size_t j = 0;
  for (VarId v : h) {
    while (x.domain()[j] != v) ++j;
    out.push_back(x.states()[j]);
  }
  return Configuration(h, std::move(out));
}

/// Concatenation of configurations over disjoint domains, re-sorted into
/// canonical order.
inline Configuration concat(const Configuration& x, const Configuration& y) {
  if (!(x.domain() & y.domain()).empty()) {
    throw DomainError("cannot concatenate configurations with overlapping domains");
  }
  const VariableSet dom = x.domain() | y.domain();
  std::vector<StateId> out;
  out.reserve(dom.size());
  std::size_t i = 0, j = 0;
  for (VarId v : dom) {
    if (i < x.size() && x.domain()[i] == v) {
      out.push_back(x.states()[i++]);
    } else {
      out.push_back(y.states()[j++]);
    }
  }
  return Configuration(dom, std::move(out));
}

}  // namespace vbs
