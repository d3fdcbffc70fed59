#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "vbs/algebra.hpp"
#include "vbs/domain.hpp"
#include "vbs/error.hpp"

namespace vbs {

namespace detail {

inline std::vector<std::size_t> row_major_strides(std::span<const std::size_t> cards) {
  std::vector<std::size_t> strides(cards.size());
  std::size_t s = 1;
  for (std::size_t k = cards.size(); k-- > 0;) {
    strides[k] = s;
    s *= cards[k];
  }
  return strides;
}

inline std::size_t checked_product(std::span<const std::size_t> cards) {
  std::size_t n = 1;
  for (std::size_t c : cards) {
    if (c == 0) throw DomainError("variable with an empty frame");
    if (n > kSaturated / c) throw LimitError("table size overflows");
    n *= c;
  }
  return n;
}

/// Row-major odometer over a frame that tracks N linear offsets at once, one
/// per stride vector. Offsets move incrementally as digits roll over.
template <std::size_t N>
class Walker {
public:
  Walker(std::span<const std::size_t> cards,
         std::array<std::vector<std::size_t>, N> strides)
      : cards_(cards.begin(), cards.end()),
        digits_(cards.size(), 0),
        strides_(std::move(strides)) {
    offsets_.fill(0);
  }

  std::size_t offset(std::size_t i) const { return offsets_[i]; }

  /// Advances to the next configuration; false after the last one.
  bool next() {
    for (std::size_t k = cards_.size(); k-- > 0;) {
      if (++digits_[k] < cards_[k]) {
        for (std::size_t i = 0; i < N; ++i) offsets_[i] += strides_[i][k];
        return true;
      }
      digits_[k] = 0;
      for (std::size_t i = 0; i < N; ++i) {
        offsets_[i] -= strides_[i][k] * (cards_[k] - 1);
      }
    }
    return false;
  }

private:
  std::vector<std::size_t> cards_;
  std::vector<std::size_t> digits_;
  std::array<std::vector<std::size_t>, N> strides_;
  std::array<std::size_t, N> offsets_{};
};

}  // namespace detail

/// A dense table of values over the frame of `domain()`, laid out row-major
/// in canonical variable order (the last variable varies fastest).
/// Immutable once built.
class Valuation {
public:
  Valuation() : table_{0.0} {}

  /// `cards` holds the frame size of each domain variable, in canonical order.
  Valuation(VariableSet domain, std::vector<std::size_t> cards,
            std::vector<Value> table)
      : domain_(std::move(domain)), cards_(std::move(cards)), table_(std::move(table)) {
    if (cards_.size() != domain_.size()) {
      throw DomainError("valuation needs one frame size per domain variable");
    }
    if (table_.size() != detail::checked_product(cards_)) {
      throw DomainError("valuation table length " + std::to_string(table_.size()) +
                        " does not match frame size " +
                        std::to_string(detail::checked_product(cards_)));
    }
    strides_ = detail::row_major_strides(cards_);
  }

  /// Builds a valuation whose frame sizes are looked up in `universe_cards`
  /// (indexed by variable id).
  static Valuation over(const VariableSet& domain,
                        std::span<const std::size_t> universe_cards,
                        std::vector<Value> table) {
    std::vector<std::size_t> cards;
    cards.reserve(domain.size());
    for (VarId v : domain) cards.push_back(universe_cards[v]);
    return Valuation(domain, std::move(cards), std::move(table));
  }

  const VariableSet& domain() const { return domain_; }
  std::span<const std::size_t> cards() const { return cards_; }
  std::span<const Value> table() const { return table_; }
  std::size_t size() const { return table_.size(); }
  Value operator[](std::size_t i) const { return table_[i]; }

  std::size_t card_of(VarId v) const { return cards_[position_or_throw(v)]; }
  std::size_t stride_of(VarId v) const { return strides_[position_or_throw(v)]; }

  /// Linear index of the projection of `x` onto this domain. `x` must cover
  /// the domain.
  std::size_t index_of(const Configuration& x) const {
    if (!domain_.subset_of(x.domain())) {
      throw DomainError("configuration does not cover the valuation's domain");
    }
    std::size_t idx = 0;
    std::size_t j = 0;
    for (std::size_t k = 0; k < domain_.size(); ++k) {
      while (x.domain()[j] != domain_[k]) ++j;
      const StateId s = x.states()[j];
      if (s >= cards_[k]) throw DomainError("state index outside its frame");
      idx += s * strides_[k];
    }
    return idx;
  }

  /// The configuration stored at linear index `i`.
  Configuration configuration(std::size_t i) const {
    std::vector<StateId> states(domain_.size());
    for (std::size_t k = 0; k < domain_.size(); ++k) {
      states[k] = (i / strides_[k]) % cards_[k];
    }
    return Configuration(domain_, std::move(states));
  }

  friend bool operator==(const Valuation& a, const Valuation& b) {
    return a.domain_ == b.domain_ && a.cards_ == b.cards_ && a.table_ == b.table_;
  }

private:
  std::size_t position_or_throw(VarId v) const {
    const std::size_t p = domain_.position(v);
    if (p == domain_.size()) throw DomainError("variable not in valuation domain");
    return p;
  }

  VariableSet domain_;
  std::vector<std::size_t> cards_;
  std::vector<Value> table_;
  std::vector<std::size_t> strides_;
};

/// Value of `g` at the projection of `x`, whose domain must cover g's.
inline Value evaluate(const Valuation& g, const Configuration& x) {
  return g[g.index_of(x)];
}

/// The valuation whose every entry is the combination identity.
template <OptimizationAlgebra Alg>
Valuation vacuous(const VariableSet& h, std::span<const std::size_t> universe_cards,
                  const Alg& alg) {
  std::vector<std::size_t> cards;
  for (VarId v : h) cards.push_back(universe_cards[v]);
  std::vector<Value> table(detail::checked_product(cards), alg.identity());
  return Valuation(h, std::move(cards), std::move(table));
}

namespace detail {

// Frame sizes of the union of two domains; throws on inconsistent sizes.
inline std::vector<std::size_t> union_cards(const Valuation& g, const Valuation& h,
                                            const VariableSet& u) {
  std::vector<std::size_t> cards;
  cards.reserve(u.size());
  for (VarId v : u) {
    const bool in_g = g.domain().contains(v);
    const bool in_h = h.domain().contains(v);
    if (in_g && in_h && g.card_of(v) != h.card_of(v)) {
      throw DomainError("variable " + std::to_string(v) +
                        " has different frame sizes in the two valuations");
    }
    cards.push_back(in_g ? g.card_of(v) : h.card_of(v));
  }
  return cards;
}

// Strides of `target` laid over `over`'s variables, zero where absent.
inline std::vector<std::size_t> embedded_strides(const Valuation& target,
                                                 const VariableSet& over) {
  std::vector<std::size_t> s;
  s.reserve(over.size());
  for (VarId v : over) s.push_back(target.domain().contains(v) ? target.stride_of(v) : 0);
  return s;
}

inline std::vector<std::size_t> strides_in(const VariableSet& sub,
                                           std::span<const std::size_t> sub_cards,
                                           const VariableSet& over) {
  const auto own = row_major_strides(sub_cards);
  std::vector<std::size_t> s;
  s.reserve(over.size());
  for (VarId v : over) {
    const std::size_t p = sub.position(v);
    s.push_back(p == sub.size() ? 0 : own[p]);
  }
  return s;
}

}  // namespace detail

/// Pointwise combination over the union of both domains:
/// (G + H)(x) = G(x|g) (op) H(x|h).
template <OptimizationAlgebra Alg>
Valuation combine(const Valuation& g, const Valuation& h, const Alg& alg) {
  const VariableSet u = g.domain() | h.domain();
  auto cards = detail::union_cards(g, h, u);
  std::vector<Value> out(detail::checked_product(cards));
  detail::Walker<2> walk(cards, {detail::embedded_strides(g, u),
                                 detail::embedded_strides(h, u)});
  std::size_t i = 0;
  do {
    out[i++] = alg.combine(g[walk.offset(0)], h[walk.offset(1)]);
  } while (walk.next());
  return Valuation(u, std::move(cards), std::move(out));
}

/// Marginal of `g` for `h`: optimizes over every configuration of the
/// dropped variables.
template <OptimizationAlgebra Alg>
Valuation marginalize(const Valuation& g, const VariableSet& h, const Alg& alg) {
  if (!h.subset_of(g.domain())) {
    throw DomainError("marginalization target is not a subset of the domain");
  }
  if (h == g.domain()) return g;
  std::vector<std::size_t> cards;
  for (VarId v : h) cards.push_back(g.card_of(v));
  std::vector<Value> out(detail::checked_product(cards));
  std::vector<char> seen(out.size(), 0);
  detail::Walker<1> walk(g.cards(), {detail::strides_in(h, cards, g.domain())});
  std::size_t i = 0;
  do {
    const std::size_t r = walk.offset(0);
    const Value v = g[i++];
    if (!seen[r]) {
      out[r] = v;
      seen[r] = 1;
    } else {
      out[r] = best_of(alg, out[r], v);
    }
  } while (walk.next());
  return Valuation(h, std::move(cards), std::move(out));
}

/// Records, for each configuration of the remaining variables, which states
/// of an eliminated variable attain the marginal. `pick` is the canonical
/// choice (smallest frame index); `ties` lists every optimal state in frame
/// order and always starts with the pick.
class SolutionTable {
public:
  SolutionTable(VarId variable, std::size_t variable_card, VariableSet domain,
                std::vector<std::size_t> domain_cards,
                std::vector<std::vector<StateId>> ties)
      : variable_(variable),
        variable_card_(variable_card),
        index_(std::move(domain), std::move(domain_cards),
               std::vector<Value>(ties.size(), 0.0)),
        ties_(std::move(ties)) {}

  VarId variable() const { return variable_; }
  std::size_t variable_card() const { return variable_card_; }
  const VariableSet& domain() const { return index_.domain(); }
  std::span<const std::size_t> domain_cards() const { return index_.cards(); }
  std::size_t size() const { return ties_.size(); }

  /// Canonical optimizing state at the projection of `c` onto the domain.
  StateId pick(const Configuration& c) const { return ties_[index_.index_of(c)].front(); }
  std::span<const StateId> ties(const Configuration& c) const {
    return ties_[index_.index_of(c)];
  }
  StateId pick_at(std::size_t i) const { return ties_[i].front(); }
  std::span<const StateId> ties_at(std::size_t i) const { return ties_[i]; }
  Configuration configuration(std::size_t i) const { return index_.configuration(i); }

private:
  VarId variable_;
  std::size_t variable_card_;
  Valuation index_;  // only its layout is used
  std::vector<std::vector<StateId>> ties_;
};

struct Elimination {
  Valuation marginal;
  SolutionTable solution;
};

/// Marginalizes `x` out of `g` and records a solution for it.
template <OptimizationAlgebra Alg>
Elimination eliminate(const Valuation& g, VarId x, const Alg& alg) {
  if (!g.domain().contains(x)) {
    throw DomainError("eliminated variable " + std::to_string(x) +
                      " is not in the valuation's domain");
  }
  const VariableSet rest = g.domain().without(x);
  std::vector<std::size_t> cards;
  for (VarId v : rest) cards.push_back(g.card_of(v));
  const std::size_t n = detail::checked_product(cards);
  const std::size_t card_x = g.card_of(x);
  const std::size_t stride_x = g.stride_of(x);

  std::vector<Value> out(n);
  std::vector<std::vector<StateId>> ties(n);
  detail::Walker<1> walk(cards, {detail::embedded_strides(g, rest)});
  std::size_t r = 0;
  do {
    const std::size_t base = walk.offset(0);
    Value best = g[base];
    std::vector<StateId>& t = ties[r];
    t.push_back(0);
    for (StateId s = 1; s < card_x; ++s) {
      const Value v = g[base + s * stride_x];
      if (alg.better(v, best)) {
        best = v;
        t.assign(1, s);
      } else if (v == best) {
        t.push_back(s);
      }
    }
    out[r++] = best;
  } while (walk.next());

  Valuation marginal(rest, cards, std::move(out));
  return {std::move(marginal),
          SolutionTable(x, card_x, rest, std::move(cards), std::move(ties))};
}

}  // namespace vbs
