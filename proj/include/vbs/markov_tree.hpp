#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "vbs/algebra.hpp"
#include "vbs/domain.hpp"
#include "vbs/error.hpp"
#include "vbs/valuation.hpp"

namespace vbs {

/// Factor scopes over the universe {0, ..., cards.size() - 1}.
struct Hypergraph {
  std::vector<std::size_t> cards;  // frame size per variable
  std::vector<VariableSet> edges;

  std::size_t num_variables() const { return cards.size(); }
};

/// Sequence in which variables are marked (eliminated).
using EliminationOrder = std::vector<VarId>;

/// Tree of variable subsets rooted at the empty set. Edges are stored as
/// parent pointers, so they always point rootward. Vertex indices are stable;
/// children are visited in increasing index order.
struct RootedMarkovTree {
  std::vector<std::size_t> cards;
  std::vector<VariableSet> vertices;
  std::vector<std::optional<std::size_t>> parent;
  /// Set when vertex - parent(vertex) is a single variable.
  std::vector<std::optional<VarId>> eliminated;
  /// One valuation per non-empty vertex once attached.
  std::vector<std::optional<Valuation>> valuation;
  std::size_t root = 0;

  std::size_t size() const { return vertices.size(); }

  std::vector<std::size_t> children(std::size_t v) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < parent.size(); ++i) {
      if (parent[i] == v) out.push_back(i);
    }
    return out;
  }

  std::optional<std::size_t> find(const VariableSet& h) const {
    auto it = std::find(vertices.begin(), vertices.end(), h);
    if (it == vertices.end()) return std::nullopt;
    return std::size_t(it - vertices.begin());
  }

  /// Builds a tree from explicit vertices and parent links (the root is the
  /// vertex without a parent) and derives the eliminated variables. No
  /// validation is done here; see validate_markov.
  static RootedMarkovTree from_parents(std::vector<std::size_t> cards,
                                       std::vector<VariableSet> vertices,
                                       std::vector<std::optional<std::size_t>> parent) {
    RootedMarkovTree t;
    t.cards = std::move(cards);
    t.vertices = std::move(vertices);
    t.parent = std::move(parent);
    t.parent.resize(t.vertices.size());
    t.valuation.resize(t.vertices.size());
    t.root = t.vertices.size();
    for (std::size_t i = 0; i < t.vertices.size(); ++i) {
      if (!t.parent[i] && t.root == t.vertices.size()) t.root = i;
    }
    t.derive_eliminated();
    return t;
  }

  void derive_eliminated() {
    eliminated.assign(vertices.size(), std::nullopt);
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      if (!parent[i] || *parent[i] >= vertices.size()) continue;
      const VariableSet drop = vertices[i] - vertices[*parent[i]];
      if (drop.size() == 1) eliminated[i] = drop[0];
    }
  }
};

namespace detail {

inline void check_hypergraph(const Hypergraph& h) {
  std::vector<char> used(h.num_variables(), 0);
  for (const VariableSet& e : h.edges) {
    if (e.empty()) throw DomainError("hyperedges must be non-empty");
    for (VarId v : e) {
      if (v >= h.num_variables()) throw DomainError("hyperedge names an unknown variable");
      used[v] = 1;
    }
  }
  for (VarId v = 0; v < used.size(); ++v) {
    if (!used[v]) {
      throw DomainError("variable " + std::to_string(v) + " is in no hyperedge");
    }
  }
}

inline void check_order(const Hypergraph& h, std::span<const VarId> order) {
  std::vector<char> seen(h.num_variables(), 0);
  if (order.size() != h.num_variables()) {
    throw DomainError("elimination order must list every variable exactly once");
  }
  for (VarId v : order) {
    if (v >= seen.size() || seen[v]) {
      throw DomainError("elimination order must list every variable exactly once");
    }
    seen[v] = 1;
  }
}

// Hyperedges that remain after removing those containing `x` and adding `f`.
inline std::vector<VariableSet> absorb(const std::vector<VariableSet>& current, VarId x,
                                       const VariableSet& f, bool keep_f) {
  std::vector<VariableSet> next;
  for (const VariableSet& e : current) {
    if (!e.contains(x)) next.push_back(e);
  }
  if (keep_f && std::find(next.begin(), next.end(), f) == next.end()) next.push_back(f);
  return next;
}

}  // namespace detail

/// Arranges the hyperedges into a rooted Markov tree by marking variables in
/// `order`. At each step the hyperedges containing the marked variable X are
/// merged into g = their union, each gets an edge to g (unless it equals g),
/// g gets an edge to f = g - {X}, and f replaces them.
///
/// A component whose last variable is marked before others remain (f = {})
/// hangs its top vertex under the next merged vertex instead of the root, so
/// the root keeps a single child.
inline RootedMarkovTree build_tree(const Hypergraph& h, std::span<const VarId> order) {
  detail::check_hypergraph(h);
  detail::check_order(h, order);

  RootedMarkovTree t;
  t.cards = h.cards;
  auto vertex = [&t](const VariableSet& s) {
    if (auto found = t.find(s)) return *found;
    t.vertices.push_back(s);
    t.parent.emplace_back();
    return t.vertices.size() - 1;
  };
  auto link = [&t](std::size_t child, std::size_t parent) {
    if (t.parent[child] && *t.parent[child] != parent) {
      throw SolverError("internal: vertex assigned two parents");
    }
    t.parent[child] = parent;
  };

  std::vector<VariableSet> current;
  for (const VariableSet& e : h.edges) {
    vertex(e);
    if (std::find(current.begin(), current.end(), e) == current.end()) current.push_back(e);
  }

  std::vector<std::size_t> pending;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const VarId x = order[i];
    VariableSet g;
    std::vector<std::size_t> members;
    for (const VariableSet& e : current) {
      if (e.contains(x)) {
        g = g | e;
        members.push_back(vertex(e));
      }
    }
    const std::size_t gid = vertex(g);
    for (std::size_t m : members) {
      if (m != gid) link(m, gid);
    }
    for (std::size_t p : pending) link(p, gid);
    pending.clear();

    const VariableSet f = g.without(x);
    const bool last = i + 1 == order.size();
    if (f.empty() && !last) {
      pending.push_back(gid);
      current = detail::absorb(current, x, f, false);
    } else {
      link(gid, vertex(f));
      current = detail::absorb(current, x, f, true);
    }
  }

  t.root = *t.find(VariableSet{});
  t.valuation.resize(t.vertices.size());
  t.derive_eliminated();
  return t;
}

/// One-step-look-ahead: repeatedly marks the unmarked variable whose
/// remaining set f = g - {X} has the smallest frame, breaking ties by the
/// smallest variable index.
inline EliminationOrder osla_order(const Hypergraph& h) {
  detail::check_hypergraph(h);
  std::vector<VariableSet> current;
  for (const VariableSet& e : h.edges) {
    if (std::find(current.begin(), current.end(), e) == current.end()) current.push_back(e);
  }
  std::vector<char> marked(h.num_variables(), 0);
  EliminationOrder order;
  for (std::size_t step = 0; step < h.num_variables(); ++step) {
    std::optional<VarId> best;
    std::size_t best_size = 0;
    VariableSet best_f;
    for (VarId x = 0; x < h.num_variables(); ++x) {
      if (marked[x]) continue;
      VariableSet g;
      for (const VariableSet& e : current) {
        if (e.contains(x)) g = g | e;
      }
      VariableSet f = g.without(x);
      const std::size_t size = frame_size(f, h.cards);
      if (!best || size < best_size) {
        best = x;
        best_size = size;
        best_f = std::move(f);
      }
    }
    marked[*best] = 1;
    order.push_back(*best);
    current = detail::absorb(current, *best, best_f, !best_f.empty());
  }
  return order;
}

/// Largest vertex frame in the tree; the cost driver of propagation.
inline std::size_t max_frame_size(const RootedMarkovTree& t) {
  std::size_t m = 0;
  for (const VariableSet& v : t.vertices) m = std::max(m, frame_size(v, t.cards));
  return m;
}

struct Violation {
  enum class Kind {
    no_root,          // no vertex without a parent
    multiple_roots,   // `vertex` is an extra parentless vertex
    root_not_empty,   // `vertex` is the root but is not the empty set
    bad_parent,       // `vertex` points at an index outside the tree
    cycle,            // `vertex` never reaches the root
    root_children,    // the root does not have exactly one child
    markov,           // `vertex` lies on a path between two vertices holding `variable` but lacks it
  };
  Kind kind;
  std::optional<std::size_t> vertex;
  std::optional<VarId> variable;

  friend bool operator==(const Violation&, const Violation&) = default;
};

/// Checks the rooted Markov tree properties. An empty result means the tree
/// is valid.
inline std::vector<Violation> validate_markov(const RootedMarkovTree& t) {
  using Kind = Violation::Kind;
  std::vector<Violation> out;
  const std::size_t n = t.vertices.size();
  if (t.parent.size() != n) {
    out.push_back({Kind::bad_parent, std::nullopt, std::nullopt});
    return out;
  }

  std::optional<std::size_t> root;
  for (std::size_t i = 0; i < n; ++i) {
    if (t.parent[i]) {
      if (*t.parent[i] >= n || *t.parent[i] == i) out.push_back({Kind::bad_parent, i, std::nullopt});
    } else if (!root) {
      root = i;
    } else {
      out.push_back({Kind::multiple_roots, i, std::nullopt});
    }
  }
  if (!root) {
    out.push_back({Kind::no_root, std::nullopt, std::nullopt});
    return out;
  }
  if (!t.vertices[*root].empty()) out.push_back({Kind::root_not_empty, *root, std::nullopt});
  if (!out.empty()) return out;

  // Depth-first order from the root; anything unreached sits on a cycle.
  std::vector<std::vector<std::size_t>> kids(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (t.parent[i]) kids[*t.parent[i]].push_back(i);
  }
  std::vector<std::size_t> preorder;
  std::vector<std::size_t> stack{*root};
  while (!stack.empty()) {
    const std::size_t v = stack.back();
    stack.pop_back();
    preorder.push_back(v);
    for (auto it = kids[v].rbegin(); it != kids[v].rend(); ++it) stack.push_back(*it);
  }
  if (preorder.size() != n) {
    std::vector<char> reached(n, 0);
    for (std::size_t v : preorder) reached[v] = 1;
    for (std::size_t i = 0; i < n; ++i) {
      if (!reached[i]) out.push_back({Kind::cycle, i, std::nullopt});
    }
    return out;
  }
  if (kids[*root].size() != 1) out.push_back({Kind::root_children, *root, std::nullopt});

  // For each variable, the vertices holding it must form a connected
  // subtree. An edge (v, parent) is on some path between two holders iff
  // v's subtree contains some but not all of them.
  VariableSet all;
  for (const VariableSet& v : t.vertices) all = all | v;
  std::vector<std::size_t> below(n);
  for (VarId x : all) {
    std::size_t total = 0;
    for (const VariableSet& v : t.vertices) total += v.contains(x) ? 1 : 0;
    for (auto it = preorder.rbegin(); it != preorder.rend(); ++it) {
      const std::size_t v = *it;
      below[v] = t.vertices[v].contains(x) ? 1 : 0;
      for (std::size_t c : kids[v]) below[v] += below[c];
    }
    std::vector<char> on_path(n, 0);
    for (std::size_t v = 0; v < n; ++v) {
      if (t.parent[v] && below[v] > 0 && below[v] < total) {
        on_path[v] = 1;
        on_path[*t.parent[v]] = 1;
      }
    }
    for (std::size_t v = 0; v < n; ++v) {
      if (on_path[v] && !t.vertices[v].contains(x)) out.push_back({Kind::markov, v, x});
    }
  }
  return out;
}

/// Assigns one valuation to every non-empty vertex: the combination of all
/// factors over exactly that scope, or the vacuous valuation when none.
template <OptimizationAlgebra Alg>
RootedMarkovTree attach_valuations(RootedMarkovTree t, std::span<const Valuation> factors,
                                   const Alg& alg) {
  t.valuation.assign(t.vertices.size(), std::nullopt);
  for (const Valuation& f : factors) {
    const auto at = t.find(f.domain());
    if (!at || f.domain().empty()) {
      throw DomainError("factor scope is not a vertex of the tree");
    }
    auto& slot = t.valuation[*at];
    slot = slot ? combine(*slot, f, alg) : f;
  }
  for (std::size_t i = 0; i < t.vertices.size(); ++i) {
    if (!t.vertices[i].empty() && !t.valuation[i]) {
      t.valuation[i] = vacuous(t.vertices[i], t.cards, alg);
    }
  }
  return t;
}

/// "{A,C,E}" style label; the empty set prints as "{}".
inline std::string set_label(const VariableSet& s, std::span<const std::string> names) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ',';
    out += s[i] < names.size() ? names[s[i]] : std::to_string(s[i]);
  }
  return out + "}";
}

inline std::string describe(const Violation& v, const RootedMarkovTree& t,
                            std::span<const std::string> names) {
  using Kind = Violation::Kind;
  const std::string where =
      v.vertex && *v.vertex < t.vertices.size() ? set_label(t.vertices[*v.vertex], names) : "?";
  switch (v.kind) {
    case Kind::no_root: return "tree has no root";
    case Kind::multiple_roots: return "extra root " + where;
    case Kind::root_not_empty: return "root " + where + " is not the empty set";
    case Kind::bad_parent: return "vertex " + where + " has an invalid parent";
    case Kind::cycle: return "vertex " + where + " does not reach the root";
    case Kind::root_children: return "root does not have exactly one child";
    case Kind::markov: {
      const std::string var = *v.variable < names.size() ? names[*v.variable]
                                                         : std::to_string(*v.variable);
      return "variable " + var + " missing from path vertex " + where;
    }
  }
  return "unknown violation";
}

/// One line per non-root vertex: "child -> parent", plus the variable it
/// eliminates when there is one.
inline std::string to_text(const RootedMarkovTree& t, std::span<const std::string> names) {
  std::ostringstream os;
  os << "vertices " << t.vertices.size() << "\n";
  for (std::size_t i = 0; i < t.vertices.size(); ++i) {
    if (!t.parent[i]) continue;
    os << set_label(t.vertices[i], names) << " -> " << set_label(t.vertices[*t.parent[i]], names);
    if (t.eliminated[i]) os << "  eliminates " << names[*t.eliminated[i]];
    os << "\n";
  }
  return os.str();
}

/// Graphviz digraph; edges run child -> parent.
inline std::string to_dot(const RootedMarkovTree& t, std::span<const std::string> names) {
  std::ostringstream os;
  os << "digraph markov_tree {\n";
  for (std::size_t i = 0; i < t.vertices.size(); ++i) {
    os << "  v" << i << " [label=\"" << set_label(t.vertices[i], names) << "\"];\n";
  }
  for (std::size_t i = 0; i < t.vertices.size(); ++i) {
    if (t.parent[i]) os << "  v" << i << " -> v" << *t.parent[i] << ";\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace vbs
