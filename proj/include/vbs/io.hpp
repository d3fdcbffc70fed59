#pragma once

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "vbs/algebra.hpp"
#include "vbs/domain.hpp"
#include "vbs/error.hpp"
#include "vbs/markov_tree.hpp"
#include "vbs/oracle.hpp"
#include "vbs/problem.hpp"
#include "vbs/propagation.hpp"
#include "vbs/valuation.hpp"

namespace vbs {

// Problem text format (one declaration per line, '#' starts a comment):
//
//   objective min|max                 optional, default min
//   variable <name> <state>...        at least one state
//   valuation <name> <var>...         followed by rows, then `end`
//   <state>... <value>                one state per scope variable
//   end
//
// Missing rows take the combination identity; `inf`/`-inf` mark forbidden
// configurations.

/// Shortest decimal text that reads back to the same double.
inline std::string format_value(Value v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, end);
}

namespace detail {

inline std::vector<std::string_view> tokenize(std::string_view line) {
  if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

inline std::optional<Value> parse_value(std::string_view s) {
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  Value v{};
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || std::isnan(v)) return std::nullopt;
  return v;
}

struct PendingValuation {
  std::string name;
  std::size_t line = 0;
  std::vector<VarId> file_order;  // scope as written
  VariableSet domain;
  std::vector<std::size_t> cards;
  std::vector<std::size_t> strides;  // per file_order position
  std::vector<Value> table;
  std::vector<char> filled;
};

}  // namespace detail

inline Problem parse_problem(std::string_view text) {
  Problem p;
  std::map<std::string, VarId, std::less<>> var_index;
  std::vector<std::size_t> declared_at;
  std::optional<detail::PendingValuation> open;
  bool objective_seen = false;
  std::size_t line_no = 0;

  auto finish = [&](detail::PendingValuation& pv) {
    std::vector<Value> table = std::move(pv.table);
    const Value identity = with_algebra(p.sense, [](auto alg) { return alg.identity(); });
    for (std::size_t i = 0; i < table.size(); ++i) {
      if (!pv.filled[i]) table[i] = identity;
    }
    p.factors.push_back({pv.name, Valuation(pv.domain, pv.cards, std::move(table))});
  };

  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view raw = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.remove_suffix(1);
    const auto tok = detail::tokenize(raw);
    if (tok.empty()) continue;

    if (open) {
      detail::PendingValuation& pv = *open;
      if (tok.size() == 1 && tok[0] == "end") {
        finish(pv);
        open.reset();
        continue;
      }
      if (tok.size() != pv.file_order.size() + 1) {
        throw ParseError(line_no, "row has " + std::to_string(tok.size() - 1) +
                                      " states but valuation '" + pv.name + "' has " +
                                      std::to_string(pv.file_order.size()) + " variables");
      }
      std::size_t idx = 0;
      for (std::size_t k = 0; k < pv.file_order.size(); ++k) {
        const Variable& var = p.variables[pv.file_order[k]];
        auto it = std::find(var.states.begin(), var.states.end(), tok[k]);
        if (it == var.states.end()) {
          throw ParseError(line_no, "unknown state '" + std::string(tok[k]) + "' of variable " +
                                        var.name);
        }
        idx += std::size_t(it - var.states.begin()) * pv.strides[k];
      }
      const auto value = detail::parse_value(tok.back());
      if (!value) throw ParseError(line_no, "invalid value '" + std::string(tok.back()) + "'");
      if (pv.filled[idx]) throw ParseError(line_no, "duplicate row in valuation '" + pv.name + "'");
      pv.filled[idx] = 1;
      pv.table[idx] = *value;
      continue;
    }

    const std::string_view kw = tok[0];
    if (kw == "objective") {
      if (objective_seen) throw ParseError(line_no, "objective declared twice");
      if (!p.factors.empty()) throw ParseError(line_no, "objective must precede valuations");
      if (tok.size() != 2 || (tok[1] != "min" && tok[1] != "max")) {
        throw ParseError(line_no, "expected 'objective min' or 'objective max'");
      }
      p.sense = tok[1] == "min" ? Sense::minimize : Sense::maximize;
      objective_seen = true;
    } else if (kw == "variable") {
      if (tok.size() < 2) throw ParseError(line_no, "variable needs a name");
      if (tok.size() < 3) throw ParseError(line_no, "variable '" + std::string(tok[1]) + "' has an empty frame");
      const std::string name(tok[1]);
      if (var_index.count(name)) throw ParseError(line_no, "variable '" + name + "' declared twice");
      Variable v{name, {}};
      for (std::size_t k = 2; k < tok.size(); ++k) {
        std::string s(tok[k]);
        if (std::find(v.states.begin(), v.states.end(), s) != v.states.end()) {
          throw ParseError(line_no, "state '" + s + "' repeated in variable " + name);
        }
        v.states.push_back(std::move(s));
      }
      var_index.emplace(name, p.variables.size());
      declared_at.push_back(line_no);
      p.variables.push_back(std::move(v));
    } else if (kw == "valuation") {
      if (tok.size() < 2) throw ParseError(line_no, "valuation needs a name");
      if (tok.size() < 3) throw ParseError(line_no, "valuation '" + std::string(tok[1]) + "' has an empty scope");
      detail::PendingValuation pv;
      pv.name = std::string(tok[1]);
      pv.line = line_no;
      for (const Factor& f : p.factors) {
        if (f.name == pv.name) throw ParseError(line_no, "valuation '" + pv.name + "' declared twice");
      }
      for (std::size_t k = 2; k < tok.size(); ++k) {
        auto it = var_index.find(tok[k]);
        if (it == var_index.end()) {
          throw ParseError(line_no, "unknown variable '" + std::string(tok[k]) + "'");
        }
        if (std::find(pv.file_order.begin(), pv.file_order.end(), it->second) != pv.file_order.end()) {
          throw ParseError(line_no, "variable '" + it->first + "' repeated in scope");
        }
        pv.file_order.push_back(it->second);
      }
      pv.domain = VariableSet(pv.file_order);
      for (VarId v : pv.domain) pv.cards.push_back(p.variables[v].frame_size());
      const auto canonical = detail::row_major_strides(pv.cards);
      for (VarId v : pv.file_order) pv.strides.push_back(canonical[pv.domain.position(v)]);
      const std::size_t n = detail::checked_product(pv.cards);
      pv.table.assign(n, 0.0);
      pv.filled.assign(n, 0);
      open = std::move(pv);
    } else if (kw == "end") {
      throw ParseError(line_no, "'end' outside a valuation");
    } else {
      throw ParseError(line_no, "unknown declaration '" + std::string(kw) + "'");
    }
  }
  if (open) throw ParseError(open->line, "valuation '" + open->name + "' is missing 'end'");

  std::vector<char> used(p.variables.size(), 0);
  for (const Factor& f : p.factors) {
    for (VarId v : f.valuation.domain()) used[v] = 1;
  }
  for (VarId v = 0; v < used.size(); ++v) {
    if (!used[v]) {
      throw ParseError(declared_at[v], "variable '" + p.variables[v].name + "' is in no valuation");
    }
  }
  return p;
}

/// Writes every row of every valuation, scopes in canonical order.
inline std::string serialize_problem(const Problem& p) {
  std::ostringstream os;
  os << "objective " << to_string(p.sense) << "\n";
  for (const Variable& v : p.variables) {
    os << "variable " << v.name;
    for (const std::string& s : v.states) os << ' ' << s;
    os << "\n";
  }
  for (const Factor& f : p.factors) {
    const Valuation& g = f.valuation;
    os << "valuation " << f.name;
    for (VarId v : g.domain()) os << ' ' << p.variables[v].name;
    os << "\n";
    for (std::size_t i = 0; i < g.size(); ++i) {
      const Configuration c = g.configuration(i);
      for (std::size_t k = 0; k < c.size(); ++k) {
        os << p.variables[c.domain()[k]].states[c.states()[k]] << ' ';
      }
      os << format_value(g[i]) << "\n";
    }
    os << "end\n";
  }
  return os.str();
}

namespace detail {

inline std::string row_states(const Configuration& c, const Problem& p) {
  if (c.size() == 0) return "<>";
  std::string out;
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (k) out += ' ';
    out += p.variables[c.domain()[k]].states[c.states()[k]];
  }
  return out;
}

}  // namespace detail

inline std::string format_solve(const SolveResult& r, const Problem& p) {
  std::ostringstream os;
  os << "objective " << to_string(p.sense) << "\n";
  os << "optimum " << format_value(r.optimum) << "\n";
  os << "solution " << format_configuration(r.solution, p) << "\n";
  if (r.all_optima) {
    os << "optima " << r.all_optima->size() << "\n";
    for (const Configuration& c : *r.all_optima) os << "  " << format_configuration(c, p) << "\n";
  }
  return os.str();
}

inline std::string format_oracle(const OracleResult& r, const Problem& p) {
  std::ostringstream os;
  os << "objective " << to_string(p.sense) << "\n";
  os << "optimum " << format_value(r.optimum) << "\n";
  os << "joint_size " << r.joint_size << "\n";
  os << "argopt " << r.argopt.size() << "\n";
  for (const Configuration& c : r.argopt) os << "  " << format_configuration(c, p) << "\n";
  return os.str();
}

/// Message tables of both passes. Inward records list the combined table at
/// the sender and the message rows; rows of an eliminating message end with
/// the optimal states of the eliminated variable, canonical pick first,
/// alternatives joined by '|'.
inline std::string format_trace(const Trace& trace, const RootedMarkovTree& t, const Problem& p) {
  const auto names = p.names();
  std::ostringstream os;
  for (const InwardStep& s : trace.inward) {
    os << "inward " << set_label(t.vertices[s.from], names) << " -> "
       << set_label(t.vertices[s.to], names) << "\n";
    os << "  combined " << set_label(s.combined.domain(), names) << "\n";
    for (std::size_t i = 0; i < s.combined.size(); ++i) {
      os << "    " << detail::row_states(s.combined.configuration(i), p) << "  "
         << format_value(s.combined[i]) << "\n";
    }
    os << "  message " << set_label(s.message.domain(), names);
    if (s.solution) os << "  solution " << names[s.solution->variable()];
    os << "\n";
    for (std::size_t i = 0; i < s.message.size(); ++i) {
      os << "    " << detail::row_states(s.message.configuration(i), p) << "  "
         << format_value(s.message[i]);
      if (s.solution) {
        const Variable& x = p.variables[s.solution->variable()];
        os << "  ";
        const auto ties = s.solution->ties_at(i);
        for (std::size_t k = 0; k < ties.size(); ++k) {
          if (k) os << '|';
          os << x.states[ties[k]];
        }
      }
      os << "\n";
    }
  }
  for (const OutwardStep& s : trace.outward) {
    os << "outward " << set_label(t.vertices[s.from], names) << " -> "
       << set_label(t.vertices[s.to], names) << "  " << detail::row_states(s.message, p) << "\n";
  }
  return os.str();
}

}  // namespace vbs
