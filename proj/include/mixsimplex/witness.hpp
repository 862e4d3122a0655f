#pragma once

// Witness handling that depends only on the original constraints: turning a
// δ-rational assignment into a rational point, checking points and Farkas
// certificates, and the textual certificate format.
//
//   sat                      unsat
//   <var> <rat>              <constraint-id> <rat>
//   ...                      ...
//
// One entry per line, a single space as separator, variables in input
// order, constraint ids ascending (0-based input order).

#include <charconv>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "mixsimplex/constraints.hpp"
#include "mixsimplex/rat.hpp"
#include "mixsimplex/verdict.hpp"

namespace mixsimplex {

namespace detail {
inline Rat evaluate(const RawConstraint& c, std::span<const Rat> point) {
  Rat sum;
  for (const auto& t : c.terms) sum += t.coef * point[index(t.var)];
  return sum;
}
}  // namespace detail

/// True iff `point` satisfies every constraint exactly, strictness included.
inline bool verify_sat(std::span<const Rat> point, std::span<const RawConstraint> cs) {
  for (const auto& c : cs) {
    for (const auto& t : c.terms)
      if (index(t.var) >= point.size()) return false;
    Rat lhs = detail::evaluate(c, point);
    bool ok = false;
    switch (c.relation) {
      case Relation::Le: ok = lhs <= c.rhs; break;
      case Relation::Lt: ok = lhs < c.rhs; break;
      case Relation::Ge: ok = lhs >= c.rhs; break;
      case Relation::Gt: ok = lhs > c.rhs; break;
      case Relation::Eq: ok = lhs == c.rhs; break;
    }
    if (!ok) return false;
  }
  return true;
}

/// True iff the multipliers combine the constraints into `0 <= c` with
/// c < 0 or `0 < c` with c <= 0. Inequalities are oriented as `<=`/`<`
/// and need nonnegative multipliers; equalities accept either sign.
inline bool verify_unsat(const Certificate& multipliers, std::span<const RawConstraint> cs) {
  std::map<ConstraintId, const RawConstraint*> by_id;
  for (const auto& c : cs) by_id[c.id] = &c;

  std::map<VarId, Rat> linear;
  Rat constant;
  bool strict = false;
  for (const auto& [id, m] : multipliers) {
    auto it = by_id.find(id);
    if (it == by_id.end()) return false;
    const RawConstraint& c = *it->second;
    if (m.is_zero()) continue;
    bool eq = c.relation == Relation::Eq;
    if (!eq && m.sign() < 0) return false;
    Rat orient = (c.relation == Relation::Ge || c.relation == Relation::Gt) ? Rat(-1) : Rat(1);
    Rat k = m * orient;
    for (const auto& t : c.terms) linear[t.var] += k * t.coef;
    constant += k * c.rhs;
    if (is_strict(c.relation)) strict = true;
  }
  for (const auto& [v, a] : linear)
    if (!a.is_zero()) return false;
  return constant.sign() < 0 || (strict && constant.is_zero());
}

/// Rational point from the δ-assignment u + εv: the half-line u + t v,
/// t > 0, is admissible on (0, t0); returns u + (t0/2) v, taking t0 = 1
/// when the half-line never leaves the feasible set.
inline std::vector<Rat> materialize_point(std::span<const Rat> u, std::span<const Rat> v,
                                          std::span<const RawConstraint> cs) {
  bool v_zero = true;
  for (const auto& x : v)
    if (!x.is_zero()) v_zero = false;
  if (v_zero) return {u.begin(), u.end()};

  std::optional<Rat> t0;
  for (const auto& c : cs) {
    Rat at = detail::evaluate(c, u);
    Rat slope = detail::evaluate(c, v);
    if (c.relation == Relation::Eq) {
      if (!slope.is_zero() || at != c.rhs)
        throw ContractViolation("materialize_point: equality not satisfied by assignment");
      continue;
    }
    // Orient as `expr <= rhs`.
    bool ge = c.relation == Relation::Ge || c.relation == Relation::Gt;
    if (ge) {
      at = -at;
      slope = -slope;
    }
    Rat rhs = ge ? -c.rhs : c.rhs;
    if (slope.sign() <= 0) continue;
    if (at >= rhs)
      throw ContractViolation("materialize_point: assignment violates a constraint");
    Rat t = (rhs - at) / slope;
    if (!t0 || t < *t0) t0 = std::move(t);
  }
  Rat t = (t0 ? *t0 : Rat(1)) / Rat(2);
  std::vector<Rat> point;
  point.reserve(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) point.push_back(u[i] + t * v[i]);
  if (!verify_sat(point, cs))
    throw ContractViolation("materialize_point: result does not satisfy the constraints");
  return point;
}

inline void write_verdict(std::ostream& os, const Verdict& verdict,
                          std::span<const std::string> var_names) {
  if (verdict.sat()) {
    os << "sat\n";
    for (std::size_t i = 0; i < verdict.point.size(); ++i)
      os << var_names[i] << ' ' << verdict.point[i] << '\n';
  } else {
    os << "unsat\n";
    for (const auto& [id, m] : verdict.certificate) os << id << ' ' << m << '\n';
  }
}

/// Parses the output of write_verdict. Variable names are resolved against
/// `var_names`; returns nullopt on any deviation from the format.
inline std::optional<Verdict> read_verdict(std::istream& is,
                                           std::span<const std::string> var_names) {
  std::string header;
  if (!std::getline(is, header)) return std::nullopt;
  std::string line;
  if (header == "sat") {
    std::vector<Rat> point(var_names.size());
    std::vector<bool> seen(var_names.size(), false);
    while (std::getline(is, line)) {
      auto sp = line.find(' ');
      if (sp == std::string::npos) return std::nullopt;
      std::string name = line.substr(0, sp);
      auto value = Rat::parse(line.substr(sp + 1));
      if (!value) return std::nullopt;
      std::size_t i = 0;
      while (i < var_names.size() && var_names[i] != name) ++i;
      if (i == var_names.size() || seen[i]) return std::nullopt;
      seen[i] = true;
      point[i] = *value;
    }
    return Verdict::make_sat(std::move(point));
  }
  if (header == "unsat") {
    Certificate c;
    while (std::getline(is, line)) {
      auto sp = line.find(' ');
      if (sp == std::string::npos) return std::nullopt;
      std::string digits = line.substr(0, sp);
      std::size_t id = 0;
      auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), id);
      if (digits.empty() || ec != std::errc() || end != digits.data() + digits.size())
        return std::nullopt;
      auto value = Rat::parse(line.substr(sp + 1));
      if (!value || c.count(id)) return std::nullopt;
      c[id] = *value;
    }
    return Verdict::make_unsat(std::move(c));
  }
  return std::nullopt;
}

}  // namespace mixsimplex
