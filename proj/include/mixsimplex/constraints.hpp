#pragma once

// Conjunctions of linear constraints: the text format, normalization of
// left-hand sides, and the canonical problem (slack-variable equalities plus
// per-variable bounds) consumed by the solvers.

#include <array>
#include <cctype>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mixsimplex/delta.hpp"
#include "mixsimplex/rat.hpp"
#include "mixsimplex/sparse_row.hpp"

namespace mixsimplex {

enum class Relation { Le, Lt, Ge, Gt, Eq };
enum class Side { Lower, Upper };

using ConstraintId = std::size_t;

inline std::string_view to_string(Relation r) {
  switch (r) {
    case Relation::Le: return "<=";
    case Relation::Lt: return "<";
    case Relation::Ge: return ">=";
    case Relation::Gt: return ">";
    case Relation::Eq: return "=";
  }
  return "?";
}

inline Relation flipped(Relation r) {
  switch (r) {
    case Relation::Le: return Relation::Ge;
    case Relation::Lt: return Relation::Gt;
    case Relation::Ge: return Relation::Le;
    case Relation::Gt: return Relation::Lt;
    case Relation::Eq: return Relation::Eq;
  }
  return r;
}

inline bool is_strict(Relation r) { return r == Relation::Lt || r == Relation::Gt; }

struct Term {
  VarId var;
  Rat coef;
  friend bool operator==(const Term&, const Term&) = default;
};

/// sum(terms) relation rhs. Terms are sorted by variable and nonzero.
struct RawConstraint {
  std::vector<Term> terms;
  Relation relation = Relation::Le;
  Rat rhs;
  ConstraintId id = 0;
};

/// Parsed constraint file: structural variable names in first-appearance
/// order and one constraint per non-empty line.
struct ConstraintSystem {
  std::vector<std::string> var_names;
  std::vector<RawConstraint> constraints;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  [[nodiscard]] std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

namespace detail {

inline bool is_identifier(std::string_view tok) {
  if (tok.empty()) return false;
  auto first = static_cast<unsigned char>(tok.front());
  if (!std::isalpha(first) && tok.front() != '_') return false;
  for (char c : tok)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
  return true;
}

inline std::optional<Relation> relation_token(std::string_view tok) {
  if (tok == "<=") return Relation::Le;
  if (tok == "<") return Relation::Lt;
  if (tok == ">=") return Relation::Ge;
  if (tok == ">") return Relation::Gt;
  if (tok == "=") return Relation::Eq;
  return std::nullopt;
}

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace detail

/// Parses the line-oriented constraint format (see README for the grammar).
/// Terms may appear on both sides; they are moved to the left and merged,
/// constants are moved to the right.
inline ConstraintSystem parse(std::string_view text) {
  ConstraintSystem sys;
  std::unordered_map<std::string, VarId> ids;
  auto lookup = [&](std::string_view name) {
    auto [it, inserted] = ids.try_emplace(std::string(name), var_id(sys.var_names.size()));
    if (inserted) sys.var_names.emplace_back(name);
    return it->second;
  };

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    std::string_view line = text.substr(pos, eol - pos);
    pos = eol + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto toks = detail::split_ws(line);
    if (toks.empty()) continue;

    std::map<VarId, Rat> terms;
    Rat constant;  // accumulated as left - right
    std::optional<Relation> rel;
    bool saw_rhs_item = false;
    for (std::size_t i = 0; i < toks.size(); ++i) {
      if (auto r = detail::relation_token(toks[i])) {
        if (rel) throw ParseError(line_no, "more than one relation");
        rel = r;
        continue;
      }
      Rat sign = rel ? Rat(-1) : Rat(1);
      if (rel) saw_rhs_item = true;
      if (detail::is_identifier(toks[i])) {
        terms[lookup(toks[i])] += sign;
        continue;
      }
      auto value = Rat::parse(toks[i]);
      if (!value) throw ParseError(line_no, "malformed token '" + std::string(toks[i]) + "'");
      if (i + 1 < toks.size() && detail::is_identifier(toks[i + 1])) {
        terms[lookup(toks[i + 1])] += sign * *value;
        ++i;
      } else {
        constant += sign * *value;
      }
    }
    if (!rel) throw ParseError(line_no, "missing relation");
    if (!saw_rhs_item) throw ParseError(line_no, "missing right-hand side");

    RawConstraint c;
    for (auto& [v, k] : terms)
      if (!k.is_zero()) c.terms.push_back(Term{v, k});
    if (c.terms.empty()) throw ParseError(line_no, "no variables");
    c.relation = *rel;
    c.rhs = -constant;
    c.id = sys.constraints.size();
    sys.constraints.push_back(std::move(c));
  }
  return sys;
}

/// A constraint rewritten as `scale * lhs relation scale * rhs` where the
/// scaled left-hand side (the key) has coprime integer coefficients and a
/// positive leading coefficient in VarId order.
struct NormalizedConstraint {
  std::vector<Term> key;
  Relation relation;
  Rat rhs;
  Rat scale;
};

inline NormalizedConstraint normalize(const RawConstraint& c) {
  if (c.terms.empty()) throw ContractViolation("normalize: constraint without terms");
  std::vector<Term> terms = c.terms;
  std::sort(terms.begin(), terms.end(), [](const Term& a, const Term& b) { return a.var < b.var; });

  Rat den_lcm(1);
  for (const auto& t : terms) den_lcm = integer_lcm(den_lcm, t.coef.denominator());
  Rat num_gcd(0);
  for (const auto& t : terms) num_gcd = integer_gcd(num_gcd, (t.coef * den_lcm).abs());
  Rat scale = den_lcm / num_gcd;
  if (terms.front().coef.sign() < 0) scale = -scale;

  NormalizedConstraint n{{}, scale.sign() < 0 ? flipped(c.relation) : c.relation, c.rhs * scale,
                         scale};
  for (auto& t : terms) n.key.push_back(Term{t.var, t.coef * scale});
  return n;
}

/// Bound side and δ-rational value encoding `x relation rhs`. Equality is
/// handled by callers as a pair of non-strict bounds.
struct SidedValue {
  Side side;
  DeltaRat value;
};

inline SidedValue strict_to_delta(Relation relation, const Rat& rhs) {
  switch (relation) {
    case Relation::Le: return {Side::Upper, DeltaRat(rhs, 0)};
    case Relation::Lt: return {Side::Upper, DeltaRat(rhs, -1)};
    case Relation::Ge: return {Side::Lower, DeltaRat(rhs, 0)};
    case Relation::Gt: return {Side::Lower, DeltaRat(rhs, 1)};
    case Relation::Eq: break;
  }
  throw ContractViolation("strict_to_delta: equality has two sides");
}

/// Links a variable bound to the constraint it came from. The bound written
/// as `v - u <= 0` (upper) or `l - v <= 0` (lower) equals `factor` times the
/// constraint written as `sum - rhs <= 0` (for <=, <, =) or `rhs - sum <= 0`
/// (for >=, >). Factors are positive except for equalities.
struct BoundTag {
  ConstraintId constraint = 0;
  Rat factor;
  friend bool operator==(const BoundTag&, const BoundTag&) = default;
};

struct BoundAtom {
  VarId var;
  Side side;
  DeltaRat value;
  BoundTag tag;
};

/// Slack variable `var` equals `row` over structural variables.
struct SlackDefinition {
  VarId var;
  SparseRow row;
};

struct Problem {
  std::vector<std::string> var_names;  // structural first, then slacks
  std::size_t num_structural = 0;
  std::vector<SlackDefinition> equalities;
  std::vector<RawConstraint> constraints;
  /// atoms[i] are the bounds contributed by constraints[i].
  std::vector<std::vector<BoundAtom>> atoms;
  /// backmap[v][side] lists every contributor to that side, in input order.
  std::vector<std::array<std::vector<BoundAtom>, 2>> backmap;

  [[nodiscard]] std::size_t num_vars() const { return var_names.size(); }

  /// Tightest contributed bound; ties go to the lowest constraint id.
  [[nodiscard]] std::optional<BoundAtom> tightest(VarId v, Side side) const {
    const auto& list = backmap[index(v)][static_cast<std::size_t>(side)];
    const BoundAtom* best = nullptr;
    for (const auto& a : list) {
      if (!best) {
        best = &a;
        continue;
      }
      auto c = a.value <=> best->value;
      bool tighter = side == Side::Upper ? c < 0 : c > 0;
      if (tighter || (c == 0 && a.tag.constraint < best->tag.constraint)) best = &a;
    }
    if (!best) return std::nullopt;
    return *best;
  }
};

/// Canonical problem: one slack variable per distinct multi-term key,
/// single-variable constraints as direct bounds.
inline Problem build_problem(std::span<const RawConstraint> cs,
                             std::vector<std::string> structural_names) {
  Problem p;
  p.num_structural = structural_names.size();
  p.var_names = std::move(structural_names);
  p.constraints.assign(cs.begin(), cs.end());

  std::map<std::vector<std::pair<std::uint32_t, Rat>>, VarId> slack_of;
  for (const auto& c : cs) {
    for (const auto& t : c.terms)
      if (index(t.var) >= p.num_structural)
        throw ContractViolation("build_problem: unknown variable in constraint");
    NormalizedConstraint n = normalize(c);

    VarId target;
    if (n.key.size() == 1) {
      target = n.key.front().var;
    } else {
      std::vector<std::pair<std::uint32_t, Rat>> key;
      key.reserve(n.key.size());
      for (const auto& t : n.key) key.emplace_back(static_cast<std::uint32_t>(t.var), t.coef);
      auto it = slack_of.find(key);
      if (it == slack_of.end()) {
        VarId s = var_id(p.var_names.size());
        p.var_names.push_back("_s" + std::to_string(p.equalities.size()));
        std::vector<RowEntry> row;
        for (const auto& t : n.key) row.push_back(RowEntry{t.var, t.coef});
        p.equalities.push_back(SlackDefinition{s, SparseRow(std::move(row))});
        it = slack_of.emplace(std::move(key), s).first;
      }
      target = it->second;
    }

    bool oriented_ge = c.relation == Relation::Ge || c.relation == Relation::Gt;
    Rat upper_factor = oriented_ge ? -n.scale : n.scale;
    std::vector<BoundAtom> atoms;
    if (n.relation == Relation::Eq) {
      atoms.push_back({target, Side::Lower, DeltaRat(n.rhs), {c.id, -n.scale}});
      atoms.push_back({target, Side::Upper, DeltaRat(n.rhs), {c.id, n.scale}});
    } else {
      auto [side, value] = strict_to_delta(n.relation, n.rhs);
      Rat factor = side == Side::Upper ? upper_factor : -upper_factor;
      atoms.push_back({target, side, std::move(value), {c.id, std::move(factor)}});
    }
    p.atoms.push_back(std::move(atoms));
  }

  p.backmap.resize(p.var_names.size());
  for (const auto& list : p.atoms)
    for (const auto& a : list) p.backmap[index(a.var)][static_cast<std::size_t>(a.side)].push_back(a);
  return p;
}

inline Problem build_problem(const ConstraintSystem& sys) {
  return build_problem(sys.constraints, sys.var_names);
}

}  // namespace mixsimplex
