#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mixsimplex/rat.hpp"

namespace mixsimplex {

/// Variable identifier. Structural variables come first, slack variables
/// after them; the numeric order is the index order used for tie-breaking.
enum class VarId : std::uint32_t {};

constexpr std::size_t index(VarId v) noexcept { return static_cast<std::size_t>(v); }
constexpr VarId var_id(std::size_t i) noexcept { return static_cast<VarId>(i); }

struct RowEntry {
  VarId var;
  Rat coef;
  friend bool operator==(const RowEntry&, const RowEntry&) = default;
};

/// Sparse vector of rationals ordered by VarId, without explicit zeros.
class SparseRow {
 public:
  SparseRow() = default;
  explicit SparseRow(std::vector<RowEntry> entries) : entries_(std::move(entries)) {
    std::sort(entries_.begin(), entries_.end(),
              [](const RowEntry& a, const RowEntry& b) { return a.var < b.var; });
    for (std::size_t i = 1; i < entries_.size(); ++i)
      if (entries_[i - 1].var == entries_[i].var)
        throw ContractViolation("SparseRow: duplicate variable");
    std::erase_if(entries_, [](const RowEntry& e) { return e.coef.is_zero(); });
  }

  [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }
  [[nodiscard]] bool empty() const noexcept { return entries_.empty(); }
  [[nodiscard]] auto begin() const noexcept { return entries_.begin(); }
  [[nodiscard]] auto end() const noexcept { return entries_.end(); }
  [[nodiscard]] std::span<const RowEntry> entries() const noexcept { return entries_; }

  [[nodiscard]] const Rat* find(VarId v) const {
    auto it = lower_bound(v);
    return it != entries_.end() && it->var == v ? &it->coef : nullptr;
  }
  [[nodiscard]] Rat coef(VarId v) const {
    const Rat* c = find(v);
    return c ? *c : Rat();
  }

  void set(VarId v, Rat c) {
    auto it = lower_bound(v);
    bool present = it != entries_.end() && it->var == v;
    if (c.is_zero()) {
      if (present) entries_.erase(it);
    } else if (present) {
      it->coef = std::move(c);
    } else {
      entries_.insert(it, RowEntry{v, std::move(c)});
    }
  }

  /// Removes v and returns its coefficient (zero when absent).
  Rat take(VarId v) {
    auto it = lower_bound(v);
    if (it == entries_.end() || it->var != v) return Rat();
    Rat c = std::move(it->coef);
    entries_.erase(it);
    return c;
  }

  void scale(const Rat& k) {
    if (k.is_zero()) {
      entries_.clear();
      return;
    }
    for (auto& e : entries_) e.coef *= k;
  }

  /// this += k * other
  void add_scaled(const Rat& k, const SparseRow& other) {
    if (k.is_zero() || other.empty()) return;
    std::vector<RowEntry> out;
    out.reserve(entries_.size() + other.entries_.size());
    auto a = entries_.begin();
    auto b = other.entries_.begin();
    while (a != entries_.end() || b != other.entries_.end()) {
      if (b == other.entries_.end() || (a != entries_.end() && a->var < b->var)) {
        out.push_back(std::move(*a++));
      } else if (a == entries_.end() || b->var < a->var) {
        out.push_back(RowEntry{b->var, k * b->coef});
        ++b;
      } else {
        Rat c = a->coef + k * b->coef;
        if (!c.is_zero()) out.push_back(RowEntry{a->var, std::move(c)});
        ++a;
        ++b;
      }
    }
    entries_ = std::move(out);
  }

  friend bool operator==(const SparseRow&, const SparseRow&) = default;

 private:
  [[nodiscard]] std::vector<RowEntry>::const_iterator lower_bound(VarId v) const {
    return std::lower_bound(entries_.begin(), entries_.end(), v,
                            [](const RowEntry& e, VarId x) { return e.var < x; });
  }
  std::vector<RowEntry>::iterator lower_bound(VarId v) {
    return std::lower_bound(entries_.begin(), entries_.end(), v,
                            [](const RowEntry& e, VarId x) { return e.var < x; });
  }

  std::vector<RowEntry> entries_;
};

}  // namespace mixsimplex
