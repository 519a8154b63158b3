#pragma once

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "whittaker/affine_algebra.hpp"

namespace whittaker {

using Word = std::vector<GenSymbol>;
using UElement = LinComb<Word>;

/// Strict total order on generator symbols used to define PBW normal form.
using PbwOrder = std::function<bool(const GenSymbol&, const GenSymbol&)>;

/// Central symbols first, then e < h < f, then modes ascending.
inline PbwOrder standard_affine_order() {
  return [](const GenSymbol& a, const GenSymbol& b) {
    auto rank = [](Family fam) {
      switch (fam) {
        case Family::C: return 0;
        case Family::C1: return 1;
        case Family::D: return 2;
        case Family::T: return 3;
        case Family::L: return 4;
        case Family::Phi: return 5;
        case Family::E: return 6;
        case Family::H: return 7;
        case Family::F: return 8;
      }
      return 9;
    };
    int ra = rank(a.family), rb = rank(b.family);
    if (ra != rb) return ra < rb;
    return a.mode < b.mode;
  };
}

inline std::string to_string(const Word& w) {
  if (w.empty()) return "1";
  std::string out;
  for (const auto& g : w) {
    if (!out.empty()) out += " ";
    out += to_string(g);
  }
  return out;
}

/// One straightening step: the first adjacent inversion x y (with y before x
/// in the order) becomes y x plus the contracted words carrying [x, y].
/// Returns false when the word is already ordered.
inline bool rewrite_step(AlgebraId alg, const Word& w, const PbwOrder& order,
                         std::vector<std::pair<Word, Rational>>& out) {
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    if (order(w[i + 1], w[i])) {
      Word swapped = w;
      std::swap(swapped[i], swapped[i + 1]);
      out.emplace_back(std::move(swapped), 1);
      for (const auto& [g, coeff] : bracket(alg, w[i], w[i + 1])) {
        Word contracted(w.begin(), w.begin() + static_cast<long>(i));
        contracted.push_back(g);
        contracted.insert(contracted.end(), w.begin() + static_cast<long>(i) + 2, w.end());
        out.emplace_back(std::move(contracted), coeff);
      }
      return true;
    }
  }
  return false;
}

inline std::size_t inversion_count(const Word& w, const PbwOrder& order) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    for (std::size_t j = i + 1; j < w.size(); ++j) {
      if (order(w[j], w[i])) ++n;
    }
  }
  return n;
}

/// Rewrites words in the enveloping algebra into PBW normal form.
class Rewriter {
 public:
  Rewriter(AlgebraId alg, PbwOrder order) : alg_(alg), order_(std::move(order)) {}

  const UElement& normal_order(const Word& w) const {
    auto it = memo_.find(w);
    if (it != memo_.end()) return it->second;
    for (const auto& g : w) {
      if (!in_alphabet(alg_, g)) {
        throw std::domain_error("symbol " + to_string(g) + " outside " + to_string(alg_));
      }
    }
    UElement result;
    std::vector<std::pair<Word, Rational>> next;
    if (!rewrite_step(alg_, w, order_, next)) {
      result.add_term(w, 1);
    } else {
      for (const auto& [word, coeff] : next) result.add_scaled(normal_order(word), coeff);
    }
    return memo_.emplace(w, std::move(result)).first->second;
  }

  UElement normal_order(const UElement& u) const {
    UElement out;
    for (const auto& [w, coeff] : u) out.add_scaled(normal_order(w), coeff);
    return out;
  }

  UElement multiply(const UElement& a, const UElement& b) const {
    UElement out;
    for (const auto& [wa, ca] : a) {
      for (const auto& [wb, cb] : b) {
        Word w = wa;
        w.insert(w.end(), wb.begin(), wb.end());
        out.add_scaled(normal_order(w), ca * cb);
      }
    }
    return out;
  }

  AlgebraId algebra() const { return alg_; }
  const PbwOrder& order() const { return order_; }

 private:
  AlgebraId alg_;
  PbwOrder order_;
  mutable std::map<Word, UElement> memo_;
};

inline UElement normal_order(AlgebraId alg, const Word& w, const PbwOrder& order) {
  return Rewriter(alg, order).normal_order(w);
}

/// Finitely supported vector of non-negative integers indexed by positive
/// slots.
class ExponentVector {
 public:
  ExponentVector() = default;
  ExponentVector(std::initializer_list<std::pair<const int, int>> entries) {
    for (const auto& [slot, value] : entries) set(slot, value);
  }

  static ExponentVector unit(int slot) {
    ExponentVector v;
    v.set(slot, 1);
    return v;
  }

  int operator[](int slot) const {
    auto it = entries_.find(slot);
    return it == entries_.end() ? 0 : it->second;
  }

  void set(int slot, int value) {
    if (slot < 1) throw std::domain_error("exponent slots start at 1");
    if (value < 0) throw std::domain_error("exponents are non-negative");
    if (value == 0) {
      entries_.erase(slot);
    } else {
      entries_[slot] = value;
    }
  }

  void add(int slot, int delta) { set(slot, (*this)[slot] + delta); }

  int size() const {
    int s = 0;
    for (const auto& [slot, value] : entries_) s += value;
    return s;
  }
  bool is_zero() const { return entries_.empty(); }
  int min_slot() const { return entries_.begin()->first; }
  const std::map<int, int>& entries() const { return entries_; }

  friend bool operator==(const ExponentVector&, const ExponentVector&) = default;
  friend auto operator<=>(const ExponentVector& a, const ExponentVector& b) {
    return a.entries_ <=> b.entries_;
  }

  std::string to_string() const {
    std::string out;
    for (const auto& [slot, value] : entries_) {
      if (!out.empty()) out += " + ";
      out += (value == 1 ? "" : std::to_string(value)) + "eps" + std::to_string(slot);
    }
    return out.empty() ? "0" : out;
  }

 private:
  std::map<int, int> entries_;
};

/// Triple (i, j, k) for the three blocks of a PBW monomial e^i h^j f^k.
struct ExponentTriple {
  ExponentVector i, j, k;
  friend bool operator==(const ExponentTriple&, const ExponentTriple&) = default;
};

/// Slot 3k+1, 3k+2, 3k+3 contributes k per unit.
inline int degree_D(const ExponentVector& v) {
  int total = 0;
  for (const auto& [slot, value] : v.entries()) total += ((slot - 1) / 3) * value;
  return total;
}

enum class MonomialOrder { Revlex, Principal, LengthSlot };

namespace detail {

inline int revlex_cmp(ExponentVector a, ExponentVector b) {
  while (true) {
    if (a.is_zero() && b.is_zero()) return 0;
    if (a.is_zero()) return -1;
    if (b.is_zero()) return 1;
    int ma = a.min_slot(), mb = b.min_slot();
    if (ma != mb) return ma > mb ? -1 : 1;
    a.add(ma, -1);
    b.add(mb, -1);
  }
}

// Total size first, then the highest slot where the vectors differ.
inline int length_slot_cmp(const ExponentVector& a, const ExponentVector& b) {
  int sa = a.size(), sb = b.size();
  if (sa != sb) return sa < sb ? -1 : 1;
  auto ia = a.entries().rbegin(), ib = b.entries().rbegin();
  while (ia != a.entries().rend() || ib != b.entries().rend()) {
    int slot_a = ia == a.entries().rend() ? 0 : ia->first;
    int slot_b = ib == b.entries().rend() ? 0 : ib->first;
    int slot = std::max(slot_a, slot_b);
    int va = a[slot], vb = b[slot];
    if (va != vb) return va < vb ? -1 : 1;
    if (slot_a == slot) ++ia;
    if (slot_b == slot) ++ib;
  }
  return 0;
}

}  // namespace detail

/// Three-way comparison (-1, 0, 1) of exponent vectors.
inline int compare(MonomialOrder order, const ExponentVector& a, const ExponentVector& b) {
  switch (order) {
    case MonomialOrder::Revlex: return detail::revlex_cmp(a, b);
    case MonomialOrder::Principal: {
      int da = degree_D(a), db = degree_D(b);
      if (da != db) return da < db ? -1 : 1;
      int sa = a.size(), sb = b.size();
      if (sa != sb) return sa < sb ? -1 : 1;
      return detail::revlex_cmp(a, b);
    }
    case MonomialOrder::LengthSlot: return detail::length_slot_cmp(a, b);
  }
  return 0;
}

/// The size-then-highest-slot order lifted to triples: compare the f block,
/// then the h block, then the e block.
inline int compare(MonomialOrder order, const ExponentTriple& a, const ExponentTriple& b) {
  if (order != MonomialOrder::LengthSlot) {
    throw std::domain_error("only the block order compares exponent triples");
  }
  if (int r = detail::length_slot_cmp(a.k, b.k)) return r;
  if (int r = detail::length_slot_cmp(a.j, b.j)) return r;
  return detail::length_slot_cmp(a.i, b.i);
}

using ExponentShape = std::variant<ExponentVector, ExponentTriple>;

inline int compare(MonomialOrder order, const ExponentShape& a, const ExponentShape& b) {
  if (a.index() != b.index()) throw std::domain_error("exponent shape mismatch");
  if (a.index() == 0) {
    return compare(order, std::get<0>(a), std::get<0>(b));
  }
  return compare(order, std::get<1>(a), std::get<1>(b));
}

/// Label of the largest term of `v` under `order`, with labels translated to
/// exponents by `to_exponents`.
template <class Label, class Fn>
Label leading_term(const LinComb<Label>& v, MonomialOrder order, Fn&& to_exponents) {
  if (v.is_zero()) throw std::domain_error("leading term of the zero vector");
  auto best = v.begin();
  auto best_exp = to_exponents(best->first);
  for (auto it = std::next(v.begin()); it != v.end(); ++it) {
    auto exp = to_exponents(it->first);
    if (compare(order, exp, best_exp) > 0) {
      best = it;
      best_exp = std::move(exp);
    }
  }
  return best->first;
}

}  // namespace whittaker
