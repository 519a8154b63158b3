#pragma once

#include <gmpxx.h>

#include <algorithm>
#include <cstddef>
#include <map>
#include <regex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace whittaker {

using Rational = mpq_class;

/// Parses "p", "-p" or "p/q" into a canonical rational.
inline Rational parse_rational(const std::string& text) {
  static const std::regex shape(R"(^\s*-?\d+(/\d+)?\s*$)");
  if (!std::regex_match(text, shape)) {
    throw std::invalid_argument("malformed rational: '" + text + "'");
  }
  std::string compact;
  for (char ch : text) {
    if (ch != ' ' && ch != '\t') compact.push_back(ch);
  }
  auto slash = compact.find('/');
  if (slash != std::string::npos) {
    std::string den = compact.substr(slash + 1);
    if (den.find_first_not_of('0') == std::string::npos) {
      throw std::invalid_argument("zero denominator: '" + text + "'");
    }
  }
  Rational q(compact, 10);
  q.canonicalize();
  return q;
}

inline std::string format_rational(const Rational& q) { return q.get_str(); }

inline Rational binomial(long n, long k) {
  if (k < 0 || k > n) return 0;
  mpz_class out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n),
               static_cast<unsigned long>(k));
  return Rational(out);
}

inline Rational power(const Rational& base, long exponent) {
  if (exponent < 0) {
    if (base == 0) throw std::domain_error("zero to a negative power");
    return power(1 / base, -exponent);
  }
  Rational out = 1;
  Rational b = base;
  while (exponent > 0) {
    if (exponent & 1) out *= b;
    b *= b;
    exponent >>= 1;
  }
  return out;
}

/// Finite formal linear combination over a label type. Zero coefficients are
/// never stored, so two equal vectors have equal maps.
template <class Label>
class LinComb {
 public:
  using Terms = std::map<Label, Rational>;
  using const_iterator = typename Terms::const_iterator;

  LinComb() = default;
  LinComb(const Label& label, const Rational& coeff) { add_term(label, coeff); }

  static LinComb unit(const Label& label) { return LinComb(label, Rational(1)); }

  void add_term(const Label& label, const Rational& coeff) {
    if (coeff == 0) return;
    auto [it, inserted] = terms_.try_emplace(label, coeff);
    if (inserted) {
      // mpq arithmetic assumes canonical operands; raw num/den input may not be.
      it->second.canonicalize();
    } else {
      it->second += coeff;
      if (it->second == 0) terms_.erase(it);
    }
  }

  void add_scaled(const LinComb& other, const Rational& factor) {
    if (factor == 0) return;
    for (const auto& [label, coeff] : other.terms_) add_term(label, coeff * factor);
  }

  Rational coeff(const Label& label) const {
    auto it = terms_.find(label);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }
  const Terms& terms() const { return terms_; }
  const_iterator begin() const { return terms_.begin(); }
  const_iterator end() const { return terms_.end(); }

  LinComb& operator+=(const LinComb& other) {
    add_scaled(other, 1);
    return *this;
  }
  LinComb& operator-=(const LinComb& other) {
    add_scaled(other, -1);
    return *this;
  }
  LinComb& operator*=(const Rational& factor) {
    if (factor == 0) {
      terms_.clear();
    } else {
      for (auto& entry : terms_) entry.second *= factor;
    }
    return *this;
  }

  friend LinComb operator+(LinComb a, const LinComb& b) { return a += b; }
  friend LinComb operator-(LinComb a, const LinComb& b) { return a -= b; }
  friend LinComb operator-(LinComb a) { return a *= Rational(-1); }
  friend LinComb operator*(const Rational& s, LinComb a) { return a *= s; }
  friend LinComb operator*(LinComb a, const Rational& s) { return a *= s; }
  friend bool operator==(const LinComb& a, const LinComb& b) { return a.terms_ == b.terms_; }

  template <class Fn>
  auto map_labels(Fn&& fn) const {
    using Out = std::decay_t<decltype(fn(std::declval<Label>()))>;
    LinComb<Out> out;
    for (const auto& [label, coeff] : terms_) out.add_term(fn(label), coeff);
    return out;
  }

 private:
  Terms terms_;
};

/// Applies a linear map given on labels to a whole combination.
template <class Label, class Fn>
auto apply_linear(const LinComb<Label>& v, Fn&& on_label) {
  using Out = std::decay_t<decltype(on_label(std::declval<Label>()))>;
  Out out;
  for (const auto& [label, coeff] : v) out.add_scaled(on_label(label), coeff);
  return out;
}

/// Incremental reduced row echelon form over Q. The pivot of a row is its
/// smallest label under the label ordering, so callers steer elimination by
/// choosing how labels compare.
template <class Label>
class RowEchelon {
 public:
  using Row = LinComb<Label>;

  /// Reduces `v` against the stored pivots.
  Row reduce(Row v) const {
    // Pivot rows carry no other pivot label, so one pass suffices.
    std::vector<std::pair<const Row*, Rational>> hits;
    for (const auto& [label, coeff] : v) {
      auto it = rows_.find(label);
      if (it != rows_.end()) hits.emplace_back(&it->second, coeff);
    }
    for (const auto& [row, coeff] : hits) v.add_scaled(*row, -coeff);
    return v;
  }

  /// Inserts `v`; returns false when it was already in the span.
  bool insert(const Row& v) {
    Row r = reduce(v);
    if (r.is_zero()) return false;
    Label pivot = r.begin()->first;
    r *= 1 / r.begin()->second;
    for (auto& [p, row] : rows_) {
      Rational c = row.coeff(pivot);
      if (c != 0) row.add_scaled(r, -c);
    }
    rows_.emplace(pivot, std::move(r));
    return true;
  }

  bool contains(const Row& v) const { return reduce(v).is_zero(); }
  std::size_t rank() const { return rows_.size(); }
  const std::map<Label, Row>& pivot_rows() const { return rows_; }

 private:
  std::map<Label, Row> rows_;
};

/// Sparse matrix whose rows are combinations over a declared column set.
template <class Label>
struct SparseMatrix {
  std::vector<Label> columns;
  std::vector<LinComb<Label>> rows;
};

namespace detail {

template <class Label>
void check_columns(const SparseMatrix<Label>& m) {
  std::map<Label, bool> known;
  for (const auto& c : m.columns) known[c] = true;
  for (const auto& row : m.rows) {
    for (const auto& [label, coeff] : row) {
      if (!known.count(label)) {
        throw std::domain_error("row entry outside declared column labels");
      }
    }
  }
}

// Sparse rows first keeps fill-in low in the back-substitution.
template <class Label>
RowEchelon<Label> echelon_of(const SparseMatrix<Label>& m) {
  std::vector<const LinComb<Label>*> order;
  order.reserve(m.rows.size());
  for (const auto& row : m.rows) order.push_back(&row);
  std::stable_sort(order.begin(), order.end(),
                   [](auto* a, auto* b) { return a->size() < b->size(); });
  RowEchelon<Label> ech;
  for (auto* row : order) ech.insert(*row);
  return ech;
}

}  // namespace detail

template <class Label>
std::size_t rank(const SparseMatrix<Label>& m) {
  detail::check_columns(m);
  return detail::echelon_of(m).rank();
}

/// Basis of the right null space: vectors x over the columns with row . x = 0.
template <class Label>
std::vector<LinComb<Label>> kernel(const SparseMatrix<Label>& m) {
  detail::check_columns(m);
  auto ech = detail::echelon_of(m);
  const auto& pivots = ech.pivot_rows();
  std::vector<LinComb<Label>> basis;
  std::vector<Label> cols = m.columns;
  std::sort(cols.begin(), cols.end());
  cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
  for (const auto& free : cols) {
    if (pivots.count(free)) continue;
    LinComb<Label> v = LinComb<Label>::unit(free);
    for (const auto& [p, row] : pivots) {
      Rational c = row.coeff(free);
      if (c != 0) v.add_term(p, -c);
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Rank of a list of vectors.
template <class Label>
std::size_t rank_of(const std::vector<LinComb<Label>>& vectors) {
  RowEchelon<Label> ech;
  for (const auto& v : vectors) ech.insert(v);
  return ech.rank();
}

}  // namespace whittaker
