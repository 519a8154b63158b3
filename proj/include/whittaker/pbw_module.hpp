#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "whittaker/enveloping_rewriter.hpp"

namespace whittaker {

/// PBW monomial applied to a cyclic vector, factors sorted by the module's
/// order. The empty monomial is the cyclic vector itself.
using Monomial = std::vector<GenSymbol>;
using ModVector = LinComb<Monomial>;

/// Bounds of the finite slice of a graded module used for exact checks.
struct TruncationBox {
  int max_depth = 0;
  int max_length = 0;
};

/// Data describing a cyclic module with a PBW basis u . w over a set of
/// lowering generators.
struct PbwRules {
  AlgebraId algebra = AlgebraId::AffineSl2;
  std::function<bool(const GenSymbol&)> lowering;
  PbwOrder order;
  /// x . w for non-lowering, non-central x.
  std::function<ModVector(const GenSymbol&)> on_cyclic;
  /// Scalar by which a central symbol acts.
  std::function<Rational(const GenSymbol&)> central;
};

class PbwEngine {
 public:
  explicit PbwEngine(PbwRules rules) : rules_(std::move(rules)) {}

  const ModVector& act(const GenSymbol& g, const Monomial& m) const {
    auto key = std::make_pair(g, m);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    ModVector out = compute(g, m);
    return memo_.emplace(std::move(key), std::move(out)).first->second;
  }

  ModVector act(const GenSymbol& g, const ModVector& v) const {
    ModVector out;
    for (const auto& [m, coeff] : v) out.add_scaled(act(g, m), coeff);
    return out;
  }

  ModVector act(const LieElement& x, const ModVector& v) const {
    ModVector out;
    for (const auto& [g, coeff] : x) out.add_scaled(act(g, v), coeff);
    return out;
  }

  const PbwRules& rules() const { return rules_; }

  bool sorted(const Monomial& m) const {
    for (std::size_t i = 0; i + 1 < m.size(); ++i) {
      if (rules_.order(m[i + 1], m[i])) return false;
    }
    for (const auto& g : m) {
      if (!rules_.lowering(g)) return false;
    }
    return true;
  }

 private:
  ModVector compute(const GenSymbol& g, const Monomial& m) const {
    if (!in_alphabet(rules_.algebra, g)) {
      throw std::domain_error("symbol " + to_string(g) + " does not act on this module");
    }
    if (is_central(g)) return ModVector(m, rules_.central(g));
    if (m.empty()) {
      if (rules_.lowering(g)) return ModVector::unit(Monomial{g});
      return rules_.on_cyclic(g);
    }
    const GenSymbol& head = m.front();
    if (rules_.lowering(g) && !rules_.order(head, g)) {
      Monomial out;
      out.reserve(m.size() + 1);
      out.push_back(g);
      out.insert(out.end(), m.begin(), m.end());
      return ModVector::unit(out);
    }
    Monomial rest(m.begin() + 1, m.end());
    ModVector result = act(head, act(g, rest));
    for (const auto& [y, coeff] : bracket(rules_.algebra, g, head)) {
      result.add_scaled(act(y, rest), coeff);
    }
    return result;
  }

  PbwRules rules_;
  mutable std::map<std::pair<GenSymbol, Monomial>, ModVector> memo_;
};

/// Depth of a PBW monomial: minus the sum of its modes.
inline int monomial_depth(const Monomial& m) {
  int total = 0;
  for (const auto& g : m) total -= g.mode;
  return total;
}

template <class Label, class DepthFn>
int max_depth_of(const LinComb<Label>& v, DepthFn&& depth) {
  int best = 0;
  for (const auto& [label, coeff] : v) best = std::max(best, depth(label));
  return best;
}

/// All sorted monomials over `generators` (already listed in PBW order) with
/// depth and length inside the box.
inline std::vector<Monomial> enumerate_monomials(const std::vector<GenSymbol>& generators,
                                                 const TruncationBox& box) {
  std::vector<Monomial> out;
  Monomial current;
  std::function<void(std::size_t, int)> rec = [&](std::size_t start, int depth) {
    out.push_back(current);
    if (static_cast<int>(current.size()) >= box.max_length) return;
    for (std::size_t i = start; i < generators.size(); ++i) {
      int nd = depth - generators[i].mode;
      if (nd > box.max_depth) continue;
      current.push_back(generators[i]);
      rec(i, nd);
      current.pop_back();
    }
  };
  rec(0, 0);
  std::sort(out.begin(), out.end());
  return out;
}

inline std::string format_monomial(const Monomial& m, const std::string& cyclic = "w") {
  std::string out;
  std::size_t i = 0;
  while (i < m.size()) {
    std::size_t j = i;
    while (j < m.size() && m[j] == m[i]) ++j;
    out += to_string(m[i]);
    if (j - i > 1) out += "^" + std::to_string(j - i);
    out += "·";
    i = j;
  }
  return out + cyclic;
}

template <class Label, class Fmt>
std::string format_vector(const LinComb<Label>& v, Fmt&& fmt) {
  if (v.is_zero()) return "0";
  std::string out;
  bool first = true;
  // Longest labels first reads more naturally.
  for (auto it = v.terms().rbegin(); it != v.terms().rend(); ++it) {
    const auto& [label, coeff] = *it;
    Rational mag = abs(coeff);
    if (first) {
      if (coeff < 0) out += "-";
    } else {
      out += coeff < 0 ? " - " : " + ";
    }
    if (mag != 1) out += format_rational(mag) + "·";
    out += fmt(label);
    first = false;
  }
  return out;
}

inline std::string format_vector(const ModVector& v) {
  return format_vector(v, [](const Monomial& m) { return format_monomial(m); });
}

}  // namespace whittaker
