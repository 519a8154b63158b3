#pragma once

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

#include <json.hpp>

#include "whittaker/free_field.hpp"
#include "whittaker/lattice_pi.hpp"
#include "whittaker/pbw_module.hpp"
#include "whittaker/quadratic_fields.hpp"

namespace whittaker {

using Json = nlohmann::json;

inline Json rational_to_json(const Rational& q) { return format_rational(q); }

inline Rational rational_from_json(const Json& j) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (!j.is_string()) throw std::invalid_argument("rational must be a \"p/q\" string");
  return parse_rational(j.get<std::string>());
}

inline Json laurent_to_json(const LaurentData& d) {
  Json coeffs = Json::object();
  for (const auto& [n, v] : d.coeffs) coeffs[std::to_string(n)] = format_rational(v);
  return {{"convention", d.convention == LaurentData::Convention::Weight1 ? "weight1" : "weight2"},
          {"coeffs", coeffs}};
}

inline LaurentData laurent_from_json(const Json& j) {
  LaurentData out;
  std::string conv = j.value("convention", "weight2");
  if (conv == "weight1") {
    out.convention = LaurentData::Convention::Weight1;
  } else if (conv == "weight2") {
    out.convention = LaurentData::Convention::Weight2;
  } else {
    throw std::invalid_argument("unknown Laurent convention '" + conv + "'");
  }
  if (j.contains("coeffs")) {
    for (const auto& [key, value] : j.at("coeffs").items()) {
      std::size_t used = 0;
      int n = std::stoi(key, &used);
      if (used != key.size()) throw std::invalid_argument("bad Laurent mode '" + key + "'");
      out.set(n, rational_from_json(value));
    }
  }
  return out;
}

inline std::string family_key(Family fam) {
  switch (fam) {
    case Family::E: return "e";
    case Family::F: return "f";
    case Family::H: return "h";
    case Family::L: return "L";
    case Family::T: return "T";
    case Family::Phi: return "phi";
    case Family::D: return "d";
    case Family::C: return "c";
    case Family::C1: return "c1";
  }
  return "?";
}

inline Family family_from_key(const std::string& key) {
  static const std::map<std::string, Family> table{
      {"e", Family::E}, {"f", Family::F},     {"h", Family::H}, {"L", Family::L},
      {"T", Family::T}, {"phi", Family::Phi}, {"c", Family::C}, {"c1", Family::C1}};
  auto it = table.find(key);
  if (it == table.end()) throw std::invalid_argument("unknown family '" + key + "'");
  return it->second;
}

inline Json label_to_json(const GenSymbol& g) { return to_string(g); }

/// {"e":{mode:exp},"h":{...},"f":{...},"d":k}; other families appear only
/// when present.
inline Json label_to_json(const Monomial& m, int dpow = 0) {
  Json out{{"e", Json::object()}, {"h", Json::object()}, {"f", Json::object()}};
  for (const auto& g : m) {
    Json& block = out[family_key(g.family)];
    if (block.is_null()) block = Json::object();
    std::string mode = std::to_string(g.mode);
    block[mode] = block.value(mode, 0) + 1;
  }
  out["d"] = dpow;
  return out;
}

/// Inverse of label_to_json; factors are re-sorted with `order`.
inline std::pair<int, Monomial> label_from_json(const Json& j, const PbwOrder& order) {
  Monomial m;
  int dpow = 0;
  for (const auto& [key, value] : j.items()) {
    if (key == "d") {
      dpow = value.get<int>();
      continue;
    }
    Family fam = family_from_key(key);
    for (const auto& [mode, exp] : value.items()) {
      for (int i = 0; i < exp.get<int>(); ++i) m.push_back({fam, std::stoi(mode)});
    }
  }
  std::stable_sort(m.begin(), m.end(), order);
  return {dpow, m};
}

inline Json label_to_json(const std::pair<int, Monomial>& l) { return label_to_json(l.second, l.first); }

inline Json label_to_json(const FreeFieldLabel& l) {
  return {{"a", l.a}, {"astar", l.astar}, {"b", l.b}};
}

inline FreeFieldLabel free_field_label_from_json(const Json& j) {
  FreeFieldLabel l;
  l.a = j.value("a", std::vector<int>{});
  l.astar = j.value("astar", std::vector<int>{});
  l.b = j.value("b", std::vector<int>{});
  for (auto* part : {&l.a, &l.astar, &l.b}) {
    std::sort(part->rbegin(), part->rend());
    if (!part->empty() && part->back() < 1) {
      throw std::invalid_argument("free-field partitions hold positive parts");
    }
  }
  return l;
}

/// The sector index is always 0: only the sector of w is ever reached.
inline Json label_to_json(const PiLabel& l) {
  return {{"d0", l.d0}, {"c", l.c}, {"d", l.d}, {"sector", 0}};
}

inline PiLabel pi_label_from_json(const Json& j) {
  if (j.value("sector", 0) != 0) throw std::invalid_argument("only sector 0 is supported");
  PiLabel l;
  l.d0 = j.value("d0", 0);
  l.c = j.value("c", std::vector<int>{});
  l.d = j.value("d", std::vector<int>{});
  std::sort(l.c.rbegin(), l.c.rend());
  std::sort(l.d.rbegin(), l.d.rend());
  return l;
}

template <class Label>
Json vector_to_json(const LinComb<Label>& v) {
  Json out = Json::array();
  for (const auto& [label, coeff] : v) {
    out.push_back({{"label", label_to_json(label)}, {"coeff", format_rational(coeff)}});
  }
  return out;
}

}  // namespace whittaker
