#pragma once

#include <cctype>
#include <stdexcept>
#include <string>
#include <vector>

#include "whittaker/exact_core.hpp"

namespace whittaker {

/// Error carrying the zero-based character offset at which parsing stopped.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t position)
      : std::runtime_error("parse error at position " + std::to_string(position) + ": " + what),
        position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// One operator factor: a name from the token alphabet and its mode (0 for d).
struct OperatorToken {
  std::string name;
  int mode = 0;
  std::size_t position = 0;
};

/// A product `scalar * ops[0] * ops[1] * ...`; the rightmost factor acts first.
struct OperatorExpr {
  Rational scalar = 1;
  std::vector<OperatorToken> ops;
};

inline const std::vector<std::string>& operator_names() {
  static const std::vector<std::string> names{"e", "f",    "h",    "L",    "T",
                                              "d", "phi", "ainv", "astar", "a"};
  return names;
}

/// Grammar: factor (('*')? factor)*, factor := rational | name '(' int ')' | 'd'.
inline OperatorExpr parse_operator_expr(const std::string& text) {
  OperatorExpr out;
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  auto read_int = [&](bool allow_slash) {
    std::size_t start = i;
    if (i < text.size() && (text[i] == '-' || text[i] == '+')) ++i;
    std::size_t digits = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    if (i == digits) throw ParseError("expected an integer", start);
    if (allow_slash && i < text.size() && text[i] == '/') {
      ++i;
      std::size_t den = i;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      if (i == den) throw ParseError("expected a denominator", den);
    }
    return text.substr(start, i - start);
  };

  skip();
  if (i == text.size()) throw ParseError("empty expression", 0);
  bool first = true;
  while (true) {
    skip();
    if (i == text.size()) break;
    if (!first && text[i] == '*') {
      ++i;
      skip();
      if (i == text.size()) throw ParseError("dangling '*'", i);
    }
    first = false;
    char ch = text[i];
    if ((ch == '-' || ch == '+') &&
        (i + 1 == text.size() || !std::isdigit(static_cast<unsigned char>(text[i + 1])))) {
      if (ch == '-') out.scalar = -out.scalar;
      ++i;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '-' || ch == '+') {
      std::size_t start = i;
      std::string lit = read_int(true);
      try {
        out.scalar *= parse_rational(lit);
      } catch (const std::invalid_argument& ex) {
        throw ParseError(ex.what(), start);
      }
      continue;
    }
    std::size_t start = i;
    std::string name;
    for (const auto& candidate : operator_names()) {
      if (text.compare(i, candidate.size(), candidate) == 0) {
        std::size_t end = i + candidate.size();
        bool boundary = end == text.size() || !std::isalnum(static_cast<unsigned char>(text[end]));
        if (boundary) {
          name = candidate;
          break;
        }
      }
    }
    if (name.empty()) throw ParseError("unknown token", start);
    i += name.size();
    OperatorToken tok{name, 0, start};
    if (name != "d") {
      skip();
      if (i == text.size() || text[i] != '(') throw ParseError("expected '(' after " + name, i);
      ++i;
      skip();
      std::size_t num_pos = i;
      std::string digits = read_int(false);
      try {
        tok.mode = std::stoi(digits);
      } catch (const std::out_of_range&) {
        throw ParseError("mode out of range", num_pos);
      }
      skip();
      if (i == text.size() || text[i] != ')') throw ParseError("expected ')'", i);
      ++i;
    }
    out.ops.push_back(tok);
  }
  return out;
}

}  // namespace whittaker
