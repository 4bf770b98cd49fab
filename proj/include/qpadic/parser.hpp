#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "qpadic/tower.hpp"

namespace qpadic {

// Field specification text, e.g. "Q3(zeta_p^1)", "Q2(i)", "Q3(zeta_26)",
// "Q5(unram:2,zeta_p^1)". Grammar (whitespace-insensitive, ASCII):
//   spec  := "Q" INT group?
//   group := "(" gen ("," gen)* ")"
//   gen   := "zeta" "_" "p" "^" INT | "zeta" "_" INT | "i" | "unram" ":" INT
// zeta_p^m sets m; zeta_q requires q = p^f - 1 and sets f; i is only valid
// for p = 2 and sets m = 2; unram:f sets f directly.
struct FieldSpec {
  long p = 0;
  int f = 1;
  int m = 0;

  std::string str() const;
  friend bool operator==(const FieldSpec& a, const FieldSpec& b) {
    return a.p == b.p && a.f == b.f && a.m == b.m;
  }
};

FieldSpec parse_field_spec(std::string_view text);
FieldTower make_tower(const FieldSpec& spec, int precision = kDefaultPrecision);

// Element expressions over integer literals, pi, zeta, y, w(c), the
// operators + - * / ^ and parentheses. Precedence ^ > unary minus > * / >
// + -; exponents are signed integer literals.
struct ElementExpr {
  enum class Kind { integer, pi, zeta, unram_gen, teich, add, sub, mul, div, neg, pow };
  Kind kind = Kind::integer;
  mpz_class value;                          // integer
  long teich_index = 0;                     // teich
  long exponent = 0;                        // pow
  std::shared_ptr<const ElementExpr> lhs;   // binary / neg / pow base
  std::shared_ptr<const ElementExpr> rhs;   // binary
};
using ExprPtr = std::shared_ptr<const ElementExpr>;

ExprPtr parse_element_expr(std::string_view text);
std::string render_expr(const ExprPtr& e);
bool expr_equal(const ExprPtr& a, const ExprPtr& b);

FieldElement evaluate(const ExprPtr& e, const FieldTower& tower);
FieldElement parse_element(std::string_view text, const FieldTower& tower);

}  // namespace qpadic
