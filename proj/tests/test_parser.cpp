#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qpadic/parser.hpp"

using namespace qpadic;

TEST_CASE("field specs parse") {
  CHECK(parse_field_spec("Q3(zeta_p^1)") == FieldSpec{3, 1, 1});
  CHECK(parse_field_spec("Q2(i)") == FieldSpec{2, 1, 2});
  CHECK(parse_field_spec("Q3(zeta_26)") == FieldSpec{3, 3, 0});
  CHECK(parse_field_spec("Q5") == FieldSpec{5, 1, 0});
  CHECK(parse_field_spec("Q2") == FieldSpec{2, 1, 0});
  CHECK(parse_field_spec(" Q2 ( zeta_3 , zeta_p^2 ) ") == FieldSpec{2, 2, 2});
  CHECK(parse_field_spec("Q5(unram:2,zeta_p^1)") == FieldSpec{5, 2, 1});
  CHECK(parse_field_spec("Q3(zeta_2)") == FieldSpec{3, 1, 0});  // 2 = 3^1 - 1
}

TEST_CASE("field spec errors carry positions") {
  CHECK_THROWS_AS(parse_field_spec("Q4"), Error);            // not prime
  CHECK_THROWS_AS(parse_field_spec("R3"), ParseError);       // missing Q
  CHECK_THROWS_AS(parse_field_spec("Q3(zeta_5)"), ParseError);   // 5 != 3^f - 1
  CHECK_THROWS_AS(parse_field_spec("Q3(i)"), ParseError);    // i needs p = 2
  CHECK_THROWS_AS(parse_field_spec("Q3(zeta_p^1,zeta_p^2)"), ParseError);  // conflict
  CHECK_THROWS_AS(parse_field_spec("Q3(unram:2,zeta_26)"), ParseError);    // conflict
  CHECK_THROWS_AS(parse_field_spec("Q3(bogus)"), ParseError);
  CHECK_THROWS_AS(parse_field_spec("Q3(zeta_p^1) trailing"), ParseError);
  CHECK_THROWS_AS(parse_field_spec(""), ParseError);
  try {
    parse_field_spec("Q3(zeta_p^1,zeta_p^2)");
  } catch (const ParseError& e) {
    CHECK(e.offset() > 10);
  }
}

TEST_CASE("element expressions evaluate") {
  FieldTower k3 = make_tower(FieldSpec{3, 1, 1}, 32);
  FieldElement x = parse_element("1 - zeta", k3);
  CHECK(x == -FieldElement::uniformizer(k3));
  CHECK(x.valuation() == ExactRational(1, 2));

  FieldTower q2 = make_tower(FieldSpec{2, 1, 0}, 32);
  CHECK(parse_element("7", q2) == FieldElement::from_integer(q2, 7));

  CHECK(parse_element("(1+pi)^3", k3) == FieldElement::one(k3));
  CHECK(parse_element("zeta^3", k3) == FieldElement::one(k3));

  FieldTower k5 = make_tower(FieldSpec{5, 1, 1}, 32);
  CHECK(parse_element("w(2)", k5) ==
        teich_lift(k5, ResidueElement::from_scalar(k5, 2)));

  // precedence: ^ binds tighter than unary minus, * tighter than +
  CHECK(parse_element("-pi^2", k3) == -(FieldElement::uniformizer(k3).pow(2)));
  CHECK(parse_element("1+2*3", q2) == FieldElement::from_integer(q2, 7));
  CHECK(parse_element("2^-1", k3) ==
        FieldElement::from_integer(k3, 2).inverse());
  CHECK(parse_element("6/2", q2) == FieldElement::from_integer(q2, 3));
  CHECK(parse_element("1/pi", k3) == FieldElement::uniformizer(k3).inverse());

  FieldTower t52 = make_tower(FieldSpec{5, 2, 0}, 32);
  CHECK(parse_element("y^2", t52) ==
        FieldElement::unramified_generator(t52).pow(2));
}

TEST_CASE("element expression errors") {
  FieldTower q5 = make_tower(FieldSpec{5, 1, 0}, 16);
  FieldTower k3 = make_tower(FieldSpec{3, 1, 1}, 16);
  CHECK_THROWS_AS(parse_element("pi", q5), Error);    // m = 0
  CHECK_THROWS_AS(parse_element("zeta", q5), Error);  // m = 0
  CHECK_THROWS_AS(parse_element("y", k3), Error);     // f = 1
  CHECK_THROWS_AS(parse_element("1/0", q5), Error);   // division by zero
  CHECK_THROWS_AS(parse_element("1 +", q5), ParseError);
  CHECK_THROWS_AS(parse_element("(1", q5), ParseError);
  CHECK_THROWS_AS(parse_element("w(9)", k3), Error);  // residue out of range
  CHECK_THROWS_AS(parse_element("1 @ 2", q5), ParseError);
  try {
    parse_element("1 + *", q5);
    CHECK(false);
  } catch (const ParseError& e) {
    CHECK(e.offset() == 4);
  }
}

namespace {

ExprPtr random_expr(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 4 : 9);
  auto node = std::make_shared<ElementExpr>();
  switch (pick(rng)) {
    case 0: {
      std::uniform_int_distribution<long> lit(0, 99);
      node->kind = ElementExpr::Kind::integer;
      node->value = lit(rng);
      break;
    }
    case 1: node->kind = ElementExpr::Kind::pi; break;
    case 2: node->kind = ElementExpr::Kind::zeta; break;
    case 3: node->kind = ElementExpr::Kind::unram_gen; break;
    case 4: {
      std::uniform_int_distribution<long> idx(0, 6);
      node->kind = ElementExpr::Kind::teich;
      node->teich_index = idx(rng);
      break;
    }
    case 5:
    case 6: {
      node->kind = pick(rng) % 2 ? ElementExpr::Kind::add : ElementExpr::Kind::sub;
      node->lhs = random_expr(rng, depth - 1);
      node->rhs = random_expr(rng, depth - 1);
      break;
    }
    case 7: {
      node->kind = pick(rng) % 2 ? ElementExpr::Kind::mul : ElementExpr::Kind::div;
      node->lhs = random_expr(rng, depth - 1);
      node->rhs = random_expr(rng, depth - 1);
      break;
    }
    case 8: {
      node->kind = ElementExpr::Kind::neg;
      node->lhs = random_expr(rng, depth - 1);
      break;
    }
    default: {
      std::uniform_int_distribution<long> ex(-6, 6);
      node->kind = ElementExpr::Kind::pow;
      node->lhs = random_expr(rng, depth - 1);
      node->exponent = ex(rng);
      break;
    }
  }
  return node;
}

}  // namespace

TEST_CASE("parse-render round trip is the identity on ASTs") {
  std::mt19937_64 rng(2024);
  for (int it = 0; it < 400; ++it) {
    ExprPtr e = random_expr(rng, 4);
    std::string text = render_expr(e);
    ExprPtr back = parse_element_expr(text);
    CHECK(expr_equal(e, back));
    CHECK(render_expr(back) == text);
  }
}

TEST_CASE("field spec round trip through canonical rendering") {
  for (FieldSpec s : {FieldSpec{3, 1, 1}, FieldSpec{2, 1, 2}, FieldSpec{3, 3, 0},
                      FieldSpec{5, 1, 0}, FieldSpec{2, 2, 3}}) {
    CHECK(parse_field_spec(s.str()) == s);
  }
}
