#include "qpadic/parser.hpp"

#include <cctype>

namespace qpadic {

namespace {

struct Cursor {
  std::string_view text;
  size_t pos = 0;

  void skip_ws() {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  }
  bool done() {
    skip_ws();
    return pos >= text.size();
  }
  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }
  bool accept(char c) {
    skip_ws();
    if (pos < text.size() && text[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  void expect(char c, const char* what) {
    if (!accept(c)) throw ParseError(pos, std::string("expected '") + c + "' " + what);
  }
  bool accept_word(std::string_view w) {
    skip_ws();
    if (text.substr(pos, w.size()) == w) {
      pos += w.size();
      return true;
    }
    return false;
  }
  long integer(const char* what) {
    skip_ws();
    size_t start = pos;
    bool neg = false;
    if (pos < text.size() && text[pos] == '-') {
      neg = true;
      ++pos;
    }
    size_t digits = pos;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
    if (pos == digits) throw ParseError(start, std::string("expected integer ") + what);
    long v = 0;
    for (size_t i = digits; i < pos; ++i) {
      if (v > (1L << 60)) throw ParseError(start, "integer literal too large");
      v = v * 10 + (text[i] - '0');
    }
    return neg ? -v : v;
  }
};

}  // namespace

FieldSpec parse_field_spec(std::string_view text) {
  Cursor c{text};
  if (!c.accept('Q')) throw ParseError(c.pos, "field spec must start with 'Q'");
  FieldSpec spec;
  spec.p = c.integer("prime");
  if (!is_prime(spec.p)) raise(errc::not_prime, "p = " + std::to_string(spec.p) + " is not prime");

  bool have_f = false, have_m = false;
  if (c.accept('(')) {
    do {
      size_t gen_at = c.pos;
      c.skip_ws();
      gen_at = c.pos;
      if (c.accept_word("zeta")) {
        c.expect('_', "after zeta");
        c.skip_ws();
        if (c.accept('p')) {
          c.expect('^', "in zeta_p^m");
          long m = c.integer("cyclotomic exponent");
          if (m < 1) throw ParseError(gen_at, "cyclotomic exponent must be >= 1");
          if (have_m) throw ParseError(gen_at, "conflicting cyclotomic generators");
          spec.m = static_cast<int>(m);
          have_m = true;
        } else {
          long q = c.integer("root-of-unity order");
          long pf = spec.p;
          int f = 1;
          while (pf - 1 < q && pf < (1L << 40)) {
            pf *= spec.p;
            ++f;
          }
          if (pf - 1 != q)
            throw ParseError(gen_at, "zeta order is not of the form p^f - 1");
          if (have_f) throw ParseError(gen_at, "conflicting unramified generators");
          spec.f = f;
          have_f = true;
        }
      } else if (c.accept('i')) {
        if (spec.p != 2) throw ParseError(gen_at, "generator i requires p = 2");
        if (have_m) throw ParseError(gen_at, "conflicting cyclotomic generators");
        spec.m = 2;
        have_m = true;
      } else if (c.accept_word("unram")) {
        c.expect(':', "in unram:f");
        long f = c.integer("unramified degree");
        if (f < 1) throw ParseError(gen_at, "unramified degree must be >= 1");
        if (have_f) throw ParseError(gen_at, "conflicting unramified generators");
        spec.f = static_cast<int>(f);
        have_f = true;
      } else {
        throw ParseError(gen_at, "unknown field generator");
      }
    } while (c.accept(','));
    c.expect(')', "closing the generator list");
  }
  if (!c.done()) throw ParseError(c.pos, "trailing characters after field spec");
  return spec;
}

std::string FieldSpec::str() const {
  std::string s = "Q" + std::to_string(p);
  std::string gens;
  if (f > 1) {
    long q = 1;
    for (int i = 0; i < f; ++i) q *= p;
    gens += "zeta_" + std::to_string(q - 1);
  }
  if (m >= 1) {
    if (!gens.empty()) gens += ",";
    gens += "zeta_p^" + std::to_string(m);
  }
  return gens.empty() ? s : s + "(" + gens + ")";
}

FieldTower make_tower(const FieldSpec& spec, int precision) {
  return FieldTower::make(PadicContext(spec.p, precision), spec.f, spec.m);
}

// ------------------------------------------------------- element expressions

namespace {

struct ExprParser {
  Cursor c;

  ExprPtr parse() {
    ExprPtr e = sum();
    if (!c.done()) throw ParseError(c.pos, "trailing characters in expression");
    return e;
  }

  ExprPtr sum() {
    ExprPtr lhs = product();
    for (;;) {
      if (c.accept('+')) lhs = binary(ElementExpr::Kind::add, lhs, product());
      else if (c.accept('-')) lhs = binary(ElementExpr::Kind::sub, lhs, product());
      else return lhs;
    }
  }

  ExprPtr product() {
    ExprPtr lhs = unary();
    for (;;) {
      if (c.accept('*')) lhs = binary(ElementExpr::Kind::mul, lhs, unary());
      else if (c.accept('/')) lhs = binary(ElementExpr::Kind::div, lhs, unary());
      else return lhs;
    }
  }

  ExprPtr unary() {
    if (c.accept('-')) {
      auto node = std::make_shared<ElementExpr>();
      node->kind = ElementExpr::Kind::neg;
      node->lhs = unary();
      return node;
    }
    return power();
  }

  ExprPtr power() {
    ExprPtr base = atom();
    if (c.accept('^')) {
      auto node = std::make_shared<ElementExpr>();
      node->kind = ElementExpr::Kind::pow;
      node->lhs = base;
      node->exponent = c.integer("exponent");
      return node;
    }
    return base;
  }

  ExprPtr atom() {
    c.skip_ws();
    size_t at = c.pos;
    if (c.accept('(')) {
      ExprPtr e = sum();
      c.expect(')', "closing parenthesis");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c.peek()))) {
      auto node = std::make_shared<ElementExpr>();
      node->kind = ElementExpr::Kind::integer;
      node->value = c.integer("literal");
      return node;
    }
    if (c.accept_word("zeta")) return leaf(ElementExpr::Kind::zeta);
    if (c.accept_word("pi")) return leaf(ElementExpr::Kind::pi);
    if (c.accept_word("w")) {
      c.expect('(', "after w");
      auto node = std::make_shared<ElementExpr>();
      node->kind = ElementExpr::Kind::teich;
      node->teich_index = c.integer("teichmuller residue");
      c.expect(')', "closing w(...)");
      return node;
    }
    if (c.accept_word("y")) return leaf(ElementExpr::Kind::unram_gen);
    throw ParseError(at, "expected literal, pi, zeta, y, w(c), or parenthesis");
  }

  static ExprPtr leaf(ElementExpr::Kind k) {
    auto node = std::make_shared<ElementExpr>();
    node->kind = k;
    return node;
  }

  static ExprPtr binary(ElementExpr::Kind k, ExprPtr l, ExprPtr r) {
    auto node = std::make_shared<ElementExpr>();
    node->kind = k;
    node->lhs = std::move(l);
    node->rhs = std::move(r);
    return node;
  }
};

int precedence(ElementExpr::Kind k) {
  switch (k) {
    case ElementExpr::Kind::add:
    case ElementExpr::Kind::sub: return 0;
    case ElementExpr::Kind::mul:
    case ElementExpr::Kind::div: return 1;
    case ElementExpr::Kind::neg: return 2;
    case ElementExpr::Kind::pow: return 3;
    default: return 4;
  }
}

std::string render(const ExprPtr& e, int parent_prec) {
  int prec = precedence(e->kind);
  std::string s;
  switch (e->kind) {
    case ElementExpr::Kind::integer: s = e->value.get_str(); break;
    case ElementExpr::Kind::pi: s = "pi"; break;
    case ElementExpr::Kind::zeta: s = "zeta"; break;
    case ElementExpr::Kind::unram_gen: s = "y"; break;
    case ElementExpr::Kind::teich: s = "w(" + std::to_string(e->teich_index) + ")"; break;
    case ElementExpr::Kind::add:
      s = render(e->lhs, prec) + " + " + render(e->rhs, prec + 1);
      break;
    case ElementExpr::Kind::sub:
      s = render(e->lhs, prec) + " - " + render(e->rhs, prec + 1);
      break;
    case ElementExpr::Kind::mul:
      s = render(e->lhs, prec) + "*" + render(e->rhs, prec + 1);
      break;
    case ElementExpr::Kind::div:
      s = render(e->lhs, prec) + "/" + render(e->rhs, prec + 1);
      break;
    case ElementExpr::Kind::neg: s = "-" + render(e->lhs, prec + 1); break;
    case ElementExpr::Kind::pow:
      s = render(e->lhs, prec + 1) + "^" + std::to_string(e->exponent);
      break;
  }
  if (prec < parent_prec) return "(" + s + ")";
  return s;
}

}  // namespace

ExprPtr parse_element_expr(std::string_view text) {
  ExprParser p{Cursor{text}};
  return p.parse();
}

std::string render_expr(const ExprPtr& e) { return render(e, 0); }

bool expr_equal(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return a == b;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case ElementExpr::Kind::integer: return a->value == b->value;
    case ElementExpr::Kind::teich: return a->teich_index == b->teich_index;
    case ElementExpr::Kind::pow:
      return a->exponent == b->exponent && expr_equal(a->lhs, b->lhs);
    case ElementExpr::Kind::neg: return expr_equal(a->lhs, b->lhs);
    case ElementExpr::Kind::add:
    case ElementExpr::Kind::sub:
    case ElementExpr::Kind::mul:
    case ElementExpr::Kind::div:
      return expr_equal(a->lhs, b->lhs) && expr_equal(a->rhs, b->rhs);
    default: return true;
  }
}

FieldElement evaluate(const ExprPtr& e, const FieldTower& tower) {
  switch (e->kind) {
    case ElementExpr::Kind::integer: return FieldElement::from_integer(tower, e->value);
    case ElementExpr::Kind::pi:
      if (tower.cyclo_exponent() < 1) raise(errc::wrong_tower, "pi in a tower with m = 0");
      return FieldElement::uniformizer(tower);
    case ElementExpr::Kind::zeta:
      if (tower.cyclo_exponent() < 1) raise(errc::wrong_tower, "zeta in a tower with m = 0");
      return FieldElement::zeta(tower);
    case ElementExpr::Kind::unram_gen:
      if (tower.inertia_degree() < 2) raise(errc::wrong_tower, "y in a tower with f = 1");
      return FieldElement::unramified_generator(tower);
    case ElementExpr::Kind::teich: {
      long q = 1;
      for (int i = 0; i < tower.inertia_degree(); ++i) q *= tower.prime();
      if (e->teich_index < 0 || e->teich_index >= q)
        raise(errc::bad_argument, "teichmuller residue out of range");
      return teich_lift(tower, ResidueElement::from_index(tower, e->teich_index));
    }
    case ElementExpr::Kind::add: return evaluate(e->lhs, tower) + evaluate(e->rhs, tower);
    case ElementExpr::Kind::sub: return evaluate(e->lhs, tower) - evaluate(e->rhs, tower);
    case ElementExpr::Kind::mul: return evaluate(e->lhs, tower) * evaluate(e->rhs, tower);
    case ElementExpr::Kind::div: {
      FieldElement d = evaluate(e->rhs, tower);
      if (d.is_zero()) raise(errc::division_by_zero, "division by zero");
      return evaluate(e->lhs, tower) / d;
    }
    case ElementExpr::Kind::neg: return -evaluate(e->lhs, tower);
    case ElementExpr::Kind::pow: return evaluate(e->lhs, tower).pow(e->exponent);
  }
  raise(errc::bad_argument, "unreachable expression kind");
}

FieldElement parse_element(std::string_view text, const FieldTower& tower) {
  return evaluate(parse_element_expr(text), tower);
}

}  // namespace qpadic
