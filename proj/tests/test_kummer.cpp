#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "qpadic/kummer.hpp"

using namespace qpadic;

namespace {

FieldTower kummer_base(long p, int prec = 32) {
  PadicContext ctx(p, prec);
  return FieldTower::make(ctx, 1, p == 2 ? 0 : 1);
}

}  // namespace

TEST_CASE("ramification of kummer classes") {
  for (long p : {3L, 5L}) {
    FieldTower k = kummer_base(p);
    KummerCoordinates axis = KummerCoordinates::zero(p);
    axis.a[static_cast<size_t>(p)] = 1;
    CHECK(classify_ramification(axis) == Ramification::unramified);

    CHECK(classify_ramification(kummer_coordinates(FieldElement::zeta(k))) ==
          Ramification::totally_ramified);
    CHECK(classify_ramification(kummer_coordinates(FieldElement::from_integer(k, p))) ==
          Ramification::totally_ramified);

    // invariance under scaling along the line
    for (long s = 1; s < p; ++s)
      CHECK(classify_ramification(axis.scale(s)) == Ramification::unramified);

    CHECK_THROWS_AS(classify_ramification(KummerCoordinates::zero(p)), Error);
  }

  // Exactly one line among all lines is unramified.
  long p = 3;
  long total = 1;
  for (long i = 0; i <= p; ++i) total *= p;
  std::set<long> unramified_lines;
  long lines = 0;
  for (long idx = 1; idx < total; ++idx) {
    KummerCoordinates c = KummerCoordinates::from_index(p, idx);
    // count each line once via its first nonzero coordinate being 1
    int lead = -1;
    for (size_t i = 0; i < c.a.size(); ++i)
      if (c.a[i] != 0) {
        lead = static_cast<int>(i);
        break;
      }
    if (c.a[static_cast<size_t>(lead)] != 1) continue;
    ++lines;
    if (classify_ramification(c) == Ramification::unramified) unramified_lines.insert(idx);
    // the classifier agrees along the whole line
    for (long s = 2; s < p; ++s)
      CHECK(classify_ramification(c.scale(s)) == classify_ramification(c));
  }
  CHECK(lines == 40);
  CHECK(unramified_lines.size() == 1);
}

TEST_CASE("abelian filter: zeta line and a_p axis pass, p*(1+pi) fails") {
  FieldTower k3 = kummer_base(3);
  long k = k3.primitive_root();

  AbelianTest t1 = abelian_over_qp(k3, kummer_coordinates(FieldElement::zeta(k3)));
  CHECK(t1.abelian);
  CHECK(t1.r == k);

  KummerCoordinates axis = KummerCoordinates::zero(3);
  axis.a[3] = 1;
  AbelianTest t2 = abelian_over_qp(k3, axis);
  CHECK(t2.abelian);
  CHECK(t2.r == k);

  FieldElement u = FieldElement::from_integer(k3, 3) * FieldElement::zeta(k3);
  AbelianTest t3 = abelian_over_qp(k3, kummer_coordinates(u));
  CHECK_FALSE(t3.abelian);

  // Galois-stable but not abelian: the class of p is fixed by sigma (r = 1),
  // so it must fail the abelian test for p > 2.
  AbelianTest t4 = abelian_over_qp(k3, kummer_coordinates(FieldElement::from_integer(k3, 3)));
  CHECK_FALSE(t4.abelian);

  CHECK_THROWS_AS(abelian_over_qp(k3, KummerCoordinates::zero(3)), Error);
}

TEST_CASE("line-stability oracle over all 80 nonzero classes at p = 3") {
  // Brute force: compute coords(sigma(u)) for every class and test membership
  // in the line {r*u}. Galois-stable lines are strictly more than the abelian
  // ones: the class of p is fixed (r = 1) yet fails the abelian filter.
  FieldTower k3 = kummer_base(3);
  long k = k3.primitive_root();
  long stable = 0, abelian = 0;
  KummerCoordinates pclass = kummer_coordinates(FieldElement::from_integer(k3, 3));
  KummerCoordinates mixed = kummer_coordinates(
      FieldElement::from_integer(k3, 3) * FieldElement::zeta(k3));
  bool p_stable = false, mixed_stable = true;
  for (long idx = 1; idx < 81; ++idx) {
    KummerCoordinates u = KummerCoordinates::from_index(3, idx);
    KummerCoordinates image =
        kummer_coordinates(sigma_k(kummer_representative(k3, u)), false);
    long matched = 0;
    for (long r = 1; r < 3; ++r)
      if (image == u.scale(r)) matched = r;
    if (matched != 0) ++stable;
    bool ab = abelian_over_qp(k3, u).abelian;
    if (ab) ++abelian;
    CHECK(ab == (matched == k));  // abelian = stability with the cyclotomic exponent
    if (u == pclass) p_stable = matched == 1;
    if (u == mixed) mixed_stable = matched != 0;
  }
  CHECK(abelian == 8);
  CHECK(stable > abelian);      // eigenvalue-1 classes are stable but not abelian
  CHECK(p_stable);              // sigma fixes the class of p
  CHECK_FALSE(mixed_stable);    // p*(1+pi) is not even line-stable
}

TEST_CASE("classifiers are invariant along kummer lines") {
  FieldTower k3 = kummer_base(3);
  for (long idx : {1L, 5L, 13L, 27L, 40L, 67L}) {
    KummerCoordinates u = KummerCoordinates::from_index(3, idx);
    AbelianTest base = abelian_over_qp(k3, u);
    Ramification ram = classify_ramification(u);
    for (long s = 2; s < 3; ++s) {
      CHECK(abelian_over_qp(k3, u.scale(s)).abelian == base.abelian);
      CHECK(classify_ramification(u.scale(s)) == ram);
    }
  }
}

TEST_CASE("base case p = 2: dimension 3 with basis -1, 2, 5") {
  BaseCaseResult r = base_case_compositum(2);
  CHECK(r.dimension == 3);
  CHECK(r.abelian_classes.size() == 7);
  REQUIRE(r.generators.size() == 3);
  FieldTower q2 = kummer_base(2);
  CHECK(r.generators[0] == kummer_coordinates(FieldElement::from_integer(q2, -1)));
  CHECK(r.generators[1] == kummer_coordinates(FieldElement::from_integer(q2, 2)));
  CHECK(r.generators[2] == kummer_coordinates(FieldElement::from_integer(q2, 5)));
  CHECK(r.group_shape == "C2 x C2 x C2");
}

TEST_CASE("base case p = 3: dimension 2, zeta line plus unramified axis") {
  BaseCaseResult r = base_case_compositum(3);
  CHECK(r.dimension == 2);
  CHECK(r.abelian_classes.size() == 8);
  CHECK(r.group_shape == "C3 x C3");

  FieldTower k3 = kummer_base(3);
  KummerCoordinates zline = kummer_coordinates(FieldElement::zeta(k3));
  KummerCoordinates axis = KummerCoordinates::zero(3);
  axis.a[3] = 1;
  // passing set is exactly the span of the two generators
  std::set<std::vector<int>> expect;
  for (long s = 0; s < 3; ++s)
    for (long t = 0; t < 3; ++t) {
      KummerCoordinates c = zline.scale(s).add(axis.scale(t));
      if (!c.is_zero()) expect.insert(c.a);
    }
  std::set<std::vector<int>> got;
  for (const auto& c : r.abelian_classes) got.insert(c.a);
  CHECK(got == expect);

  // digit-lex minimal generators: the axis precedes the zeta line
  REQUIRE(r.generators.size() == 2);
  CHECK(r.generators[0] == axis);
  CHECK(r.generators[1] == zline);

  CHECK_THROWS_AS(base_case_compositum(7), Error);
}

TEST_CASE("serial and parallel scans agree") {
  FieldTower k3 = kummer_base(3);
  auto a = scan_abelian_classes(k3, ExecMode::serial);
  auto b = scan_abelian_classes(k3, ExecMode::parallel);
  REQUIRE(a.size() == b.size());
  for (size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
}

#ifdef _OPENMP
TEST_CASE("towers are safely shared across threads") {
  // Re-entrancy of the pure operations on one shared immutable tower.
  FieldTower k3 = kummer_base(3);
  std::vector<int> serial(80), threaded(80);
  for (long idx = 1; idx <= 80; ++idx)
    serial[static_cast<size_t>(idx - 1)] =
        abelian_over_qp(k3, KummerCoordinates::from_index(3, idx)).abelian ? 1 : 0;
#pragma omp parallel for schedule(dynamic, 4)
  for (long idx = 1; idx <= 80; ++idx)
    threaded[static_cast<size_t>(idx - 1)] =
        abelian_over_qp(k3, KummerCoordinates::from_index(3, idx)).abelian ? 1 : 0;
  CHECK(serial == threaded);
}
#endif

TEST_CASE("sigma digit action") {
  for (long p : {3L, 5L}) {
    FieldTower k = kummer_base(p);
    for (int j = 1; j <= static_cast<int>(p); ++j)
      for (long digit = 1; digit < p; ++digit) {
        SigmaDigitReport rep = sigma_digit_action(k, j, digit);
        CHECK(rep.verified());
      }
  }
  // spot check the claimed leading digit value at position 2 for p = 5
  FieldTower k5 = kummer_base(5);
  long k = k5.primitive_root();
  SigmaDigitReport rep = sigma_digit_action(k5, 2, 3);
  CHECK(rep.expected_leading == (k * k * 3) % 5);
  CHECK(rep.observed_leading == rep.expected_leading);
}

TEST_CASE("squares of Q_2(i): the four candidates are independent") {
  Q2iSquaresReport r = q2i_square_classes();
  CHECK(r.dimension == 4);
  CHECK(r.is_square[0]);
  for (unsigned mask = 1; mask < 16; ++mask) CHECK_FALSE(r.is_square[mask]);

  // sanity: an explicit square product is recognized
  PadicContext c2(2, 32);
  FieldTower q2i = FieldTower::make(c2, 1, 2);
  FieldElement i = FieldElement::zeta(q2i);
  FieldElement x = (FieldElement::one(q2i) + i).pow(2) *
                   (FieldElement::one(q2i) + FieldElement::from_integer(q2i, 2) * i).pow(2) *
                   FieldElement::from_integer(q2i, 100);
  CHECK(is_pth_power(x).is_power);
}

TEST_CASE("conjugation-invariant square classes of Q_2(i) are span{2,5}") {
  Q2iConjugationReport r = q2i_c4_obstruction();
  for (unsigned mask = 1; mask < 16; ++mask) {
    bool expect = (mask & 0x3u) == 0;  // no 1+i, no 1+2i
    CHECK(r.invariant[mask] == expect);
  }

  // (1-i)/(1+i) = -i is not a square
  PadicContext c2(2, 32);
  FieldTower q2i = FieldTower::make(c2, 1, 2);
  FieldElement i = FieldElement::zeta(q2i);
  FieldElement ratio = cyclotomic_galois(FieldElement::one(q2i) + i, 3) /
                       (FieldElement::one(q2i) + i);
  CHECK(ratio == -i);
  CHECK_FALSE(is_pth_power(ratio).is_power);
}

TEST_CASE("tame identity: (p-1)-th root of -p lives in Q_p(zeta_p)") {
  for (long p : {3L, 5L, 7L}) CHECK(tame_root_check(p));
}

TEST_CASE("conductor levels") {
  CHECK(conductor(3, 0, 1) == std::pair<mpz_class, mpz_class>(9, 2));
  CHECK(conductor(2, 1, 1) == std::pair<mpz_class, mpz_class>(8, 3));
  mpz_class big;
  mpz_ui_pow_ui(big.get_mpz_t(), 5, 10);
  CHECK(conductor(5, 1, 2) == std::pair<mpz_class, mpz_class>(125, big - 1));
  CHECK_THROWS_AS(conductor(3, 1, 6), Error);
  // componentwise monotone in n and m
  for (long n = 0; n < 3; ++n)
    for (long m : {1L, 2L}) {
      auto a = conductor(3, n, m);
      auto b = conductor(3, n + 1, m);
      CHECK(a.first < b.first);
      CHECK(a.second < b.second);
      if (m == 1) {
        auto c = conductor(3, n, 2);
        CHECK(a.second < c.second);
        CHECK(a.first == c.first);
      }
    }
}

TEST_CASE("full extension-class records") {
  FieldTower k3 = kummer_base(3);
  CpExtensionClass axis = classify_class(k3, KummerCoordinates::from_index(3, 27));  // a_3 axis
  CHECK(axis.ramification == Ramification::unramified);
  CHECK(axis.abelian_over_qp);
  CHECK(axis.matched_r == k3.primitive_root());

  CpExtensionClass pcls =
      classify_class(k3, kummer_coordinates(FieldElement::from_integer(k3, 3)));
  CHECK(pcls.ramification == Ramification::totally_ramified);
  CHECK_FALSE(pcls.abelian_over_qp);
  CHECK(pcls.matched_r == 0);
}

TEST_CASE("half-cyclotomic chain of Q_2") {
  std::vector<ChainStep> chain = half_cyclotomic_chain(5);
  REQUIRE(chain.size() == 4);  // k = 2,3,4,5
  CHECK(chain[0].k == 2);
  CHECK(chain[0].valuation.is_infinite());  // a_2 = 0 exactly
  CHECK(chain[0].square_identity);
  CHECK(chain[1].valuation == ExactRational(1, 2));
  CHECK(chain[2].valuation == ExactRational(1, 4));
  CHECK(chain[3].valuation == ExactRational(1, 8));
  for (const auto& s : chain) CHECK(s.square_identity);
  CHECK_THROWS_AS(half_cyclotomic_chain(9), Error);

  // the largest supported level
  std::vector<ChainStep> six = half_cyclotomic_chain(6, 48);
  CHECK(six.back().k == 6);
  CHECK(six.back().valuation == ExactRational(1, 16));
  CHECK(six.back().square_identity);
}
