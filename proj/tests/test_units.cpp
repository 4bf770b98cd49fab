#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "qpadic/units.hpp"

using namespace qpadic;

namespace {

FieldTower kummer_base(long p, int prec = 32) {
  PadicContext ctx(p, prec);
  return FieldTower::make(ctx, 1, p == 2 ? 0 : 1);
}

// Independent oracle: x is a p-th power iff its pi-exponent is divisible by p
// and some full-depth digit representative y has x_unit * y^{-p} = 1 to depth
// d+1. Scans all q^d candidates instead of the implementation's truncated
// candidate set, and does not use high_unit_pth_root.
bool oracle_is_pth_power(const FieldElement& x) {
  const FieldTower& t = x.tower();
  long p = t.prime();
  int e = t.ramification_index();
  int d = e * static_cast<int>(p) / (static_cast<int>(p) - 1);
  long q = 1;
  for (int i = 0; i < t.inertia_degree(); ++i) q *= p;
  long t_exp = x.pi_valuation();
  if (t_exp % p != 0) return false;
  FieldElement pi = FieldElement::uniformizer(t);
  FieldElement u = x * pi.pow(-t_exp);
  FieldElement u1 = u * teich_lift(t, u.residue()).inverse();
  long count = 1;
  for (int i = 0; i < d; ++i) count *= q;
  for (long idx = 0; idx < count; ++idx) {
    long rem = idx;
    FieldElement y = FieldElement::one(t);
    FieldElement pipow = pi;
    for (int i = 1; i <= d; ++i) {
      long digit = rem % q;
      rem /= q;
      if (digit != 0)
        y = y * (FieldElement::one(t) + teich_lift(t, ResidueElement::from_index(t, digit)) * pipow);
      pipow = pipow * pi;
    }
    if (unit_depth(u1 * y.pow(-static_cast<long>(p)), d + 1) >= d + 1) return true;
  }
  return false;
}

FieldElement random_unit1(const FieldTower& t, std::mt19937_64& rng) {
  // 1 + pi * (random integral element)
  std::uniform_int_distribution<long> coeff(-40, 40);
  std::vector<PadicNumber> c;
  for (int i = 0; i < t.degree(); ++i)
    c.push_back(PadicNumber::from_integer(t.context(), coeff(rng)));
  FieldElement w = FieldElement::from_coeffs(t, std::move(c));
  return FieldElement::one(t) + FieldElement::uniformizer(t) * w;
}

}  // namespace

TEST_CASE("digit expansion of 7 in Q_2 and of zeta in K") {
  FieldTower q2 = kummer_base(2);
  UnitDigits d = decompose(FieldElement::from_integer(q2, 7), 2);
  REQUIRE(d.digits.size() == 2);
  CHECK(d.digits[0].scalar() == 1);
  CHECK(d.digits[1].scalar() == 1);

  for (long p : {3L, 5L}) {
    FieldTower k = kummer_base(p);
    UnitDigits z = decompose(FieldElement::zeta(k), static_cast<int>(p));
    CHECK(z.digits[0].scalar() == 1);
    for (size_t i = 1; i < z.digits.size(); ++i) CHECK(z.digits[i].is_zero());
  }

  FieldTower k3 = kummer_base(3);
  CHECK_THROWS_AS(decompose(FieldElement::uniformizer(k3), 2), Error);
  CHECK_THROWS_AS(decompose(FieldElement::from_integer(k3, 2), 2), Error);
}

TEST_CASE("decompose/recompose round-trips on random principal units") {
  std::mt19937_64 rng(101);
  for (long p : {2L, 3L, 5L}) {
    FieldTower k = kummer_base(p);
    int depth = working_depth(k);
    for (int it = 0; it < 150; ++it) {
      FieldElement u = random_unit1(k, rng);
      UnitDigits d = decompose(u, depth);
      FieldElement back = d.recompose();
      // agreement modulo pi^{depth+1}
      FieldElement quot = u / back;
      CHECK(unit_depth(quot, depth + 1) >= depth + 1);
      // digits are invariant under perturbation by U^(depth+1)
      FieldElement pert =
          u * (FieldElement::one(k) +
               FieldElement::uniformizer(k).pow(depth + 1) * random_unit1(k, rng));
      CHECK(decompose(pert, depth) == d);
    }
  }
}

TEST_CASE("digit map is a bijection at depth p+1, exhaustively for p in {2,3}") {
  for (long p : {2L, 3L}) {
    FieldTower k = kummer_base(p);
    int depth = static_cast<int>(p) + 1;
    FieldElement pi = FieldElement::uniformizer(k);
    long count = 1;
    for (int i = 0; i < depth; ++i) count *= p;
    std::set<std::vector<long>> seen;
    for (long idx = 0; idx < count; ++idx) {
      long rem = idx;
      FieldElement u = FieldElement::one(k);
      FieldElement pipow = pi;
      std::vector<long> digits;
      for (int i = 1; i <= depth; ++i) {
        long digit = rem % p;
        rem /= p;
        digits.push_back(digit);
        if (digit != 0)
          u = u * (FieldElement::one(k) +
                   teich_lift(k, ResidueElement::from_scalar(k, digit)) * pipow);
        pipow = pipow * pi;
      }
      UnitDigits d = decompose(u, depth);
      std::vector<long> got;
      for (const auto& r : d.digits) got.push_back(r.scalar());
      CHECK(got == digits);
      seen.insert(got);
    }
    CHECK(static_cast<long>(seen.size()) == count);
  }
}

TEST_CASE("graded pieces are additively isomorphic to the residue field") {
  std::mt19937_64 rng(55);
  FieldTower k = kummer_base(3);
  FieldElement pi = FieldElement::uniformizer(k);
  for (int n = 1; n <= 4; ++n) {
    FieldElement pin = pi.pow(n);
    auto level_digit = [&](const FieldElement& u) {
      return ((u - FieldElement::one(k)) * pin.inverse()).residue();
    };
    for (int it = 0; it < 60; ++it) {
      std::uniform_int_distribution<long> digit(0, 2);
      long a = digit(rng), b = digit(rng);
      FieldElement ua = FieldElement::one(k) + FieldElement::from_integer(k, a) * pin;
      FieldElement ub = FieldElement::one(k) + FieldElement::from_integer(k, b) * pin;
      // multiplication upstairs is addition downstairs
      CHECK(level_digit(ua * ub) ==
            ResidueElement::from_scalar(k, a) + ResidueElement::from_scalar(k, b));
    }
  }
}

TEST_CASE("full decomposition splits off pi-power and teichmuller part") {
  FieldTower k5 = kummer_base(5);
  FullDecomposition fd = full_decomposition(FieldElement::from_integer(k5, 5));
  CHECK(fd.pi_exponent == 4);  // v(p) = 1 = (p-1)/e
  FieldElement back = FieldElement::uniformizer(k5).pow(fd.pi_exponent) *
                      teich_lift(k5, fd.teich) * fd.unit_part.recompose();
  FieldElement quot = FieldElement::from_integer(k5, 5) / back;
  CHECK(unit_depth(quot, working_depth(k5) + 1) >= working_depth(k5) + 1);

  FullDecomposition fz = full_decomposition(FieldElement::zeta(k5));
  CHECK(fz.pi_exponent == 0);
  CHECK(fz.teich == ResidueElement::one(k5));
  CHECK(fz.unit_part.digits[0].scalar() == 1);
  CHECK(fz.unit_part.digits[1].is_zero());

  FieldTower q2 = kummer_base(2);
  FullDecomposition fm = full_decomposition(FieldElement::from_integer(q2, -1));
  CHECK(fm.pi_exponent == 0);
  CHECK(fm.teich == ResidueElement::one(q2));
  CHECK(fm.unit_part.digits[0].scalar() == 1);
  CHECK(fm.unit_part.digits[1].scalar() == 1);

  CHECK_THROWS_AS(full_decomposition(FieldElement::zero(q2)), Error);
}

TEST_CASE("high unit p-th roots") {
  FieldTower k3 = kummer_base(3);
  CHECK(high_unit_pth_root(FieldElement::one(k3)) == FieldElement::one(k3));

  std::mt19937_64 rng(77);
  for (int it = 0; it < 40; ++it) {
    FieldElement w = random_unit1(k3, rng);
    FieldElement x = FieldElement::one(k3) + FieldElement::uniformizer(k3).pow(4) * w;
    FieldElement y = high_unit_pth_root(x);
    CHECK(unit_depth(y, 2) >= 1);
    CHECK(equal_at_precision(y.pow(3), x, k3.precision() - 2));
  }

  FieldTower q2 = kummer_base(2);
  FieldElement y = high_unit_pth_root(FieldElement::from_integer(q2, 9));
  CHECK(equal_at_precision(y * y, FieldElement::from_integer(q2, 9)));

  // below the threshold depth is a precondition violation
  FieldElement bad = FieldElement::one(k3) + FieldElement::uniformizer(k3).pow(2);
  CHECK_THROWS_AS(high_unit_pth_root(bad), Error);
}

TEST_CASE("artin-schreier obstruction over F_p and F_{p^p}") {
  // In K the residue field is F_p: X^p - X - c has a root only for c = 0.
  for (long p : {2L, 3L}) {
    FieldTower k = kummer_base(p);
    FieldElement picp = cyclo_uniformizer(k).pow(p);
    ArtinSchreierResult triv = artin_schreier_test(FieldElement::one(k));
    CHECK(triv.solvable);
    CHECK(triv.abar.is_zero());
    for (long c = 1; c < p; ++c) {
      FieldElement x = FieldElement::one(k) + FieldElement::from_integer(k, c) * picp;
      ArtinSchreierResult r = artin_schreier_test(x);
      CHECK(r.abar == ResidueElement::from_scalar(k, c));
      CHECK_FALSE(r.solvable);
    }

    // After base change to inertia degree p, solvability matches a brute-force
    // trace-zero scan of the residue field.
    PadicContext ctx(p, 32);
    FieldTower big = FieldTower::make(ctx, static_cast<int>(p), 1);
    long q = 1;
    for (long i = 0; i < p; ++i) q *= p;
    FieldElement bigpicp = cyclo_uniformizer(big).pow(p);
    for (long idx = 0; idx < q; ++idx) {
      ResidueElement c = ResidueElement::from_index(big, idx);
      bool expect = false;  // oracle: exhaustive root search
      for (long r = 0; r < q; ++r) {
        ResidueElement cand = ResidueElement::from_index(big, r);
        if (cand.pow(p) - cand == c) expect = true;
      }
      FieldElement x = FieldElement::one(big) + teich_lift(big, c) * bigpicp;
      CHECK(artin_schreier_test(x).solvable == expect);
    }
  }
}

TEST_CASE("p-th power decision with witnesses") {
  FieldTower q2 = kummer_base(2);
  PthPowerResult nine = is_pth_power(FieldElement::from_integer(q2, 9));
  CHECK(nine.is_power);
  CHECK(equal_at_precision(nine.witness * nine.witness, FieldElement::from_integer(q2, 9)));

  for (long p : {2L, 3L, 5L}) {
    FieldTower k = kummer_base(p);
    FieldElement pi = FieldElement::uniformizer(k);
    FieldElement hi = FieldElement::one(k) + pi.pow(static_cast<int>(p) + 1);
    PthPowerResult r1 = is_pth_power(hi);
    CHECK(r1.is_power);
    CHECK(equal_at_precision(r1.witness.pow(p), hi, k.precision() - 2));

    FieldElement lo = FieldElement::one(k) + pi.pow(static_cast<int>(p));
    CHECK_FALSE(is_pth_power(lo).is_power);

    CHECK_THROWS_AS(is_pth_power(FieldElement::zero(k)), Error);
  }
}

TEST_CASE("p-th power decision agrees with the exhaustive oracle") {
  std::mt19937_64 rng(301);
  for (long p : {2L, 3L}) {
    FieldTower k = kummer_base(p);
    FieldElement pi = FieldElement::uniformizer(k);
    // all unit classes via digit representatives to depth p, with pi-shifts
    long count = 1;
    for (long i = 0; i < p; ++i) count *= p;
    for (long idx = 0; idx < count; ++idx) {
      long rem = idx;
      FieldElement u = FieldElement::one(k);
      FieldElement pipow = pi;
      for (long i = 1; i <= p; ++i) {
        long digit = rem % p;
        rem /= p;
        if (digit)
          u = u * (FieldElement::one(k) +
                   teich_lift(k, ResidueElement::from_scalar(k, digit)) * pipow);
        pipow = pipow * pi;
      }
      for (long shift : {0L, 1L, static_cast<long>(p)}) {
        FieldElement x = u * pi.pow(shift);
        CHECK(is_pth_power(x).is_power == oracle_is_pth_power(x));
      }
    }
    for (int it = 0; it < 25; ++it) {
      FieldElement x = random_unit1(k, rng) * pi.pow(static_cast<long>(it % 5) - 2);
      CHECK(is_pth_power(x).is_power == oracle_is_pth_power(x));
    }
  }
}

TEST_CASE("both inclusions of the p+1 power identity, exhaustively for p in {2,3}") {
  for (long p : {2L, 3L}) {
    FieldTower k = kummer_base(p);
    FieldElement pi = FieldElement::uniformizer(k);
    int d = working_depth(k) - 1;  // = p for these towers
    REQUIRE(d == static_cast<int>(p));
    // U^(p+1) subset (U^(1))^p: every class of U^(p+1) mod U^(2p+1) has a root.
    long count = 1;
    for (long i = 0; i < p; ++i) count *= p;
    for (long idx = 0; idx < count; ++idx) {
      long rem = idx;
      FieldElement x = FieldElement::one(k);
      FieldElement pipow = pi.pow(static_cast<int>(p) + 1);
      for (long i = 1; i <= p; ++i) {
        long digit = rem % p;
        rem /= p;
        if (digit)
          x = x * (FieldElement::one(k) +
                   teich_lift(k, ResidueElement::from_scalar(k, digit)) * pipow);
        pipow = pipow * pi;
      }
      FieldElement y = high_unit_pth_root(x);
      CHECK(unit_depth(y, 2) >= 1);
      CHECK(equal_at_precision(y.pow(p), x, k.precision() - 2));
    }
    // (U^(1))^p subset U^(p+1): all digit-vector p-th powers die to depth p+1.
    for (long idx = 0; idx < count; ++idx) {
      long rem = idx;
      FieldElement u = FieldElement::one(k);
      FieldElement pipow = pi;
      for (long i = 1; i <= p; ++i) {
        long digit = rem % p;
        rem /= p;
        if (digit)
          u = u + teich_lift(k, ResidueElement::from_scalar(k, digit)) * pipow;
        pipow = pipow * pi;
      }
      CHECK(unit_depth(u.pow(p), static_cast<int>(p) + 1) >= static_cast<int>(p) + 1);
    }
  }
}

TEST_CASE("power quotient dimensions") {
  PadicContext c2(2, 32), c3(3, 32), c5(5, 32);
  CHECK(power_quotient_dim(FieldTower::make(c2, 1, 0)) == 3);
  CHECK(power_quotient_dim(FieldTower::make(c2, 1, 2)) == 4);
  CHECK(power_quotient_dim(FieldTower::make(c3, 1, 1)) == 4);
  CHECK_THROWS_AS(power_quotient_dim(FieldTower::make(c3, 1, 0)), Error);
}

TEST_CASE("kummer coordinates: pinned values and linearity") {
  FieldTower q2 = kummer_base(2);
  CHECK(kummer_coordinates(FieldElement::from_integer(q2, 2)).a == std::vector<int>{1, 0, 0});
  CHECK(kummer_coordinates(FieldElement::from_integer(q2, -1)).a == std::vector<int>{0, 1, 1});
  CHECK(kummer_coordinates(FieldElement::from_integer(q2, 5)).a == std::vector<int>{0, 0, 1});

  for (long p : {3L, 5L}) {
    FieldTower k = kummer_base(p);
    KummerCoordinates cp = kummer_coordinates(FieldElement::from_integer(k, p));
    CHECK(cp.a[0] == 1);
    for (size_t i = 1; i < cp.a.size(); ++i) CHECK(cp.a[i] == 0);
    KummerCoordinates cz = kummer_coordinates(FieldElement::zeta(k));
    CHECK(cz.a[0] == 0);
    CHECK(cz.a[1] == 1);
    for (size_t i = 2; i < cz.a.size(); ++i) CHECK(cz.a[i] == 0);
  }

  std::mt19937_64 rng(978);
  for (long p : {2L, 3L}) {
    FieldTower k = kummer_base(p);
    FieldElement pi = FieldElement::uniformizer(k);
    std::uniform_int_distribution<long> shift(-2, 2);
    for (int it = 0; it < 60; ++it) {
      FieldElement x = random_unit1(k, rng) * pi.pow(shift(rng));
      FieldElement y = random_unit1(k, rng) * pi.pow(shift(rng));
      KummerCoordinates cx = kummer_coordinates(x);
      KummerCoordinates cy = kummer_coordinates(y);
      CHECK(kummer_coordinates(x * y) == cx.add(cy));
    }
    // coordinates vanish exactly on p-th powers
    for (int it = 0; it < 30; ++it) {
      FieldElement x = random_unit1(k, rng) * pi.pow(shift(rng));
      CHECK(kummer_coordinates(x.pow(p)).is_zero());
      CHECK(kummer_coordinates(x).is_zero() == is_pth_power(x).is_power);
    }
  }

  FieldTower k3 = kummer_base(3);
  CHECK_THROWS_AS(kummer_coordinates(FieldElement::zero(k3)), Error);
  PadicContext c3(3, 32);
  CHECK_THROWS_AS(kummer_coordinates(FieldElement::one(FieldTower::make(c3, 2, 1))), Error);
}

TEST_CASE("kummer representatives enumerate all classes for p in {2,3}") {
  for (long p : {2L, 3L}) {
    FieldTower k = kummer_base(p);
    long count = 1;
    for (long i = 0; i <= p; ++i) count *= p;
    std::set<std::vector<int>> seen;
    for (long idx = 0; idx < count; ++idx) {
      KummerCoordinates c = KummerCoordinates::from_index(p, idx);
      FieldElement rep = kummer_representative(k, c);
      KummerCoordinates back = kummer_coordinates(rep);
      CHECK(back == c);
      seen.insert(back.a);
    }
    CHECK(static_cast<long>(seen.size()) == count);
  }
}
