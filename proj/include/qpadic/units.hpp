#pragma once

#include <string>
#include <vector>

#include "qpadic/tower.hpp"

namespace qpadic {

// Largest n with u in U^(n) = 1 + M^n, capped at `cap`. Requires a unit.
int unit_depth(const FieldElement& u, int cap);

// Everything below the stabilization depth e·p/(p-1) + 1 determines a unit
// class modulo p-th powers; towers must contain zeta_p.
int working_depth(const FieldTower& tower);

// zeta_p - 1, of valuation 1/(p-1): the cyclotomic uniformizer used in the
// p-th power analysis (for p = 2 on an unramified tower this is -2).
FieldElement cyclo_uniformizer(const FieldTower& tower);

// Canonical expansion of a principal unit: digits[i] is the residue whose
// Teichmuller lift sits at pi^{i+1} in the greedy factorization
// u = prod_i (1 + w(digits[i]) pi^{i+1}) mod U^(depth+1).
struct UnitDigits {
  FieldTower tower;
  std::vector<ResidueElement> digits;

  FieldElement recompose() const;
  bool all_zero() const;
  std::string str() const;
  friend bool operator==(const UnitDigits& a, const UnitDigits& b) {
    if (a.digits.size() != b.digits.size()) return false;
    for (size_t i = 0; i < a.digits.size(); ++i)
      if (a.digits[i] != b.digits[i]) return false;
    return true;
  }
  friend bool operator!=(const UnitDigits& a, const UnitDigits& b) { return !(a == b); }
};

// Greedy digit extraction to the given depth; requires u in U^(1).
UnitDigits decompose(const FieldElement& u, int depth);

// x = pi^a * w * u with w the Teichmuller lift of `teich` and u in U^(1).
struct FullDecomposition {
  long pi_exponent = 0;
  ResidueElement teich;
  UnitDigits unit_part;
};

// depth = 0 selects the tower's working depth.
FullDecomposition full_decomposition(const FieldElement& x, int depth = 0);

// p-th root of an element of U^(ep/(p-1)+1), found inside U^(e/(p-1)) by
// lifting the zero root of the reduced polynomial X^p - X.
FieldElement high_unit_pth_root(const FieldElement& x);

// For x = 1 + pi_c^p a with a integral (pi_c the cyclotomic uniformizer):
// the reduced obstruction abar and whether X^p - X - abar has a root in the
// residue field (exhaustive search). Unsolvable means x is not a p-th power.
struct ArtinSchreierResult {
  ResidueElement abar;
  bool solvable = false;
};
ArtinSchreierResult artin_schreier_test(const FieldElement& x);

// Decision procedure for x in F^{x p}, with a verified witness root on
// success. Requires zeta_p in the tower and x != 0.
struct PthPowerResult {
  bool is_power = false;
  FieldElement witness;
};
PthPowerResult is_pth_power(const FieldElement& x);

// dim_{F_p} F^x / F^{x p}, computed constructively from the digit
// parameterization and cross-checked against n + 2.
int power_quotient_dim(const FieldTower& tower);

// Exponent vector over the multiplicative family {p} u {1 + pi^i}: a class of
// K^x/K^{x p} for K = Q_p(zeta_p). Coordinates are linear in the class.
struct KummerCoordinates {
  long p = 0;
  std::vector<int> a;  // size p+1; a[0] is the exponent of p

  static KummerCoordinates zero(long p);
  bool is_zero() const;
  KummerCoordinates add(const KummerCoordinates& o) const;
  KummerCoordinates scale(long s) const;
  long index() const;  // base-p encoding, a[0] least significant
  static KummerCoordinates from_index(long p, long index);
  std::string str() const;
  friend bool operator==(const KummerCoordinates& x, const KummerCoordinates& y) {
    return x.p == y.p && x.a == y.a;
  }
  friend bool operator!=(const KummerCoordinates& x, const KummerCoordinates& y) {
    return !(x == y);
  }
  friend bool operator<(const KummerCoordinates& x, const KummerCoordinates& y) {
    return x.a < y.a;
  }
};

// True for the towers presenting K = Q_p(zeta_p) (for p = 2: Q_2 itself).
bool is_kummer_base(const FieldTower& tower);

// Coordinates of x in K^x/K^{x p}; when verify is set, the recomposition is
// checked to lie in x K^{x p} via is_pth_power.
KummerCoordinates kummer_coordinates(const FieldElement& x, bool verify = true);

// p^{a0} * prod_i (1 + pi^i)^{a_i}.
FieldElement kummer_representative(const FieldTower& tower, const KummerCoordinates& c);

}  // namespace qpadic
