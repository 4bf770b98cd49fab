#pragma once

#include <array>
#include <utility>

#include "qpadic/units.hpp"

namespace qpadic {

enum class Ramification { unramified, totally_ramified };

// A degree-p Kummer extension K(x^{1/p}) of K = Q_p(zeta_p), described by the
// coordinate class of x. Scaling the class by a nonzero exponent names the
// same extension, and the classifiers below are invariant under that scaling.
struct CpExtensionClass {
  KummerCoordinates generator;
  Ramification ramification = Ramification::totally_ramified;
  bool abelian_over_qp = false;
  int matched_r = 0;  // exponent with sigma(u) in u^r K^{xp}; k when abelian
};

// Unramified iff the class sits on the a_p axis (a_0 = a_1 = ... = a_{p-1} = 0).
Ramification classify_ramification(const KummerCoordinates& u);

struct AbelianTest {
  bool abelian = false;
  int r = 0;  // the matched exponent when abelian (always the primitive root)
};

// K(x^{1/p})/Q_p is abelian iff sigma moves the class by the cyclotomic
// exponent: coords(sigma(x)) = k * coords(x). Mere line stability
// (coords(sigma(x)) = r * coords(x) for some r) only gives a Galois closure.
AbelianTest abelian_over_qp(const FieldTower& K, const KummerCoordinates& u);

CpExtensionClass classify_class(const FieldTower& K, const KummerCoordinates& u);

enum class ExecMode { serial, parallel };

// All nonzero classes passing the abelian filter, sorted lexicographically in
// (a_0, ..., a_p). The parallel path distributes the per-class work across
// OpenMP threads and produces identical output to the serial reference.
std::vector<KummerCoordinates> scan_abelian_classes(const FieldTower& K, ExecMode mode);

struct BaseCaseResult {
  int dimension = 0;
  std::vector<KummerCoordinates> generators;
  std::vector<KummerCoordinates> abelian_classes;  // nonzero members, sorted
  std::string group_shape;
};

// Compositum of the C_p-extensions of K abelian over Q_p: the full 3-dim
// square-class group for p = 2 (basis -1, 2, 5), a 2-dim subgroup for p > 2.
BaseCaseResult base_case_compositum(long p, ExecMode mode = ExecMode::parallel,
                                    int precision = kDefaultPrecision);

struct SigmaDigitReport {
  int position = 0;
  long digit = 0;
  long expected_leading = 0;
  long observed_leading = 0;
  bool lower_digits_zero = false;
  bool pth_power_relation = true;  // sigma(a) a^{-k} a p-th power; position p only
  bool verified() const {
    return lower_digits_zero && expected_leading == observed_leading && pth_power_relation;
  }
};

// For a = 1 + w(digit) pi^j: sigma(a) has leading digit k^j * digit at
// position j; at position j = p, additionally sigma(a) in a^k K^{xp}.
SigmaDigitReport sigma_digit_action(const FieldTower& K, int j, long digit);

// Subset products over the basis candidates {1+i, 1+2i, 2, 5} of the square
// classes of Q_2(i); mask bit 0 selects 1+i, bit 1 selects 1+2i, bit 2
// selects 2, bit 3 selects 5.
struct Q2iSquaresReport {
  int dimension = 0;
  std::array<bool, 16> is_square{};  // only mask 0 may be a square
};
Q2iSquaresReport q2i_square_classes(int precision = kDefaultPrecision);

struct Q2iConjugationReport {
  std::array<bool, 16> invariant{};  // sigma(x)/x a square; span{2,5} expected
};
Q2iConjugationReport q2i_c4_obstruction(int precision = kDefaultPrecision);

// (p-1)-th root of -p inside Q_p(zeta_p): residue check via the Wilson unit,
// then a lifted root r with (pi*r)^{p-1} = -p.
bool tame_root_check(long p, int precision = kDefaultPrecision);

// Cyclotomic levels (p^{n+2}, p^{p^n m} - 1) containing every abelian
// extension of degree p^n * m with (p, m) = 1.
std::pair<mpz_class, mpz_class> conductor(long p, long n, long m);

struct ChainStep {
  int k = 0;
  ExactRational valuation;       // of a_k = zeta_{2^k} + zeta_{2^k}^{-1}
  bool square_identity = false;  // a_k^2 = a_{k-1} + 2
};

// The half-cyclotomic generators a_k in Q_2(zeta_{2^k}) for k = 2..k_max:
// a_2 = 0 and v(a_k) = 1/2^{k-2} afterwards.
std::vector<ChainStep> half_cyclotomic_chain(int k_max, int precision = kDefaultPrecision);

}  // namespace qpadic
