#pragma once

#include <memory>
#include <string>
#include <vector>

#include "qpadic/padic.hpp"

namespace qpadic {

class FieldElement;
class ResidueElement;

// A finite extension of Q_p presented as a two-step tower: an unramified step
// of degree f (defined by the lexicographically smallest monic irreducible
// polynomial over F_p) followed by the totally ramified cyclotomic step of
// exponent m (defined by the Eisenstein polynomial Phi_{p^m}(1+X)). Elements
// are coefficient vectors over the basis pi^i y^j with 0 <= i < e, 0 <= j < f.
//
// Towers are immutable after construction and cheap to copy.
class FieldTower {
 public:
  FieldTower() = default;
  static FieldTower make(const PadicContext& ctx, int inertia_degree, int cyclo_exponent);

  bool valid() const { return d_ != nullptr; }
  const PadicContext& context() const;
  long prime() const;
  int precision() const;
  int inertia_degree() const;      // f
  int cyclo_exponent() const;      // m
  int ramification_index() const;  // e = p^{m-1}(p-1) for m >= 1, else 1
  int degree() const;              // n = e*f
  const IntPolynomial& unramified_poly() const;
  const IntPolynomial& eisenstein_poly() const;  // valid for m >= 1
  // Smallest primitive root mod p (1 for p = 2); the exponent of the stored
  // ramified-step generator.
  long primitive_root() const;
  bool contains_zeta_p() const;  // m >= 1, or p = 2 where zeta_2 = -1
  bool same(const FieldTower& o) const { return d_ == o.d_; }
  bool compatible(const FieldTower& o) const;
  std::string str() const;

  // Internal reduction tables (coefficients of x^{e+s} mod the Eisenstein
  // polynomial, resp. y^{f+s} mod the unramified polynomial).
  const std::vector<std::vector<mpz_class>>& pi_reduction_rows() const;
  const std::vector<std::vector<mpz_class>>& y_reduction_rows() const;
  const std::vector<std::vector<long>>& residue_reduction_rows() const;
  // Cached coefficient vectors: Teichmuller lifts by residue index (may be
  // empty for large residue fields) and powers of the Frobenius image of y.
  const std::vector<std::vector<PadicNumber>>& teich_cache() const;
  const std::vector<std::vector<PadicNumber>>& frobenius_powers() const;
  // Coefficients of pi^{-1}.
  const std::vector<PadicNumber>& uniformizer_inverse_coeffs() const;
  // Cached (1 + w(r) pi^i)^{-1} for small towers containing zeta_p; null when
  // outside the cached range.
  const std::vector<PadicNumber>* unit_generator_inverse(int i, long residue_index) const;

 private:
  struct Data;
  std::shared_ptr<const Data> d_;
};

// Element of the residue field F_{p^f} = F_p[y]/(unramified_poly mod p).
class ResidueElement {
 public:
  ResidueElement() = default;
  ResidueElement(const FieldTower& tower, std::vector<long> coeffs);
  static ResidueElement zero(const FieldTower& tower);
  static ResidueElement one(const FieldTower& tower);
  static ResidueElement from_scalar(const FieldTower& tower, long value);
  // Base-p digit encoding: index = sum coeffs[j] p^j, 0 <= index < p^f.
  static ResidueElement from_index(const FieldTower& tower, long index);
  long index() const;

  const FieldTower& tower() const { return tower_; }
  const std::vector<long>& coeffs() const { return c_; }
  bool is_zero() const;
  // Value in {0..p-1}; requires f = 1.
  long scalar() const;

  friend ResidueElement operator+(const ResidueElement& a, const ResidueElement& b);
  friend ResidueElement operator-(const ResidueElement& a, const ResidueElement& b);
  friend ResidueElement operator*(const ResidueElement& a, const ResidueElement& b);
  ResidueElement operator-() const;
  ResidueElement pow(long exponent) const;
  friend bool operator==(const ResidueElement& a, const ResidueElement& b);
  friend bool operator!=(const ResidueElement& a, const ResidueElement& b) { return !(a == b); }

  std::string str() const;

 private:
  FieldTower tower_;
  std::vector<long> c_;
};

// Element of the tower, stored reduced modulo both defining polynomials.
class FieldElement {
 public:
  FieldElement() = default;
  static FieldElement zero(const FieldTower& tower);
  static FieldElement one(const FieldTower& tower);
  static FieldElement from_integer(const FieldTower& tower, const mpz_class& value);
  static FieldElement from_integer(const FieldTower& tower, long value);
  static FieldElement scalar(const FieldTower& tower, const PadicNumber& value);
  // pi: the class of X for m >= 1 (zeta_{p^m} - 1), the prime p for m = 0.
  static FieldElement uniformizer(const FieldTower& tower);
  // zeta_{p^m} = 1 + class of X; requires m >= 1.
  static FieldElement zeta(const FieldTower& tower);
  // y; requires f >= 2.
  static FieldElement unramified_generator(const FieldTower& tower);
  static FieldElement from_coeffs(const FieldTower& tower, std::vector<PadicNumber> coeffs);

  const FieldTower& tower() const { return tower_; }
  bool valid() const { return tower_.valid(); }
  bool is_zero() const;
  // All coordinates above the constant one vanish.
  bool is_scalar() const;
  const PadicNumber& coeff(int i, int j) const;
  const std::vector<PadicNumber>& coeffs() const { return c_; }

  friend FieldElement operator+(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator-(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator*(const FieldElement& a, const FieldElement& b);
  friend FieldElement operator/(const FieldElement& a, const FieldElement& b);
  FieldElement operator-() const;
  FieldElement inverse() const;
  FieldElement pow(long exponent) const;

  // Exact valuation min_i (v_p(c_i) + i/e); +infinity for zero.
  ExactRational valuation() const;
  // e * valuation as an integer; throws on zero.
  long pi_valuation() const;
  // Reduction modulo the maximal ideal; requires valuation >= 0.
  ResidueElement residue() const;
  // Determinant of multiplication-by-x on the Q_p-basis {y^a pi^b}.
  PadicNumber norm() const;

  friend bool operator==(const FieldElement& a, const FieldElement& b);
  friend bool operator!=(const FieldElement& a, const FieldElement& b) { return !(a == b); }

  std::string str() const;

 private:
  FieldTower tower_;
  std::vector<PadicNumber> c_;  // size e*f, index i*f + j for pi^i y^j
};

// v(a - b) >= digits, with digits defaulting to the context precision. Strict
// operator== compares stored representatives; this is the right comparison
// for outputs of iterative lifts.
bool equal_at_precision(const FieldElement& a, const FieldElement& b, int digits = -1);

// Galois generator of the ramified step for m = 1: zeta_p -> zeta_p^k with k
// the tower's stored primitive root. Identity on the unramified step.
FieldElement sigma_k(const FieldElement& x);

// General ramified-step automorphism zeta_{p^m} -> zeta_{p^m}^t for t coprime
// to p; requires m >= 1.
FieldElement cyclotomic_galois(const FieldElement& x, long t);

// Generator of the unramified Galois step: lifts ybar -> ybar^p, fixes pi.
FieldElement frobenius(const FieldElement& x);

// Teichmuller lift: the (p^f - 1)-th root of unity reducing to r (0 for 0).
FieldElement teich_lift(const FieldTower& tower, const ResidueElement& r);

// Newton lift of a simple residue root of a monic-free polynomial with
// integral coefficients given over the tower. Distinguishes a missing residue
// root from a non-simple one.
FieldElement hensel_root(const std::vector<FieldElement>& poly, const ResidueElement& start);

}  // namespace qpadic
