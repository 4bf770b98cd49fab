#pragma once

#include <gmpxx.h>

#include <memory>
#include <string>
#include <vector>

#include "qpadic/errors.hpp"
#include "qpadic/rational.hpp"

namespace qpadic {

inline constexpr int kDefaultPrecision = 64;

// A fixed-precision model of Z_p / Q_p: the context pins the prime p and the
// number N of base-p digits retained for unit mantissas. Contexts are
// immutable; numbers hold a cheap shared handle.
class PadicContext {
 public:
  PadicContext() = default;
  explicit PadicContext(long p, int precision = kDefaultPrecision);

  long prime() const { return d_->p; }
  int precision() const { return d_->precision; }
  // p^k for k >= 0.
  mpz_class pow(long k) const;
  bool compatible(const PadicContext& o) const {
    return d_->p == o.d_->p && d_->precision == o.d_->precision;
  }
  bool valid() const { return d_ != nullptr; }

 private:
  struct Data {
    long p = 0;
    int precision = 0;
    std::vector<mpz_class> pow_cache;  // p^0 .. p^precision
  };
  std::shared_ptr<const Data> d_;
};

// Element of Q_p at context precision: either the zero sentinel, or
// p^val * mantissa with the mantissa a unit stored reduced mod p^known.
// `known` is the number of guaranteed base-p mantissa digits; it saturates at
// the context precision and degrades only through cancellation in sums.
class PadicNumber {
 public:
  PadicNumber() = default;

  static PadicNumber zero(const PadicContext& ctx);
  static PadicNumber one(const PadicContext& ctx);
  static PadicNumber from_integer(const PadicContext& ctx, const mpz_class& value);
  static PadicNumber from_integer(const PadicContext& ctx, long value);
  // p^val * mantissa, mantissa a unit (reduced internally).
  static PadicNumber from_unit(const PadicContext& ctx, long val, const mpz_class& mantissa,
                               int known);
  // Normalizes a representative known modulo p^window.
  static PadicNumber from_representative(const PadicContext& ctx, const mpz_class& value,
                                         int window);

  const PadicContext& context() const { return ctx_; }
  bool is_zero() const { return zero_; }
  // Valuation shift of a nonzero number.
  long shift() const;
  const mpz_class& mantissa() const;
  int known_digits() const;
  ExactRational valuation() const;

  PadicNumber operator-() const;
  friend PadicNumber operator+(const PadicNumber& a, const PadicNumber& b);
  friend PadicNumber operator-(const PadicNumber& a, const PadicNumber& b);
  friend PadicNumber operator*(const PadicNumber& a, const PadicNumber& b);
  friend PadicNumber operator/(const PadicNumber& a, const PadicNumber& b);
  PadicNumber inverse() const;
  PadicNumber pow(long exponent) const;

  // Representatives agree on all digits both sides guarantee.
  friend bool operator==(const PadicNumber& a, const PadicNumber& b);
  friend bool operator!=(const PadicNumber& a, const PadicNumber& b) { return !(a == b); }

  // Mantissa reduced mod p^digits.
  mpz_class mantissa_mod(int digits) const;
  // Integer representative mod p^digits; requires shift >= 0.
  mpz_class representative_mod(int digits) const;
  // Residue in {0..p-1}; requires valuation >= 0.
  long residue_index() const;

  std::string str() const;

 private:
  PadicContext ctx_;
  bool zero_ = true;
  long val_ = 0;
  mpz_class mant_;
  int known_ = 0;

  static PadicNumber make(const PadicContext& ctx, long val, const mpz_class& raw, int window);
  void require_same_context(const PadicNumber& o) const;
};

// Dense integer-coefficient polynomial, used as hensel-lift input.
struct IntPolynomial {
  std::vector<mpz_class> coeffs;  // coeffs[i] * X^i

  IntPolynomial() = default;
  explicit IntPolynomial(std::vector<mpz_class> c) : coeffs(std::move(c)) {}
  static IntPolynomial from_longs(const std::vector<long>& c);

  int degree() const;
  mpz_class eval_mod(const mpz_class& x, const mpz_class& mod) const;
  IntPolynomial derivative() const;
  std::string str() const;
};

// The unique (p-1)-th root of unity congruent to `residue` mod p (0 for 0).
PadicNumber teichmuller(const PadicContext& ctx, long residue);

// Lift of a simple residue root of f to a root mod p^N by Newton iteration.
// Reports a missing residue root and a non-simple root as distinct errors.
PadicNumber hensel_lift(const IntPolynomial& f, long residue_root, const PadicContext& ctx);

bool is_prime(long n);

}  // namespace qpadic
