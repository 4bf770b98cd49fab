#include "qpadic/padic.hpp"

#include <algorithm>

namespace qpadic {

bool is_prime(long n) {
  if (n < 2) return false;
  for (long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

PadicContext::PadicContext(long p, int precision) {
  if (!is_prime(p)) raise(errc::not_prime, "p = " + std::to_string(p) + " is not prime");
  if (precision < 1) raise(errc::bad_argument, "precision must be >= 1");
  auto d = std::make_shared<Data>();
  d->p = p;
  d->precision = precision;
  d->pow_cache.resize(precision + 1);
  d->pow_cache[0] = 1;
  for (int k = 1; k <= precision; ++k) d->pow_cache[k] = d->pow_cache[k - 1] * p;
  d_ = std::move(d);
}

mpz_class PadicContext::pow(long k) const {
  if (k < 0) raise(errc::bad_argument, "negative power of p requested");
  if (k <= d_->precision) return d_->pow_cache[static_cast<size_t>(k)];
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(d_->p), static_cast<unsigned long>(k));
  return r;
}

void PadicNumber::require_same_context(const PadicNumber& o) const {
  if (!ctx_.compatible(o.ctx_))
    raise(errc::context_mismatch, "operands belong to different p-adic contexts");
}

PadicNumber PadicNumber::zero(const PadicContext& ctx) {
  PadicNumber n;
  n.ctx_ = ctx;
  return n;
}

PadicNumber PadicNumber::one(const PadicContext& ctx) {
  return from_unit(ctx, 0, 1, ctx.precision());
}

PadicNumber PadicNumber::from_unit(const PadicContext& ctx, long val, const mpz_class& mantissa,
                                   int known) {
  known = std::min(known, ctx.precision());
  if (known < 1) raise(errc::precision_exhausted, "unit with no guaranteed digits");
  PadicNumber n;
  n.ctx_ = ctx;
  n.zero_ = false;
  n.val_ = val;
  n.known_ = known;
  mpz_mod(n.mant_.get_mpz_t(), mantissa.get_mpz_t(), ctx.pow(known).get_mpz_t());
  if (mpz_divisible_ui_p(n.mant_.get_mpz_t(), static_cast<unsigned long>(ctx.prime())))
    raise(errc::bad_argument, "mantissa is not a unit");
  return n;
}

// Normalize p^val * raw where raw is known modulo p^window.
PadicNumber PadicNumber::make(const PadicContext& ctx, long val, const mpz_class& raw,
                              int window) {
  mpz_class r;
  mpz_mod(r.get_mpz_t(), raw.get_mpz_t(), ctx.pow(window).get_mpz_t());
  if (r == 0) return zero(ctx);
  mpz_class unit;
  long t = static_cast<long>(
      mpz_remove(unit.get_mpz_t(), r.get_mpz_t(), mpz_class(ctx.prime()).get_mpz_t()));
  return from_unit(ctx, val + t, unit, static_cast<int>(window - t));
}

PadicNumber PadicNumber::from_representative(const PadicContext& ctx, const mpz_class& value,
                                             int window) {
  return make(ctx, 0, value, window);
}

PadicNumber PadicNumber::from_integer(const PadicContext& ctx, const mpz_class& value) {
  if (value == 0) return zero(ctx);
  mpz_class unit;
  long t = static_cast<long>(
      mpz_remove(unit.get_mpz_t(), value.get_mpz_t(), mpz_class(ctx.prime()).get_mpz_t()));
  return from_unit(ctx, t, unit, ctx.precision());
}

PadicNumber PadicNumber::from_integer(const PadicContext& ctx, long value) {
  return from_integer(ctx, mpz_class(value));
}

long PadicNumber::shift() const {
  if (zero_) raise(errc::bad_argument, "zero has no valuation shift");
  return val_;
}

const mpz_class& PadicNumber::mantissa() const {
  if (zero_) raise(errc::bad_argument, "zero has no mantissa");
  return mant_;
}

int PadicNumber::known_digits() const {
  if (zero_) return ctx_.precision();
  return known_;
}

ExactRational PadicNumber::valuation() const {
  if (zero_) return ExactRational::infinity();
  return ExactRational(val_);
}

PadicNumber PadicNumber::operator-() const {
  if (zero_) return *this;
  return from_unit(ctx_, val_, ctx_.pow(known_) - mant_, known_);
}

PadicNumber operator+(const PadicNumber& a, const PadicNumber& b) {
  a.require_same_context(b);
  if (a.zero_) return b;
  if (b.zero_) return a;
  long v = std::min(a.val_, b.val_);
  // Absolute exactness of each operand, and of the sum.
  long abs_prec = std::min(a.val_ + a.known_, b.val_ + b.known_);
  int window = static_cast<int>(abs_prec - v);
  mpz_class s = a.mant_ * a.ctx_.pow(a.val_ - v) + b.mant_ * b.ctx_.pow(b.val_ - v);
  return PadicNumber::make(a.ctx_, v, s, window);
}

PadicNumber operator-(const PadicNumber& a, const PadicNumber& b) { return a + (-b); }

PadicNumber operator*(const PadicNumber& a, const PadicNumber& b) {
  a.require_same_context(b);
  if (a.zero_ || b.zero_) return PadicNumber::zero(a.ctx_);
  int known = std::min(a.known_, b.known_);
  return PadicNumber::from_unit(a.ctx_, a.val_ + b.val_, a.mant_ * b.mant_, known);
}

PadicNumber PadicNumber::inverse() const {
  if (zero_) raise(errc::division_by_zero, "inversion of zero");
  mpz_class inv;
  mpz_class mod = ctx_.pow(known_);
  if (!mpz_invert(inv.get_mpz_t(), mant_.get_mpz_t(), mod.get_mpz_t()))
    raise(errc::division_by_zero, "mantissa not invertible");
  return from_unit(ctx_, -val_, inv, known_);
}

PadicNumber operator/(const PadicNumber& a, const PadicNumber& b) { return a * b.inverse(); }

PadicNumber PadicNumber::pow(long exponent) const {
  if (exponent < 0) return inverse().pow(-exponent);
  PadicNumber acc = one(ctx_);
  if (zero_) return exponent == 0 ? acc : *this;
  PadicNumber base = *this;
  unsigned long e = static_cast<unsigned long>(exponent);
  while (e > 0) {
    if (e & 1) acc = acc * base;
    base = base * base;
    e >>= 1;
  }
  return acc;
}

bool operator==(const PadicNumber& a, const PadicNumber& b) {
  a.require_same_context(b);
  if (a.zero_ || b.zero_) return a.zero_ == b.zero_;
  if (a.val_ != b.val_) return false;
  int digits = std::min(a.known_, b.known_);
  return a.mantissa_mod(digits) == b.mantissa_mod(digits);
}

mpz_class PadicNumber::mantissa_mod(int digits) const {
  if (zero_) return 0;
  mpz_class r;
  mpz_mod(r.get_mpz_t(), mant_.get_mpz_t(), ctx_.pow(digits).get_mpz_t());
  return r;
}

mpz_class PadicNumber::representative_mod(int digits) const {
  if (zero_) return 0;
  if (val_ < 0) raise(errc::negative_valuation, "no integer representative");
  if (val_ >= digits) return 0;
  mpz_class r = mant_ * ctx_.pow(val_);
  mpz_mod(r.get_mpz_t(), r.get_mpz_t(), ctx_.pow(digits).get_mpz_t());
  return r;
}

long PadicNumber::residue_index() const {
  if (zero_) return 0;
  if (val_ < 0) raise(errc::negative_valuation, "residue of a non-integral element");
  if (val_ > 0) return 0;
  mpz_class r;
  mpz_mod_ui(r.get_mpz_t(), mant_.get_mpz_t(), static_cast<unsigned long>(ctx_.prime()));
  return r.get_si();
}

std::string PadicNumber::str() const {
  if (zero_) return "0";
  // Balanced representative of the mantissa keeps small negatives readable.
  mpz_class mod = ctx_.pow(known_);
  mpz_class bal = mant_;
  if (bal * 2 > mod) bal -= mod;
  std::string m = bal.get_str();
  if (val_ == 0) return m;
  std::string ppow = std::to_string(ctx_.prime()) + (val_ == 1 || val_ == -1 ? "" : "^" + std::to_string(std::labs(val_)));
  if (m == "1") return val_ > 0 ? ppow : "1/" + ppow;
  if (m == "-1") return val_ > 0 ? "-" + ppow : "-1/" + ppow;
  return val_ > 0 ? m + "*" + ppow : m + "/" + ppow;
}

IntPolynomial IntPolynomial::from_longs(const std::vector<long>& c) {
  IntPolynomial f;
  f.coeffs.reserve(c.size());
  for (long x : c) f.coeffs.emplace_back(x);
  return f;
}

int IntPolynomial::degree() const {
  for (int i = static_cast<int>(coeffs.size()) - 1; i >= 0; --i)
    if (coeffs[static_cast<size_t>(i)] != 0) return i;
  return -1;
}

mpz_class IntPolynomial::eval_mod(const mpz_class& x, const mpz_class& mod) const {
  mpz_class acc = 0;
  for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) {
    acc = acc * x + *it;
    mpz_mod(acc.get_mpz_t(), acc.get_mpz_t(), mod.get_mpz_t());
  }
  return acc;
}

IntPolynomial IntPolynomial::derivative() const {
  IntPolynomial d;
  for (size_t i = 1; i < coeffs.size(); ++i) d.coeffs.push_back(coeffs[i] * static_cast<long>(i));
  return d;
}

std::string IntPolynomial::str() const {
  std::string s;
  for (int i = degree(); i >= 0; --i) {
    const mpz_class& c = coeffs[static_cast<size_t>(i)];
    if (c == 0) continue;
    if (!s.empty()) s += c > 0 ? " + " : " - ";
    else if (c < 0) s += "-";
    mpz_class a = abs(c);
    if (a != 1 || i == 0) s += a.get_str();
    if (i > 0) {
      if (a != 1) s += "*";
      s += "X";
      if (i > 1) s += "^" + std::to_string(i);
    }
  }
  return s.empty() ? "0" : s;
}

PadicNumber hensel_lift(const IntPolynomial& f, long residue_root, const PadicContext& ctx) {
  long p = ctx.prime();
  mpz_class pz(p);
  mpz_class r0(((residue_root % p) + p) % p);
  if (f.eval_mod(r0, pz) != 0)
    raise(errc::no_residue_root, "not a residue root of the polynomial");
  IntPolynomial df = f.derivative();
  if (df.eval_mod(r0, pz) == 0)
    raise(errc::non_simple_root, "residue root is not simple");

  int target = ctx.precision();
  int prec = 1;
  mpz_class r = r0;
  while (prec < target) {
    prec = std::min(2 * prec, target);
    mpz_class mod = ctx.pow(prec);
    mpz_class fr = f.eval_mod(r, mod);
    mpz_class dfr = df.eval_mod(r, mod);
    mpz_class inv;
    mpz_invert(inv.get_mpz_t(), dfr.get_mpz_t(), mod.get_mpz_t());
    r = r - fr * inv;
    mpz_mod(r.get_mpz_t(), r.get_mpz_t(), mod.get_mpz_t());
  }
  // Postcondition of the lift, checked on every call.
  if (f.eval_mod(r, ctx.pow(target)) != 0)
    raise(errc::bad_argument, "newton iteration failed to converge");
  if (r == 0) return PadicNumber::zero(ctx);
  return PadicNumber::from_integer(ctx, r);
}

PadicNumber teichmuller(const PadicContext& ctx, long residue) {
  long p = ctx.prime();
  if (residue < 0 || residue >= p)
    raise(errc::bad_argument, "residue out of range [0, p)");
  if (residue == 0) return PadicNumber::zero(ctx);
  if (residue == 1 || p == 2) return PadicNumber::one(ctx);
  std::vector<mpz_class> c(static_cast<size_t>(p), 0);
  c[0] = -1;
  c[static_cast<size_t>(p - 1)] = 1;  // X^{p-1} - 1
  return hensel_lift(IntPolynomial(std::move(c)), residue, ctx);
}

}  // namespace qpadic
