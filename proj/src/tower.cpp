#include "qpadic/tower.hpp"

#include <algorithm>
#include <cstdlib>

namespace qpadic {

namespace {

// --- dense polynomial helpers over F_p (coefficient vectors, low first) ---

void fp_trim(std::vector<long>& a) {
  while (a.size() > 1 && a.back() == 0) a.pop_back();
}

std::vector<long> fp_mulmod(const std::vector<long>& a, const std::vector<long>& b,
                            const std::vector<long>& g, long p) {
  std::vector<long> r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  size_t dg = g.size() - 1;  // g monic
  for (size_t d = r.size(); d-- > dg;) {
    long lead = r[d] % p;
    if (lead == 0) continue;
    for (size_t i = 0; i < dg; ++i) r[d - dg + i] = ((r[d - dg + i] - lead * g[i]) % p + p) % p;
    r[d] = 0;
  }
  r.resize(dg);
  for (auto& c : r) c = (c % p + p) % p;
  fp_trim(r);
  return r;
}

std::vector<long> fp_powmod(std::vector<long> base, long e, const std::vector<long>& g, long p) {
  std::vector<long> acc = {1};
  while (e > 0) {
    if (e & 1) acc = fp_mulmod(acc, base, g, p);
    base = fp_mulmod(base, base, g, p);
    e >>= 1;
  }
  return acc;
}

std::vector<long> fp_gcd(std::vector<long> a, std::vector<long> b, long p) {
  fp_trim(a);
  fp_trim(b);
  while (!(b.size() == 1 && b[0] == 0)) {
    long lead = b.back(), inv = 1;
    for (long x = 1; x < p; ++x)
      if (lead * x % p == 1) inv = x;
    for (auto& c : b) c = c * inv % p;
    while (!(a.size() == 1 && a[0] == 0) && a.size() >= b.size()) {
      long l = a.back() % p;
      size_t shift = a.size() - b.size();
      for (size_t i = 0; i < b.size(); ++i)
        a[i + shift] = ((a[i + shift] - l * b[i]) % p + p) % p;
      fp_trim(a);
    }
    std::swap(a, b);
  }
  return a;
}

bool fp_irreducible(const std::vector<long>& g, long p) {
  long f = static_cast<long>(g.size()) - 1;
  if (f == 1) return true;
  // Rabin: X^{p^f} = X mod g, and gcd(X^{p^{f/q}} - X, g) = 1 for primes q | f.
  std::vector<std::vector<long>> frob;
  frob.push_back({0, 1});
  for (long i = 1; i <= f; ++i) frob.push_back(fp_powmod(frob.back(), p, g, p));
  const std::vector<long>& top = frob[static_cast<size_t>(f)];
  if (!(top.size() == 2 && top[0] == 0 && top[1] == 1)) return false;
  for (long q = 2; q <= f; ++q) {
    if (f % q != 0) continue;
    bool qprime = true;
    for (long d = 2; d * d <= q; ++d)
      if (q % d == 0) qprime = false;
    if (!qprime) continue;
    std::vector<long> diff = frob[static_cast<size_t>(f / q)];
    if (diff.size() < 2) diff.resize(2, 0);
    diff[1] = ((diff[1] - 1) % p + p) % p;
    std::vector<long> d = fp_gcd(diff, g, p);
    if (!(d.size() == 1 && d[0] != 0)) return false;
  }
  return true;
}

std::vector<mpz_class> zpoly_mul(const std::vector<mpz_class>& a,
                                 const std::vector<mpz_class>& b) {
  std::vector<mpz_class> r(a.size() + b.size() - 1, mpz_class(0));
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  return r;
}

std::vector<std::vector<mpz_class>> reduction_rows(const IntPolynomial& g, int deg,
                                                   const mpz_class& mod) {
  // rows[s] = coefficients of X^{deg+s} reduced mod the monic g, s = 0..deg-2.
  // Entries otherwise grow multiplicatively in s; every consumer works inside
  // a window well below `mod`, so reducing keeps them bounded.
  std::vector<std::vector<mpz_class>> rows;
  if (deg < 2) return rows;
  std::vector<mpz_class> row(static_cast<size_t>(deg));
  for (int i = 0; i < deg; ++i) row[static_cast<size_t>(i)] = -g.coeffs[static_cast<size_t>(i)];
  rows.push_back(row);
  for (int s = 1; s <= deg - 2; ++s) {
    const std::vector<mpz_class>& prev = rows.back();
    std::vector<mpz_class> next(static_cast<size_t>(deg), mpz_class(0));
    mpz_class top = prev[static_cast<size_t>(deg - 1)];
    for (int i = deg - 1; i >= 1; --i)
      next[static_cast<size_t>(i)] = prev[static_cast<size_t>(i - 1)];
    for (int i = 0; i < deg; ++i) {
      mpz_class& c = next[static_cast<size_t>(i)];
      c += top * rows[0][static_cast<size_t>(i)];
      mpz_mod(c.get_mpz_t(), c.get_mpz_t(), mod.get_mpz_t());
      if (c * 2 > mod) c -= mod;  // balanced representative stays small
    }
    rows.push_back(std::move(next));
  }
  return rows;
}

FieldElement teich_lift_impl(const FieldTower& t, const ResidueElement& r);

}  // namespace

// ----------------------------------------------------------------- FieldTower

struct FieldTower::Data {
  PadicContext ctx;
  int f = 1;
  int m = 0;
  int e = 1;
  int n = 1;
  IntPolynomial unram;
  IntPolynomial eisenstein;
  long prim_root = 1;
  std::vector<std::vector<mpz_class>> xrows;
  std::vector<std::vector<mpz_class>> yrows;
  std::vector<std::vector<long>> rrows;
  std::vector<std::vector<PadicNumber>> teich;
  std::vector<std::vector<PadicNumber>> frobpow;
  std::vector<PadicNumber> pi_inv;
  std::vector<std::vector<std::vector<PadicNumber>>> unit_inv;  // [i-1][ridx]
};

FieldTower FieldTower::make(const PadicContext& ctx, int inertia_degree, int cyclo_exponent) {
  if (!ctx.valid()) raise(errc::bad_argument, "invalid context");
  if (inertia_degree < 1) raise(errc::bad_argument, "inertia degree must be >= 1");
  if (cyclo_exponent < 0) raise(errc::bad_argument, "cyclotomic exponent must be >= 0");
  long p = ctx.prime();

  auto d = std::make_shared<Data>();
  d->ctx = ctx;
  d->f = inertia_degree;
  d->m = cyclo_exponent;

  // Unramified step: lexicographically smallest monic irreducible over F_p,
  // coefficient tuples (c_0,...,c_{f-1}) compared with c_0 most significant.
  if (d->f == 1) {
    d->unram = IntPolynomial::from_longs({0, 1});
  } else {
    long count = 1;
    for (int i = 0; i < d->f; ++i) count *= p;
    bool found = false;
    for (long idx = 0; idx < count && !found; ++idx) {
      std::vector<long> cand(static_cast<size_t>(d->f + 1), 0);
      long t = idx;
      for (int i = d->f - 1; i >= 0; --i) {
        cand[static_cast<size_t>(i)] = t % p;
        t /= p;
      }
      cand[static_cast<size_t>(d->f)] = 1;
      if (fp_irreducible(cand, p)) {
        d->unram = IntPolynomial::from_longs(cand);
        found = true;
      }
    }
    if (!found) raise(errc::bad_argument, "no irreducible polynomial found");
  }

  // Ramified step: Phi_{p^m}(1+X) = sum_{i<p} (1+X)^{i p^{m-1}}, Eisenstein
  // of degree e = p^{m-1}(p-1) with constant term p.
  if (d->m >= 1) {
    long pm1 = 1;
    for (int i = 1; i < d->m; ++i) pm1 *= p;
    std::vector<mpz_class> base(static_cast<size_t>(pm1 + 1));
    for (long i = 0; i <= pm1; ++i)
      mpz_bin_uiui(base[static_cast<size_t>(i)].get_mpz_t(), static_cast<unsigned long>(pm1),
                   static_cast<unsigned long>(i));
    std::vector<mpz_class> sum = {mpz_class(1)};
    std::vector<mpz_class> acc = {mpz_class(1)};
    for (long i = 1; i < p; ++i) {
      acc = zpoly_mul(acc, base);
      if (sum.size() < acc.size()) sum.resize(acc.size(), mpz_class(0));
      for (size_t j = 0; j < acc.size(); ++j) sum[j] += acc[j];
    }
    d->eisenstein = IntPolynomial(std::move(sum));
    d->e = d->eisenstein.degree();
    if (d->eisenstein.coeffs[0] != p) raise(errc::bad_argument, "bad cyclotomic constant term");
    for (int i = 1; i < d->e; ++i)
      if (d->eisenstein.coeffs[static_cast<size_t>(i)] % p != 0)
        raise(errc::bad_argument, "cyclotomic polynomial is not Eisenstein");
  }
  d->n = d->e * d->f;

  if (p > 2) {
    for (long k = 2; k < p; ++k) {
      long ord = 1, acc = k;
      while (acc != 1) {
        acc = acc * k % p;
        ++ord;
      }
      if (ord == p - 1) {
        d->prim_root = k;
        break;
      }
    }
  }

  mpz_class row_mod = ctx.pow(2 * ctx.precision());
  if (d->m >= 1) d->xrows = reduction_rows(d->eisenstein, d->e, row_mod);
  d->yrows = reduction_rows(d->unram, d->f, row_mod);
  for (const auto& row : d->yrows) {
    std::vector<long> rr;
    for (const auto& c : row) {
      mpz_class v = c % p;
      if (v < 0) v += p;
      rr.push_back(v.get_si());
    }
    d->rrows.push_back(std::move(rr));
  }

  FieldTower t;
  t.d_ = d;

  // Frobenius image of y: conjugate root of the unramified polynomial with
  // residue ybar^p, together with its powers.
  if (d->f >= 2) {
    std::vector<FieldElement> gpoly;
    for (const auto& c : d->unram.coeffs) gpoly.push_back(FieldElement::from_integer(t, c));
    std::vector<long> yv(static_cast<size_t>(d->f), 0);
    yv[1] = 1;
    FieldElement Y = hensel_root(gpoly, ResidueElement(t, yv).pow(p));
    FieldElement acc = FieldElement::one(t);
    for (int j = 0; j < d->f; ++j) {
      d->frobpow.push_back(acc.coeffs());
      if (j + 1 < d->f) acc = acc * Y;
    }
  }

  // Teichmuller digit table for small residue fields.
  long q = 1;
  for (int i = 0; i < d->f; ++i) q *= p;
  if (q <= 512) {
    for (long idx = 0; idx < q; ++idx)
      d->teich.push_back(teich_lift_impl(t, ResidueElement::from_index(t, idx)).coeffs());
  }

  d->pi_inv = FieldElement::uniformizer(t).inverse().coeffs();

  // Inverses of the filtration generators 1 + w(r) pi^i, used heavily by the
  // digit decompositions.
  if (t.contains_zeta_p() && d->n <= 8 && q <= 32) {
    int cap = static_cast<int>(d->e * p / (p - 1)) + 1;
    FieldElement pipow = FieldElement::uniformizer(t);
    for (int i = 1; i <= cap; ++i) {
      std::vector<std::vector<PadicNumber>> level;
      for (long idx = 0; idx < q; ++idx) {
        FieldElement gen = FieldElement::one(t) +
                           teich_lift(t, ResidueElement::from_index(t, idx)) * pipow;
        level.push_back(gen.inverse().coeffs());
      }
      d->unit_inv.push_back(std::move(level));
      pipow = pipow * FieldElement::uniformizer(t);
    }
  }
  return t;
}

const PadicContext& FieldTower::context() const { return d_->ctx; }
long FieldTower::prime() const { return d_->ctx.prime(); }
int FieldTower::precision() const { return d_->ctx.precision(); }
int FieldTower::inertia_degree() const { return d_->f; }
int FieldTower::cyclo_exponent() const { return d_->m; }
int FieldTower::ramification_index() const { return d_->e; }
int FieldTower::degree() const { return d_->n; }
const IntPolynomial& FieldTower::unramified_poly() const { return d_->unram; }
const IntPolynomial& FieldTower::eisenstein_poly() const {
  if (d_->m < 1) raise(errc::wrong_tower, "tower has no ramified step");
  return d_->eisenstein;
}
long FieldTower::primitive_root() const { return d_->prim_root; }
bool FieldTower::contains_zeta_p() const { return d_->m >= 1 || prime() == 2; }
bool FieldTower::compatible(const FieldTower& o) const {
  return d_ == o.d_ || (d_ && o.d_ && d_->ctx.compatible(o.d_->ctx) && d_->f == o.d_->f &&
                        d_->m == o.d_->m);
}
const std::vector<std::vector<mpz_class>>& FieldTower::pi_reduction_rows() const {
  return d_->xrows;
}
const std::vector<std::vector<mpz_class>>& FieldTower::y_reduction_rows() const {
  return d_->yrows;
}
const std::vector<std::vector<long>>& FieldTower::residue_reduction_rows() const {
  return d_->rrows;
}
const std::vector<std::vector<PadicNumber>>& FieldTower::teich_cache() const { return d_->teich; }
const std::vector<std::vector<PadicNumber>>& FieldTower::frobenius_powers() const {
  return d_->frobpow;
}
const std::vector<PadicNumber>& FieldTower::uniformizer_inverse_coeffs() const {
  return d_->pi_inv;
}
const std::vector<PadicNumber>* FieldTower::unit_generator_inverse(int i,
                                                                   long residue_index) const {
  if (i < 1 || i > static_cast<int>(d_->unit_inv.size())) return nullptr;
  const auto& level = d_->unit_inv[static_cast<size_t>(i - 1)];
  if (residue_index < 0 || residue_index >= static_cast<long>(level.size())) return nullptr;
  return &level[static_cast<size_t>(residue_index)];
}

std::string FieldTower::str() const {
  std::string s = "Q" + std::to_string(prime());
  std::vector<std::string> gens;
  if (d_->f > 1) {
    long q = 1;
    for (int i = 0; i < d_->f; ++i) q *= prime();
    gens.push_back("zeta_" + std::to_string(q - 1));
  }
  if (d_->m >= 1) gens.push_back("zeta_p^" + std::to_string(d_->m));
  if (!gens.empty()) {
    s += "(";
    for (size_t i = 0; i < gens.size(); ++i) s += (i ? "," : "") + gens[i];
    s += ")";
  }
  return s;
}

// ------------------------------------------------------------- ResidueElement

ResidueElement::ResidueElement(const FieldTower& tower, std::vector<long> coeffs)
    : tower_(tower), c_(std::move(coeffs)) {
  long p = tower_.prime();
  c_.resize(static_cast<size_t>(tower_.inertia_degree()), 0);
  for (auto& x : c_) x = (x % p + p) % p;
}

ResidueElement ResidueElement::zero(const FieldTower& tower) { return {tower, {}}; }
ResidueElement ResidueElement::one(const FieldTower& tower) { return {tower, {1}}; }
ResidueElement ResidueElement::from_scalar(const FieldTower& tower, long value) {
  return {tower, {value}};
}

ResidueElement ResidueElement::from_index(const FieldTower& tower, long index) {
  if (index < 0) raise(errc::bad_argument, "negative residue index");
  long p = tower.prime();
  std::vector<long> c;
  for (int j = 0; j < tower.inertia_degree(); ++j) {
    c.push_back(index % p);
    index /= p;
  }
  if (index != 0) raise(errc::bad_argument, "residue index out of range");
  return {tower, std::move(c)};
}

long ResidueElement::index() const {
  long p = tower_.prime(), idx = 0, mul = 1;
  for (long x : c_) {
    idx += x * mul;
    mul *= p;
  }
  return idx;
}

bool ResidueElement::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](long x) { return x == 0; });
}

long ResidueElement::scalar() const {
  if (tower_.inertia_degree() != 1) raise(errc::bad_argument, "not a prime residue field");
  return c_[0];
}

ResidueElement operator+(const ResidueElement& a, const ResidueElement& b) {
  std::vector<long> c(a.c_.size());
  for (size_t i = 0; i < c.size(); ++i) c[i] = a.c_[i] + b.c_[i];
  return {a.tower_, std::move(c)};
}

ResidueElement operator-(const ResidueElement& a, const ResidueElement& b) {
  std::vector<long> c(a.c_.size());
  for (size_t i = 0; i < c.size(); ++i) c[i] = a.c_[i] - b.c_[i];
  return {a.tower_, std::move(c)};
}

ResidueElement ResidueElement::operator-() const {
  std::vector<long> c(c_.size());
  for (size_t i = 0; i < c.size(); ++i) c[i] = -c_[i];
  return {tower_, std::move(c)};
}

ResidueElement operator*(const ResidueElement& a, const ResidueElement& b) {
  long p = a.tower_.prime();
  int f = a.tower_.inertia_degree();
  std::vector<long> r(static_cast<size_t>(2 * f - 1), 0);
  for (int i = 0; i < f; ++i)
    for (int j = 0; j < f; ++j)
      r[static_cast<size_t>(i + j)] =
          (r[static_cast<size_t>(i + j)] +
           a.c_[static_cast<size_t>(i)] * b.c_[static_cast<size_t>(j)]) %
          p;
  const auto& rows = a.tower_.residue_reduction_rows();
  for (int d = 2 * f - 2; d >= f; --d) {
    long lead = r[static_cast<size_t>(d)];
    if (lead == 0) continue;
    const auto& row = rows[static_cast<size_t>(d - f)];
    for (int i = 0; i < f; ++i)
      r[static_cast<size_t>(i)] =
          (r[static_cast<size_t>(i)] + lead * row[static_cast<size_t>(i)]) % p;
  }
  r.resize(static_cast<size_t>(f));
  return {a.tower_, std::move(r)};
}

ResidueElement ResidueElement::pow(long exponent) const {
  if (exponent < 0) raise(errc::bad_argument, "negative residue exponent");
  ResidueElement acc = one(tower_);
  ResidueElement base = *this;
  while (exponent > 0) {
    if (exponent & 1) acc = acc * base;
    base = base * base;
    exponent >>= 1;
  }
  return acc;
}

bool operator==(const ResidueElement& a, const ResidueElement& b) { return a.c_ == b.c_; }

std::string ResidueElement::str() const {
  if (tower_.inertia_degree() == 1) return std::to_string(c_[0]);
  std::string s = "(";
  for (size_t i = 0; i < c_.size(); ++i) s += (i ? "," : "") + std::to_string(c_[i]);
  return s + ")";
}

// -------------------------------------------------------------- FieldElement

FieldElement FieldElement::zero(const FieldTower& tower) {
  FieldElement x;
  x.tower_ = tower;
  x.c_.assign(static_cast<size_t>(tower.degree()), PadicNumber::zero(tower.context()));
  return x;
}

FieldElement FieldElement::one(const FieldTower& tower) {
  FieldElement x = zero(tower);
  x.c_[0] = PadicNumber::one(tower.context());
  return x;
}

FieldElement FieldElement::scalar(const FieldTower& tower, const PadicNumber& value) {
  FieldElement x = zero(tower);
  x.c_[0] = value;
  return x;
}

FieldElement FieldElement::from_integer(const FieldTower& tower, const mpz_class& value) {
  return scalar(tower, PadicNumber::from_integer(tower.context(), value));
}

FieldElement FieldElement::from_integer(const FieldTower& tower, long value) {
  return from_integer(tower, mpz_class(value));
}

FieldElement FieldElement::uniformizer(const FieldTower& tower) {
  if (tower.cyclo_exponent() == 0) return from_integer(tower, tower.prime());
  if (tower.ramification_index() == 1)
    return from_integer(tower, -tower.eisenstein_poly().coeffs[0]);
  FieldElement x = zero(tower);
  x.c_[static_cast<size_t>(tower.inertia_degree())] = PadicNumber::one(tower.context());
  return x;
}

FieldElement FieldElement::zeta(const FieldTower& tower) {
  if (tower.cyclo_exponent() < 1) raise(errc::wrong_tower, "tower has no ramified step");
  if (tower.ramification_index() == 1)
    return from_integer(tower, 1 - tower.eisenstein_poly().coeffs[0]);
  return one(tower) + uniformizer(tower);
}

FieldElement FieldElement::unramified_generator(const FieldTower& tower) {
  if (tower.inertia_degree() < 2) raise(errc::wrong_tower, "tower has no unramified step");
  FieldElement x = zero(tower);
  x.c_[1] = PadicNumber::one(tower.context());
  return x;
}

FieldElement FieldElement::from_coeffs(const FieldTower& tower, std::vector<PadicNumber> coeffs) {
  if (static_cast<int>(coeffs.size()) != tower.degree())
    raise(errc::bad_argument, "coefficient vector has wrong length");
  FieldElement x;
  x.tower_ = tower;
  x.c_ = std::move(coeffs);
  return x;
}

bool FieldElement::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](const PadicNumber& v) { return v.is_zero(); });
}

bool FieldElement::is_scalar() const {
  for (size_t i = 1; i < c_.size(); ++i)
    if (!c_[i].is_zero()) return false;
  return true;
}

const PadicNumber& FieldElement::coeff(int i, int j) const {
  return c_[static_cast<size_t>(i * tower_.inertia_degree() + j)];
}

static void require_compatible(const FieldElement& a, const FieldElement& b) {
  if (!a.tower().compatible(b.tower()))
    raise(errc::context_mismatch, "operands belong to different towers");
}

FieldElement operator+(const FieldElement& a, const FieldElement& b) {
  require_compatible(a, b);
  std::vector<PadicNumber> c(a.coeffs().size());
  for (size_t i = 0; i < c.size(); ++i) c[i] = a.coeffs()[i] + b.coeffs()[i];
  return FieldElement::from_coeffs(a.tower(), std::move(c));
}

FieldElement operator-(const FieldElement& a, const FieldElement& b) { return a + (-b); }

FieldElement FieldElement::operator-() const {
  std::vector<PadicNumber> c(c_.size());
  for (size_t i = 0; i < c.size(); ++i) c[i] = -c_[i];
  return from_coeffs(tower_, std::move(c));
}

static FieldElement scale_by(const FieldElement& x, const PadicNumber& c) {
  if (c.is_zero()) return FieldElement::zero(x.tower());
  std::vector<PadicNumber> out(x.coeffs().size(), PadicNumber::zero(x.tower().context()));
  for (size_t i = 0; i < out.size(); ++i)
    if (!x.coeffs()[i].is_zero()) out[i] = x.coeffs()[i] * c;
  return FieldElement::from_coeffs(x.tower(), std::move(out));
}

// Bounded-shift operands: factor out a uniform p-power per side, accumulate
// raw representatives modulo p^W with W the shared absolute-precision window,
// and normalize once at the end.
static FieldElement mul_integral(const FieldElement& a, const FieldElement& b, long sa, long sb,
                                 long W) {
  const FieldTower& t = a.tower();
  const PadicContext& ctx = t.context();
  int N = ctx.precision();
  int e = t.ramification_index(), f = t.inertia_degree();
  int we = 2 * e - 1, wf = 2 * f - 1;
  mpz_class mod = ctx.pow(W);

  int n = e * f;
  std::vector<mpz_class> av(static_cast<size_t>(n)), bv(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) {
    const PadicNumber& ca = a.coeffs()[static_cast<size_t>(i)];
    const PadicNumber& cb = b.coeffs()[static_cast<size_t>(i)];
    if (!ca.is_zero()) {
      av[static_cast<size_t>(i)] = ca.mantissa() * ctx.pow(ca.shift() + sa);
      mpz_mod(av[static_cast<size_t>(i)].get_mpz_t(), av[static_cast<size_t>(i)].get_mpz_t(),
              mod.get_mpz_t());
    }
    if (!cb.is_zero()) {
      bv[static_cast<size_t>(i)] = cb.mantissa() * ctx.pow(cb.shift() + sb);
      mpz_mod(bv[static_cast<size_t>(i)].get_mpz_t(), bv[static_cast<size_t>(i)].get_mpz_t(),
              mod.get_mpz_t());
    }
  }

  std::vector<mpz_class> acc(static_cast<size_t>(we * wf), mpz_class(0));
  for (int i1 = 0; i1 < e; ++i1)
    for (int j1 = 0; j1 < f; ++j1) {
      const mpz_class& x = av[static_cast<size_t>(i1 * f + j1)];
      if (x == 0) continue;
      for (int i2 = 0; i2 < e; ++i2)
        for (int j2 = 0; j2 < f; ++j2) {
          const mpz_class& y = bv[static_cast<size_t>(i2 * f + j2)];
          if (y == 0) continue;
          mpz_addmul(acc[static_cast<size_t>((i1 + i2) * wf + j1 + j2)].get_mpz_t(),
                     x.get_mpz_t(), y.get_mpz_t());
        }
    }
  for (auto& c : acc) mpz_mod(c.get_mpz_t(), c.get_mpz_t(), mod.get_mpz_t());

  if (f > 1) {
    const auto& rows = t.y_reduction_rows();
    for (int i = 0; i < we; ++i)
      for (int d = wf - 1; d >= f; --d) {
        mpz_class& lead = acc[static_cast<size_t>(i * wf + d)];
        if (lead == 0) continue;
        const auto& row = rows[static_cast<size_t>(d - f)];
        for (int j = 0; j < f; ++j) {
          if (row[static_cast<size_t>(j)] == 0) continue;
          mpz_addmul(acc[static_cast<size_t>(i * wf + j)].get_mpz_t(), lead.get_mpz_t(),
                     row[static_cast<size_t>(j)].get_mpz_t());
        }
        lead = 0;
      }
  }
  if (e > 1) {
    const auto& rows = t.pi_reduction_rows();
    for (int d = we - 1; d >= e; --d) {
      const auto& row = rows[static_cast<size_t>(d - e)];
      for (int j = 0; j < f; ++j) {
        mpz_class& lead = acc[static_cast<size_t>(d * wf + j)];
        if (lead == 0) continue;
        mpz_mod(lead.get_mpz_t(), lead.get_mpz_t(), mod.get_mpz_t());
        for (int i = 0; i < e; ++i) {
          if (row[static_cast<size_t>(i)] == 0) continue;
          mpz_addmul(acc[static_cast<size_t>(i * wf + j)].get_mpz_t(), lead.get_mpz_t(),
                     row[static_cast<size_t>(i)].get_mpz_t());
        }
        lead = 0;
      }
    }
  }

  std::vector<PadicNumber> c(static_cast<size_t>(n));
  for (int i = 0; i < e; ++i)
    for (int j = 0; j < f; ++j) {
      mpz_class& cell = acc[static_cast<size_t>(i * wf + j)];
      mpz_mod(cell.get_mpz_t(), cell.get_mpz_t(), mod.get_mpz_t());
      c[static_cast<size_t>(i * f + j)] =
          PadicNumber::from_representative(ctx, cell, static_cast<int>(W));
    }
  FieldElement out = FieldElement::from_coeffs(t, std::move(c));
  long s = sa + sb;
  if (s != 0) out = scale_by(out, PadicNumber::from_unit(ctx, -s, 1, N));
  return out;
}

// Eligible when shifts are bounded; reports the normalizing p-power and the
// scaled absolute-precision window of the operand.
static bool fast_shift(const FieldElement& x, long* shift, long* abs_window) {
  int N = x.tower().precision();
  long lo = 0, abs_min = N + 4 * static_cast<long>(N);
  for (const auto& c : x.coeffs()) {
    if (c.is_zero()) continue;
    if (std::labs(c.shift()) > N / 3) return false;
    lo = std::min(lo, c.shift());
    abs_min = std::min(abs_min, c.shift() + c.known_digits());
  }
  *shift = -lo;
  *abs_window = abs_min + *shift;
  return true;
}

FieldElement operator*(const FieldElement& a, const FieldElement& b) {
  require_compatible(a, b);
  if (a.is_scalar()) return scale_by(b, a.coeffs()[0]);
  if (b.is_scalar()) return scale_by(a, b.coeffs()[0]);
  long sa = 0, sb = 0, wa = 0, wb = 0;
  if (fast_shift(a, &sa, &wa) && fast_shift(b, &sb, &wb)) {
    long W = std::min(wa, wb);
    if (W >= 8) return mul_integral(a, b, sa, sb, W);
  }
  const FieldTower& t = a.tower();
  const PadicContext& ctx = t.context();
  int e = t.ramification_index(), f = t.inertia_degree();
  int we = 2 * e - 1, wf = 2 * f - 1;
  std::vector<PadicNumber> acc(static_cast<size_t>(we * wf), PadicNumber::zero(ctx));
  auto at = [&](int i, int j) -> PadicNumber& { return acc[static_cast<size_t>(i * wf + j)]; };

  for (int i1 = 0; i1 < e; ++i1)
    for (int j1 = 0; j1 < f; ++j1) {
      const PadicNumber& x = a.coeff(i1, j1);
      if (x.is_zero()) continue;
      for (int i2 = 0; i2 < e; ++i2)
        for (int j2 = 0; j2 < f; ++j2) {
          const PadicNumber& y = b.coeff(i2, j2);
          if (y.is_zero()) continue;
          at(i1 + i2, j1 + j2) = at(i1 + i2, j1 + j2) + x * y;
        }
    }

  if (f > 1) {
    const auto& rows = t.y_reduction_rows();
    for (int i = 0; i < we; ++i)
      for (int d = wf - 1; d >= f; --d) {
        PadicNumber lead = at(i, d);
        if (lead.is_zero()) continue;
        const auto& row = rows[static_cast<size_t>(d - f)];
        for (int j = 0; j < f; ++j) {
          if (row[static_cast<size_t>(j)] == 0) continue;
          at(i, j) = at(i, j) + lead * PadicNumber::from_integer(ctx, row[static_cast<size_t>(j)]);
        }
      }
  }
  if (e > 1) {
    const auto& rows = t.pi_reduction_rows();
    for (int d = we - 1; d >= e; --d) {
      const auto& row = rows[static_cast<size_t>(d - e)];
      for (int j = 0; j < f; ++j) {
        PadicNumber lead = at(d, j);
        if (lead.is_zero()) continue;
        for (int i = 0; i < e; ++i) {
          if (row[static_cast<size_t>(i)] == 0) continue;
          at(i, j) = at(i, j) + lead * PadicNumber::from_integer(ctx, row[static_cast<size_t>(i)]);
        }
      }
    }
  }

  std::vector<PadicNumber> c(static_cast<size_t>(e * f));
  for (int i = 0; i < e; ++i)
    for (int j = 0; j < f; ++j) c[static_cast<size_t>(i * f + j)] = at(i, j);
  return FieldElement::from_coeffs(t, std::move(c));
}

namespace {

// x * pi and x * y as structured shifts; used to build multiplication matrices.
FieldElement mul_by_pi(const FieldElement& x) {
  const FieldTower& t = x.tower();
  if (t.cyclo_exponent() == 0 || t.ramification_index() == 1)
    return FieldElement::uniformizer(t) * x;
  int e = t.ramification_index(), f = t.inertia_degree();
  const PadicContext& ctx = t.context();
  std::vector<PadicNumber> c(static_cast<size_t>(e * f), PadicNumber::zero(ctx));
  for (int i = 0; i + 1 < e; ++i)
    for (int j = 0; j < f; ++j) c[static_cast<size_t>((i + 1) * f + j)] = x.coeff(i, j);
  const auto& row = t.pi_reduction_rows()[0];
  for (int j = 0; j < f; ++j) {
    const PadicNumber& top = x.coeff(e - 1, j);
    if (top.is_zero()) continue;
    for (int i = 0; i < e; ++i) {
      if (row[static_cast<size_t>(i)] == 0) continue;
      size_t idx = static_cast<size_t>(i * f + j);
      c[idx] = c[idx] + top * PadicNumber::from_integer(ctx, row[static_cast<size_t>(i)]);
    }
  }
  return FieldElement::from_coeffs(t, std::move(c));
}

FieldElement mul_by_y(const FieldElement& x) {
  const FieldTower& t = x.tower();
  int e = t.ramification_index(), f = t.inertia_degree();
  const PadicContext& ctx = t.context();
  std::vector<PadicNumber> c(static_cast<size_t>(e * f), PadicNumber::zero(ctx));
  const auto& row = t.y_reduction_rows()[0];
  for (int i = 0; i < e; ++i) {
    for (int j = 0; j + 1 < f; ++j) c[static_cast<size_t>(i * f + j + 1)] = x.coeff(i, j);
    const PadicNumber& top = x.coeff(i, f - 1);
    if (top.is_zero()) continue;
    for (int j = 0; j < f; ++j) {
      if (row[static_cast<size_t>(j)] == 0) continue;
      size_t idx = static_cast<size_t>(i * f + j);
      c[idx] = c[idx] + top * PadicNumber::from_integer(ctx, row[static_cast<size_t>(j)]);
    }
  }
  return FieldElement::from_coeffs(t, std::move(c));
}

std::vector<FieldElement> multiplication_columns(const FieldElement& x) {
  const FieldTower& t = x.tower();
  int e = t.ramification_index(), f = t.inertia_degree();
  std::vector<FieldElement> cols(static_cast<size_t>(e * f));
  FieldElement xi = x;
  for (int i = 0; i < e; ++i) {
    FieldElement xij = xi;
    for (int j = 0; j < f; ++j) {
      cols[static_cast<size_t>(i * f + j)] = xij;
      if (j + 1 < f) xij = mul_by_y(xij);
    }
    if (i + 1 < e) xi = mul_by_pi(xi);
  }
  return cols;
}

// Gaussian elimination with smallest-valuation pivoting; rhs may be null.
PadicNumber eliminate(std::vector<std::vector<PadicNumber>>& M, std::vector<PadicNumber>* rhs,
                      const PadicContext& ctx, bool* singular) {
  int n = static_cast<int>(M.size());
  PadicNumber det = PadicNumber::one(ctx);
  *singular = false;
  for (int col = 0; col < n; ++col) {
    int best = -1;
    ExactRational best_v = ExactRational::infinity();
    for (int r = col; r < n; ++r) {
      const PadicNumber& entry = M[static_cast<size_t>(r)][static_cast<size_t>(col)];
      if (entry.is_zero()) continue;
      ExactRational v = entry.valuation();
      if (v < best_v) {
        best_v = v;
        best = r;
      }
    }
    if (best < 0) {
      *singular = true;
      return PadicNumber::zero(ctx);
    }
    if (best != col) {
      std::swap(M[static_cast<size_t>(best)], M[static_cast<size_t>(col)]);
      if (rhs) std::swap((*rhs)[static_cast<size_t>(best)], (*rhs)[static_cast<size_t>(col)]);
      det = -det;
    }
    PadicNumber pivot = M[static_cast<size_t>(col)][static_cast<size_t>(col)];
    det = det * pivot;
    PadicNumber pinv = pivot.inverse();
    for (int r = col + 1; r < n; ++r) {
      if (M[static_cast<size_t>(r)][static_cast<size_t>(col)].is_zero()) continue;
      PadicNumber factor = M[static_cast<size_t>(r)][static_cast<size_t>(col)] * pinv;
      for (int c2 = col; c2 < n; ++c2)
        M[static_cast<size_t>(r)][static_cast<size_t>(c2)] =
            M[static_cast<size_t>(r)][static_cast<size_t>(c2)] -
            factor * M[static_cast<size_t>(col)][static_cast<size_t>(c2)];
      if (rhs)
        (*rhs)[static_cast<size_t>(r)] =
            (*rhs)[static_cast<size_t>(r)] - factor * (*rhs)[static_cast<size_t>(col)];
    }
  }
  return det;
}

std::vector<std::vector<PadicNumber>> multiplication_matrix(const FieldElement& x) {
  int n = x.tower().degree();
  std::vector<FieldElement> cols = multiplication_columns(x);
  std::vector<std::vector<PadicNumber>> M(static_cast<size_t>(n));
  for (int r = 0; r < n; ++r) {
    M[static_cast<size_t>(r)].resize(static_cast<size_t>(n));
    for (int c = 0; c < n; ++c)
      M[static_cast<size_t>(r)][static_cast<size_t>(c)] =
          cols[static_cast<size_t>(c)].coeffs()[static_cast<size_t>(r)];
  }
  return M;
}

}  // namespace

FieldElement FieldElement::inverse() const {
  if (is_zero()) raise(errc::division_by_zero, "inversion of zero");
  if (is_scalar()) return scalar(tower_, c_[0].inverse());
  int n = tower_.degree();
  std::vector<std::vector<PadicNumber>> M = multiplication_matrix(*this);
  std::vector<PadicNumber> rhs(static_cast<size_t>(n), PadicNumber::zero(tower_.context()));
  rhs[0] = PadicNumber::one(tower_.context());
  bool singular = false;
  eliminate(M, &rhs, tower_.context(), &singular);
  if (singular) raise(errc::division_by_zero, "singular multiplication matrix");
  std::vector<PadicNumber> z(static_cast<size_t>(n), PadicNumber::zero(tower_.context()));
  for (int col = n - 1; col >= 0; --col) {
    PadicNumber s = rhs[static_cast<size_t>(col)];
    for (int c2 = col + 1; c2 < n; ++c2)
      s = s - M[static_cast<size_t>(col)][static_cast<size_t>(c2)] * z[static_cast<size_t>(c2)];
    z[static_cast<size_t>(col)] =
        s * M[static_cast<size_t>(col)][static_cast<size_t>(col)].inverse();
  }
  return from_coeffs(tower_, std::move(z));
}

FieldElement operator/(const FieldElement& a, const FieldElement& b) { return a * b.inverse(); }

FieldElement FieldElement::pow(long exponent) const {
  if (exponent < 0) return inverse().pow(-exponent);
  FieldElement acc = one(tower_);
  if (is_zero()) return exponent == 0 ? acc : *this;
  FieldElement base = *this;
  unsigned long e = static_cast<unsigned long>(exponent);
  while (e > 0) {
    if (e & 1) acc = acc * base;
    base = base * base;
    e >>= 1;
  }
  return acc;
}

ExactRational FieldElement::valuation() const {
  // The candidates v_p(c_ij) + i/e have distinct residues mod 1 across i, so
  // the minimum is attained without cancellation.
  ExactRational best = ExactRational::infinity();
  int f = tower_.inertia_degree(), e = tower_.ramification_index();
  for (int i = 0; i < e; ++i)
    for (int j = 0; j < f; ++j) {
      const PadicNumber& c = coeff(i, j);
      if (c.is_zero()) continue;
      ExactRational v = ExactRational(c.shift()) + ExactRational(i, e);
      if (v < best) best = v;
    }
  return best;
}

long FieldElement::pi_valuation() const {
  ExactRational v = valuation();
  if (v.is_infinite()) raise(errc::bad_argument, "zero has no pi-valuation");
  long e = tower_.ramification_index();
  if ((v.num() * e) % v.den() != 0) raise(errc::bad_argument, "valuation not in (1/e)Z");
  return v.num() * e / v.den();
}

ResidueElement FieldElement::residue() const {
  ExactRational v = valuation();
  if (!v.is_infinite() && v < ExactRational(0))
    raise(errc::negative_valuation, "residue of a non-integral element");
  std::vector<long> c;
  for (int j = 0; j < tower_.inertia_degree(); ++j) c.push_back(coeff(0, j).residue_index());
  return {tower_, std::move(c)};
}

PadicNumber FieldElement::norm() const {
  if (is_zero()) return PadicNumber::zero(tower_.context());
  std::vector<std::vector<PadicNumber>> M = multiplication_matrix(*this);
  bool singular = false;
  PadicNumber det = eliminate(M, nullptr, tower_.context(), &singular);
  if (singular) return PadicNumber::zero(tower_.context());
  return det;
}

bool operator==(const FieldElement& a, const FieldElement& b) {
  require_compatible(a, b);
  for (size_t i = 0; i < a.coeffs().size(); ++i)
    if (a.coeffs()[i] != b.coeffs()[i]) return false;
  return true;
}

std::string FieldElement::str() const {
  std::string s;
  int e = tower_.ramification_index(), f = tower_.inertia_degree();
  for (int i = 0; i < e; ++i)
    for (int j = 0; j < f; ++j) {
      const PadicNumber& c = coeff(i, j);
      if (c.is_zero()) continue;
      std::string cs = c.str();
      bool neg = !cs.empty() && cs[0] == '-';
      if (neg) cs = cs.substr(1);
      std::string term;
      if (i > 0) {
        term += "pi";
        if (i > 1) term += "^" + std::to_string(i);
      }
      if (j > 0) {
        if (!term.empty()) term += "*";
        term += "y";
        if (j > 1) term += "^" + std::to_string(j);
      }
      if (term.empty())
        term = cs;
      else if (cs != "1")
        term = cs + "*" + term;
      if (s.empty())
        s = (neg ? "-" : "") + term;
      else
        s += (neg ? " - " : " + ") + term;
    }
  return s.empty() ? "0" : s;
}

bool equal_at_precision(const FieldElement& a, const FieldElement& b, int digits) {
  if (digits < 0) digits = a.tower().precision();
  FieldElement d = a - b;
  if (d.is_zero()) return true;
  return d.valuation() >= ExactRational(digits);
}

// ---------------------------------------------------------------- Galois maps

FieldElement cyclotomic_galois(const FieldElement& x, long t) {
  const FieldTower& tw = x.tower();
  if (tw.cyclo_exponent() < 1) raise(errc::wrong_tower, "tower has no ramified step");
  if (t % tw.prime() == 0) raise(errc::bad_argument, "galois exponent divisible by p");
  int e = tw.ramification_index(), f = tw.inertia_degree();
  FieldElement S = FieldElement::zeta(tw).pow(t) - FieldElement::one(tw);
  FieldElement acc = FieldElement::zero(tw);
  FieldElement spow = FieldElement::one(tw);
  for (int i = 0; i < e; ++i) {
    std::vector<PadicNumber> cc(static_cast<size_t>(e * f), PadicNumber::zero(tw.context()));
    bool nonzero = false;
    for (int j = 0; j < f; ++j) {
      cc[static_cast<size_t>(j)] = x.coeff(i, j);
      nonzero = nonzero || !x.coeff(i, j).is_zero();
    }
    if (nonzero) acc = acc + FieldElement::from_coeffs(tw, std::move(cc)) * spow;
    if (i + 1 < e) spow = spow * S;
  }
  return acc;
}

FieldElement sigma_k(const FieldElement& x) {
  const FieldTower& tw = x.tower();
  if (tw.cyclo_exponent() != 1)
    raise(errc::wrong_tower, "sigma_k requires a tower with cyclotomic exponent 1");
  return cyclotomic_galois(x, tw.primitive_root());
}

FieldElement frobenius(const FieldElement& x) {
  const FieldTower& tw = x.tower();
  int e = tw.ramification_index(), f = tw.inertia_degree();
  if (f == 1) return x;
  const auto& fp = tw.frobenius_powers();
  std::vector<PadicNumber> c(static_cast<size_t>(e * f), PadicNumber::zero(tw.context()));
  for (int i = 0; i < e; ++i)
    for (int j = 0; j < f; ++j) {
      const PadicNumber& v = x.coeff(i, j);
      if (v.is_zero()) continue;
      const auto& ypow = fp[static_cast<size_t>(j)];
      for (int jj = 0; jj < f; ++jj) {
        const PadicNumber& w = ypow[static_cast<size_t>(jj)];
        if (w.is_zero()) continue;
        size_t idx = static_cast<size_t>(i * f + jj);
        c[idx] = c[idx] + v * w;
      }
    }
  return FieldElement::from_coeffs(tw, std::move(c));
}

// ---------------------------------------------------------- Hensel over towers

FieldElement hensel_root(const std::vector<FieldElement>& poly, const ResidueElement& start) {
  if (poly.size() < 2) raise(errc::bad_argument, "polynomial of degree < 1");
  const FieldTower& tw = poly[0].tower();
  long p = tw.prime();

  std::vector<ResidueElement> rp;
  for (const auto& c : poly) {
    ExactRational v = c.valuation();
    if (!v.is_infinite() && v < ExactRational(0))
      raise(errc::bad_argument, "polynomial coefficients must be integral");
    rp.push_back(c.residue());
  }
  auto reval = [&](const std::vector<ResidueElement>& q, const ResidueElement& at) {
    ResidueElement acc = ResidueElement::zero(tw);
    for (auto it = q.rbegin(); it != q.rend(); ++it) acc = acc * at + *it;
    return acc;
  };
  std::vector<ResidueElement> rdp;
  for (size_t i = 1; i < rp.size(); ++i)
    rdp.push_back(ResidueElement::from_scalar(tw, static_cast<long>(i) % p) * rp[i]);
  if (!reval(rp, start).is_zero()) raise(errc::no_residue_root, "not a residue root");
  if (reval(rdp, start).is_zero()) raise(errc::non_simple_root, "residue root is not simple");

  std::vector<FieldElement> dpoly;
  for (size_t i = 1; i < poly.size(); ++i)
    dpoly.push_back(FieldElement::from_integer(tw, static_cast<long>(i)) * poly[i]);
  auto eval = [&](const std::vector<FieldElement>& q, const FieldElement& at) {
    FieldElement acc = FieldElement::zero(tw);
    for (auto it = q.rbegin(); it != q.rend(); ++it) acc = acc * at + *it;
    return acc;
  };

  std::vector<PadicNumber> lift(static_cast<size_t>(tw.degree()),
                                PadicNumber::zero(tw.context()));
  for (int j = 0; j < tw.inertia_degree(); ++j)
    lift[static_cast<size_t>(j)] =
        PadicNumber::from_integer(tw.context(), start.coeffs()[static_cast<size_t>(j)]);
  FieldElement x = FieldElement::from_coeffs(tw, std::move(lift));

  // Newton with the derivative inverse maintained by its own quadratic
  // update, so linear algebra happens only once.
  FieldElement w = eval(dpoly, x).inverse();
  FieldElement two = FieldElement::from_integer(tw, 2);
  ExactRational target(tw.precision());
  for (int iter = 0; iter < 64; ++iter) {
    FieldElement fx = eval(poly, x);
    if (fx.is_zero() || fx.valuation() >= target) {
      if (x.residue() != start) raise(errc::bad_argument, "newton drifted off the residue root");
      return x;
    }
    x = x - fx * w;
    w = w * (two - eval(dpoly, x) * w);
  }
  raise(errc::precision_exhausted, "newton iteration did not converge");
}

namespace {

FieldElement teich_lift_impl(const FieldTower& t, const ResidueElement& r) {
  if (r.is_zero()) return FieldElement::zero(t);
  if (t.inertia_degree() == 1)
    return FieldElement::scalar(t, teichmuller(t.context(), r.scalar()));

  long q = 1;
  for (int i = 0; i < t.inertia_degree(); ++i) q *= t.prime();
  std::vector<PadicNumber> lift(static_cast<size_t>(t.degree()), PadicNumber::zero(t.context()));
  for (int j = 0; j < t.inertia_degree(); ++j)
    lift[static_cast<size_t>(j)] =
        PadicNumber::from_integer(t.context(), r.coeffs()[static_cast<size_t>(j)]);
  FieldElement x = FieldElement::from_coeffs(t, std::move(lift));
  FieldElement one = FieldElement::one(t);
  FieldElement qm1 = FieldElement::from_integer(t, q - 1);

  ExactRational target(t.precision());
  for (int iter = 0; iter < 64; ++iter) {
    FieldElement xq2 = x.pow(q - 2);
    FieldElement fx = xq2 * x - one;  // x^{q-1} - 1
    if (fx.is_zero() || fx.valuation() >= target) {
      if (x.residue() != r) raise(errc::bad_argument, "teichmuller lift drifted");
      return x;
    }
    x = x - fx * (qm1 * xq2).inverse();
  }
  raise(errc::precision_exhausted, "teichmuller iteration did not converge");
}

}  // namespace

FieldElement teich_lift(const FieldTower& tower, const ResidueElement& r) {
  const auto& cache = tower.teich_cache();
  long idx = r.index();
  if (!cache.empty() && idx < static_cast<long>(cache.size()))
    return FieldElement::from_coeffs(tower, cache[static_cast<size_t>(idx)]);
  return teich_lift_impl(tower, r);
}

}  // namespace qpadic
