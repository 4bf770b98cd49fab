#include "qpadic/kummer.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qpadic {

Ramification classify_ramification(const KummerCoordinates& u) {
  if (u.is_zero()) raise(errc::zero_class, "zero kummer class");
  bool axis_only = u.a[0] == 0;
  for (size_t i = 1; axis_only && i + 1 < u.a.size(); ++i) axis_only = u.a[i] == 0;
  return axis_only && u.a.back() != 0 ? Ramification::unramified
                                      : Ramification::totally_ramified;
}

AbelianTest abelian_over_qp(const FieldTower& K, const KummerCoordinates& u) {
  if (u.is_zero()) raise(errc::zero_class, "zero kummer class");
  long p = K.prime();
  AbelianTest out;
  if (p == 2) {
    // sigma is trivial on Q_2; every class passes.
    out.abelian = true;
    out.r = 1;
    return out;
  }
  FieldElement lift = kummer_representative(K, u);
  KummerCoordinates image = kummer_coordinates(sigma_k(lift), /*verify=*/false);
  long k = K.primitive_root();
  out.abelian = image == u.scale(k);
  out.r = out.abelian ? static_cast<int>(k) : 0;
  return out;
}

CpExtensionClass classify_class(const FieldTower& K, const KummerCoordinates& u) {
  CpExtensionClass out;
  out.generator = u;
  out.ramification = classify_ramification(u);
  AbelianTest t = abelian_over_qp(K, u);
  out.abelian_over_qp = t.abelian;
  out.matched_r = t.r;
  return out;
}

std::vector<KummerCoordinates> scan_abelian_classes(const FieldTower& K, ExecMode mode) {
  long p = K.prime();
  long total = 1;
  for (long i = 0; i <= p; ++i) total *= p;

  std::vector<unsigned char> flag(static_cast<size_t>(total), 0);
  bool failed = false;
  std::string failure;

#ifdef _OPENMP
  // Below a few thousand classes the per-thread tower setup dominates.
  if (mode == ExecMode::parallel && total >= 2048) {
    // Each thread works against its own tower clone so that reference-count
    // and cache traffic stays thread-local.
#pragma omp parallel
    {
      FieldTower local = FieldTower::make(PadicContext(K.prime(), K.precision()),
                                          K.inertia_degree(), K.cyclo_exponent());
#pragma omp for schedule(dynamic, 64)
      for (long idx = 1; idx < total; ++idx) {
        try {
          flag[static_cast<size_t>(idx)] =
              abelian_over_qp(local, KummerCoordinates::from_index(p, idx)).abelian ? 1 : 0;
        } catch (const std::exception& e) {
#pragma omp critical
          {
            failed = true;
            failure = e.what();
          }
        }
      }
    }
  } else
#endif
  {
    (void)mode;
    for (long idx = 1; idx < total; ++idx)
      flag[static_cast<size_t>(idx)] =
          abelian_over_qp(K, KummerCoordinates::from_index(p, idx)).abelian ? 1 : 0;
  }
  if (failed) raise(errc::bad_argument, "class scan failed: " + failure);

  std::vector<KummerCoordinates> out;
  for (long idx = 1; idx < total; ++idx)
    if (flag[static_cast<size_t>(idx)]) out.push_back(KummerCoordinates::from_index(p, idx));
  std::sort(out.begin(), out.end());
  return out;
}

namespace {

// Greedy lexicographically-minimal generating set of a subgroup given by its
// sorted nonzero members.
std::vector<KummerCoordinates> minimal_generators(const std::vector<KummerCoordinates>& classes,
                                                  long p) {
  std::vector<KummerCoordinates> gens;
  std::set<std::vector<int>> span;
  span.insert(KummerCoordinates::zero(p).a);
  for (const auto& c : classes) {
    if (span.count(c.a)) continue;
    gens.push_back(c);
    // extend the span by all multiples of c added to the current span
    std::set<std::vector<int>> next;
    for (const auto& v : span) {
      KummerCoordinates base = KummerCoordinates::zero(p);
      base.a = v;
      for (long s = 0; s < p; ++s) next.insert(base.add(c.scale(s)).a);
    }
    span = std::move(next);
  }
  return gens;
}

}  // namespace

BaseCaseResult base_case_compositum(long p, ExecMode mode, int precision) {
  if (p != 2 && p != 3 && p != 5) raise(errc::bad_argument, "p out of supported range");
  PadicContext ctx(p, precision);
  FieldTower K = FieldTower::make(ctx, 1, p == 2 ? 0 : 1);
  BaseCaseResult out;

  if (p == 2) {
    // The abelian filter is vacuous; verify the explicit (-1, 2, 5) basis.
    long total = 8;
    for (long idx = 1; idx < total; ++idx)
      out.abelian_classes.push_back(KummerCoordinates::from_index(2, idx));
    std::sort(out.abelian_classes.begin(), out.abelian_classes.end());
    for (long g : {-1L, 2L, 5L})
      out.generators.push_back(kummer_coordinates(FieldElement::from_integer(K, g)));
    std::set<std::vector<int>> span;
    span.insert(KummerCoordinates::zero(2).a);
    for (const auto& g : out.generators) {
      std::set<std::vector<int>> next;
      for (const auto& v : span) {
        KummerCoordinates base = KummerCoordinates::zero(2);
        base.a = v;
        for (long s = 0; s < 2; ++s) next.insert(base.add(g.scale(s)).a);
      }
      span = std::move(next);
    }
    if (span.size() != 8) raise(errc::bad_argument, "-1, 2, 5 failed to span");
    if (power_quotient_dim(K) != 3) raise(errc::bad_argument, "square class dimension is not 3");
    out.dimension = 3;
    out.group_shape = "C2 x C2 x C2";
    return out;
  }

  out.abelian_classes = scan_abelian_classes(K, mode);

  // The passing set together with zero must be a subgroup.
  std::set<std::vector<int>> members;
  members.insert(KummerCoordinates::zero(p).a);
  for (const auto& c : out.abelian_classes) members.insert(c.a);
  for (const auto& x : out.abelian_classes)
    for (const auto& y : out.abelian_classes)
      if (!members.count(x.add(y).a))
        raise(errc::bad_argument, "abelian classes do not form a subgroup at " + x.str() + " + " + y.str());

  long size = static_cast<long>(members.size());
  int dim = 0;
  while (size > 1) {
    if (size % p != 0) raise(errc::bad_argument, "abelian subgroup size is not a p-power");
    size /= p;
    ++dim;
  }
  out.dimension = dim;
  if (dim != 2) raise(errc::bad_argument, "abelian compositum dimension is not 2");
  out.generators = minimal_generators(out.abelian_classes, p);
  out.group_shape = "C" + std::to_string(p) + " x C" + std::to_string(p);
  return out;
}

SigmaDigitReport sigma_digit_action(const FieldTower& K, int j, long digit) {
  long p = K.prime();
  if (j < 1 || j > static_cast<int>(p)) raise(errc::bad_argument, "position out of range");
  if (digit % p == 0) raise(errc::bad_argument, "digit must be nonzero");
  SigmaDigitReport rep;
  rep.position = j;
  rep.digit = digit;

  FieldElement pi = FieldElement::uniformizer(K);
  FieldElement a = FieldElement::one(K) +
                   teich_lift(K, ResidueElement::from_scalar(K, digit)) * pi.pow(j);
  FieldElement sa = sigma_k(a);
  UnitDigits d = decompose(sa, j);
  rep.lower_digits_zero = true;
  for (int i = 0; i + 1 < j; ++i) rep.lower_digits_zero &= d.digits[static_cast<size_t>(i)].is_zero();
  rep.observed_leading = d.digits[static_cast<size_t>(j - 1)].scalar();
  long kj = 1, k = K.primitive_root();
  for (int i = 0; i < j; ++i) kj = kj * k % p;
  rep.expected_leading = kj * (digit % p) % p;
  if (j == static_cast<int>(p))
    rep.pth_power_relation = is_pth_power(sa * a.pow(-k)).is_power;
  return rep;
}

namespace {

std::array<FieldElement, 4> q2i_basis(const FieldTower& q2i) {
  FieldElement i = FieldElement::zeta(q2i);
  FieldElement one = FieldElement::one(q2i);
  return {one + i, one + FieldElement::from_integer(q2i, 2) * i,
          FieldElement::from_integer(q2i, 2), FieldElement::from_integer(q2i, 5)};
}

FieldElement subset_product(const std::array<FieldElement, 4>& basis, unsigned mask,
                            const FieldTower& q2i) {
  FieldElement x = FieldElement::one(q2i);
  for (unsigned b = 0; b < 4; ++b)
    if (mask & (1u << b)) x = x * basis[b];
  return x;
}

}  // namespace

Q2iSquaresReport q2i_square_classes(int precision) {
  PadicContext ctx(2, precision);
  FieldTower q2i = FieldTower::make(ctx, 1, 2);
  std::array<FieldElement, 4> basis = q2i_basis(q2i);
  Q2iSquaresReport rep;
  rep.dimension = power_quotient_dim(q2i);
  rep.is_square[0] = true;
  for (unsigned mask = 1; mask < 16; ++mask)
    rep.is_square[mask] = is_pth_power(subset_product(basis, mask, q2i)).is_power;
  return rep;
}

Q2iConjugationReport q2i_c4_obstruction(int precision) {
  PadicContext ctx(2, precision);
  FieldTower q2i = FieldTower::make(ctx, 1, 2);
  std::array<FieldElement, 4> basis = q2i_basis(q2i);
  Q2iConjugationReport rep;
  rep.invariant[0] = true;
  for (unsigned mask = 1; mask < 16; ++mask) {
    FieldElement x = subset_product(basis, mask, q2i);
    FieldElement ratio = cyclotomic_galois(x, 3) / x;
    rep.invariant[mask] = is_pth_power(ratio).is_power;
  }
  return rep;
}

bool tame_root_check(long p, int precision) {
  if (p == 2) raise(errc::bad_argument, "tame identity requires p odd");
  PadicContext ctx(p, precision);
  FieldTower K = FieldTower::make(ctx, 1, 1);
  FieldElement pi = FieldElement::uniformizer(K);
  FieldElement a = FieldElement::from_integer(K, -p) * pi.pow(-(p - 1));
  if (a.valuation() != ExactRational(0)) return false;
  if (a.residue() != ResidueElement::one(K)) return false;

  // X^{p-1} - a has the simple residue root 1.
  std::vector<FieldElement> poly(static_cast<size_t>(p), FieldElement::zero(K));
  poly[0] = -a;
  poly[static_cast<size_t>(p - 1)] = FieldElement::one(K);
  FieldElement r = hensel_root(poly, ResidueElement::one(K));
  if (!equal_at_precision(r.pow(p - 1), a, precision - 1)) return false;
  return equal_at_precision((pi * r).pow(p - 1), FieldElement::from_integer(K, -p),
                            precision - 1);
}

std::pair<mpz_class, mpz_class> conductor(long p, long n, long m) {
  if (!is_prime(p)) raise(errc::not_prime, "p must be prime");
  if (n < 0 || m < 1) raise(errc::bad_argument, "need n >= 0 and m >= 1");
  if (m % p == 0) raise(errc::bad_argument, "m must be coprime to p");
  // exponent p^n * m must stay addressable
  double logexp = n * std::log2(static_cast<double>(p)) + std::log2(static_cast<double>(m));
  if (logexp > 30) raise(errc::overflow, "cyclotomic level exponent too large");
  unsigned long exp = static_cast<unsigned long>(m);
  for (long i = 0; i < n; ++i) exp *= static_cast<unsigned long>(p);
  mpz_class wild, tame;
  mpz_ui_pow_ui(wild.get_mpz_t(), static_cast<unsigned long>(p),
                static_cast<unsigned long>(n + 2));
  mpz_ui_pow_ui(tame.get_mpz_t(), static_cast<unsigned long>(p), exp);
  return {wild, tame - 1};
}

std::vector<ChainStep> half_cyclotomic_chain(int k_max, int precision) {
  if (k_max < 3 || k_max > 6) raise(errc::bad_argument, "k_max out of range [3,6]");
  PadicContext ctx(2, precision);
  std::vector<ChainStep> out;
  for (int k = 2; k <= k_max; ++k) {
    FieldTower t = FieldTower::make(ctx, 1, k);
    FieldElement z = FieldElement::zeta(t);
    FieldElement zi = z.inverse();
    FieldElement ak = z + zi;
    FieldElement prev = z * z + zi * zi;  // a_{k-1} inside the same tower
    ChainStep step;
    step.k = k;
    step.valuation = ak.valuation();
    step.square_identity = ak * ak == prev + FieldElement::from_integer(t, 2);
    out.push_back(step);
  }
  return out;
}

}  // namespace qpadic
