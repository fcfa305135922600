#pragma once
// The point sets of PG(3,q^2) under study: the Hermitian surface, the BM
// surfaces B_{a,b} and M_{a,b} with the cone F at infinity, and the BT
// varieties V^3_eps / H^3_eps, together with parameter validation, the
// two-character size formulas and the closed-form counting formulas for
// inequivalent BM unitals/varieties.
//
// Coordinates of PG(3,q^2) are written (J, X, Y, Z); the hyperplane at
// infinity is J = 0 and affine points are normalized to J = 1.

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "qhvar/common.hpp"
#include "qhvar/ff.hpp"
#include "qhvar/linalg.hpp"
#include "qhvar/pg.hpp"

namespace qhvar {

// ---------------------------------------------------------------------------
// Parameters

// BM parameters: a in GF(q^2)*, b in GF(q^2) \ GF(q).
struct BMParams {
  std::shared_ptr<const Gf2> f;
  Fel a = 0;
  Fel b = 0;
  bool cond_ok = false;  // condition on (a,b) for r = 3, precomputed
};

// r = 3 condition on (a,b): for q odd 4a^(q+1) + (b^q - b)^2 != 0, for q even
// no condition beyond a != 0, b not in GF(q).
inline bool bm_validate(const Gf2& f, Fel a, Fel b) {
  if (f.characteristic() == 2) return true;
  Fel four = 0;
  for (int i = 0; i < 4; ++i) four = f.add(four, 1);
  Fel t1 = f.mul(four, f.pow(a, f.q() + 1));
  Fel d = f.sub(f.frobenius(b), b);
  return f.add(t1, f.mul(d, d)) != 0;
}

// The general condition (any r) is kept for reference; only the r odd branch
// is reachable in this library (r = 3 throughout).
inline bool bm_validate_general(std::uint32_t r, const Gf2& f, Fel a, Fel b) {
  Fel four = 0;
  for (int i = 0; i < 4; ++i) four = f.add(four, 1);
  if (f.characteristic() != 2) {
    Fel v = f.add(f.mul(four, f.pow(a, f.q() + 1)),
                  f.mul(f.sub(f.frobenius(b), b), f.sub(f.frobenius(b), b)));
    if (r % 2 == 1) return v != 0;
    return f.in_base(v) && !f.base().is_square(f.c0(v));
  }
  if (r % 2 == 1) return true;
  Fel s = f.add(f.frobenius(b), b);
  Fel v = f.div(f.pow(a, f.q() + 1), f.mul(s, s));
  return f.rel_trace(v) == 0;
}

inline BMParams bm_params(std::shared_ptr<const Gf2> f, Fel a, Fel b) {
  f->check(a);
  f->check(b);
  require(a != 0, errc::invalid_params, "BM parameter a must be non-zero");
  require(!f->in_base(b), errc::invalid_params, "BM parameter b must lie outside GF(q)");
  BMParams p{std::move(f), a, b, false};
  p.cond_ok = bm_validate(*p.f, a, b);
  return p;
}

// Least valid (a,b) pair in canonical element order, used as the default
// parameter set for a given q.
inline BMParams default_bm_params(std::shared_ptr<const Gf2> f) {
  for (std::uint32_t a = 1; a < f->size(); ++a) {
    for (std::uint32_t b = 0; b < f->size(); ++b) {
      if (f->in_base(static_cast<Fel>(b))) continue;
      if (bm_validate(*f, static_cast<Fel>(a), static_cast<Fel>(b)))
        return bm_params(f, static_cast<Fel>(a), static_cast<Fel>(b));
    }
  }
  throw error(errc::invalid_params, "no valid BM parameter pair exists for this field");
}

// BT parameters: q = 2^e with e odd > 1, sigma: x -> x^(2^((e+1)/2)), and the
// slopes c of the infinity lines {J = 0, Y = cX} of V^3_eps (the solutions of
// c^(2^((e-1)/2)+1) = 1; one solution if e = 1 mod 4, three if e = 3 mod 4).
struct BTParams {
  std::shared_ptr<const Gf2> f;
  std::uint32_t e = 0;
  std::uint64_t sigma = 0;
  std::vector<Fel> infinity_slopes;
};

inline BTParams bt_params(std::uint32_t e, std::optional<Fel> delta = {},
                          std::optional<std::vector<std::uint32_t>> modulus = {}) {
  require(e > 1 && e % 2 == 1, errc::invalid_params, "BT construction needs odd e > 1");
  auto fq = make_field(2, e, std::move(modulus));
  auto f = make_quadratic_ext(fq, delta);
  BTParams bt;
  bt.f = f;
  bt.e = e;
  bt.sigma = 1ULL << ((e + 1) / 2);
  std::uint64_t m = (1ULL << ((e - 1) / 2)) + 1;
  for (std::uint32_t x = 1; x < f->size(); ++x)
    if (f->pow(static_cast<Fel>(x), m) == 1) bt.infinity_slopes.push_back(static_cast<Fel>(x));
  std::size_t expected = (e % 4 == 1) ? 1 : 3;
  require(bt.infinity_slopes.size() == expected, errc::invalid_params,
          "unexpected number of unity roots for the infinity section");
  return bt;
}

// ---------------------------------------------------------------------------
// Two-character sizes

// The two hyperplane intersection sizes of a (quasi-)Hermitian variety in
// PG(r,q^2): the non-singular section size and the tangent-cone size.
inline std::pair<std::uint64_t, std::uint64_t> expected_intersection_sizes(std::uint32_t r,
                                                                           std::uint64_t q) {
  require(r >= 2, errc::domain_error, "intersection sizes need r >= 2");
  __int128 qr = 1, qr1 = 1;
  for (std::uint32_t i = 0; i < r; ++i) qr *= q;
  for (std::uint32_t i = 0; i + 1 < r; ++i) qr1 *= q;
  __int128 s = (r % 2 == 1) ? 1 : -1;  // (-1)^(r-1)
  __int128 secant = (qr + s) * (qr1 - s) / (static_cast<__int128>(q) * q - 1);
  __int128 tangent = secant + s * qr1;
  return {static_cast<std::uint64_t>(secant), static_cast<std::uint64_t>(tangent)};
}

// ---------------------------------------------------------------------------
// Membership predicates

namespace detail3 {

inline void check_dim4(const Pt& p) {
  require(p.n == 4, errc::dimension_mismatch, "expected a point of PG(3,q^2)");
}

// z + a(x^2+y^2) - b(x^(q+1)+y^(q+1)) for an affine point (1,x,y,z).
inline Fel bm_affine_term(const BMParams& bm, Fel x, Fel y, Fel z) {
  const Gf2& f = *bm.f;
  const std::uint64_t q = f.q();
  Fel sq = f.add(f.mul(x, x), f.mul(y, y));
  Fel nm = f.add(f.pow(x, q + 1), f.pow(y, q + 1));
  return f.add(z, f.sub(f.mul(bm.a, sq), f.mul(bm.b, nm)));
}

}  // namespace detail3

// Degree-2q homogeneous form of B_{a,b}; vanishing defines membership for
// arbitrary (affine or infinite) points.
inline Fel bab_form(const BMParams& bm, const Pt& p) {
  detail3::check_dim4(p);
  const Gf2& f = *bm.f;
  const std::uint64_t q = f.q();
  Fel J = p[0], X = p[1], Y = p[2], Z = p[3];
  Fel term = f.mul(f.pow(Z, q), f.pow(J, q));
  term = f.sub(term, f.mul(Z, f.pow(J, 2 * q - 1)));
  Fel x2q = f.add(f.pow(X, 2 * q), f.pow(Y, 2 * q));
  term = f.add(term, f.mul(f.frobenius(bm.a), x2q));
  Fel x2 = f.add(f.mul(X, X), f.mul(Y, Y));
  term = f.sub(term, f.mul(f.mul(bm.a, x2), f.pow(J, 2 * q - 2)));
  Fel nm = f.add(f.pow(X, q + 1), f.pow(Y, q + 1));
  Fel bd = f.sub(f.frobenius(bm.b), bm.b);
  term = f.sub(term, f.mul(f.mul(bd, nm), f.pow(J, q - 1)));
  return term;
}

inline bool bab_member(const BMParams& bm, const Pt& p) {
  require(bm.cond_ok, errc::invalid_params, "BM parameters fail the (a,b) condition");
  detail3::check_dim4(p);
  const Gf2& f = *bm.f;
  if (p[0] != 0) {
    Pt a = normalize(f, p);
    return f.in_base(detail3::bm_affine_term(bm, a[1], a[2], a[3]));
  }
  return bab_form(bm, p) == 0;
}

// The cone F: J = 0, X^(q+1) + Y^(q+1) = 0.
inline bool fcone_member(const Gf2& f, const Pt& p) {
  detail3::check_dim4(p);
  if (p[0] != 0) return false;
  const std::uint64_t q = f.q();
  return f.add(f.pow(p[1], q + 1), f.pow(p[2], q + 1)) == 0;
}

inline bool mab_member(const BMParams& bm, const Pt& p) {
  require(bm.cond_ok, errc::invalid_params, "BM parameters fail the (a,b) condition");
  detail3::check_dim4(p);
  if (p[0] != 0) return bab_member(bm, p);
  return fcone_member(*bm.f, p);
}

// Delta_eps(x) = eps x^(q(sigma+2)) + (eps^sigma + eps^(sigma+2)) x^(q sigma+2)
//                + x^sigma + (1+eps) x^2
inline Fel delta_eps(const BTParams& bt, Fel x) {
  const Gf2& f = *bt.f;
  const std::uint64_t q = f.q(), s = bt.sigma;
  Fel eps = f.eps();
  Fel t = f.mul(eps, f.pow(x, q * (s + 2)));
  t = f.add(t, f.mul(f.add(f.pow(eps, s), f.pow(eps, s + 2)), f.pow(x, q * s + 2)));
  t = f.add(t, f.pow(x, s));
  t = f.add(t, f.mul(f.add(1, eps), f.mul(x, x)));
  return t;
}

// Gamma_eps(x) = [x+(x^q+x)eps]^(sigma+2) + (x^q+x)^sigma + (x^(2q)+x^2)eps
//                + x^(q+1) + x^2
inline Fel gamma_eps(const BTParams& bt, Fel x) {
  const Gf2& f = *bt.f;
  const std::uint64_t q = f.q(), s = bt.sigma;
  Fel tr = f.add(f.frobenius(x), x);
  Fel t = f.pow(f.add(x, f.mul(tr, f.eps())), s + 2);
  t = f.add(t, f.pow(tr, s));
  t = f.add(t, f.mul(f.add(f.pow(x, 2 * q), f.mul(x, x)), f.eps()));
  t = f.add(t, f.pow(x, q + 1));
  t = f.add(t, f.mul(x, x));
  return t;
}

// V^3_eps: affine part z^q + z = Gamma(x) + Gamma(y); at infinity the lines
// {J = 0, Y = cX} for the slopes carried by the parameters.
inline bool veps_member(const BTParams& bt, const Pt& p) {
  detail3::check_dim4(p);
  const Gf2& f = *bt.f;
  if (p[0] != 0) {
    Pt a = normalize(f, p);
    Fel lhs = f.add(f.frobenius(a[3]), a[3]);
    Fel rhs = f.add(gamma_eps(bt, a[1]), gamma_eps(bt, a[2]));
    return lhs == rhs;
  }
  for (Fel c : bt.infinity_slopes)
    if (f.add(f.mul(c, p[1]), p[2]) == 0) return true;
  return false;
}

inline bool heps_member(const BTParams& bt, const Pt& p) {
  detail3::check_dim4(p);
  if (p[0] != 0) return veps_member(bt, p);
  return fcone_member(*bt.f, p);
}

// Hermitian surface given by a non-singular Hermitian 4x4 matrix H over
// GF(q^2): membership is vanishing of sum_ij x_i^q H_ij x_j.
struct HermitianMx {
  std::array<Fel, 16> h{};

  static HermitianMx identity() {
    HermitianMx m;
    for (int i = 0; i < 4; ++i) m.h[i * 4 + i] = 1;
    return m;
  }
};

inline void check_hermitian(const Gf2& f, const HermitianMx& m) {
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      require(m.h[j * 4 + i] == f.frobenius(m.h[i * 4 + j]), errc::not_hermitian_matrix,
              "matrix is not Hermitian");
  Mat mm(4, 4);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) mm.at(i, j) = m.h[i * 4 + j];
  require(determinant(f, mm) != 0, errc::singular_matrix, "Hermitian matrix is singular");
}

inline bool hermitian_member(const Gf2& f, const HermitianMx& m, const Pt& p) {
  detail3::check_dim4(p);
  Fel acc = 0;
  for (int i = 0; i < 4; ++i) {
    if (p[i] == 0) continue;
    Fel xiq = f.frobenius(p[i]);
    for (int j = 0; j < 4; ++j)
      acc = f.add(acc, f.mul(f.mul(xiq, m.h[i * 4 + j]), p[j]));
  }
  return acc == 0;
}

// ---------------------------------------------------------------------------
// Materialization

inline std::vector<Pt> points_fcone(const Gf2& f) {
  std::vector<Pt> pts;
  pts.push_back(make_pt({0, 0, 0, 1}));
  Fel neg_one = f.neg(1);
  for (std::uint32_t alpha = 0; alpha < f.size(); ++alpha) {
    if (f.pow(static_cast<Fel>(alpha), f.q() + 1) != neg_one) continue;
    for (std::uint32_t t = 0; t < f.size(); ++t)
      pts.push_back(make_pt({0, 1, static_cast<Fel>(alpha), static_cast<Fel>(t)}));
  }
  std::sort(pts.begin(), pts.end());
  return pts;
}

// Affine points of B_{a,b}: for each (x,y) the z values form one additive
// coset of GF(q), cut out by the c1 component of the defining expression.
inline std::vector<Pt> points_bab_affine(const BMParams& bm) {
  require(bm.cond_ok, errc::invalid_params, "BM parameters fail the (a,b) condition");
  const Gf2& f = *bm.f;
  std::vector<Pt> pts;
  pts.reserve(static_cast<std::size_t>(f.size()) * f.size() * f.q());
  for (std::uint32_t x = 0; x < f.size(); ++x) {
    for (std::uint32_t y = 0; y < f.size(); ++y) {
      Fel s = detail3::bm_affine_term(bm, static_cast<Fel>(x), static_cast<Fel>(y), 0);
      Fel z1 = f.base().neg(f.c1(s));
      for (std::uint32_t z0 = 0; z0 < f.q(); ++z0)
        pts.push_back(make_pt({1, static_cast<Fel>(x), static_cast<Fel>(y),
                               f.make_elem(static_cast<Fel>(z0), z1)}));
    }
  }
  return pts;
}

// All of B_{a,b}, including the J = 0 locus of the homogeneous form.
inline std::vector<Pt> points_bab(const BMParams& bm) {
  const Gf2& f = *bm.f;
  std::vector<Pt> pts = points_bab_affine(bm);
  std::uint64_t n_inf = num_points(f.size(), 2);  // points with J = 0 come first
  for (std::uint64_t r = 0; r < n_inf; ++r) {
    Pt p = point_at(f, 3, r);
    if (bab_form(bm, p) == 0) pts.push_back(p);
  }
  std::sort(pts.begin(), pts.end());
  return pts;
}

inline std::vector<Pt> points_mab(const BMParams& bm) {
  std::vector<Pt> pts = points_bab_affine(bm);
  std::vector<Pt> cone = points_fcone(*bm.f);
  pts.insert(pts.end(), cone.begin(), cone.end());
  std::sort(pts.begin(), pts.end());
  return pts;
}

// Affine points of V^3_eps. Gamma always lands in GF(q), so for each (x,y)
// the z values are the q solutions of z^q + z = Gamma(x) + Gamma(y).
inline std::vector<Pt> points_veps_affine(const BTParams& bt) {
  const Gf2& f = *bt.f;
  std::vector<Pt> pts;
  pts.reserve(static_cast<std::size_t>(f.size()) * f.size() * f.q());
  for (std::uint32_t x = 0; x < f.size(); ++x) {
    for (std::uint32_t y = 0; y < f.size(); ++y) {
      Fel rhs = f.add(gamma_eps(bt, static_cast<Fel>(x)), gamma_eps(bt, static_cast<Fel>(y)));
      require(f.in_base(rhs), errc::domain_error, "Gamma sum escaped GF(q)");
      // z^q + z = c1(z) in this basis, so c1(z) is pinned and c0(z) is free.
      for (std::uint32_t z0 = 0; z0 < f.q(); ++z0)
        pts.push_back(make_pt({1, static_cast<Fel>(x), static_cast<Fel>(y),
                               f.make_elem(static_cast<Fel>(z0), f.c0(rhs))}));
    }
  }
  return pts;
}

inline std::vector<Pt> points_veps(const BTParams& bt) {
  const Gf2& f = *bt.f;
  std::vector<Pt> pts = points_veps_affine(bt);
  pts.push_back(make_pt({0, 0, 0, 1}));
  for (Fel c : bt.infinity_slopes)
    for (std::uint32_t t = 0; t < f.size(); ++t)
      pts.push_back(make_pt({0, 1, c, static_cast<Fel>(t)}));
  std::sort(pts.begin(), pts.end());
  return pts;
}

inline std::vector<Pt> points_heps(const BTParams& bt) {
  std::vector<Pt> pts = points_veps_affine(bt);
  std::vector<Pt> cone = points_fcone(*bt.f);
  pts.insert(pts.end(), cone.begin(), cone.end());
  std::sort(pts.begin(), pts.end());
  return pts;
}

inline std::vector<Pt> points_hermitian(const Gf2& f, const HermitianMx& m) {
  check_hermitian(f, m);
  std::vector<Pt> pts;
  std::uint64_t total = num_points(f.size(), 3);
  for (std::uint64_t r = 0; r < total; ++r) {
    Pt p = point_at(f, 3, r);
    if (hermitian_member(f, m, p)) pts.push_back(p);
  }
  return pts;  // already in enumeration order
}

// ---------------------------------------------------------------------------
// Tagged variety description

enum class VarietyTag { hermitian, bab, fcone, mab, veps, heps };

struct VarietySpec {
  VarietyTag tag;
  std::optional<BMParams> bm;
  std::optional<BTParams> bt;
  std::optional<HermitianMx> herm;

  const Gf2& field() const {
    if (bm) return *bm->f;
    if (bt) return *bt->f;
    throw error(errc::unsupported_variety, "variety spec carries no field");
  }
};

inline bool member(const VarietySpec& v, const Pt& p) {
  switch (v.tag) {
    case VarietyTag::hermitian:
      return hermitian_member(v.field(), v.herm ? *v.herm : HermitianMx::identity(), p);
    case VarietyTag::bab:
      return bab_member(*v.bm, p);
    case VarietyTag::fcone:
      return fcone_member(v.field(), p);
    case VarietyTag::mab:
      return mab_member(*v.bm, p);
    case VarietyTag::veps:
      return veps_member(*v.bt, p);
    case VarietyTag::heps:
      return heps_member(*v.bt, p);
  }
  throw error(errc::unsupported_variety, "unknown variety tag");
}

inline std::vector<Pt> points(const VarietySpec& v) {
  switch (v.tag) {
    case VarietyTag::hermitian:
      return points_hermitian(v.field(), v.herm ? *v.herm : HermitianMx::identity());
    case VarietyTag::bab:
      return points_bab(*v.bm);
    case VarietyTag::fcone:
      return points_fcone(v.field());
    case VarietyTag::mab:
      return points_mab(*v.bm);
    case VarietyTag::veps:
      return points_veps(*v.bt);
    case VarietyTag::heps:
      return points_heps(*v.bt);
  }
  throw error(errc::unsupported_variety, "unknown variety tag");
}

// ---------------------------------------------------------------------------
// Closed-form counts of inequivalent constructions

namespace detail3 {

inline std::uint64_t totient(std::uint64_t n) {
  std::uint64_t out = n;
  for (std::uint64_t d : detail::prime_factors(n)) out = out / d * (d - 1);
  return out;
}

inline std::vector<std::uint64_t> divisors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 1; d <= n; ++d)
    if (n % d == 0) out.push_back(d);
  return out;
}

inline std::uint64_t ipow(std::uint64_t b, std::uint64_t k) {
  std::uint64_t r = 1;
  while (k--) r *= b;
  return r;
}

}  // namespace detail3

// Number of projectively inequivalent BM unitals in PG(2,q^2), q = p^n >= 4:
// (1/2n) [ n0 + sum_{k|n} phi(2n/k) p^k ], n0 the odd part of n (0 if p = 2).
inline std::uint64_t bm_unital_count(std::uint64_t p, std::uint64_t n) {
  require(detail::is_prime(p), errc::not_prime, "p must be prime");
  require(detail3::ipow(p, n) >= 4, errc::domain_error, "unital count needs q >= 4");
  std::uint64_t n0 = 0;
  if (p > 2) {
    n0 = n;
    while (n0 % 2 == 0) n0 /= 2;
  }
  std::uint64_t sum = n0;
  for (std::uint64_t k : detail3::divisors(n)) sum += detail3::totient(2 * n / k) * detail3::ipow(p, k);
  require(sum % (2 * n) == 0, errc::domain_error, "count formula did not divide evenly");
  return sum / (2 * n);
}

// Number of projectively inequivalent BM quasi-Hermitian varieties M_{a,b} in
// PG(3,q^2), q = p^n with p odd: (1/n) sum_{k|n} phi(n/k) p^k - 2.
inline std::uint64_t bm_variety_count(std::uint64_t p, std::uint64_t n) {
  require(detail::is_prime(p), errc::not_prime, "p must be prime");
  require(p % 2 == 1, errc::domain_error, "variety count is stated for odd p");
  std::uint64_t sum = 0;
  for (std::uint64_t k : detail3::divisors(n)) sum += detail3::totient(n / k) * detail3::ipow(p, k);
  require(sum % n == 0, errc::domain_error, "count formula did not divide evenly");
  return sum / n - 2;
}

}  // namespace qhvar
