#pragma once
// The PG(6,q) side of the correspondence: the quadratic cones B' attached to
// the BM varieties (separate odd and even forms), the non-quadratic BT
// hypersurface C^3_eps, the quadric at infinity, the set Fbar partitioned by
// the spread, the 6x6 base matrix with exact determinant, and quadric
// classification by exact point count.

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "qhvar/common.hpp"
#include "qhvar/ff.hpp"
#include "qhvar/linalg.hpp"
#include "qhvar/pg.hpp"
#include "qhvar/varieties.hpp"

namespace qhvar {

// A quadratic form in N variables; only the upper triangle of coefficients is
// used (coef of x_i x_j stored at i <= j).
template <std::size_t N>
struct QuadForm {
  std::array<Fel, N * N> coef{};

  Fel& at(std::size_t i, std::size_t j) { return coef[i * N + j]; }
  const Fel& at(std::size_t i, std::size_t j) const { return coef[i * N + j]; }

  template <FieldLike F>
  Fel eval(const F& field, const Pt& p) const {
    require(p.n == N, errc::dimension_mismatch, "point dimension does not match the form");
    Fel acc = 0;
    for (std::size_t i = 0; i < N; ++i) {
      if (p[i] == 0) continue;
      for (std::size_t j = i; j < N; ++j) {
        if (at(i, j) == 0 || p[j] == 0) continue;
        acc = field.add(acc, field.mul(at(i, j), field.mul(p[i], p[j])));
      }
    }
    return acc;
  }

  // Polar (bilinear) matrix: entry (i,j) = coef(x_i x_j) off the diagonal and
  // 2*coef(x_i^2) on it. Over even characteristic the diagonal vanishes.
  template <FieldLike F>
  Mat polar(const F& field) const {
    Mat m(N, N);
    for (std::size_t i = 0; i < N; ++i) {
      for (std::size_t j = 0; j < N; ++j) {
        if (i == j)
          m.at(i, i) = field.add(at(i, i), at(i, i));
        else
          m.at(i, j) = at(std::min(i, j), std::max(i, j));
      }
    }
    return m;
  }
};

// ---------------------------------------------------------------------------
// The cone B' and its base

// Quadratic form of B' in PG(6,q), coordinates (x0,...,x6); the vertex
// direction x5 does not occur.
inline QuadForm<7> bprime_quad(const BMParams& bm) {
  require(bm.cond_ok, errc::invalid_params, "BM parameters fail the (a,b) condition");
  const Gf2& f2 = *bm.f;
  const Gf& f = f2.base();
  const Fel a0 = f2.c0(bm.a), a1 = f2.c1(bm.a), b1 = f2.c1(bm.b);
  const Fel d = f2.delta();
  QuadForm<7> q;
  q.at(0, 6) = 1;
  if (f2.kind() == EpsKind::square_root) {
    // x0x6 + 2a0(x1x2+x3x4) + a1(x1^2+x3^2+d(x2^2+x4^2)) - b1(x1^2-dx2^2+x3^2-dx4^2)
    Fel two_a0 = f.add(a0, a0);
    Fel sq_odd = f.sub(a1, b1);
    Fel sq_even = f.mul(d, f.add(a1, b1));
    q.at(1, 2) = two_a0;
    q.at(3, 4) = two_a0;
    q.at(1, 1) = sq_odd;
    q.at(3, 3) = sq_odd;
    q.at(2, 2) = sq_even;
    q.at(4, 4) = sq_even;
  } else {
    // x0x6 + a0(x2^2+x4^2) + a1(x1^2+x2^2+dx2^2+x3^2+x4^2+dx4^2)
    //      + b1(x1^2+dx2^2+x1x2+x3^2+dx4^2+x3x4)
    Fel c1sq = f.add(a1, b1);
    Fel c2sq = f.add(f.add(a0, f.mul(f.add(1, d), a1)), f.mul(d, b1));
    q.at(1, 1) = c1sq;
    q.at(3, 3) = c1sq;
    q.at(2, 2) = c2sq;
    q.at(4, 4) = c2sq;
    q.at(1, 2) = b1;
    q.at(3, 4) = b1;
  }
  return q;
}

inline bool bprime_member(const BMParams& bm, const Pt& p) {
  return bprime_quad(bm).eval(bm.f->base(), p) == 0;
}

// Base of the cone in PG(5,q), coordinate order [x0,x1,x2,x3,x4,x6].
inline QuadForm<6> base_quad(const BMParams& bm) {
  QuadForm<7> cone = bprime_quad(bm);
  QuadForm<6> base;
  constexpr std::size_t map[6] = {0, 1, 2, 3, 4, 6};
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = i; j < 6; ++j) base.at(i, j) = cone.at(map[i], map[j]);
  return base;
}

// The Gram array of the base as printed, plus (for q even) the alternating
// companion with zero diagonal and b_ji = -b_ij = -a_ij.
struct QuadricMatrix {
  Mat a;
  std::optional<Mat> b;
};

inline QuadricMatrix base_matrix(const BMParams& bm) {
  const Gf& f = bm.f->base();
  QuadricMatrix m;
  m.a = base_quad(bm).polar(f);
  if (f.p() == 2) {
    Mat alt(6, 6);
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = i + 1; j < 6; ++j) {
        alt.at(i, j) = m.a.at(i, j);
        alt.at(j, i) = f.neg(m.a.at(i, j));
      }
    m.b = alt;
  }
  return m;
}

// Closed form of det(A): -16 (d a1^2 - d b1^2 - a0^2)^2 for q odd, -b1^4 for
// q even, both reduced into GF(q).
inline Fel base_det_closed_form(const BMParams& bm) {
  const Gf2& f2 = *bm.f;
  const Gf& f = f2.base();
  const Fel a0 = f2.c0(bm.a), a1 = f2.c1(bm.a), b1 = f2.c1(bm.b);
  if (f2.kind() == EpsKind::square_root) {
    Fel d = f2.delta();
    Fel inner = f.sub(f.sub(f.mul(d, f.mul(a1, a1)), f.mul(d, f.mul(b1, b1))), f.mul(a0, a0));
    Fel sixteen = 0;
    for (int i = 0; i < 16; ++i) sixteen = f.add(sixteen, 1);
    return f.neg(f.mul(sixteen, f.mul(inner, inner)));
  }
  Fel b2 = f.mul(b1, b1);
  return f.neg(f.mul(b2, b2));
}

// ---------------------------------------------------------------------------
// Sections at infinity of B'

// The quadric cut out by B' inside Pi_inf, as a form in (x1,...,x4). For q
// odd this is (a1-b1)(x1^2+x3^2) + d(a1+b1)(x2^2+x4^2) + 2a0(x1x2+x3x4); for
// q even (a0+a1)(x2^2+x4^2) + (a1+b1)(x1^2+dx2^2+x3^2+dx4^2) + b1(x1x2+x3x4).
inline QuadForm<4> infinity_quad(const BMParams& bm) {
  const Gf2& f2 = *bm.f;
  const Gf& f = f2.base();
  const Fel a0 = f2.c0(bm.a), a1 = f2.c1(bm.a), b1 = f2.c1(bm.b);
  const Fel d = f2.delta();
  QuadForm<4> q;
  if (f2.kind() == EpsKind::square_root) {
    Fel odd_sq = f.sub(a1, b1);
    Fel even_sq = f.mul(d, f.add(a1, b1));
    q.at(0, 0) = odd_sq;
    q.at(2, 2) = odd_sq;
    q.at(1, 1) = even_sq;
    q.at(3, 3) = even_sq;
    q.at(0, 1) = f.add(a0, a0);
    q.at(2, 3) = f.add(a0, a0);
  } else {
    Fel mixed = f.add(a0, a1);
    Fel norm_c = f.add(a1, b1);
    q.at(1, 1) = f.add(mixed, f.mul(d, norm_c));
    q.at(3, 3) = f.add(mixed, f.mul(d, norm_c));
    q.at(0, 0) = norm_c;
    q.at(2, 2) = norm_c;
    q.at(0, 1) = b1;
    q.at(2, 3) = b1;
  }
  return q;
}

inline bool infinity_quadric_member(const BMParams& bm, const Pt& p) {
  require(p.n == 7, errc::dimension_mismatch, "expected a point of PG(6,q)");
  if (p[0] != 0) return false;
  Pt sub = make_pt({p[1], p[2], p[3], p[4]});
  return infinity_quad(bm).eval(bm.f->base(), sub) == 0;
}

// Fbar: x0 = 0, x1^2 - d x2^2 + x3^2 - d x4^2 = 0 (q odd). The even analogue
// is only available as the union of the spread lines attached to F.
inline bool fbar_member(const Gf2& f2, const Pt& p) {
  require(f2.characteristic() != 2, errc::even_characteristic,
          "Fbar has a single defining equation only for q odd");
  require(p.n == 7, errc::dimension_mismatch, "expected a point of PG(6,q)");
  if (p[0] != 0) return false;
  const Gf& f = f2.base();
  const Fel d = f2.delta();
  Fel v = f.sub(f.mul(p[1], p[1]), f.mul(d, f.mul(p[2], p[2])));
  v = f.add(v, f.sub(f.mul(p[3], p[3]), f.mul(d, f.mul(p[4], p[4]))));
  return v == 0;
}

inline std::vector<Pt> points_fbar(const Gf2& f2) {
  const Gf& f = f2.base();
  std::vector<Pt> pts;
  std::uint64_t n_inf = num_points(f.size(), 5);  // Pi_inf points come first
  for (std::uint64_t r = 0; r < n_inf; ++r) {
    Pt p = point_at(f, 6, r);
    if (fbar_member(f2, p)) pts.push_back(p);
  }
  return pts;
}

// The Hermitian counterpart of B': the cone representing the Hermitian
// surface z^q - z = (b^q - b)(x^(q+1) + y^(q+1)) that is tangent to the
// hyperplane at infinity. Used as the Q1-Q3 positive control.
inline QuadForm<7> hermitian_tangent_cone(const Gf2& f2, Fel b) {
  require(f2.characteristic() != 2, errc::even_characteristic,
          "the tangent-cone control is implemented for q odd");
  require(!f2.in_base(b), errc::invalid_params, "b must lie outside GF(q)");
  const Gf& f = f2.base();
  const Fel b1 = f2.c1(b);
  const Fel d = f2.delta();
  QuadForm<7> q;
  q.at(0, 6) = 1;
  q.at(1, 1) = f.neg(b1);
  q.at(3, 3) = f.neg(b1);
  q.at(2, 2) = f.mul(d, b1);
  q.at(4, 4) = f.mul(d, b1);
  return q;
}

// ---------------------------------------------------------------------------
// BT hypersurface C^3_eps

// Homogenized equation:
// x0^(s+1) x6 = x1^(s+2) + x0^s x1 x2 + x0^2 x2^s + x3^(s+2) + x0^s x3 x4
//             + x0^2 x4^s,  s = sigma.
inline bool c3eps_member(const BTParams& bt, const Pt& p) {
  require(p.n == 7, errc::dimension_mismatch, "expected a point of PG(6,q)");
  const Gf& f = bt.f->base();
  const std::uint64_t s = bt.sigma;
  Fel lhs = f.mul(f.pow(p[0], s + 1), p[6]);
  Fel x0s = f.pow(p[0], s);
  Fel x02 = f.mul(p[0], p[0]);
  Fel rhs = f.pow(p[1], s + 2);
  rhs = f.add(rhs, f.mul(x0s, f.mul(p[1], p[2])));
  rhs = f.add(rhs, f.mul(x02, f.pow(p[2], s)));
  rhs = f.add(rhs, f.pow(p[3], s + 2));
  rhs = f.add(rhs, f.mul(x0s, f.mul(p[3], p[4])));
  rhs = f.add(rhs, f.mul(x02, f.pow(p[4], s)));
  return lhs == rhs;
}

inline std::vector<Pt> points_c3eps(const BTParams& bt) {
  const Gf& f = bt.f->base();
  std::vector<Pt> pts;
  std::uint64_t total = num_points(f.size(), 6);
  for (std::uint64_t r = 0; r < total; ++r) {
    Pt p = point_at(f, 6, r);
    if (c3eps_member(bt, p)) pts.push_back(p);
  }
  return pts;
}

inline Pt vertex_v() { return make_pt({0, 0, 0, 0, 0, 1, 0}); }

struct UnionOfLines {
  bool set_equal = false;
  bool count_identity = false;
  std::uint64_t c3_size = 0;
  std::uint64_t cprime_size = 0;
  std::uint64_t union_size = 0;
};

// C^3_eps must equal the union of the lines joining V = (0,...,0,1,0) to the
// points of its x5 = 0 section, with |C^3| = q |C'^3| + 1.
inline UnionOfLines union_of_lines_check(const BTParams& bt) {
  const Gf& f = bt.f->base();
  const std::uint32_t q = f.size();
  std::vector<Pt> c3 = points_c3eps(bt);
  UnionOfLines out;
  out.c3_size = c3.size();

  std::vector<std::uint64_t> c3_codes;
  c3_codes.reserve(c3.size());
  for (const Pt& p : c3) c3_codes.push_back(pack(p, q));
  std::sort(c3_codes.begin(), c3_codes.end());

  Pt v = vertex_v();
  std::vector<std::uint64_t> union_codes;
  for (const Pt& p : c3) {
    if (p[5] != 0) continue;  // C' = C^3 intersect {x5 = 0}
    ++out.cprime_size;
    for (const Pt& r : line_through(f, v, p)) union_codes.push_back(pack(r, q));
  }
  union_codes.push_back(pack(v, q));
  std::sort(union_codes.begin(), union_codes.end());
  union_codes.erase(std::unique(union_codes.begin(), union_codes.end()), union_codes.end());

  out.union_size = union_codes.size();
  out.count_identity = out.c3_size == static_cast<std::uint64_t>(q) * out.cprime_size + 1;
  out.set_equal = union_codes == c3_codes;
  return out;
}

// ---------------------------------------------------------------------------
// Quadric classification

enum class QuadricType { hyperbolic, elliptic, parabolic, degenerate };

inline const char* to_string(QuadricType t) {
  switch (t) {
    case QuadricType::hyperbolic: return "hyperbolic";
    case QuadricType::elliptic: return "elliptic";
    case QuadricType::parabolic: return "parabolic";
    case QuadricType::degenerate: return "degenerate";
  }
  return "?";
}

// |Q+(2n-1,q)| and |Q-(2n-1,q)|
inline std::uint64_t hyperbolic_quadric_size(std::uint64_t q, std::uint32_t n) {
  std::uint64_t qn = 1, qn1 = 1;
  for (std::uint32_t i = 0; i < n; ++i) qn *= q;
  for (std::uint32_t i = 0; i + 1 < n; ++i) qn1 *= q;
  return (qn1 + 1) * ((qn - 1) / (q - 1));
}

inline std::uint64_t elliptic_quadric_size(std::uint64_t q, std::uint32_t n) {
  std::uint64_t qn = 1, qn1 = 1;
  for (std::uint32_t i = 0; i < n; ++i) qn *= q;
  for (std::uint32_t i = 0; i + 1 < n; ++i) qn1 *= q;
  return (qn1 - 1) / (q - 1) * (qn + 1);
}

template <std::size_t N, FieldLike F>
std::uint64_t quadric_point_count(const F& field, const QuadForm<N>& form) {
  std::uint64_t total = num_points(field.size(), N - 1);
  std::uint64_t count = 0;
  for (std::uint64_t r = 0; r < total; ++r)
    if (form.eval(field, point_at(field, N - 1, r)) == 0) ++count;
  return count;
}

// Projective singular points: radical vectors of the polar form on which the
// quadratic form also vanishes.
template <std::size_t N, FieldLike F>
std::vector<Pt> singular_points(const F& field, const QuadForm<N>& form) {
  auto basis_vecs = kernel_basis(field, form.polar(field));
  std::vector<Pt> gens;
  for (const auto& v : basis_vecs) {
    Pt p;
    p.n = N;
    for (std::size_t i = 0; i < N; ++i) p.c[i] = v[i];
    gens.push_back(p);
  }
  std::vector<Pt> out;
  for (const Pt& p : span_points(field, gens))
    if (form.eval(field, p) == 0) out.push_back(p);
  return out;
}

// Classification by exact point count. For odd q the discriminant route
// (whether -det(A) is a square) is available as an independent cross-check.
template <std::size_t N, FieldLike F>
QuadricType classify_quadric(const F& field, const QuadForm<N>& form) {
  const std::uint64_t q = field.size();
  const std::uint64_t count = quadric_point_count(field, form);
  if constexpr (N % 2 == 0) {
    constexpr std::uint32_t n = N / 2;
    if (count == hyperbolic_quadric_size(q, n)) return QuadricType::hyperbolic;
    if (count == elliptic_quadric_size(q, n)) return QuadricType::elliptic;
  } else {
    // Ambient PG(N-1,q) of even projective dimension: the non-degenerate
    // type is parabolic with (q^(N-1) - 1)/(q - 1) points.
    if (count == num_points(static_cast<std::uint32_t>(q), N - 2)) return QuadricType::parabolic;
  }
  require(!singular_points(field, form).empty(), errc::domain_error,
          "point count matches no quadric type yet the form is non-degenerate");
  throw error(errc::degenerate_quadric, "quadric is degenerate (count " + std::to_string(count) +
                                            " matches no non-degenerate type)");
}

// Odd-characteristic discriminant rule for PG(5,q): the base is hyperbolic
// exactly when -det(A) is a square.
inline bool hyperbolic_by_discriminant(const Gf& f, const Mat& a) {
  Fel det = determinant(f, a);
  require(det != 0, errc::degenerate_quadric, "discriminant test needs a non-degenerate form");
  return f.is_square(f.neg(det));
}

}  // namespace qhvar
