#pragma once
// The explicit Barlotti-Cofman correspondence between PG(3,q^2) and PG(6,q):
// the coordinate bijection psi on affine points and the Desarguesian line
// spread of the hyperplane at infinity Pi_inf : x0 = 0, one spread line per
// infinity point of PG(3,q^2). The linear systems cutting out the spread
// lines differ between odd and even characteristic; both are implemented
// exactly as published.

#include <array>
#include <cstdint>
#include <vector>

#include "qhvar/common.hpp"
#include "qhvar/ff.hpp"
#include "qhvar/linalg.hpp"
#include "qhvar/pg.hpp"

namespace qhvar {

// psi: (1, x1+eps x2, x3+eps x4, x5+eps x6) -> (1, x1, ..., x6).
inline Pt psi(const Gf2& f, const Pt& p) {
  require(p.n == 4, errc::dimension_mismatch, "psi expects a point of PG(3,q^2)");
  require(p[0] != 0, errc::point_at_infinity, "psi is defined on affine points only");
  Pt a = normalize(f, p);
  return make_pt({1, f.c0(a[1]), f.c1(a[1]), f.c0(a[2]), f.c1(a[2]), f.c0(a[3]), f.c1(a[3])});
}

inline Pt psi_inverse(const Gf2& f, const Pt& p) {
  require(p.n == 7, errc::dimension_mismatch, "psi_inverse expects a point of PG(6,q)");
  require(p[0] != 0, errc::point_at_infinity, "psi_inverse is defined on affine points only");
  Pt a = normalize(f.base(), p);
  return make_pt({1, f.make_elem(a[1], a[2]), f.make_elem(a[3], a[4]), f.make_elem(a[5], a[6])});
}

// Canonical forms of infinity points: (0,1,k,h), (0,0,1,h), (0,0,0,1).
enum class InfType : std::uint8_t { a, b, c };

struct SpreadLine {
  Pt label;                // infinity point of PG(3,q^2), normalized
  InfType type{};
  std::array<Pt, 2> span;  // images of the parameter pairs (1,0) and (0,1)
  std::vector<Pt> pts;     // all q+1 points, in Pi_inf
};

// The spread line r_P attached to an infinity point P. The q+1 points are
// parametrized by the free coordinate pair of the published linear system:
// (x1,x2) for type a, (x3,x4) for type b, (x5,x6) for type c.
inline SpreadLine spread_line(const Gf2& f2, const Pt& p) {
  require(p.n == 4, errc::dimension_mismatch, "spread_line expects a point of PG(3,q^2)");
  require(p[0] == 0, errc::not_at_infinity, "spread lines are attached to infinity points");
  const Gf& f = f2.base();
  const bool even = f2.kind() == EpsKind::artin_schreier;
  const Fel delta = f2.delta();

  SpreadLine line;
  line.label = normalize(f2, p);

  Fel k = 0, h = 0;
  if (line.label[1] != 0) {
    line.type = InfType::a;
    k = line.label[2];
    h = line.label[3];
  } else if (line.label[2] != 0) {
    line.type = InfType::b;
    h = line.label[3];
  } else {
    line.type = InfType::c;
  }
  const Fel k0 = f2.c0(k), k1 = f2.c1(k), h0 = f2.c0(h), h1 = f2.c1(h);

  auto pair_row = [&](Fel c0v, Fel c1v, Fel u, Fel v) {
    // (c0 + eps c1) acting on the free pair (u,v): first row c0*u + delta*c1*v,
    // second row c1*u + c0*v (odd) or c1*u + (c0+c1)*v (even).
    Fel first = f.add(f.mul(c0v, u), f.mul(delta, f.mul(c1v, v)));
    Fel second = even ? f.add(f.mul(c1v, u), f.mul(f.add(c0v, c1v), v))
                      : f.add(f.mul(c1v, u), f.mul(c0v, v));
    return std::pair<Fel, Fel>{first, second};
  };

  auto point_for = [&](Fel u, Fel v) {
    switch (line.type) {
      case InfType::a: {
        auto [x3, x4] = pair_row(k0, k1, u, v);
        auto [x5, x6] = pair_row(h0, h1, u, v);
        return make_pt({0, u, v, x3, x4, x5, x6});
      }
      case InfType::b: {
        auto [x5, x6] = pair_row(h0, h1, u, v);
        return make_pt({0, 0, 0, u, v, x5, x6});
      }
      case InfType::c:
        return make_pt({0, 0, 0, 0, 0, u, v});
    }
    throw error(errc::domain_error, "unreachable");
  };

  line.span = {point_for(1, 0), point_for(0, 1)};
  line.pts.reserve(f.size() + 1);
  line.pts.push_back(point_for(0, 1));
  for (std::uint32_t v = 0; v < f.size(); ++v) line.pts.push_back(point_for(1, static_cast<Fel>(v)));
  return line;
}

// All q^4 + q^2 + 1 spread lines, ordered by the enumeration order of their
// labels (the infinity points are exactly the initial ranks of PG(3,q^2)).
inline std::vector<SpreadLine> enum_spread(const Gf2& f2) {
  std::uint64_t n_inf = num_points(f2.size(), 2);
  std::vector<SpreadLine> spread;
  spread.reserve(n_inf);
  for (std::uint64_t r = 0; r < n_inf; ++r) spread.push_back(spread_line(f2, point_at(f2, 3, r)));
  return spread;
}

// Model consistency check for one affine line of PG(3,q^2): the psi-images of
// its q^2 affine points together with the spread line of its infinity point
// must span a single plane of PG(6,q) containing all of them.
inline bool incidence_oracle(const Gf2& f2, const Pt& affine_pt, const Pt& direction) {
  require(affine_pt.n == 4 && direction.n == 4, errc::dimension_mismatch,
          "incidence oracle expects points of PG(3,q^2)");
  require(affine_pt[0] != 0, errc::degenerate_line, "base point must be affine");
  require(direction[0] == 0 && lead_index(direction) < 4, errc::degenerate_line,
          "direction must be a point at infinity");
  const Gf& f = f2.base();
  Pt a = normalize(f2, affine_pt);
  Pt d = normalize(f2, direction);
  SpreadLine r = spread_line(f2, d);

  // Reduced basis of the candidate plane.
  std::vector<Pt> basis{psi(f2, a), r.span[0], r.span[1]};
  Mat m(3, 7);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 7; ++j) m.at(i, j) = basis[i][j];
  if (row_reduce(f, m) != 3) return false;

  // Every affine point of the line must reduce to zero against the basis.
  for (std::uint32_t t = 0; t < f2.size(); ++t) {
    Pt q3 = make_pt({1, f2.add(a[1], f2.mul(static_cast<Fel>(t), d[1])),
                     f2.add(a[2], f2.mul(static_cast<Fel>(t), d[2])),
                     f2.add(a[3], f2.mul(static_cast<Fel>(t), d[3]))});
    Pt img = psi(f2, q3);
    Mat ext(4, 7);
    for (std::size_t j = 0; j < 7; ++j) {
      ext.at(0, j) = m.at(0, j);
      ext.at(1, j) = m.at(1, j);
      ext.at(2, j) = m.at(2, j);
      ext.at(3, j) = img[j];
    }
    if (row_reduce(f, ext) != 3) return false;
  }
  return true;
}

}  // namespace qhvar
