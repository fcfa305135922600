#pragma once
// Points and hyperplanes of PG(n,q): normalization, deterministic exhaustive
// enumeration with O(1) rank/unrank, incidence tests and lines.
//
// A point is a coordinate vector normalized so its first non-zero entry is 1.
// The enumeration order is plain lexicographic on normalized vectors under
// the canonical element ordering, so the stream starts at (0,...,0,1) and
// ends at (1, q-1, ..., q-1). Hyperplanes are the same stream read as dual
// vectors.

#include <array>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "qhvar/common.hpp"
#include "qhvar/ff.hpp"

namespace qhvar {

template <class F>
concept FieldLike = requires(const F f, Fel a, Fel b) {
  { f.size() } -> std::convertible_to<std::uint32_t>;
  { f.add(a, b) } -> std::convertible_to<Fel>;
  { f.mul(a, b) } -> std::convertible_to<Fel>;
  { f.neg(a) } -> std::convertible_to<Fel>;
  { f.inv(a) } -> std::convertible_to<Fel>;
};

// A projective point (or dual vector) with up to 8 coordinates. Unused slots
// stay zero so that default comparison works.
struct Pt {
  std::array<Fel, 8> c{};
  std::uint8_t n = 0;

  Fel& operator[](std::size_t i) { return c[i]; }
  const Fel& operator[](std::size_t i) const { return c[i]; }

  friend bool operator==(const Pt& a, const Pt& b) = default;
  friend auto operator<=>(const Pt& a, const Pt& b) = default;
};

inline Pt make_pt(std::initializer_list<Fel> coords) {
  Pt p;
  p.n = static_cast<std::uint8_t>(coords.size());
  std::size_t i = 0;
  for (Fel v : coords) p.c[i++] = v;
  return p;
}

// Leading non-zero coordinate index; n if the vector is zero.
inline std::size_t lead_index(const Pt& p) {
  for (std::size_t i = 0; i < p.n; ++i)
    if (p.c[i] != 0) return i;
  return p.n;
}

template <FieldLike F>
Pt normalize(const F& field, Pt p) {
  std::size_t lead = lead_index(p);
  require(lead < p.n, errc::zero_vector, "cannot normalize the zero vector");
  Fel scale = field.inv(p.c[lead]);
  if (p.c[lead] != 1)
    for (std::size_t i = lead; i < p.n; ++i) p.c[i] = field.mul(p.c[i], scale);
  return p;
}

inline bool is_normalized(const Pt& p) {
  std::size_t lead = lead_index(p);
  return lead < p.n && p.c[lead] == 1;
}

// (q^(n+1) - 1) / (q - 1)
inline std::uint64_t num_points(std::uint32_t q, std::uint32_t n) {
  std::uint64_t total = 0, power = 1;
  for (std::uint32_t i = 0; i <= n; ++i) {
    total += power;
    power *= q;
  }
  return total;
}

// Rank of a normalized point in the enumeration of PG(n,q). Points whose
// leading 1 sits further right come first; within a block the free suffix is
// read as a base-q number, leftmost coordinate most significant.
template <FieldLike F>
std::uint64_t rank_of(const F& field, const Pt& p) {
  const std::uint32_t q = field.size();
  const std::uint32_t n = p.n - 1;
  std::size_t lead = lead_index(p);
  require(lead < p.n && p.c[lead] == 1, errc::domain_error, "rank_of expects a normalized point");
  std::uint64_t before = 0, power = 1;
  for (std::uint32_t j = 0; j < n - lead; ++j) {
    before += power;
    power *= q;
  }
  std::uint64_t suffix = 0;
  for (std::size_t i = lead + 1; i < p.n; ++i) suffix = suffix * q + p.c[i];
  return before + suffix;
}

template <FieldLike F>
Pt point_at(const F& field, std::uint32_t n, std::uint64_t rank) {
  const std::uint32_t q = field.size();
  Pt p;
  p.n = static_cast<std::uint8_t>(n + 1);
  std::uint64_t block = 1;  // size of the block with lead position j
  std::uint32_t lead = n;
  std::uint64_t r = rank;
  while (r >= block) {
    r -= block;
    block *= q;
    require(lead > 0, errc::domain_error, "rank out of range");
    --lead;
  }
  p.c[lead] = 1;
  for (std::size_t i = n; i > lead; --i) {
    p.c[i] = static_cast<Fel>(r % q);
    r /= q;
  }
  return p;
}

template <FieldLike F>
Fel dot(const F& field, const Pt& a, const Pt& b) {
  require(a.n == b.n, errc::dimension_mismatch, "dot of vectors with different dimensions");
  Fel acc = 0;
  for (std::size_t i = 0; i < a.n; ++i) acc = field.add(acc, field.mul(a.c[i], b.c[i]));
  return acc;
}

template <FieldLike F>
bool incident(const F& field, const Pt& point, const Pt& hyperplane) {
  return dot(field, point, hyperplane) == 0;
}

// The q+1 points lambda*P + mu*Q, (lambda:mu) in PG(1,q), normalized.
template <FieldLike F>
std::vector<Pt> line_through(const F& field, const Pt& p, const Pt& q_pt) {
  require(p.n == q_pt.n, errc::dimension_mismatch, "line through points of different spaces");
  require(!(p == q_pt), errc::equal_points, "line through a repeated point");
  std::vector<Pt> line;
  line.reserve(field.size() + 1);
  line.push_back(q_pt);  // (0:1)
  for (std::uint32_t mu = 0; mu < field.size(); ++mu) {
    Pt r;
    r.n = p.n;
    for (std::size_t i = 0; i < p.n; ++i)
      r.c[i] = field.add(p.c[i], field.mul(static_cast<Fel>(mu), q_pt.c[i]));
    line.push_back(normalize(field, r));
  }
  return line;
}

// Colon-separated canonical integer encoding, e.g. "0:1:2:0".
inline std::string to_string(const Pt& p) {
  std::ostringstream os;
  for (std::size_t i = 0; i < p.n; ++i) {
    if (i) os << ':';
    os << p.c[i];
  }
  return os.str();
}

inline Pt pt_from_string(const std::string& s) {
  Pt p;
  std::istringstream is(s);
  std::string tok;
  std::size_t i = 0;
  while (std::getline(is, tok, ':')) {
    require(i < 8, errc::dimension_mismatch, "too many coordinates");
    p.c[i++] = static_cast<Fel>(std::stoul(tok));
  }
  p.n = static_cast<std::uint8_t>(i);
  require(p.n > 0, errc::zero_vector, "empty point string");
  return p;
}

// Dense integer encoding of a normalized point, used for fast set operations
// on materialized point lists.
inline std::uint64_t pack(const Pt& p, std::uint32_t q) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < p.n; ++i) v = v * q + p.c[i];
  return v;
}

}  // namespace qhvar
