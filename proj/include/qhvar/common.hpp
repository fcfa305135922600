#pragma once
// Shared scalar types, error reporting and the deterministic RNG used for
// sampled verification modes.

#include <cstdint>
#include <stdexcept>
#include <string>

namespace qhvar {

// Field element code. Elements of a finite field are identified with the
// integer value of their coefficient vector, least significant coefficient
// first (base p for GF(p^e), base q for the quadratic extension GF(q^2)).
// All supported fields have at most 2^16 elements.
using Fel = std::uint16_t;

enum class errc {
  not_prime,
  reducible_modulus,
  division_by_zero,
  field_mismatch,
  zero_vector,
  dimension_mismatch,
  equal_points,
  point_at_infinity,
  not_at_infinity,
  invalid_params,
  even_characteristic,
  degenerate_line,
  not_hermitian_matrix,
  singular_matrix,
  degenerate_quadric,
  unsupported_variety,
  even_e,
  domain_error,
  config_error,
  resource_limit,
};

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

inline void require(bool ok, errc code, const std::string& what) {
  if (!ok) throw error(code, what);
}

// splitmix64; used wherever a seeded deterministic stream is needed.
struct SplitMix64 {
  std::uint64_t state;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // Unbiased draw from [0, bound).
  std::uint64_t below(std::uint64_t bound) {
    std::uint64_t limit = bound * (UINT64_MAX / bound);
    std::uint64_t v;
    do {
      v = next();
    } while (v >= limit);
    return v % bound;
  }
};

}  // namespace qhvar
