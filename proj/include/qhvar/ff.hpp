#pragma once
// Exact finite field arithmetic: GF(p), GF(q) = GF(p^e) and the quadratic
// extension GF(q^2) = GF(q)[eps] with distinguished basis (1, eps).
//
// Elements are integer codes (see common.hpp). Arithmetic is table driven:
// log/antilog tables are built for every field (all fields here have at most
// 2^16 elements) and full add/mul tables are kept for small fields so that
// enumeration kernels run on plain array lookups. Fields are immutable after
// construction and safe to share across threads.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qhvar/common.hpp"

namespace qhvar {

namespace detail {

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

inline std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

// Dense polynomials over GF(p), coefficients in [0,p), constant term first.
// Only used at field-construction time; runtime arithmetic is table driven.
struct PolyMod {
  std::uint32_t p;
  std::vector<std::uint32_t> modulus;  // monic, degree e

  std::uint32_t deg() const { return static_cast<std::uint32_t>(modulus.size() - 1); }

  std::vector<std::uint32_t> reduce(std::vector<std::uint32_t> a) const {
    const std::uint32_t e = deg();
    while (a.size() > e) {
      std::uint32_t lead = a.back();
      std::size_t shift = a.size() - 1 - e;
      if (lead != 0) {
        for (std::uint32_t i = 0; i <= e; ++i) {
          std::uint64_t t = a[shift + i] + static_cast<std::uint64_t>(lead) * (p - modulus[i]);
          a[shift + i] = static_cast<std::uint32_t>(t % p);
        }
      }
      a.pop_back();
    }
    return a;
  }

  std::vector<std::uint32_t> mul(const std::vector<std::uint32_t>& a,
                                 const std::vector<std::uint32_t>& b) const {
    std::vector<std::uint32_t> prod(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] == 0) continue;
      for (std::size_t j = 0; j < b.size(); ++j) {
        prod[i + j] = static_cast<std::uint32_t>(
            (prod[i + j] + static_cast<std::uint64_t>(a[i]) * b[j]) % p);
      }
    }
    return reduce(std::move(prod));
  }

  std::vector<std::uint32_t> add(std::vector<std::uint32_t> a,
                                 const std::vector<std::uint32_t>& b) const {
    if (a.size() < b.size()) a.resize(b.size(), 0);
    for (std::size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + b[i]) % p;
    return a;
  }

  std::vector<std::uint32_t> pow_x(std::uint64_t k) const {
    // x^k mod modulus by square and multiply.
    std::vector<std::uint32_t> result{1};
    std::vector<std::uint32_t> base{0, 1};
    base = reduce(std::move(base));
    while (k > 0) {
      if (k & 1) result = mul(result, base);
      base = mul(base, base);
      k >>= 1;
    }
    return result;
  }
};

inline std::vector<std::uint32_t> poly_gcd(std::uint32_t p, std::vector<std::uint32_t> a,
                                           std::vector<std::uint32_t> b) {
  auto trim = [](std::vector<std::uint32_t>& v) {
    while (!v.empty() && v.back() == 0) v.pop_back();
  };
  auto inv_mod_p = [p](std::uint32_t x) {
    std::uint32_t r = 1;
    for (std::uint32_t k = p - 2; k > 0; k >>= 1) {
      if (k & 1) r = static_cast<std::uint32_t>(static_cast<std::uint64_t>(r) * x % p);
      x = static_cast<std::uint32_t>(static_cast<std::uint64_t>(x) * x % p);
    }
    return r;
  };
  trim(a);
  trim(b);
  while (!b.empty()) {
    // a mod b
    std::uint32_t lead_inv = inv_mod_p(b.back());
    while (a.size() >= b.size()) {
      std::uint32_t factor =
          static_cast<std::uint32_t>(static_cast<std::uint64_t>(a.back()) * lead_inv % p);
      std::size_t shift = a.size() - b.size();
      if (factor != 0) {
        for (std::size_t i = 0; i < b.size(); ++i) {
          std::uint64_t t = a[shift + i] + static_cast<std::uint64_t>(factor) * (p - b[i]);
          a[shift + i] = static_cast<std::uint32_t>(t % p);
        }
      }
      a.pop_back();
      trim(a);
      if (a.empty()) break;
    }
    std::swap(a, b);
  }
  return a;
}

// f monic of degree e over GF(p) is irreducible iff x^(p^e) = x (mod f) and
// gcd(x^(p^(e/r)) - x, f) = 1 for every prime divisor r of e.
inline bool is_irreducible(std::uint32_t p, const std::vector<std::uint32_t>& f) {
  const std::uint32_t e = static_cast<std::uint32_t>(f.size() - 1);
  if (e == 0) return false;
  PolyMod pm{p, f};
  auto frob_power = [&](std::uint32_t k) {
    // x^(p^k) mod f by k successive p-th powers
    std::vector<std::uint32_t> cur = pm.reduce({0, 1});
    for (std::uint32_t i = 0; i < k; ++i) {
      std::vector<std::uint32_t> next{1};
      std::vector<std::uint32_t> base = cur;
      std::uint64_t exp = p;
      while (exp > 0) {
        if (exp & 1) next = pm.mul(next, base);
        base = pm.mul(base, base);
        exp >>= 1;
      }
      cur = std::move(next);
    }
    return cur;
  };
  // x^(p^e) == x
  std::vector<std::uint32_t> xpe = frob_power(e);
  std::vector<std::uint32_t> x = pm.reduce({0, 1});
  xpe.resize(std::max(xpe.size(), x.size()), 0);
  x.resize(xpe.size(), 0);
  if (xpe != x) return false;
  for (std::uint64_t r : prime_factors(e)) {
    std::vector<std::uint32_t> g = frob_power(static_cast<std::uint32_t>(e / r));
    // g - x
    g.resize(std::max<std::size_t>(g.size(), 2), 0);
    g[1] = (g[1] + p - 1) % p;
    auto gcd = poly_gcd(p, g, f);
    if (gcd.size() != 1) return false;
  }
  return true;
}

}  // namespace detail

// Common table-driven arithmetic shared by GF(p^e) and its quadratic
// extension. Public operations validate the element codes they receive;
// enumeration kernels can grab the raw tables via scan_tables().
class FieldCore {
 public:
  struct ScanTables {
    const Fel* add = nullptr;  // n x n, row major
    const Fel* mul = nullptr;
    std::uint32_t n = 0;
  };

  std::uint32_t size() const { return n_; }
  std::uint32_t characteristic() const { return p_; }
  std::uint32_t degree_over_prime() const { return deg_p_; }

  static constexpr Fel zero() { return 0; }
  static constexpr Fel one() { return 1; }

  void check(Fel x) const {
    require(x < n_, errc::field_mismatch, "element code out of range for this field");
  }

  Fel add(Fel a, Fel b) const {
    check(a);
    check(b);
    return raw_add(a, b);
  }

  Fel sub(Fel a, Fel b) const { return add(a, neg(b)); }

  Fel neg(Fel a) const {
    check(a);
    return neg_[a];
  }

  Fel mul(Fel a, Fel b) const {
    check(a);
    check(b);
    return raw_mul(a, b);
  }

  Fel inv(Fel a) const {
    check(a);
    require(a != 0, errc::division_by_zero, "inverse of zero");
    return inv_[a];
  }

  Fel div(Fel a, Fel b) const { return mul(a, inv(b)); }

  // a^k for arbitrary non-negative k (exponents such as q*(sigma+2) appear).
  Fel pow(Fel a, std::uint64_t k) const {
    check(a);
    if (a == 0) return k == 0 ? 1 : 0;
    if (n_ == 2) return 1;
    std::uint64_t ord = n_ - 1;
    std::uint64_t r = (static_cast<std::uint64_t>(log_[a]) * (k % ord)) % ord;
    return exp_[r];
  }

  bool is_zero(Fel a) const { return a == 0; }

  // Squareness in GF(q), q odd; zero counts as a square.
  bool is_square(Fel a) const {
    require(p_ != 2, errc::even_characteristic, "squareness test needs odd characteristic");
    check(a);
    if (a == 0) return true;
    return pow(a, (n_ - 1) / 2) == 1;
  }

  // Absolute trace to the prime field GF(p): sum of a^(p^i), i < [F : GF(p)].
  // Returned as a code in [0, p).
  Fel abs_trace(Fel a) const {
    check(a);
    Fel acc = 0;
    std::uint64_t pk = 1;
    for (std::uint32_t i = 0; i < deg_p_; ++i) {
      acc = raw_add(acc, pow(a, pk));
      pk *= p_;
    }
    return acc;
  }

  Fel generator() const { return gen_; }

  ScanTables scan_tables() const {
    if (add_table_.empty() || mul_table_.empty()) return {};
    return {add_table_.data(), mul_table_.data(), n_};
  }

 protected:
  FieldCore() = default;

  // Derived classes provide the structural operations; tables are built here.
  void build_tables(std::uint32_t n, std::uint32_t p, std::uint32_t deg_p,
                    const std::function<Fel(Fel, Fel)>& add_fn,
                    const std::function<Fel(Fel, Fel)>& mul_fn) {
    require(n >= 2 && n <= 65536, errc::domain_error, "field size out of supported range");
    n_ = n;
    p_ = p;
    deg_p_ = deg_p;

    // log/antilog from a multiplicative generator
    exp_.assign(n_ - 1, 0);
    log_.assign(n_, 0);
    gen_ = find_generator(mul_fn);
    Fel cur = 1;
    for (std::uint32_t i = 0; i < n_ - 1; ++i) {
      exp_[i] = cur;
      log_[cur] = i;
      cur = mul_fn(cur, gen_);
    }

    neg_.assign(n_, 0);
    for (std::uint32_t a = 0; a < n_; ++a) {
      // -a is the unique b with a + b = 0
      if (p_ == 2) {
        neg_[a] = static_cast<Fel>(a);
      } else {
        for (std::uint32_t b = 0; b < n_; ++b) {
          if (add_fn(static_cast<Fel>(a), static_cast<Fel>(b)) == 0) {
            neg_[a] = static_cast<Fel>(b);
            break;
          }
        }
      }
    }

    inv_.assign(n_, 0);
    for (std::uint32_t a = 1; a < n_; ++a) {
      std::uint32_t ord = n_ - 1;
      inv_[a] = exp_[(ord - log_[a]) % ord];
    }

    if (n_ <= kDirectTableLimit) {
      add_table_.assign(static_cast<std::size_t>(n_) * n_, 0);
      mul_table_.assign(static_cast<std::size_t>(n_) * n_, 0);
      for (std::uint32_t a = 0; a < n_; ++a) {
        for (std::uint32_t b = 0; b < n_; ++b) {
          add_table_[static_cast<std::size_t>(a) * n_ + b] =
              add_fn(static_cast<Fel>(a), static_cast<Fel>(b));
          mul_table_[static_cast<std::size_t>(a) * n_ + b] =
              (a == 0 || b == 0)
                  ? 0
                  : exp_[(static_cast<std::uint32_t>(log_[a]) + log_[b]) % (n_ - 1)];
        }
      }
    } else {
      slow_add_ = add_fn;
    }
  }

  Fel raw_add(Fel a, Fel b) const {
    if (!add_table_.empty()) return add_table_[static_cast<std::size_t>(a) * n_ + b];
    if (p_ == 2) return static_cast<Fel>(a ^ b);
    return slow_add_(a, b);
  }

  Fel raw_mul(Fel a, Fel b) const {
    if (!mul_table_.empty()) return mul_table_[static_cast<std::size_t>(a) * n_ + b];
    if (a == 0 || b == 0) return 0;
    return exp_[(static_cast<std::uint32_t>(log_[a]) + log_[b]) % (n_ - 1)];
  }

 private:
  static constexpr std::uint32_t kDirectTableLimit = 1024;

  Fel find_generator(const std::function<Fel(Fel, Fel)>& mul_fn) const {
    std::uint32_t ord = n_ - 1;
    auto pw = [&](Fel base, std::uint64_t k) {
      Fel r = 1;
      while (k > 0) {
        if (k & 1) r = mul_fn(r, base);
        base = mul_fn(base, base);
        k >>= 1;
      }
      return r;
    };
    std::vector<std::uint64_t> pf = detail::prime_factors(ord);
    for (std::uint32_t g = 1; g < n_; ++g) {
      bool primitive = true;
      for (std::uint64_t r : pf) {
        if (pw(static_cast<Fel>(g), ord / r) == 1) {
          primitive = false;
          break;
        }
      }
      if (primitive) return static_cast<Fel>(g);
    }
    throw error(errc::domain_error, "no multiplicative generator found (field construction bug)");
  }

  std::uint32_t n_ = 0;
  std::uint32_t p_ = 0;
  std::uint32_t deg_p_ = 0;
  Fel gen_ = 0;
  std::vector<Fel> exp_;
  std::vector<std::uint32_t> log_;
  std::vector<Fel> neg_;
  std::vector<Fel> inv_;
  std::vector<Fel> add_table_;
  std::vector<Fel> mul_table_;
  std::function<Fel(Fel, Fel)> slow_add_;
};

// GF(p^e) with a monic irreducible modulus over GF(p). If no modulus is
// supplied the canonical one is used: the monic irreducible of degree e whose
// integer encoding (coefficients read base p, constant term first) is least.
class Gf : public FieldCore {
 public:
  Gf(std::uint32_t p, std::uint32_t e, std::optional<std::vector<std::uint32_t>> modulus = {}) {
    require(detail::is_prime(p), errc::not_prime, "p = " + std::to_string(p) + " is not prime");
    require(e >= 1, errc::domain_error, "extension degree must be >= 1");
    p_ = p;
    e_ = e;
    std::uint64_t n = 1;
    for (std::uint32_t i = 0; i < e; ++i) {
      n *= p;
      require(n <= 65536, errc::domain_error, "field larger than 2^16 elements");
    }

    if (modulus) {
      auto& m = *modulus;
      bool shape_ok = m.size() == e + 1 && m.back() == 1 &&
                      std::all_of(m.begin(), m.end(), [p](std::uint32_t c) { return c < p; });
      require(shape_ok, errc::reducible_modulus, "modulus must be monic of degree e with coefficients in [0,p)");
      require(e == 1 || detail::is_irreducible(p, m), errc::reducible_modulus,
              "modulus is reducible over GF(p)");
      modulus_ = m;
    } else {
      modulus_ = canonical_modulus(p, e);
    }

    auto add_fn = [this](Fel a, Fel b) { return elem_add(a, b); };
    auto mul_fn = [this](Fel a, Fel b) { return elem_mul(a, b); };
    build_tables(static_cast<std::uint32_t>(n), p, e, add_fn, mul_fn);
  }

  std::uint32_t p() const { return p_; }
  std::uint32_t deg() const { return e_; }
  const std::vector<std::uint32_t>& modulus() const { return modulus_; }

  // Coefficient vector of an element, constant term first, length e.
  std::vector<std::uint32_t> coeffs_of(Fel x) const {
    check(x);
    std::vector<std::uint32_t> c(e_, 0);
    std::uint32_t v = x;
    for (std::uint32_t i = 0; i < e_; ++i) {
      c[i] = v % p_;
      v /= p_;
    }
    return c;
  }

  Fel from_coeffs(const std::vector<std::uint32_t>& c) const {
    require(c.size() <= e_, errc::domain_error, "too many coefficients");
    std::uint64_t v = 0;
    for (std::size_t i = c.size(); i-- > 0;) {
      require(c[i] < p_, errc::domain_error, "coefficient out of range");
      v = v * p_ + c[i];
    }
    return static_cast<Fel>(v);
  }

  // Least non-square of GF(q), q odd, in canonical element order.
  Fel least_nonsquare() const {
    require(p_ != 2, errc::even_characteristic, "no non-squares in even characteristic");
    for (std::uint32_t x = 1; x < size(); ++x)
      if (!is_square(static_cast<Fel>(x))) return static_cast<Fel>(x);
    throw error(errc::domain_error, "every element is a square (q must be 2?)");
  }

  // Least element of absolute trace 1 (q even).
  Fel least_trace_one() const {
    require(p_ == 2, errc::domain_error, "trace-one delta is the even-characteristic choice");
    for (std::uint32_t x = 1; x < size(); ++x)
      if (abs_trace(static_cast<Fel>(x)) == 1) return static_cast<Fel>(x);
    throw error(errc::domain_error, "no trace-one element found");
  }

  static std::string modulus_to_string(const std::vector<std::uint32_t>& m) {
    std::ostringstream os;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i) os << ',';
      os << m[i];
    }
    return os.str();
  }

  static std::vector<std::uint32_t> modulus_from_string(const std::string& s) {
    std::vector<std::uint32_t> out;
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, ',')) out.push_back(static_cast<std::uint32_t>(std::stoul(tok)));
    return out;
  }

 private:
  static std::vector<std::uint32_t> canonical_modulus(std::uint32_t p, std::uint32_t e) {
    if (e == 1) return {0, 1};  // GF(p) itself; reduction is mod p
    // Scan monic degree-e polynomials by ascending integer encoding.
    std::uint64_t count = 1;
    for (std::uint32_t i = 0; i < e; ++i) count *= p;
    for (std::uint64_t low = 0; low < count; ++low) {
      std::vector<std::uint32_t> f(e + 1, 0);
      std::uint64_t v = low;
      for (std::uint32_t i = 0; i < e; ++i) {
        f[i] = static_cast<std::uint32_t>(v % p);
        v /= p;
      }
      f[e] = 1;
      if (detail::is_irreducible(p, f)) return f;
    }
    throw error(errc::domain_error, "no irreducible polynomial found (unreachable)");
  }

  Fel elem_add(Fel a, Fel b) const {
    if (p_ == 2) return static_cast<Fel>(a ^ b);
    std::uint32_t va = a, vb = b, out = 0, mult = 1;
    for (std::uint32_t i = 0; i < e_; ++i) {
      out += ((va % p_) + (vb % p_)) % p_ * mult;
      va /= p_;
      vb /= p_;
      mult *= p_;
    }
    return static_cast<Fel>(out);
  }

  Fel elem_mul(Fel a, Fel b) const {
    if (a == 0 || b == 0) return 0;
    detail::PolyMod pm{p_, modulus_};
    std::vector<std::uint32_t> ca(e_, 0), cb(e_, 0);
    std::uint32_t va = a, vb = b;
    for (std::uint32_t i = 0; i < e_; ++i) {
      ca[i] = va % p_;
      cb[i] = vb % p_;
      va /= p_;
      vb /= p_;
    }
    std::vector<std::uint32_t> prod = pm.mul(ca, cb);
    std::uint64_t out = 0;
    for (std::size_t i = prod.size(); i-- > 0;) out = out * p_ + prod[i];
    return static_cast<Fel>(out);
  }

  std::uint32_t p_ = 0;
  std::uint32_t e_ = 0;
  std::vector<std::uint32_t> modulus_;  // length e+1, monic
};

// How eps is pinned down. For q odd eps^2 = delta with delta a non-square;
// for q even eps^2 + eps + delta = 0 with absolute trace tr(delta) = 1.
enum class EpsKind : std::uint8_t { square_root, artin_schreier };

// GF(q^2) as an explicit quadratic extension of GF(q). An element code is
// c0 + q*c1 for the decomposition c0 + eps*c1; codes of GF(q) elements
// coincide with their codes in the base field.
class Gf2 : public FieldCore {
 public:
  Gf2(std::shared_ptr<const Gf> base, std::optional<Fel> delta = {}) : base_(std::move(base)) {
    q_ = base_->size();
    if (base_->p() == 2) {
      kind_ = EpsKind::artin_schreier;
      delta_ = delta.value_or(base_->least_trace_one());
      require(base_->abs_trace(delta_) == 1, errc::reducible_modulus,
              "t^2 + t + delta is reducible: tr(delta) != 1");
    } else {
      kind_ = EpsKind::square_root;
      delta_ = delta.value_or(base_->least_nonsquare());
      require(delta_ != 0 && !base_->is_square(delta_), errc::reducible_modulus,
              "t^2 - delta is reducible: delta is a square");
    }
    auto add_fn = [this](Fel a, Fel b) { return pair_add(a, b); };
    auto mul_fn = [this](Fel a, Fel b) { return pair_mul(a, b); };
    build_tables(q_ * q_, base_->p(), 2 * base_->deg(), add_fn, mul_fn);
  }

  const Gf& base() const { return *base_; }
  std::shared_ptr<const Gf> base_ptr() const { return base_; }
  std::uint32_t q() const { return q_; }
  EpsKind kind() const { return kind_; }
  Fel delta() const { return delta_; }
  Fel eps() const { return make_elem(0, 1); }

  Fel make_elem(Fel c0, Fel c1) const {
    base_->check(c0);
    base_->check(c1);
    return static_cast<Fel>(c0 + q_ * c1);
  }

  Fel c0(Fel x) const {
    check(x);
    return static_cast<Fel>(x % q_);
  }

  Fel c1(Fel x) const {
    check(x);
    return static_cast<Fel>(x / q_);
  }

  bool in_base(Fel x) const { return c1(x) == 0; }

  // Embedding GF(q) -> GF(q^2); codes are preserved.
  Fel lift(Fel base_elem) const {
    base_->check(base_elem);
    return base_elem;
  }

  // x -> x^q. For q odd eps^q = -eps; for q even eps^q = eps + 1.
  Fel frobenius(Fel x) const {
    Fel a0 = c0(x), a1 = c1(x);
    if (kind_ == EpsKind::square_root) return make_elem(a0, base_->neg(a1));
    return make_elem(base_->add(a0, a1), a1);
  }

  // Relative trace x + x^q, landing in GF(q) (returned as a base code).
  Fel rel_trace(Fel x) const {
    Fel t = add(x, frobenius(x));
    return c0(t);
  }

  // Relative norm x^(q+1), landing in GF(q).
  Fel rel_norm(Fel x) const {
    Fel n = mul(x, frobenius(x));
    return c0(n);
  }

 private:
  Fel pair_add(Fel a, Fel b) const {
    Fel a0 = static_cast<Fel>(a % q_), a1 = static_cast<Fel>(a / q_);
    Fel b0 = static_cast<Fel>(b % q_), b1 = static_cast<Fel>(b / q_);
    return static_cast<Fel>(base_->add(a0, b0) + q_ * base_->add(a1, b1));
  }

  Fel pair_mul(Fel a, Fel b) const {
    const Gf& f = *base_;
    Fel a0 = static_cast<Fel>(a % q_), a1 = static_cast<Fel>(a / q_);
    Fel b0 = static_cast<Fel>(b % q_), b1 = static_cast<Fel>(b / q_);
    Fel cross = f.add(f.mul(a0, b1), f.mul(a1, b0));
    Fel hi = f.mul(a1, b1);
    if (kind_ == EpsKind::square_root) {
      // eps^2 = delta
      Fel lo = f.add(f.mul(a0, b0), f.mul(delta_, hi));
      return static_cast<Fel>(lo + q_ * cross);
    }
    // eps^2 = eps + delta
    Fel lo = f.add(f.mul(a0, b0), f.mul(delta_, hi));
    return static_cast<Fel>(lo + q_ * f.add(cross, hi));
  }

  std::shared_ptr<const Gf> base_;
  std::uint32_t q_ = 0;
  EpsKind kind_{};
  Fel delta_ = 0;
};

struct EpsChoice {
  EpsKind kind;
  Fel delta;
};

// The canonical eps for a given GF(q): least non-square delta when q is odd,
// least trace-one delta when q is even.
inline EpsChoice choose_epsilon(const Gf& fq) {
  if (fq.p() == 2) return {EpsKind::artin_schreier, fq.least_trace_one()};
  return {EpsKind::square_root, fq.least_nonsquare()};
}

// Construction caches. Table building costs are small but repeated test and
// CLI code paths construct the same fields over and over.
inline std::shared_ptr<const Gf> make_field(std::uint32_t p, std::uint32_t e,
                                            std::optional<std::vector<std::uint32_t>> modulus = {}) {
  static std::mutex mu;
  static std::map<std::pair<std::uint64_t, std::vector<std::uint32_t>>,
                  std::shared_ptr<const Gf>>
      cache;
  // An empty coefficient list keys the canonical-modulus field.
  std::pair<std::uint64_t, std::vector<std::uint32_t>> key{
      (static_cast<std::uint64_t>(p) << 32) | e, modulus.value_or(std::vector<std::uint32_t>{})};
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto field = std::make_shared<const Gf>(p, e, modulus);
  std::lock_guard<std::mutex> lock(mu);
  auto [it, inserted] = cache.emplace(key, field);
  return it->second;
}

inline std::shared_ptr<const Gf2> make_quadratic_ext(std::shared_ptr<const Gf> base,
                                                     std::optional<Fel> delta = {}) {
  static std::mutex mu;
  static std::map<std::tuple<const Gf*, Fel>, std::shared_ptr<const Gf2>> cache;
  Fel d = delta.value_or(choose_epsilon(*base).delta);
  std::tuple<const Gf*, Fel> key{base.get(), d};
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto ext = std::make_shared<const Gf2>(base, d);
  std::lock_guard<std::mutex> lock(mu);
  cache.emplace(key, ext);
  return ext;
}

// q = p^e from a prime power, as (p, e).
inline std::pair<std::uint32_t, std::uint32_t> factor_prime_power(std::uint32_t q) {
  require(q >= 2, errc::domain_error, "q must be at least 2");
  for (std::uint32_t p = 2; p <= q; ++p) {
    if (!detail::is_prime(p)) continue;
    if (q % p) continue;
    std::uint32_t e = 0;
    std::uint32_t v = q;
    while (v % p == 0) {
      v /= p;
      ++e;
    }
    require(v == 1, errc::domain_error, std::to_string(q) + " is not a prime power");
    return {p, e};
  }
  throw error(errc::domain_error, "unreachable");
}

}  // namespace qhvar
