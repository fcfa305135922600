#include <catch2/catch_amalgamated.hpp>

#include <set>

#include "qhvar/varieties.hpp"

using namespace qhvar;

namespace {

std::shared_ptr<const Gf2> gf2_of(std::uint32_t q) {
  auto [p, e] = factor_prime_power(q);
  return make_quadratic_ext(make_field(p, e));
}

}  // namespace

TEST_CASE("two-character size formulas") {
  CHECK(expected_intersection_sizes(3, 3) == std::pair<std::uint64_t, std::uint64_t>{28, 37});
  CHECK(expected_intersection_sizes(3, 8) == std::pair<std::uint64_t, std::uint64_t>{513, 577});
  CHECK(expected_intersection_sizes(3, 4) == std::pair<std::uint64_t, std::uint64_t>{65, 81});
  CHECK(expected_intersection_sizes(3, 5) == std::pair<std::uint64_t, std::uint64_t>{126, 151});
  for (std::uint64_t q : {2, 3, 4, 5, 7, 8, 9})
    CHECK(expected_intersection_sizes(2, q) == std::pair<std::uint64_t, std::uint64_t>{q + 1, 1});
}

TEST_CASE("BM parameter validation") {
  auto f9 = gf2_of(3);
  Fel eps = f9->eps();
  Fel one_plus_eps = f9->add(1, eps);

  CHECK(bm_validate(*f9, one_plus_eps, eps));
  CHECK_FALSE(bm_validate(*f9, 1, eps));

  auto f16 = gf2_of(4);
  CHECK(bm_validate(*f16, f16->eps(), f16->eps()));  // q even: no extra condition

  SECTION("type invariants") {
    CHECK_THROWS_MATCHES(bm_params(f9, 0, eps), error,
                         Catch::Matchers::Predicate<error>([](const error& e) {
                           return e.code() == errc::invalid_params;
                         }));
    CHECK_THROWS_MATCHES(bm_params(f9, 1, 2), error,
                         Catch::Matchers::Predicate<error>([](const error& e) {
                           return e.code() == errc::invalid_params;
                         }));
  }

  SECTION("q odd condition is delta*a1^2 - delta*b1^2 - a0^2 != 0 (exhaustive q=3)") {
    const Gf& f3 = f9->base();
    Fel d = f9->delta();
    for (std::uint32_t a = 1; a < 9; ++a) {
      for (std::uint32_t b = 0; b < 9; ++b) {
        if (f9->in_base(static_cast<Fel>(b))) continue;
        Fel a0 = f9->c0(static_cast<Fel>(a)), a1 = f9->c1(static_cast<Fel>(a));
        Fel b1 = f9->c1(static_cast<Fel>(b));
        Fel v = f3.sub(f3.sub(f3.mul(d, f3.mul(a1, a1)), f3.mul(d, f3.mul(b1, b1))),
                       f3.mul(a0, a0));
        CHECK(bm_validate(*f9, static_cast<Fel>(a), static_cast<Fel>(b)) == (v != 0));
      }
    }
  }

  SECTION("default parameters are least valid pair") {
    auto bm3 = default_bm_params(f9);
    CHECK(bm3.a == f9->make_elem(1, 1));
    CHECK(bm3.b == f9->make_elem(0, 1));
    auto bm5 = default_bm_params(gf2_of(5));
    CHECK(bm5.a == 1);
    auto bm4 = default_bm_params(f16);
    CHECK(bm4.a == 1);
  }
}

TEST_CASE("B_ab membership") {
  auto f9 = gf2_of(3);
  auto bm = default_bm_params(f9);

  CHECK(bab_member(bm, make_pt({1, 0, 0, 0})));
  CHECK_FALSE(bab_member(bm, make_pt({1, 0, 0, f9->eps()})));

  SECTION("affine part has q^5 points, one z-coset per (x,y)") {
    CHECK(points_bab_affine(bm).size() == 243);
  }

  SECTION("homogeneous form agrees with the coset test on affine points (exhaustive q=3)") {
    for (std::uint32_t x = 0; x < 9; ++x)
      for (std::uint32_t y = 0; y < 9; ++y)
        for (std::uint32_t z = 0; z < 9; ++z) {
          Pt p = make_pt({1, static_cast<Fel>(x), static_cast<Fel>(y), static_cast<Fel>(z)});
          CHECK((bab_form(bm, p) == 0) == bab_member(bm, p));
        }
  }

  SECTION("B and M share affine points, differ at infinity") {
    auto b = points_bab(bm);
    auto m = points_mab(bm);
    std::vector<Pt> b_aff, m_aff;
    for (auto& p : b)
      if (p[0] != 0) b_aff.push_back(p);
    for (auto& p : m)
      if (p[0] != 0) m_aff.push_back(p);
    CHECK(b_aff == m_aff);
    CHECK(b.size() == 262);  // q^5 + (2q^2 + 1)
    CHECK(m.size() == 280);  // (q^2+1)(q^3+1)
  }

  SECTION("invalid parameters are rejected by membership") {
    BMParams bad = bm_params(f9, 1, f9->eps());  // fails condition (1)
    CHECK_FALSE(bad.cond_ok);
    CHECK_THROWS_MATCHES(bab_member(bad, make_pt({1, 0, 0, 0})), error,
                         Catch::Matchers::Predicate<error>([](const error& e) {
                           return e.code() == errc::invalid_params;
                         }));
  }
}

TEST_CASE("cone F") {
  auto f9 = gf2_of(3);
  CHECK(fcone_member(*f9, make_pt({0, 0, 0, 1})));
  CHECK_FALSE(fcone_member(*f9, make_pt({1, 0, 0, 0})));

  Fel neg_one = f9->neg(1);
  for (std::uint32_t alpha = 0; alpha < 9; ++alpha) {
    bool on = f9->pow(static_cast<Fel>(alpha), 4) == neg_one;
    for (std::uint32_t t = 0; t < 9; ++t)
      CHECK(fcone_member(*f9, make_pt({0, 1, static_cast<Fel>(alpha), static_cast<Fel>(t)})) == on);
  }
  CHECK(points_fcone(*f9).size() == 37);  // q^3 + q^2 + 1
  CHECK(points_fcone(*gf2_of(4)).size() == 81);
  CHECK(points_fcone(*gf2_of(8)).size() == 577);
}

TEST_CASE("M_ab cardinalities") {
  CHECK(points_mab(default_bm_params(gf2_of(3))).size() == 280);
  CHECK(points_mab(default_bm_params(gf2_of(4))).size() == 1105);
  CHECK(points_mab(default_bm_params(gf2_of(5))).size() == 3276);

  SECTION("materialized lists are duplicate free and sorted") {
    auto pts = points_mab(default_bm_params(gf2_of(3)));
    CHECK(std::is_sorted(pts.begin(), pts.end()));
    CHECK(std::adjacent_find(pts.begin(), pts.end()) == pts.end());
  }

  SECTION("materialization agrees with the membership predicate (exhaustive q=3)") {
    auto bm = default_bm_params(gf2_of(3));
    auto pts = points_mab(bm);
    std::set<Pt> from_filter;
    for (std::uint64_t r = 0; r < num_points(9, 3); ++r) {
      Pt p = point_at(*bm.f, 3, r);
      if (mab_member(bm, p)) from_filter.insert(p);
    }
    CHECK(from_filter == std::set<Pt>(pts.begin(), pts.end()));
  }
}

TEST_CASE("BT polynomials") {
  auto bt = bt_params(3);
  const Gf2& f = *bt.f;
  CHECK(bt.sigma == 4);
  CHECK(gamma_eps(bt, 0) == 0);
  CHECK(delta_eps(bt, 0) == 0);

  SECTION("sigma squares to Frobenius on GF(q) (exhaustive q=8)") {
    const Gf& f8 = f.base();
    for (std::uint32_t x = 0; x < 8; ++x)
      CHECK(f8.pow(f8.pow(static_cast<Fel>(x), bt.sigma), bt.sigma) ==
            f8.mul(static_cast<Fel>(x), static_cast<Fel>(x)));
  }

  SECTION("Gamma collapses to x^(sigma+2) on GF(q)") {
    for (std::uint32_t x = 0; x < 8; ++x)
      CHECK(gamma_eps(bt, f.lift(static_cast<Fel>(x))) ==
            f.pow(f.lift(static_cast<Fel>(x)), bt.sigma + 2));
  }

  SECTION("Gamma always lands in GF(q)") {
    for (std::uint32_t x = 0; x < f.size(); ++x) CHECK(f.in_base(gamma_eps(bt, static_cast<Fel>(x))));
  }

  SECTION("Delta at 1: eps^sigma = eps and eps^(sigma+2) = 1 for e=3, delta=1") {
    CHECK(f.pow(f.eps(), bt.sigma) == f.eps());
    CHECK(f.pow(f.eps(), bt.sigma + 2) == 1);
    CHECK(delta_eps(bt, 1) == f.make_elem(1, 1));  // 1 + 1 + (1+eps)
  }

  SECTION("parameter validation") {
    CHECK_THROWS_MATCHES(bt_params(2), error, Catch::Matchers::Predicate<error>([](const error& e) {
                           return e.code() == errc::invalid_params;
                         }));
    CHECK_THROWS_MATCHES(bt_params(1), error, Catch::Matchers::Predicate<error>([](const error& e) {
                           return e.code() == errc::invalid_params;
                         }));
  }
}

TEST_CASE("V and H varieties") {
  auto bt = bt_params(3);
  const Gf2& f = *bt.f;

  CHECK(veps_member(bt, make_pt({1, 0, 0, 0})));
  for (std::uint32_t t = 0; t < f.size(); ++t)
    CHECK(veps_member(bt, make_pt({0, 1, 1, static_cast<Fel>(t)})));  // line Y = X at infinity

  CHECK(points_heps(bt).size() == 33345);  // (q^2+1)(q^3+1)
  CHECK(points_veps(bt).size() == 32961);  // q^5 + 3q^2 + 1 for e = 3

  SECTION("affine membership equals materialization (sampled)") {
    auto pts = points_veps_affine(bt);
    std::set<Pt> set(pts.begin(), pts.end());
    SplitMix64 rng(99);
    for (int i = 0; i < 2000; ++i) {
      Pt p = make_pt({1, static_cast<Fel>(rng.below(f.size())), static_cast<Fel>(rng.below(f.size())),
                      static_cast<Fel>(rng.below(f.size()))});
      CHECK(veps_member(bt, p) == (set.count(p) > 0));
    }
  }

  SECTION("infinity slopes for e=3 are the cube roots of unity") {
    CHECK(bt.infinity_slopes.size() == 3);
    for (Fel c : bt.infinity_slopes) CHECK(f.pow(c, 3) == 1);
    CHECK(std::count(bt.infinity_slopes.begin(), bt.infinity_slopes.end(), 1) == 1);
  }
}

TEST_CASE("Hermitian surface") {
  auto f9 = gf2_of(3);
  HermitianMx id = HermitianMx::identity();

  CHECK_FALSE(hermitian_member(*f9, id, make_pt({1, 0, 0, 0})));
  CHECK(hermitian_member(*f9, id, make_pt({1, f9->eps(), 1, 0})));  // 1 + eps^(q+1) + 1 = 0
  CHECK(points_hermitian(*f9, id).size() == 280);

  SECTION("matrix validation") {
    HermitianMx bad = id;
    bad.h[1] = f9->eps();  // breaks H^(q)T = H
    CHECK_THROWS_MATCHES(check_hermitian(*f9, bad), error,
                         Catch::Matchers::Predicate<error>([](const error& e) {
                           return e.code() == errc::not_hermitian_matrix;
                         }));
    HermitianMx sing;
    sing.h[0] = 1;  // rank 1
    CHECK_THROWS_MATCHES(check_hermitian(*f9, sing), error,
                         Catch::Matchers::Predicate<error>([](const error& e) {
                           return e.code() == errc::singular_matrix;
                         }));
  }

  SECTION("M_ab and H(3,q^2) have equal cardinality") {
    CHECK(points_hermitian(*f9, id).size() == points_mab(default_bm_params(f9)).size());
  }
}

TEST_CASE("closed-form counts") {
  CHECK(bm_unital_count(2, 2) == 2);
  CHECK(bm_unital_count(5, 1) == 3);
  CHECK(bm_variety_count(3, 2) == 4);

  CHECK_THROWS_MATCHES(bm_unital_count(3, 1), error,  // q = 3 < 4
                       Catch::Matchers::Predicate<error>([](const error& e) {
                         return e.code() == errc::domain_error;
                       }));
  CHECK_THROWS_MATCHES(bm_variety_count(2, 3), error,
                       Catch::Matchers::Predicate<error>([](const error& e) {
                         return e.code() == errc::domain_error;
                       }));
  CHECK_THROWS_MATCHES(bm_unital_count(6, 2), error,
                       Catch::Matchers::Predicate<error>([](const error& e) {
                         return e.code() == errc::not_prime;
                       }));
}
