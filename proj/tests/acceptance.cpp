// Acceptance suite: one line per criterion, exact expected values pinned in
// code, wall-clock budgets asserted where stated. Exit status 0 only if every
// criterion passes.

#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "qhvar/bc.hpp"
#include "qhvar/cli.hpp"
#include "qhvar/hypersurfaces.hpp"
#include "qhvar/varieties.hpp"
#include "qhvar/verify.hpp"

using namespace qhvar;

namespace {

using clock_type = std::chrono::steady_clock;

double seconds_since(clock_type::time_point t0) {
  return std::chrono::duration<double>(clock_type::now() - t0).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void expect(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

std::shared_ptr<const Gf2> gf2_of(std::uint32_t q) {
  auto [p, e] = factor_prime_power(q);
  return make_quadratic_ext(make_field(p, e));
}

std::vector<BMParams> all_valid_params(std::shared_ptr<const Gf2> f) {
  std::vector<BMParams> out;
  for (std::uint32_t a = 1; a < f->size(); ++a)
    for (std::uint32_t b = 0; b < f->size(); ++b) {
      if (f->in_base(static_cast<Fel>(b))) continue;
      if (!bm_validate(*f, static_cast<Fel>(a), static_cast<Fel>(b))) continue;
      out.push_back(bm_params(f, static_cast<Fel>(a), static_cast<Fel>(b)));
    }
  return out;
}

std::string hist_str(const std::map<std::uint64_t, std::uint64_t>& h) {
  std::ostringstream os;
  os << "{";
  bool first = true;
  for (auto& [s, n] : h) {
    if (!first) os << ", ";
    os << s << ":" << n;
    first = false;
  }
  os << "}";
  return os.str();
}

// --- criterion 1: exhaustive BM parameter sweep at q = 3 -------------------

Outcome criterion1() {
  Outcome out;
  auto t0 = clock_type::now();
  auto f9 = gf2_of(3);
  auto params = all_valid_params(f9);
  out.expect(params.size() == 24, "expected 24 valid (a,b) pairs, got " +
                                      std::to_string(params.size()));
  std::map<std::uint64_t, std::uint64_t> want{{28, 540}, {37, 280}};
  for (const BMParams& bm : params) {
    auto pair_start = clock_type::now();
    auto hist = two_character_scan(*f9, points_mab(bm), {});
    out.expect(hist.counts == want, "histogram mismatch at a=" + std::to_string(bm.a) +
                                        " b=" + std::to_string(bm.b) + ": " +
                                        hist_str(hist.counts));
    out.expect(seconds_since(pair_start) < 1.0, "pair exceeded 1 s");
  }
  double total = seconds_since(t0);
  out.expect(total < 60.0, "sweep exceeded 60 s");
  out.detail = std::to_string(params.size()) + " pairs, histogram {28:540, 37:280}";
  return out;
}

// --- criteria 2 and 3: q = 5 and q = 4 full scans ---------------------------

Outcome full_scan_criterion(std::uint32_t q, std::map<std::uint64_t, std::uint64_t> want,
                            std::uint64_t n_hyp, double budget) {
  Outcome out;
  auto t0 = clock_type::now();
  auto f = gf2_of(q);
  auto bm = default_bm_params(f);
  auto hist = two_character_scan(*f, points_mab(bm), {});
  out.expect(hist.counts == want, "histogram " + hist_str(hist.counts));
  out.expect(hist.hyperplanes_scanned == n_hyp, "hyperplane count");
  out.expect(seconds_since(t0) < budget, "exceeded time budget");
  out.detail = hist_str(hist.counts);
  return out;
}

// --- criterion 4: BT q = 8 full and sampled ---------------------------------

Outcome criterion4() {
  Outcome out;
  auto bt = bt_params(3);
  auto heps = points_heps(bt);

  auto t0 = clock_type::now();
  ScanOptions sampled;
  sampled.mode = ScanMode::sampled;
  sampled.sample_n = 10000;
  sampled.seed = 7;
  auto sh = two_character_scan(*bt.f, heps, sampled);
  double sampled_time = seconds_since(t0);
  for (auto& [s, n] : sh.counts)
    out.expect(s == 513 || s == 577, "sampled scan saw size " + std::to_string(s));
  out.expect(sh.hyperplanes_scanned == 10000, "sample size");
  out.expect(sampled_time < 20.0, "sampled gate exceeded 20 s");

  auto t1 = clock_type::now();
  auto fh = two_character_scan(*bt.f, heps, {});
  double full_time = seconds_since(t1);
  std::map<std::uint64_t, std::uint64_t> want{{513, 232960}, {577, 33345}};
  out.expect(fh.counts == want, "full histogram " + hist_str(fh.counts));
  out.expect(fh.hyperplanes_scanned == 266305, "hyperplane total");
  out.expect(full_time < 900.0, "full scan exceeded 15 min");

  std::ostringstream d;
  d << "full " << hist_str(fh.counts) << " in " << std::fixed << full_time << "s, sampled gate "
    << sampled_time << "s";
  out.detail = d.str();
  return out;
}

// --- criterion 5: spread lines contained in the cones -----------------------

Outcome criterion5() {
  Outcome out;
  struct Case {
    std::uint32_t q;
    std::uint64_t expect;
  };
  for (Case c : {Case{5, 51}, Case{3, 1}, Case{4, 17}}) {
    auto t0 = clock_type::now();
    auto f = gf2_of(c.q);
    auto bm = default_bm_params(f);
    auto sc = count_spread_lines_in(*f, [&](const Pt& p) { return bprime_member(bm, p); });
    out.expect(sc.contained == c.expect, "q=" + std::to_string(c.q) + " got " +
                                             std::to_string(sc.contained));
    out.expect(seconds_since(t0) < 10.0, "q=" + std::to_string(c.q) + " exceeded 10 s");
  }
  auto t0 = clock_type::now();
  auto bt = bt_params(3);
  auto sc = count_spread_lines_in(*bt.f, [&](const Pt& p) { return c3eps_member(bt, p); });
  out.expect(sc.contained == 65, "BT got " + std::to_string(sc.contained));
  for (const Pt& l : sc.labels)
    out.expect(l == make_pt({0, 0, 0, 1}) || (l[1] == 1 && l[2] == 1),
               "unexpected label " + to_string(l));
  out.expect(seconds_since(t0) < 10.0, "BT exceeded 10 s");
  out.detail = "51 (q=5), 1 (q=3), 17 (q=4), 65 with labels P_inf/(0,1,1,h) (q=8)";
  return out;
}

// --- criterion 6: containment splits ----------------------------------------

Outcome criterion6() {
  Outcome out;
  auto run_bm = [&](std::uint32_t q, std::uint64_t b_labels, std::uint64_t b_in,
                    std::uint64_t m_labels, std::uint64_t m_in) {
    auto f = gf2_of(q);
    auto bm = default_bm_params(f);
    auto member = [&](const Pt& p) { return bprime_member(bm, p); };
    auto sb = containment_split(*f, infinity_section({VarietyTag::bab, bm, {}, {}}), member);
    auto sm = containment_split(*f, infinity_section({VarietyTag::mab, bm, {}, {}}), member);
    out.expect(sb.contained.size() == b_in &&
                   sb.contained.size() + sb.not_contained.size() == b_labels,
               "q=" + std::to_string(q) + " B split " + std::to_string(sb.contained.size()) +
                   "/" + std::to_string(sb.contained.size() + sb.not_contained.size()));
    out.expect(sm.contained.size() == m_in &&
                   sm.contained.size() + sm.not_contained.size() == m_labels,
               "q=" + std::to_string(q) + " M split " + std::to_string(sm.contained.size()) +
                   "/" + std::to_string(sm.contained.size() + sm.not_contained.size()));
  };
  run_bm(5, 51, 51, 151, 51);
  run_bm(3, 19, 1, 37, 1);
  run_bm(4, 17, 17, 81, 17);

  auto bt = bt_params(3);
  auto member = [&](const Pt& p) { return c3eps_member(bt, p); };
  auto sh = containment_split(*bt.f, infinity_section({VarietyTag::heps, {}, bt, {}}), member);
  out.expect(sh.contained.size() == 65 && sh.contained.size() + sh.not_contained.size() == 577,
             "q=8 H split");
  out.detail = "51/151 (q=5), 1/19 and 1/37 (q=3), 17/81 (q=4), 65/577 (q=8)";
  return out;
}

// --- criterion 7: partition of Fbar ------------------------------------------

Outcome criterion7() {
  Outcome out;
  for (std::uint32_t q : {3u, 5u}) {
    auto t0 = clock_type::now();
    auto f = gf2_of(q);
    auto bm = default_bm_params(f);
    auto labels = infinity_section({VarietyTag::mab, bm, {}, {}});
    auto fbar = points_fbar(*f);
    std::uint64_t expect = (static_cast<std::uint64_t>(q) * q * q + q * q + 1) * (q + 1);
    auto res = partition_check(*f, labels, fbar);
    out.expect(res.ok(), "q=" + std::to_string(q) + " partition failed");
    out.expect(fbar.size() == expect, "q=" + std::to_string(q) + " |Fbar| = " +
                                          std::to_string(fbar.size()));
    out.expect(seconds_since(t0) < 5.0, "q=" + std::to_string(q) + " exceeded 5 s");
  }
  out.detail = "148 points (q=3), 906 points (q=5)";
  return out;
}

// --- criterion 8: quadric classification over every valid pair --------------

Outcome criterion8() {
  Outcome out;
  struct Case {
    std::uint32_t q;
    std::uint64_t count;
  };
  for (Case c : {Case{3, 130}, Case{4, 357}, Case{5, 806}}) {
    auto f = gf2_of(c.q);
    for (const BMParams& bm : all_valid_params(f)) {
      QuadForm<6> base = base_quad(bm);
      Fel det = determinant(f->base(), base_matrix(bm).a);
      out.expect(det == base_det_closed_form(bm) && det != 0,
                 "det mismatch q=" + std::to_string(c.q));
      out.expect(classify_quadric(f->base(), base) == QuadricType::hyperbolic,
                 "non-hyperbolic base q=" + std::to_string(c.q));
      out.expect(quadric_point_count(f->base(), base) == c.count,
                 "base point count q=" + std::to_string(c.q));
    }
  }
  out.detail = "hyperbolic with 130/357/806 base points, det = closed form, all valid (a,b)";
  return out;
}

// --- criterion 9: psi correspondence ------------------------------------------

Outcome criterion9() {
  Outcome out;
  for (std::uint32_t q : {3u, 4u, 5u}) {
    auto f = gf2_of(q);
    auto bm = default_bm_params(f);
    const Gf& base = f->base();
    std::vector<std::uint64_t> lhs, rhs;
    for (const Pt& p : points_bab_affine(bm)) lhs.push_back(pack(psi(*f, p), q));
    for (std::uint64_t r = num_points(q, 5); r < num_points(q, 6); ++r) {
      Pt p = point_at(base, 6, r);
      if (bprime_member(bm, p)) rhs.push_back(pack(p, q));
    }
    std::sort(lhs.begin(), lhs.end());
    std::sort(rhs.begin(), rhs.end());
    out.expect(lhs == rhs, "BM correspondence failed at q=" + std::to_string(q));
  }
  auto bt = bt_params(3);
  std::vector<std::uint64_t> lhs, rhs;
  for (const Pt& p : points_veps_affine(bt)) lhs.push_back(pack(psi(*bt.f, p), 8));
  const Gf& f8 = bt.f->base();
  for (std::uint64_t r = num_points(8, 5); r < num_points(8, 6); ++r) {
    Pt p = point_at(f8, 6, r);
    if (c3eps_member(bt, p)) rhs.push_back(pack(p, 8));
  }
  std::sort(lhs.begin(), lhs.end());
  std::sort(rhs.begin(), rhs.end());
  out.expect(lhs == rhs, "BT correspondence failed at q=8");
  out.detail = "psi(affine B)=affine B' for q=3,4,5; psi(affine V3)=affine C3 for q=8";
  return out;
}

// --- criterion 10: union of lines at q = 8 -----------------------------------

Outcome criterion10() {
  Outcome out;
  auto t0 = clock_type::now();
  auto bt = bt_params(3);
  UnionOfLines u = union_of_lines_check(bt);
  out.expect(u.cprime_size == 4681, "|C'| = " + std::to_string(u.cprime_size));
  out.expect(u.count_identity, "|C3| != q|C'|+1");
  out.expect(u.c3_size == 37449, "|C3| = " + std::to_string(u.c3_size));
  out.expect(u.set_equal, "C3 differs from the line union");
  out.expect(seconds_since(t0) < 60.0, "exceeded 60 s");
  out.detail = "|C3| = 37449 = 8*4681 + 1, set equality exact";
  return out;
}

// --- criterion 11: Q1-Q3 audits -----------------------------------------------

Outcome criterion11() {
  Outcome out;
  for (std::uint32_t q : {3u, 4u, 5u}) {
    auto f = gf2_of(q);
    auto bm = default_bm_params(f);
    ConeAudit a = audit_quadric_cone(*f, bprime_quad(bm));
    out.expect(a.q1 && a.q2 && !a.q3, "B' audit at q=" + std::to_string(q));
  }
  auto f9 = gf2_of(3);
  ConeAudit h = audit_quadric_cone(*f9, hermitian_tangent_cone(*f9, f9->eps()));
  out.expect(h.q1 && h.q2 && h.q3, "Hermitian tangent-cone control");
  out.detail = "B' gives (true,true,false); Hermitian control gives (true,true,true)";
  return out;
}

// --- criterion 12: closed-form counts ------------------------------------------

Outcome criterion12() {
  Outcome out;
  out.expect(bm_unital_count(2, 2) == 2, "unital count (2,2)");
  out.expect(bm_unital_count(5, 1) == 3, "unital count (5,1)");
  out.expect(bm_variety_count(3, 2) == 4, "variety count (3,2)");
  out.detail = "2 at (2,2), 3 at (5,1), 4 at (3,2)";
  return out;
}

// --- criterion 13: property suites ---------------------------------------------

Outcome criterion13() {
  Outcome out;

  // spread disjointness/covering at q in {3,4,5,8}
  for (std::uint32_t q : {3u, 4u, 5u, 8u}) {
    auto f = gf2_of(q);
    auto spread = enum_spread(*f);
    std::vector<std::uint64_t> cover;
    for (const auto& l : spread)
      for (const Pt& p : l.pts) cover.push_back(pack(p, q));
    std::uint64_t raw = cover.size();
    std::sort(cover.begin(), cover.end());
    cover.erase(std::unique(cover.begin(), cover.end()), cover.end());
    out.expect(cover.size() == raw, "spread overlap at q=" + std::to_string(q));
    out.expect(cover.size() == num_points(q, 5), "spread cover at q=" + std::to_string(q));
  }

  // exhaustive field laws at q <= 9
  for (std::uint32_t q : {3u, 4u, 5u, 7u, 8u, 9u}) {
    auto f = gf2_of(q);
    for (std::uint32_t x = 0; x < f->size(); ++x) {
      Fel fx = static_cast<Fel>(x);
      out.expect(f->frobenius(f->frobenius(fx)) == fx, "frobenius involution");
      out.expect(f->pow(fx, static_cast<std::uint64_t>(q) * q) == fx, "pow(x, q^2) = x");
      Fel tr = f->rel_trace(fx), nm = f->rel_norm(fx);
      out.expect(f->in_base(f->lift(tr)) && f->in_base(f->lift(nm)), "trace/norm in GF(q)");
      out.expect(f->add(fx, f->frobenius(fx)) == f->lift(tr), "trace identity");
      out.expect(f->mul(fx, f->frobenius(fx)) == f->lift(nm), "norm identity");
    }
  }

  // normalize idempotence, exhaustive over PG(2,3) raw vectors
  {
    auto f3 = make_field(3, 1);
    for (std::uint32_t v = 1; v < 27; ++v) {
      Pt raw = make_pt({static_cast<Fel>(v % 3), static_cast<Fel>((v / 3) % 3),
                        static_cast<Fel>(v / 9)});
      if (lead_index(raw) == raw.n) continue;
      Pt n = normalize(*f3, raw);
      out.expect(normalize(*f3, n) == n, "normalize idempotence");
    }
  }

  // seeded bulk laws in GF(64): at least 1e5 cases
  {
    auto f = gf2_of(8);
    SplitMix64 rng(2024);
    for (int i = 0; i < 100000; ++i) {
      Fel x = static_cast<Fel>(rng.below(f->size()));
      Fel y = static_cast<Fel>(rng.below(f->size()));
      out.expect(f->rel_norm(f->mul(x, y)) == f->base().mul(f->rel_norm(x), f->rel_norm(y)),
                 "norm multiplicativity in GF(64)");
      out.expect(f->rel_trace(f->add(x, y)) == f->base().add(f->rel_trace(x), f->rel_trace(y)),
                 "trace additivity in GF(64)");
      if (!out.pass) break;
    }
  }

  out.detail = "spread partitions (q=3,4,5,8); field laws exhaustive q<=9 and 10^5 sampled in GF(64)";
  return out;
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> fn;
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  if (argc > 1) only = std::atoi(argv[1]);

  std::vector<Criterion> criteria = {
      {1, "two-character BM q=3, exhaustive (a,b) sweep", criterion1},
      {2, "two-character BM q=5, all 16276 hyperplanes",
       [] { return full_scan_criterion(5, {{126, 13000}, {151, 3276}}, 16276, 30.0); }},
      {3, "two-character BM q=4, all 4369 hyperplanes",
       [] { return full_scan_criterion(4, {{65, 3264}, {81, 1105}}, 4369, 10.0); }},
      {4, "two-character BT q=8, full + sampled gate", criterion4},
      {5, "spread lines contained in the cones", criterion5},
      {6, "infinity containment splits", criterion6},
      {7, "spread partition of Fbar (q=3,5)", criterion7},
      {8, "base quadric classification and determinants", criterion8},
      {9, "psi correspondence of affine parts", criterion9},
      {10, "union-of-lines description of C3 (q=8)", criterion10},
      {11, "Q1-Q3 audits", criterion11},
      {12, "closed-form inequivalence counts", criterion12},
      {13, "property suites", criterion13},
  };

  bool all_pass = true;
  for (const auto& c : criteria) {
    if (only && c.id != only) continue;
    auto t0 = clock_type::now();
    Outcome out;
    try {
      out = c.fn();
    } catch (const std::exception& e) {
      out.pass = false;
      out.detail = std::string("exception: ") + e.what();
    }
    double dt = seconds_since(t0);
    std::printf("[%2d] %s  %s%s%s  (%.2fs)\n", c.id, out.pass ? "PASS" : "FAIL", c.name,
                out.detail.empty() ? "" : " -- ", out.detail.c_str(), dt);
    std::fflush(stdout);
    all_pass = all_pass && out.pass;
  }
  if (!all_pass) {
    std::printf("ACCEPTANCE: FAIL\n");
    return 1;
  }
  std::printf("ACCEPTANCE: PASS\n");
  return 0;
}
