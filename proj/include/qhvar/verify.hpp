#pragma once
// Verification procedures: two-character hyperplane scans (full or sampled),
// spread-line containment counting, infinity sections with their case splits,
// the partition of Fbar, the Q1-Q3 cone audit and the gcd check for the BT
// exponent. Everything returns structured results suitable for reports.

#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "qhvar/bc.hpp"
#include "qhvar/common.hpp"
#include "qhvar/ff.hpp"
#include "qhvar/hypersurfaces.hpp"
#include "qhvar/parallel.hpp"
#include "qhvar/pg.hpp"
#include "qhvar/varieties.hpp"

namespace qhvar {

// ---------------------------------------------------------------------------
// Two-character scan

struct IntersectionHistogram {
  std::map<std::uint64_t, std::uint64_t> counts;  // intersection size -> #hyperplanes
  std::uint64_t hyperplanes_scanned = 0;
  std::uint64_t hyperplane_total = 0;

  std::uint64_t weighted_sum() const {
    std::uint64_t s = 0;
    for (auto& [size, n] : counts) s += size * n;
    return s;
  }
};

enum class ScanMode { full, sampled };

struct ScanOptions {
  ScanMode mode = ScanMode::full;
  std::uint64_t sample_n = 10000;
  std::uint64_t seed = 1;
  unsigned workers = 0;           // 0 = default_workers()
  std::uint64_t shard_size = 4096;
  // Checkpoint hooks for long runs: shards listed in `completed` are skipped
  // and their per-size counts merged from `preloaded`; on_shard reports each
  // freshly finished shard (called under a lock, in arbitrary order).
  std::set<std::uint64_t> completed;
  std::map<std::uint64_t, std::uint64_t> preloaded;
  std::function<void(std::uint64_t shard, const std::map<std::uint64_t, std::uint64_t>&)> on_shard;
};

namespace vdetail {

// Count, for every hyperplane rank in [lo,hi), the points of `flat` on it.
// `flat` holds 4 coordinates per point. Histogram is indexed by count.
inline void scan_range(const Gf2& f, const std::vector<Fel>& flat, std::uint64_t lo,
                       std::uint64_t hi, std::vector<std::uint64_t>& hist,
                       const std::vector<std::uint64_t>* sample_ranks) {
  const std::size_t m = flat.size() / 4;
  const FieldCore::ScanTables t = f.scan_tables();
  for (std::uint64_t idx = lo; idx < hi; ++idx) {
    std::uint64_t r = sample_ranks ? (*sample_ranks)[idx] : idx;
    Pt h = point_at(f, 3, r);
    std::uint64_t cnt = 0;
    if (t.mul) {
      const std::uint32_t n = t.n;
      const Fel* m0 = t.mul + static_cast<std::size_t>(h[0]) * n;
      const Fel* m1 = t.mul + static_cast<std::size_t>(h[1]) * n;
      const Fel* m2 = t.mul + static_cast<std::size_t>(h[2]) * n;
      const Fel* m3 = t.mul + static_cast<std::size_t>(h[3]) * n;
      const Fel* add = t.add;
      const Fel* p = flat.data();
      for (std::size_t i = 0; i < m; ++i, p += 4) {
        Fel s01 = add[static_cast<std::size_t>(m0[p[0]]) * n + m1[p[1]]];
        Fel s23 = add[static_cast<std::size_t>(m2[p[2]]) * n + m3[p[3]]];
        cnt += add[static_cast<std::size_t>(s01) * n + s23] == 0;
      }
    } else {
      const Fel* p = flat.data();
      for (std::size_t i = 0; i < m; ++i, p += 4) {
        Fel s = f.add(f.add(f.mul(h[0], p[0]), f.mul(h[1], p[1])),
                      f.add(f.mul(h[2], p[2]), f.mul(h[3], p[3])));
        cnt += s == 0;
      }
    }
    ++hist[cnt];
  }
}

}  // namespace vdetail

// Tally |H intersect V| over hyperplanes of PG(3,q^2): all of them in full
// mode, a seeded deterministic sample without replacement in sampled mode.
inline IntersectionHistogram two_character_scan(const Gf2& f, const std::vector<Pt>& variety,
                                                const ScanOptions& opt = {}) {
  const std::size_t m = variety.size();
  std::vector<Fel> flat(4 * m);
  for (std::size_t i = 0; i < m; ++i) {
    require(variety[i].n == 4, errc::dimension_mismatch, "variety must live in PG(3,q^2)");
    for (int k = 0; k < 4; ++k) flat[4 * i + k] = variety[i][k];
  }

  const std::uint64_t total = num_points(f.size(), 3);
  std::vector<std::uint64_t> sample_ranks;
  std::uint64_t n_items = total;
  if (opt.mode == ScanMode::sampled) {
    require(opt.sample_n <= total, errc::config_error, "sample larger than the hyperplane count");
    std::set<std::uint64_t> seen;
    SplitMix64 rng(opt.seed);
    while (seen.size() < opt.sample_n) seen.insert(rng.below(total));
    sample_ranks.assign(seen.begin(), seen.end());
    n_items = sample_ranks.size();
  }

  const std::uint64_t shard_size = opt.shard_size ? opt.shard_size : 4096;
  const std::uint64_t n_shards = (n_items + shard_size - 1) / shard_size;
  const unsigned workers = opt.workers ? opt.workers : default_workers();

  std::vector<std::uint64_t> merged(m + 1, 0);
  std::mutex merge_mu;
  parallel_shards(n_shards, workers, [&](std::uint64_t s) {
    if (opt.completed.count(s)) return;
    std::uint64_t lo = s * shard_size;
    std::uint64_t hi = std::min(n_items, lo + shard_size);
    std::vector<std::uint64_t> local(m + 1, 0);
    vdetail::scan_range(f, flat, lo, hi, local,
                        opt.mode == ScanMode::sampled ? &sample_ranks : nullptr);
    std::map<std::uint64_t, std::uint64_t> local_map;
    for (std::size_t c = 0; c <= m; ++c)
      if (local[c]) local_map[c] = local[c];
    std::lock_guard<std::mutex> lock(merge_mu);
    for (std::size_t c = 0; c <= m; ++c) merged[c] += local[c];
    if (opt.on_shard) opt.on_shard(s, local_map);
  });

  IntersectionHistogram hist;
  hist.hyperplane_total = total;
  for (std::size_t c = 0; c <= m; ++c)
    if (merged[c]) hist.counts[c] += merged[c];
  for (auto& [size, n] : opt.preloaded) hist.counts[size] += n;
  for (auto& [size, n] : hist.counts) hist.hyperplanes_scanned += n;
  return hist;
}

// The histogram forced by the two-character property together with the
// double count sum_H |H cap V| = |V| (q^4+q^2+1).
inline std::map<std::uint64_t, std::uint64_t> solved_two_char_histogram(std::uint64_t q,
                                                                        std::uint64_t variety_size) {
  auto [s1, s2] = expected_intersection_sizes(3, q);
  std::uint64_t n_hyp = num_points(static_cast<std::uint32_t>(q * q), 3);
  std::uint64_t q2 = q * q;
  std::uint64_t incidences = variety_size * (q2 * q2 + q2 + 1);
  std::uint64_t n2 = (incidences - s1 * n_hyp) / (s2 - s1);
  return {{s1, n_hyp - n2}, {s2, n2}};
}

// ---------------------------------------------------------------------------
// Spread containment

using Member6 = std::function<bool(const Pt&)>;

struct SpreadContainment {
  std::uint64_t contained = 0;
  std::vector<Pt> labels;                  // labels of fully contained lines
  std::array<std::uint64_t, 3> by_type{};  // counts for types a, b, c
};

inline bool line_contained(const SpreadLine& line, const Member6& member) {
  for (const Pt& p : line.pts)
    if (!member(p)) return false;
  return true;
}

// Full scan over the spread: which lines lie entirely inside the hypersurface.
inline SpreadContainment count_spread_lines_in(const Gf2& f2, const Member6& member) {
  SpreadContainment out;
  std::uint64_t n_inf = num_points(f2.size(), 2);
  for (std::uint64_t r = 0; r < n_inf; ++r) {
    SpreadLine line = spread_line(f2, point_at(f2, 3, r));
    if (line_contained(line, member)) {
      ++out.contained;
      ++out.by_type[static_cast<std::size_t>(line.type)];
      out.labels.push_back(line.label);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Infinity sections

// The J = 0 points of the variety; each one labels a spread line.
inline std::vector<Pt> infinity_section(const VarietySpec& v) {
  switch (v.tag) {
    case VarietyTag::bab:
    case VarietyTag::mab:
    case VarietyTag::veps:
    case VarietyTag::heps:
      break;
    default:
      throw error(errc::unsupported_variety, "infinity section is defined for Bab/Mab/Veps/Heps");
  }
  const Gf2& f = v.field();
  std::vector<Pt> labels;
  std::uint64_t n_inf = num_points(f.size(), 2);
  for (std::uint64_t r = 0; r < n_inf; ++r) {
    Pt p = point_at(f, 3, r);
    if (member(v, p)) labels.push_back(p);
  }
  return labels;
}

struct ContainmentSplit {
  std::vector<Pt> contained;
  std::vector<Pt> not_contained;
};

// Split the infinity labels of a variety by full containment of their spread
// lines in the corresponding hypersurface.
inline ContainmentSplit containment_split(const Gf2& f2, const std::vector<Pt>& labels,
                                          const Member6& member) {
  ContainmentSplit out;
  for (const Pt& label : labels) {
    SpreadLine line = spread_line(f2, label);
    (line_contained(line, member) ? out.contained : out.not_contained).push_back(label);
  }
  return out;
}

struct PartitionResult {
  bool pairwise_disjoint = false;
  bool all_contained = false;
  bool covers = false;
  std::uint64_t union_size = 0;
  std::uint64_t target_size = 0;

  bool ok() const { return pairwise_disjoint && all_contained && covers; }
};

// Do the spread lines of the given labels partition the target point set?
inline PartitionResult partition_check(const Gf2& f2, const std::vector<Pt>& labels,
                                       const std::vector<Pt>& target) {
  const std::uint32_t q = f2.base().size();
  std::vector<std::uint64_t> target_codes;
  target_codes.reserve(target.size());
  for (const Pt& p : target) target_codes.push_back(pack(p, q));
  std::sort(target_codes.begin(), target_codes.end());

  std::vector<std::uint64_t> union_codes;
  PartitionResult res;
  res.all_contained = true;
  for (const Pt& label : labels) {
    SpreadLine line = spread_line(f2, label);
    for (const Pt& p : line.pts) {
      std::uint64_t code = pack(p, q);
      union_codes.push_back(code);
      if (!std::binary_search(target_codes.begin(), target_codes.end(), code))
        res.all_contained = false;
    }
  }
  std::uint64_t raw = union_codes.size();
  std::sort(union_codes.begin(), union_codes.end());
  union_codes.erase(std::unique(union_codes.begin(), union_codes.end()), union_codes.end());
  res.pairwise_disjoint = union_codes.size() == raw;
  res.union_size = union_codes.size();
  res.target_size = target_codes.size();
  res.covers = res.all_contained && union_codes == target_codes;
  return res;
}

// ---------------------------------------------------------------------------
// Q1-Q3 audit

struct ConeAudit {
  bool q1 = false;  // singular locus meets r_{P_inf}
  bool q2 = false;  // base quadric non-degenerate of the predicted type
  bool q3 = false;  // section at infinity is a union of spread lines
};

// Audit a quadratic cone of PG(6,q) against the three properties satisfied
// by the representation of a Hermitian surface tangent to the infinity
// hyperplane: vertex on r_{P_inf}, hyperbolic base, spread-union section.
inline ConeAudit audit_quadric_cone(const Gf2& f2, const QuadForm<7>& cone) {
  const Gf& f = f2.base();
  ConeAudit audit;

  for (const Pt& s : singular_points(f, cone)) {
    bool on_rpinf = true;
    for (int i = 0; i < 5; ++i)
      if (s[i] != 0) on_rpinf = false;
    if (on_rpinf) audit.q1 = true;
  }

  for (std::size_t i = 0; i < 7; ++i)
    require(cone.at(std::min<std::size_t>(i, 5), std::max<std::size_t>(i, 5)) == 0,
            errc::domain_error, "cone form must not involve the vertex direction x5");
  QuadForm<6> base;
  constexpr std::size_t map[6] = {0, 1, 2, 3, 4, 6};
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = i; j < 6; ++j) base.at(i, j) = cone.at(map[i], map[j]);
  try {
    audit.q2 = classify_quadric(f, base) == QuadricType::hyperbolic;
  } catch (const error&) {
    audit.q2 = false;
  }

  // Q3: the x0 = 0 section equals the union of the spread lines inside it.
  auto member = [&](const Pt& p) { return cone.eval(f, p) == 0; };
  std::vector<std::uint64_t> section_codes;
  std::uint64_t n_inf = num_points(f.size(), 5);
  for (std::uint64_t r = 0; r < n_inf; ++r) {
    Pt p = point_at(f, 6, r);
    if (member(p)) section_codes.push_back(pack(p, f.size()));
  }
  std::sort(section_codes.begin(), section_codes.end());
  std::vector<std::uint64_t> union_codes;
  std::uint64_t n_labels = num_points(f2.size(), 2);
  for (std::uint64_t r = 0; r < n_labels; ++r) {
    SpreadLine line = spread_line(f2, point_at(f2, 3, r));
    if (line_contained(line, member))
      for (const Pt& p : line.pts) union_codes.push_back(pack(p, f.size()));
  }
  std::sort(union_codes.begin(), union_codes.end());
  union_codes.erase(std::unique(union_codes.begin(), union_codes.end()), union_codes.end());
  audit.q3 = union_codes == section_codes;
  return audit;
}

// ---------------------------------------------------------------------------
// BT exponent arithmetic

// gcd(2^((e+1)/2) + 2, 2^e - 1); equal to 1 for every odd e exercised here,
// which is what makes the infinity section of C^3_eps a single hyperplane
// section x1 = x3.
inline std::uint64_t gcd_check(std::uint32_t e) {
  require(e > 1 && e % 2 == 1, errc::even_e, "gcd check needs odd e > 1");
  std::uint64_t a = (1ULL << ((e + 1) / 2)) + 2;
  std::uint64_t b = (1ULL << e) - 1;
  return std::gcd(a, b);
}

}  // namespace qhvar
