// qhvar: exact verification of quasi-Hermitian variety geometry over small
// prime powers. See README.md for the subcommand catalogue.

#include <CLI11.hpp>

#include "qhvar/cli.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Quasi-Hermitian varieties of PG(3,q^2) and their PG(6,q) representation"};
  app.require_subcommand(1);

  qhvar::RunConfig cfg;
  std::uint64_t sampled = 0;

  auto add_field_opts = [&](CLI::App* sub) {
    sub->add_option("--q", cfg.q, "field order q (prime power)");
    sub->add_option("--p", cfg.p, "characteristic (alternative to --q)");
    sub->add_option("--e", cfg.e, "extension degree (with --p, or the BT exponent)");
    sub->add_option("--delta", cfg.delta, "override delta (canonical code in GF(q))");
    sub->add_option("--modulus", cfg.modulus,
                    "modulus of GF(q) over GF(p), constant term first, e.g. 1,1,0,1");
  };
  auto add_bm_opts = [&](CLI::App* sub) {
    sub->add_option("--a", cfg.a, "parameter a as c0,c1");
    sub->add_option("--b", cfg.b, "parameter b as c0,c1");
  };
  auto add_scan_opts = [&](CLI::App* sub) {
    sub->add_flag("--full", cfg.full, "scan every hyperplane");
    sub->add_option("--sampled", sampled, "scan a seeded sample of N hyperplanes")
        ->expected(1);
    sub->add_option("--seed", cfg.seed, "sample seed");
    sub->add_option("--checkpoint", cfg.checkpoint, "shard checkpoint file for long scans");
  };
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--workers", cfg.workers, "worker threads (default: QHVAR_WORKERS or cores)");
    sub->add_option("--out", cfg.out, "write the report to this path (atomically)");
    sub->add_option("--format", cfg.format, "json|csv|text")->default_str("json");
  };

  CLI::App* bm = app.add_subcommand("verify-bm", "full BM pipeline for one (q, a, b)");
  add_field_opts(bm);
  add_bm_opts(bm);
  add_scan_opts(bm);
  add_common(bm);

  CLI::App* bt = app.add_subcommand("verify-bt", "full BT pipeline for one odd e > 1");
  add_field_opts(bt);
  add_scan_opts(bt);
  add_common(bt);

  CLI::App* tc = app.add_subcommand("two-character", "hyperplane intersection histogram");
  add_field_opts(tc);
  add_bm_opts(tc);
  add_scan_opts(tc);
  add_common(tc);
  tc->add_option("--variety", cfg.variety, "mab|bab|heps|veps|hermitian|fcone");

  CLI::App* cq = app.add_subcommand("classify-quadric", "base matrix, determinant, type");
  add_field_opts(cq);
  add_bm_opts(cq);
  add_common(cq);

  CLI::App* cs = app.add_subcommand("count-spread-lines", "spread lines inside a hypersurface");
  add_field_opts(cs);
  add_bm_opts(cs);
  add_common(cs);
  cs->add_option("--hypersurface", cfg.hypersurface, "bprime|c3eps");

  CLI::App* cnt = app.add_subcommand("counts", "closed-form inequivalence counts");
  cnt->add_option("--theorem", cfg.theorem, "bm-unitals|bm-varieties")->required();
  cnt->add_option("--p", cfg.p, "characteristic")->required();
  cnt->add_option("--n", cfg.n, "exponent of q = p^n")->required();
  add_common(cnt);

  CLI::App* st = app.add_subcommand("spread-selftest", "disjointness and covering of the spread");
  add_field_opts(st);
  add_common(st);

  CLI11_PARSE(app, argc, argv);

  cfg.command = app.get_subcommands().front()->get_name();
  if (sampled > 0) cfg.sampled = sampled;
  return qhvar::run(cfg);
}
