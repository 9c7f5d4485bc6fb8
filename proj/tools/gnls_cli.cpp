// gnls: command-line driver for the Gevrey NLS experiments and audits.

#include "gnls/errors.hpp"
#include "gnls/harness.hpp"
#include "gnls/snapshot_io.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

namespace {

using namespace gnls;
using namespace gnls::harness;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitViolation = 3;

struct Common {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  int threads = 1;
  bool svg = false;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--config", c.config, "INI configuration file");
  app->add_option("--out", c.out, "output directory");
  app->add_option("--seed", c.seed, "seed (overrides data.seed and audit seeds)");
  app->add_option("--threads", c.threads, "worker threads")->check(CLI::PositiveNumber);
  app->add_flag("--svg", c.svg, "also write an SVG plot of sigma_hat(t) vs sigma_floor(t)");
}

ExperimentConfig make_config(const Common& c) {
  ExperimentConfig cfg = c.config.empty() ? ExperimentConfig{} : load_config(c.config);
  if (c.seed) cfg.data.seed = *c.seed;
  cfg.out_dir = c.out;
  cfg.threads = c.threads;
  cfg.svg = c.svg;
  cfg.validate();
  return cfg;
}

Echo common_echo(const Common& c, Echo extra) {
  Echo e{{"config", c.config.empty() ? "<none>" : c.config},
         {"seed", c.seed ? fmt::format("{}", *c.seed) : "default"},
         {"threads", fmt::format("{}", c.threads)}};
  e.insert(e.end(), extra.begin(), extra.end());
  return e;
}

void write_summary(const Common& c, const std::string& name, const std::string& text) {
  std::cout << text;
  if (c.out.empty()) return;
  std::filesystem::create_directories(c.out);
  std::ofstream(std::filesystem::path(c.out) / name) << text;
}

int cmd_simulate(const Common& c) {
  const auto cfg = make_config(c);
  const auto rec = run_simulate(cfg);
  std::string s = fmt::format("snapshots = {}\nmass_drift = {}\nenergy_drift = {}\n", rec.norms.size(),
                              num(rec.mass_drift), num(rec.energy_drift));
  if (rec.exactness_error) s += fmt::format("exactness_error = {}\n", num(*rec.exactness_error));
  write_summary(c, "summary.txt", s);
  return kExitOk;
}

int cmd_radius(const Common& c) {
  const auto cfg = make_config(c);
  const auto rec = run_radius_tracking(cfg);
  std::string s;
  for (const auto& w : rec.warnings) s += fmt::format("warning: {}\n", w);
  s += fmt::format("snapshots = {}\nsigma0 = {}\nA0 = {}\nC = {}{}\nc_hat = {}\nfailures = {}\n",
                   rec.radius_rows.size(), num(rec.floor_params.sigma0), num(rec.floor_params.A0),
                   num(rec.floor_params.C), rec.fitted_C ? " (fitted)" : "",
                   rec.c_hat ? num(*rec.c_hat) : "undefined", rec.failures.size());
  for (auto i : rec.failures) {
    const auto& r = rec.radius_rows[i];
    s += fmt::format("  t = {}: sigma_hat = {} sigma_floor = {} ({})\n", num(r.t), num(r.estimate.sigma_hat),
                     num(r.sigma_floor), r.verdict);
  }
  write_summary(c, "summary.txt", s);
  return rec.failures.empty() ? kExitOk : kExitViolation;
}

int cmd_sweep(const Common& c) {
  const auto cfg = make_config(c);
  const auto sw = run_almost_conservation_sweep(cfg);
  std::string s;
  for (const auto& w : sw.warnings) s += fmt::format("warning: {}\n", w);
  s += fmt::format("A0 = {}\ndelta = {}\nnoise_floor = {}\nslope = {}\nfitted_C = {}\nmonotone = {}\n", num(sw.A0),
                   num(sw.delta), num(sw.noise_floor), num(sw.slope), num(sw.fitted_C), sw.monotone);
  write_summary(c, "summary.txt", s);
  return kExitOk;
}

int finish_audit(const Common& c, const std::string& stem, const Echo& echo, const std::vector<AuditReport>& reports) {
  std::ostringstream summary;
  write_audit_summary(summary, echo, reports);
  if (!c.out.empty()) write_audit_csv(std::filesystem::path(c.out) / (stem + ".csv"), echo, reports);
  write_summary(c, stem + "_summary.txt", summary.str());
  for (const auto& r : reports)
    if (r.violations > 0) return kExitViolation;
  return kExitOk;
}

int main_impl(int argc, char** argv) {
  CLI::App app{"Gevrey-regularity experiments for the cubic NLS on the torus"};
  app.set_version_flag("--version", version());
  app.require_subcommand(1);

  Common sim_c, rad_c, sw_c, am_c, af_c, at_c, agn_c, bk_c, nm_c;

  auto* sim = app.add_subcommand("simulate", "evolve initial data; write trajectory and norms");
  add_common(sim, sim_c);
  auto* rad = app.add_subcommand("radius", "track the analyticity radius against the bookkeeping floor");
  add_common(rad, rad_c);
  auto* sw = app.add_subcommand("sweep", "almost-conservation sweep over sigma");
  add_common(sw, sw_c);

  auto* am = app.add_subcommand("audit-multiplier", "random check of the pointwise multiplier bound");
  add_common(am, am_c);
  std::size_t am_count = 1000000;
  double am_max = 1e3;
  std::vector<double> am_sigmas{1e-3, 1e-1, 1.0};
  std::vector<int> am_dims{1, 2, 3};
  am->add_option("--count", am_count, "triples per (d, sigma)");
  am->add_option("--max-abs", am_max, "largest |xi_j|");
  am->add_option("--sigmas", am_sigmas, "sigma values");
  am->add_option("--dims", am_dims, "dimensions")->check(CLI::Range(1, 3));

  auto* af = app.add_subcommand("audit-f", "remainder estimate on a random ensemble");
  add_common(af, af_c);
  FEnsembleSpec af_spec;
  af->add_option("--members", af_spec.members);
  af->add_option("--sigma", af_spec.sigma);
  af->add_option("--band", af_spec.band);
  af->add_option("--decay", af_spec.decay);
  bool af_spacetime = false;
  double af_delta = 0.1;
  af->add_flag("--spacetime", af_spacetime, "also run the windowed space-time version on the config data");
  af->add_option("--delta", af_delta, "window length for --spacetime");

  auto* at = app.add_subcommand("audit-trilinear", "trilinear product estimates on random ensembles");
  add_common(at, at_c);
  std::vector<int> at_kinds{1, 2, 3};
  TrilinearSpec at_spec;
  at->add_option("--kinds", at_kinds)->check(CLI::Range(1, 3));
  at->add_option("--members", at_spec.members);
  at->add_option("--b", at_spec.b);
  at->add_option("--sigma", at_spec.sigma);

  auto* agn = app.add_subcommand("audit-gn", "Gagliardo-Nirenberg ratio of the configured initial data");
  add_common(agn, agn_c);

  auto* bk = app.add_subcommand("bookkeeper", "local-step and radius bookkeeping");
  add_common(bk, bk_c);
  BookkeeperParams bp;
  double bk_scale = 1.0;
  double bk_data_norm = 0.0;
  bk->add_option("--sigma0", bp.sigma0);
  bk->add_option("--A0", bp.A0);
  bk->add_option("--c0", bp.c0);
  bk->add_option("--C", bp.C);
  bk->add_option("--eps", bp.eps);
  bk->add_option("--T", bp.T);
  auto* dn = bk->add_option("--data-norm", bk_data_norm, "data norm for the norm-based local step");
  bk->add_flag("--delta-from-norm", bp.delta_from_norm);
  bk->add_option("--sigma-scale", bk_scale, "multiply the chosen sigma (values > 1 probe failure)");

  auto* nm = app.add_subcommand("norms", "norm report for GNLS snapshot files");
  add_common(nm, nm_c);
  std::vector<std::string> nm_files;
  double nm_sigma = 0.0;
  nm->add_option("files", nm_files)->required()->check(CLI::ExistingFile);
  nm->add_option("--sigma", nm_sigma);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  if (sim->parsed()) return cmd_simulate(sim_c);
  if (rad->parsed()) return cmd_radius(rad_c);
  if (sw->parsed()) return cmd_sweep(sw_c);

  if (am->parsed()) {
    const std::uint64_t seed = am_c.seed.value_or(0);
    std::vector<AuditReport> reports;
    for (int d : am_dims) {
      const auto triples = random_triples(d, am_count, am_max, seed + static_cast<std::uint64_t>(d));
      for (double s : am_sigmas) {
        auto r = audit_multiplier_inequality(s, triples);
        r.kind = fmt::format("multiplier-d{}-sigma{}", d, fmt::format("{:g}", s));
        r.ensemble.seed = seed;
        reports.push_back(std::move(r));
      }
    }
    return finish_audit(am_c, "multiplier", common_echo(am_c, {{"count", fmt::format("{}", am_count)},
                                                              {"max_abs", num(am_max)}}),
                        reports);
  }

  if (af->parsed()) {
    af_spec.seed = af_c.seed.value_or(0);
    auto ens = audit_f_ensemble(af_spec, af_c.threads);
    std::vector<AuditReport> reports{ens.audit};
    if (af_spacetime) {
      const auto cfg = make_config(af_c);
      const Field u0 = make_initial_data(cfg.grid.make(), cfg.data);
      WindowSpec w;
      w.delta = af_delta;
      reports.push_back(audit_f_spacetime(u0, af_spec.sigma, w));
    }
    std::vector<double> halving = ens.halving_ratios;
    std::cout << fmt::format("halving_ratio_median = {}\nmonotonicity_failures = {}\n", num(median(halving)),
                             ens.monotonicity_failures);
    return finish_audit(af_c, "f_estimate",
                        common_echo(af_c, {{"members", fmt::format("{}", af_spec.members)},
                                           {"sigma", num(af_spec.sigma)},
                                           {"band", fmt::format("{}", af_spec.band)},
                                           {"decay", num(af_spec.decay)}}),
                        reports);
  }

  if (at->parsed()) {
    at_spec.seed = at_c.seed.value_or(0);
    std::vector<AuditReport> reports;
    for (int k : at_kinds) {
      at_spec.kind = static_cast<TrilinearKind>(k);
      auto r = audit_trilinear(at_spec, at_c.threads);
      if (!std::isfinite(r.ensemble.max_ratio)) ++r.violations;
      reports.push_back(std::move(r));
    }
    return finish_audit(at_c, "trilinear",
                        common_echo(at_c, {{"members", fmt::format("{}", at_spec.members)},
                                           {"b", num(at_spec.b)},
                                           {"sigma", num(at_spec.sigma)}}),
                        reports);
  }

  if (agn->parsed()) {
    const auto cfg = make_config(agn_c);
    auto r = audit_gagliardo_nirenberg(make_initial_data(cfg.grid.make(), cfg.data));
    r.ensemble.seed = cfg.data.seed;
    return finish_audit(agn_c, "gagliardo_nirenberg", cfg.echo(), {r});
  }

  if (bk->parsed()) {
    if (dn->count() > 0) bp.data_norm = bk_data_norm;
    const auto choice = sigma_for_T(bp);
    const auto trace = run_induction(bp, choice.sigma * bk_scale);
    const Echo echo = common_echo(bk_c, {{"sigma0", num(bp.sigma0)},
                                         {"A0", num(bp.A0)},
                                         {"c0", num(bp.c0)},
                                         {"C", num(bp.C)},
                                         {"eps", num(bp.eps)},
                                         {"T", num(bp.T)},
                                         {"delta_from_norm", bp.delta_from_norm ? "true" : "false"},
                                         {"sigma_scale", num(bk_scale)}});
    if (!bk_c.out.empty()) write_bookkeeper_csv(std::filesystem::path(bk_c.out) / "bookkeeper.csv", echo, trace);
    write_summary(bk_c, "bookkeeper_summary.txt", bookkeeper_summary(trace) + "\n");
    return trace.all_ok ? kExitOk : kExitViolation;
  }

  if (nm->parsed()) {
    RunRecord rec;
    for (const auto& f : nm_files) {
      const auto snap = read_snapshot(f);
      rec.norms.push_back(norm_report(snap.field, nm_sigma, snap.t));
      try {
        rec.radii.push_back(radius_estimate(snap.field));
      } catch (const ValidationError&) {
        RadiusEstimate r;
        r.sigma_hat = std::numeric_limits<double>::quiet_NaN();
        r.floor_flag = true;
        rec.radii.push_back(r);
      }
    }
    const Echo echo = common_echo(nm_c, {{"sigma", num(nm_sigma)}});
    const auto path = std::filesystem::path(nm_c.out.empty() ? "." : nm_c.out) / "norms.csv";
    write_norms_csv(path, echo, rec);
    std::cout << fmt::format("wrote {} rows to {}\n", rec.norms.size(), path.string());
    return kExitOk;
  }
  return kExitValidation;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return main_impl(argc, argv);
  } catch (const gnls::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "aborted: " << e.what() << '\n';
    return kExitRuntime;
  }
}
