// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include "gnls/bookkeeper.hpp"
#include "gnls/bourgain.hpp"
#include "gnls/errors.hpp"
#include "gnls/gevrey.hpp"
#include "gnls/harness.hpp"
#include "gnls/initial_data.hpp"
#include "gnls/integrator.hpp"

#include <fmt/core.h>

#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <numbers>
#include <random>
#include <string>

using namespace gnls;

namespace {

constexpr double kPi = std::numbers::pi;

// Tolerances and limits.
constexpr double kPlaneWaveError = 1e-10;
constexpr double kPlaneWaveSeconds = 1.0;
constexpr double kMassDrift = 1e-12;
constexpr double kEnergyRatioLo = 3.5, kEnergyRatioHi = 4.5;
constexpr double kCollapseTol = 1e-12;
constexpr double kMultiplierSeconds = 30.0;
constexpr double kHalvingLo = 1.9, kHalvingHi = 2.1;
constexpr double kRemainderZero = 1e-13;
constexpr double kSlopeLo = 0.8, kSlopeHi = 1.2;
constexpr double kExpRadiusLo = 0.693, kExpRadiusHi = 0.707;
constexpr double kSechRadiusRel = 0.02;
constexpr double kBranchAgreement = 1e-15;
constexpr double kTrilinearSpread = 10.0;
constexpr double kOracleTol = 1e-10;
constexpr double kTrilinearSeconds = 120.0;

struct Outcome {
  bool pass;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

Field plane_wave(const FourierGrid& g, double A, double k, double t) {
  ComplexArray v(g.size());
  for (int j = 0; j < g.points(); ++j) v[j] = A * std::polar(1.0, k * g.coordinate(j) - (k * k + A * A) * t);
  return Field::physical(g, v);
}

Field random_field(int index, std::mt19937_64& rng) {
  const int d = 1 + index % 3;
  const FourierGrid g(d, d == 1 ? 64 : (d == 2 ? 32 : 16), 2 * kPi + index % 5);
  return inverse_transform(random_bandlimited(g, g.points() / 4, 0.3, 1.0, rng));
}

double max_energy_drift(const Field& u0, double dt) {
  SolverConfig cfg;
  cfg.dt = dt;
  cfg.t_end = 1.0;
  cfg.snapshot_stride = static_cast<int>(std::lround(0.05 / dt));
  const double e0 = energy(u0);
  double drift = 0.0;
  for (const auto& s : evolve(u0, cfg).snapshots) drift = std::max(drift, std::abs(energy(s.field) - e0));
  return drift;
}

Outcome plane_wave_exactness() {
  const auto t0 = std::chrono::steady_clock::now();
  const FourierGrid g(1, 64, 2 * kPi);
  SolverConfig cfg;
  cfg.dt = 1e-3;
  cfg.t_end = 1.0;
  cfg.snapshot_stride = 100;
  const auto traj = evolve(plane_wave(g, 0.5, 3.0, 0.0), cfg);
  double err = 0.0;
  for (const auto& s : traj.snapshots) err = std::max(err, relative_l2_error(s.field, plane_wave(g, 0.5, 3.0, s.t)));
  const double secs = seconds_since(t0);
  return {err < kPlaneWaveError && secs < kPlaneWaveSeconds, fmt::format("max rel error {:.3e}, {:.3f} s", err, secs)};
}

Outcome mass_conservation() {
  const FourierGrid g(1, 256, 40.0);
  const Field u0 = make_initial_data(g, {DataKind::gaussian, 1.0, 1.0});
  SolverConfig cfg;
  cfg.dt = 1e-4;
  cfg.t_end = 1.0;
  cfg.snapshot_stride = 1000;
  const auto traj = evolve(u0, cfg);
  const double m0 = mass(u0);
  double drift = 0.0;
  for (const auto& s : traj.snapshots) drift = std::max(drift, std::abs(mass(s.field) / m0 - 1.0));
  return {cfg.step_count() == 10000 && drift < kMassDrift,
          fmt::format("{} steps, max rel drift {:.3e}", cfg.step_count(), drift)};
}

Outcome energy_order() {
  const FourierGrid g(1, 256, 40.0);
  const Field u0 = make_initial_data(g, {DataKind::gaussian, 1.0, 1.0});
  const double a = max_energy_drift(u0, 1e-2), b = max_energy_drift(u0, 5e-3);
  const double ratio = a / b;
  return {ratio >= kEnergyRatioLo && ratio <= kEnergyRatioHi,
          fmt::format("drift {:.3e} / {:.3e} = {:.4f}", a, b, ratio)};
}

Outcome sigma_zero_collapse() {
  std::mt19937_64 rng(20240101);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Field u = random_field(i, rng);
    worst = std::max(worst, rel(gevrey_norm(u, {0.0, 0.0}), std::sqrt(mass(u))));
    worst = std::max(worst, rel(a_sigma(u, 0.0), mass(u) + energy(u)));
  }
  return {worst < kCollapseTol, fmt::format("100 fields, max rel deviation {:.3e}", worst)};
}

Outcome embedding_monotonicity() {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> sig(0.0, 0.5), ess(0.0, 2.0);
  int violations = 0;
  for (int i = 0; i < 100; ++i) {
    const Field u = random_field(i, rng);
    for (int j = 0; j < 10; ++j) {
      const double s1 = sig(rng), s2 = sig(rng), a1 = ess(rng), a2 = ess(rng);
      const double lo = gevrey_norm(u, {std::min(s1, s2), std::min(a1, a2)});
      const double hi = gevrey_norm(u, {std::max(s1, s2), std::max(a1, a2)});
      if (lo > hi) ++violations;
    }
  }
  return {violations == 0, fmt::format("1000 pairs, {} violations", violations)};
}

Outcome multiplier_inequality() {
  const auto t0 = std::chrono::steady_clock::now();
  std::size_t violations = 0, checked = 0;
  double worst = 0.0;
  for (int d = 1; d <= 3; ++d) {
    const auto triples = random_triples(d, 1'000'000, 100.0, 1000 + d);
    for (double sigma : {1e-3, 1e-1, 1.0}) {
      const auto r = audit_multiplier_inequality(sigma, triples);
      violations += r.violations;
      checked += r.ensemble.count;
      worst = std::max(worst, r.ensemble.max_ratio);
    }
  }
  const double secs = seconds_since(t0);
  return {violations == 0 && secs < kMultiplierSeconds,
          fmt::format("{} checks, {} violations, max lhs/rhs {:.4f}, {:.1f} s", checked, violations, worst, secs)};
}

Outcome remainder_linearity() {
  const FourierGrid g(1, 64, 2 * kPi);
  std::mt19937_64 rng(5);
  const Field v = inverse_transform(random_bandlimited(g, 10, 0.3, 1.0, rng));
  bool ok = true;
  std::string ratios;
  for (double sigma : {1e-2, 5e-3}) {
    const double h = audit_f_estimate(v, sigma).halving_ratio;
    ok = ok && h >= kHalvingLo && h <= kHalvingHi;
    ratios += fmt::format("{:.4f} ", h);
  }
  const double at_zero = f_of_v(v, 0.0).values().abs().maxCoeff();
  const double constant = f_of_v(plane_wave(g, 0.7, 0.0, 0.0), 1e-2).values().abs().maxCoeff();
  ok = ok && at_zero <= kRemainderZero && constant <= kRemainderZero;
  return {ok, fmt::format("halving ratios {}| f(v;0) {:.1e} | f(k=0 plane wave) {:.1e}", ratios, at_zero, constant)};
}

Outcome almost_conservation() {
  harness::ExperimentConfig cfg;
  cfg.grid = {1, 256, 40.0};
  cfg.data = {DataKind::gaussian, 0.5, 1.0};
  const auto s = harness::run_almost_conservation_sweep(cfg);
  return {s.slope >= kSlopeLo && s.slope <= kSlopeHi && s.monotone,
          fmt::format("slope {:.4f}, monotone {}, noise floor {:.2e}, fitted C {:.3e}", s.slope, s.monotone,
                      s.noise_floor, s.fitted_C)};
}

Outcome radius_estimator() {
  const FourierGrid ge(1, 1024, 2 * kPi);
  ComplexArray c(ge.size());
  for (Eigen::Index i = 0; i < ge.size(); ++i) c[i] = std::exp(-0.7 * ge.abs_wavenumber()[i]);
  const double s_exp = radius_estimate(Field::spectral(ge, c)).sigma_hat;

  const FourierGrid gs(1, 1024, 40.0);
  const double s_sech = radius_estimate(make_initial_data(gs, {DataKind::periodized_sech, 1.0, 1.0})).sigma_hat;

  const FourierGrid gg(1, 256, 40.0);
  const bool entire = radius_estimate(make_initial_data(gg, {DataKind::gaussian, 1.0, 1.0})).entire_flag;

  const bool ok = s_exp >= kExpRadiusLo && s_exp <= kExpRadiusHi && rel(s_sech, kPi / 2) <= kSechRadiusRel && entire;
  return {ok, fmt::format("exp {:.5f}, sech {:.5f} (pi/2 {:.5f}), gaussian entire {}", s_exp, s_sech, kPi / 2, entire)};
}

Outcome radius_floor_run() {
  harness::ExperimentConfig cfg;
  cfg.grid = {1, 1024, 40.0};
  cfg.data = {DataKind::periodized_sech, 1.0, 1.0};
  cfg.solver.dt = 1e-3;
  cfg.solver.t_end = 10.0;
  cfg.solver.snapshot_stride = 100;
  const auto rec = harness::run_radius_tracking(cfg);
  double min_margin = INFINITY;
  for (const auto& r : rec.radius_rows)
    if (std::isfinite(r.estimate.sigma_hat)) min_margin = std::min(min_margin, r.estimate.sigma_hat - r.sigma_floor);
  const double c_hat = rec.c_hat.value_or(0.0);
  const bool ok = rec.failures.empty() && c_hat > 0.0 && rec.fitted_C.has_value();
  return {ok, fmt::format("{} snapshots, {} failures, C {:.3e}, min(sigma_hat - floor) {:.3e}, c_hat {:.4f}",
                          rec.radius_rows.size(), rec.failures.size(), rec.fitted_C.value_or(NAN), min_margin, c_hat)};
}

Outcome bookkeeper_arithmetic() {
  BookkeeperParams p;
  p.eps = 0.0;
  const double delta = local_delta(p);
  const double c1 = sigma_for_T(p).c1;
  bool ok = delta == 0.0625 && c1 == 1.0 / 512;

  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  int not_ok = 0;
  for (int i = 0; i < 10000; ++i) {
    BookkeeperParams q;
    q.sigma0 = 0.1 + u(rng);
    q.A0 = std::pow(10.0, -1 + 1.5 * u(rng));
    q.c0 = 0.1 + u(rng);
    q.C = std::pow(10.0, -3 + 3 * u(rng));
    q.eps = 0.1 * u(rng);
    q.T = std::pow(10.0, -1 + 2 * u(rng));
    const auto s = sigma_for_T(q);
    worst = std::max(worst, rel(s.sigma, s.c1 / q.T));
    if (!run_induction(q).all_ok) ++not_ok;
  }
  ok = ok && worst <= kBranchAgreement && not_ok == 0;
  return {ok, fmt::format("delta {}, c1 {} (1/512 {}), branch deviation {:.2e}, induction failures {}",
                          harness::num(delta), harness::num(c1), c1 == 1.0 / 512, worst, not_ok)};
}

double bracket(double x) { return std::sqrt(1.0 + x * x); }

// Largest relative mismatch of single-mode members against their closed forms.
double single_mode_mismatch() {
  const FourierGrid g(1, 64, 2 * kPi);
  const int M = 64;
  const double T = 2 * kPi, L = 2 * kPi, b = 0.55, sigma = 0.1;
  const ConjugationPattern pat{{false, true, true}};
  double worst = 0.0;
  for (auto [m0, k0] : {std::pair{0, 0}, std::pair{3, -2}, std::pair{-7, 5}, std::pair{15, 20}, std::pair{-21, -21}}) {
    auto u = SpaceTimeSpectrum::zeros(g, M, T);
    const Complex c(0.4, -0.9);
    u.coefficients()[u.time_position_of(m0) * g.size() + g.position_of(k0)] = c;
    const double xi = k0, tau = m0, a3 = std::pow(std::abs(c), 3);
    const double prod = a3 / (T * L);
    const double in_b = bracket(tau + xi * xi), out_b = bracket(-tau + xi * xi);
    const double lift = std::exp(sigma * std::abs(xi)) * bracket(xi);

    const auto v1 = evaluate_trilinear(TrilinearKind::x0_minus_b, u, u, u, b, sigma, pat);
    const auto v2 = evaluate_trilinear(TrilinearKind::l2, u, u, u, b, sigma, pat);
    const auto v3 = evaluate_trilinear(TrilinearKind::gevrey_x10, u, u, u, b, sigma, pat);
    for (auto [got, want] : {std::pair{v1.lhs, prod * std::pow(out_b, -b)},
                             std::pair{v1.rhs, a3 * bracket(xi) * std::pow(in_b, 3 * b)},
                             std::pair{v2.lhs, prod},
                             std::pair{v2.rhs, a3 * bracket(xi) * bracket(xi) * std::pow(in_b, 3 * b)},
                             std::pair{v3.lhs, lift * prod},
                             std::pair{v3.rhs, std::pow(lift * std::pow(in_b, b), 3) * a3}})
      worst = std::max(worst, rel(got, want));
  }
  return worst;
}

Outcome trilinear_stability() {
  const auto t0 = std::chrono::steady_clock::now();
  bool ok = true;
  std::string detail;
  for (auto kind : {TrilinearKind::x0_minus_b, TrilinearKind::l2, TrilinearKind::gevrey_x10}) {
    TrilinearSpec spec;
    spec.kind = kind;
    spec.members = 200;
    spec.seed = 2024;
    const auto r = audit_trilinear(spec);
    bool finite = r.rejected == 0;
    for (const auto& row : r.rows) finite = finite && std::isfinite(row.ratio) && row.ratio > 0.0;
    const double spread = r.ensemble.max_ratio / r.ensemble.median_ratio;
    ok = ok && finite && spread < kTrilinearSpread;
    detail += fmt::format("{} max/median {:.3f}{} | ", r.kind, spread, finite ? "" : " (non-finite or rejected)");
  }
  const double mismatch = single_mode_mismatch();
  const double secs = seconds_since(t0);
  ok = ok && mismatch <= kOracleTol && secs < kTrilinearSeconds;
  return {ok, detail + fmt::format("single-mode mismatch {:.2e}, {:.1f} s", mismatch, secs)};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"plane-wave exactness", plane_wave_exactness},
      {"mass conservation", mass_conservation},
      {"energy error order", energy_order},
      {"sigma = 0 collapse", sigma_zero_collapse},
      {"embedding monotonicity", embedding_monotonicity},
      {"multiplier inequality", multiplier_inequality},
      {"remainder linearity", remainder_linearity},
      {"almost conservation slope", almost_conservation},
      {"radius estimator", radius_estimator},
      {"radius floor", radius_floor_run},
      {"bookkeeper arithmetic", bookkeeper_arithmetic},
      {"trilinear audit stability", trilinear_stability},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, fmt::format("exception: {}", e.what())};
    }
    if (!o.pass) ++failures;
    fmt::print("{} {:2d} {}: {}\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail);
    std::fflush(stdout);
  }
  fmt::print("{} of {} criteria passed\n", criteria.size() - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
