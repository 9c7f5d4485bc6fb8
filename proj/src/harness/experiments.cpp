#include "gnls/errors.hpp"
#include "gnls/harness.hpp"
#include "gnls/parallel.hpp"
#include "gnls/snapshot_io.hpp"

#include <Eigen/QR>
#include <fmt/format.h>
#include <fmt/ranges.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

namespace gnls::harness {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double relative_drift(double value, double reference) {
  const double diff = std::abs(value - reference);
  return reference != 0.0 ? diff / std::abs(reference) : diff;
}

RadiusEstimate safe_radius(const Field& u, const RadiusBandPolicy& policy) {
  try {
    return radius_estimate(u, policy);
  } catch (const ValidationError&) {
    RadiusEstimate r;
    r.sigma_hat = kNaN;
    r.floor_flag = true;
    return r;
  }
}

// Norms, radius estimates and drift figures for every snapshot.
void fill_norms(RunRecord& rec, const Trajectory& traj, const ExperimentConfig& cfg) {
  for (const auto& snap : traj.snapshots) {
    rec.norms.push_back(norm_report(snap.field, cfg.fit.sigma, snap.t));
    rec.radii.push_back(safe_radius(snap.field, cfg.fit.policy));
  }
  const auto& first = rec.norms.front();
  for (const auto& n : rec.norms) {
    rec.mass_drift = std::max(rec.mass_drift, relative_drift(n.mass, first.mass));
    rec.energy_drift = std::max(rec.energy_drift, relative_drift(n.energy, first.energy));
  }
}

void write_trajectory(const std::filesystem::path& dir, const Trajectory& traj, const ExperimentConfig& cfg) {
  std::filesystem::create_directories(dir);
  for (std::size_t i = 0; i < traj.snapshots.size(); ++i)
    write_snapshot(dir / fmt::format("snap_{:06d}.gnls", i), traj.snapshots[i].field, traj.snapshots[i].t);
  write_sidecar(dir / "run.meta", {{"d", fmt::format("{}", cfg.grid.dim)},
                                   {"N", fmt::format("{}", cfg.grid.points)},
                                   {"L", num(cfg.grid.period)},
                                   {"dt", num(cfg.solver.dt)},
                                   {"t_end", num(cfg.solver.t_end)},
                                   {"seed", fmt::format("{}", cfg.data.seed)},
                                   {"data_kind", to_string(cfg.data.kind)},
                                   {"data_params", cfg.data.describe()},
                                   {"version", version()}});
}

}  // namespace

Field plane_wave_solution(const FourierGrid& grid, const DataDescriptor& data, double t, bool focusing) {
  double k_sq = 0.0;
  for (double k : data.wavevector) k_sq += k * k;
  const double s = focusing ? -1.0 : 1.0;
  const double omega = k_sq + s * data.amplitude * data.amplitude;
  ComplexArray v(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const auto pos = grid.unflatten(i);
    double phase = -omega * t;
    for (std::size_t a = 0; a < data.wavevector.size() && static_cast<int>(a) < grid.dim(); ++a)
      phase += data.wavevector[a] * grid.coordinate(pos[a]);
    v[i] = data.amplitude * std::polar(1.0, phase);
  }
  return Field::physical(grid, std::move(v));
}

std::string radius_verdict(double sigma_hat, double sigma_floor, bool entire_flag, bool floor_flag) {
  if (entire_flag) return "entire";
  if (floor_flag) return "floor";
  return sigma_hat >= sigma_floor ? "ok" : "fail";
}

std::optional<double> tail_constant(const std::vector<RadiusRow>& rows) {
  const std::size_t n = rows.size();
  const std::size_t tail = (n + 2) / 3;
  std::vector<double> values;
  for (std::size_t i = n - tail; i < n; ++i) {
    const auto& r = rows[i];
    if (std::isfinite(r.estimate.sigma_hat) && !r.estimate.entire_flag) values.push_back(r.t * r.estimate.sigma_hat);
  }
  if (values.empty()) return std::nullopt;
  return median(std::move(values));
}

RunRecord run_simulate(const ExperimentConfig& cfg) {
  cfg.validate();
  const FourierGrid grid = cfg.grid.make();
  const Field u0 = make_initial_data(grid, cfg.data);
  const Trajectory traj = evolve(u0, cfg.solver);

  RunRecord rec;
  rec.config = cfg.echo();
  fill_norms(rec, traj, cfg);
  if (cfg.data.kind == DataKind::plane_wave) {
    const auto& last = traj.snapshots.back();
    rec.exactness_error = relative_l2_error(last.field, plane_wave_solution(grid, cfg.data, last.t, cfg.solver.focusing));
  }
  if (!cfg.out_dir.empty()) {
    write_trajectory(cfg.out_dir / "trajectory", traj, cfg);
    write_norms_csv(cfg.out_dir / "norms.csv", rec.config, rec);
  }
  return rec;
}

SweepResult run_almost_conservation_sweep(const ExperimentConfig& cfg) {
  cfg.validate();
  const FourierGrid grid = cfg.grid.make();
  const Field u0 = make_initial_data(grid, cfg.data);

  SweepResult out;
  out.sigma0 = cfg.sweep.sigma0 ? *cfg.sweep.sigma0 : cfg.sweep.sigmas.back();
  if (!(out.sigma0 > 0.0)) throw ValidationError("sweep.sigma0: the sigma grid needs a positive entry");
  out.A0 = a_sigma(u0, out.sigma0);
  out.delta = local_delta(cfg.sweep.c0, out.A0, cfg.sweep.eps);

  SolverConfig solver = cfg.solver;
  solver.dt = out.delta / cfg.sweep.steps;
  solver.t_end = solver.dt * cfg.sweep.steps;
  solver.snapshot_stride = cfg.sweep.stride;
  const Trajectory traj = evolve(u0, solver);

  // sigma = 0 first (noise floor), then the grid.
  std::vector<double> sigmas{0.0};
  for (double s : cfg.sweep.sigmas)
    if (s > 0.0) sigmas.push_back(s);
  std::vector<SweepPoint> pts(sigmas.size());
  std::vector<char> dropped(sigmas.size(), 0);
  std::vector<std::string> drop_msg(sigmas.size());
  parallel_for(sigmas.size(), cfg.threads, [&](std::size_t i) {
    try {
      const double a0 = a_sigma(traj.snapshots.front().field, sigmas[i]);
      double top = a0;
      for (const auto& snap : traj.snapshots) top = std::max(top, a_sigma(snap.field, sigmas[i]));
      pts[i].sigma = sigmas[i];
      pts[i].a_sigma0 = a0;
      pts[i].D = top - a0;
    } catch (const MultiplierOverflow& e) {
      dropped[i] = 1;
      drop_msg[i] = e.what();
    }
  });
  if (dropped[0]) throw std::runtime_error("sweep: sigma = 0 cannot overflow");

  out.noise_floor = pts[0].D;
  const bool zero_in_grid = cfg.sweep.sigmas.front() == 0.0;
  if (zero_in_grid) out.points.push_back(pts[0]);
  for (std::size_t i = 1; i < sigmas.size(); ++i) {
    if (dropped[i]) {
      out.warnings.push_back(fmt::format("sigma = {} dropped: {}", num(sigmas[i]), drop_msg[i]));
      continue;
    }
    auto p = pts[i];
    p.D_corrected = p.D - out.noise_floor;
    const double a = p.a_sigma0;
    p.C_estimate = p.D_corrected / (p.sigma * a * a * (1.0 + a));
    out.points.push_back(p);
  }

  // Log-log fit over the small-sigma half of the positive grid.
  std::vector<SweepPoint*> positive;
  for (auto& p : out.points)
    if (p.sigma > 0.0) positive.push_back(&p);
  const std::size_t half = (positive.size() + 1) / 2;
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < half; ++i) {
    if (positive[i]->D_corrected > 0.0) {
      positive[i]->in_fit = true;
      xs.push_back(std::log(positive[i]->sigma));
      ys.push_back(std::log(positive[i]->D_corrected));
    }
  }
  out.slope = kNaN;
  if (xs.size() >= 2) {
    const auto n = static_cast<Eigen::Index>(xs.size());
    Eigen::MatrixXd a(n, 2);
    a.col(0).setOnes();
    a.col(1) = Eigen::Map<const Eigen::VectorXd>(xs.data(), n);
    const Eigen::VectorXd coef = a.colPivHouseholderQr().solve(Eigen::Map<const Eigen::VectorXd>(ys.data(), n));
    out.slope = coef[1];
  } else {
    out.warnings.push_back("slope: fewer than two sigma values rise above the noise floor");
  }

  std::vector<double> cs;
  for (const auto* p : positive)
    if (p->D_corrected > 0.0) cs.push_back(p->C_estimate);
  out.fitted_C = cs.empty() ? kNaN : median(cs);

  double scale = 0.0;
  for (const auto& p : out.points) scale = std::max(scale, p.a_sigma0);
  const double tol = std::max(std::abs(out.noise_floor), 64.0 * std::numeric_limits<double>::epsilon() * scale);
  for (std::size_t i = 1; i < out.points.size(); ++i)
    if (out.points[i].D < out.points[i - 1].D - tol) out.monotone = false;

  if (!cfg.out_dir.empty()) write_sweep_csv(cfg.out_dir / "sweep.csv", cfg.echo(), out);
  return out;
}

RunRecord run_radius_tracking(const ExperimentConfig& cfg) {
  cfg.validate();
  const FourierGrid grid = cfg.grid.make();
  const Field u0 = make_initial_data(grid, cfg.data);
  const RadiusEstimate r0 = radius_estimate(u0, cfg.fit.policy);

  RunRecord rec;
  rec.config = cfg.echo();
  double sigma0 = 0.0;
  if (cfg.fit.sigma0) {
    sigma0 = *cfg.fit.sigma0;
  } else if (!r0.entire_flag && r0.sigma_hat > 0.0) {
    sigma0 = 0.5 * r0.sigma_hat;
  } else {
    sigma0 = 1.0;
    rec.warnings.push_back("fit.sigma0: no finite initial radius; using sigma0 = 1");
  }

  double C = 0.0;
  if (cfg.fit.C) {
    C = *cfg.fit.C;
  } else {
    ExperimentConfig sweep_cfg = cfg;
    sweep_cfg.out_dir.clear();
    rec.sweep = run_almost_conservation_sweep(sweep_cfg);
    C = rec.sweep->fitted_C;
    rec.fitted_C = C;
    if (!(C > 0.0) || !std::isfinite(C)) {
      rec.warnings.push_back(fmt::format("fit.C: sweep gave no usable constant ({}); using C = 1", num(C)));
      C = 1.0;
    }
  }

  BookkeeperParams& p = rec.floor_params;
  p.sigma0 = sigma0;
  p.A0 = a_sigma(u0, sigma0);
  p.c0 = cfg.fit.c0;
  p.C = C;
  p.eps = cfg.fit.eps;
  p.T = cfg.solver.t_end > 0.0 ? cfg.solver.t_end : 1.0;

  const Trajectory traj = evolve(u0, cfg.solver);
  fill_norms(rec, traj, cfg);
  for (std::size_t i = 0; i < traj.snapshots.size(); ++i) {
    RadiusRow row;
    row.t = traj.snapshots[i].t;
    row.estimate = rec.radii[i];
    row.sigma_floor = radius_floor(p, row.t);
    row.verdict = radius_verdict(row.estimate.sigma_hat, row.sigma_floor, row.estimate.entire_flag,
                                 row.estimate.floor_flag);
    if (row.verdict == "fail" || row.verdict == "floor") rec.failures.push_back(i);
    rec.radius_rows.push_back(std::move(row));
  }
  rec.c_hat = tail_constant(rec.radius_rows);

  if (!cfg.out_dir.empty()) {
    write_radius_csv(cfg.out_dir / "radius.csv", rec.config, rec);
    write_norms_csv(cfg.out_dir / "norms.csv", rec.config, rec);
    if (rec.sweep) write_sweep_csv(cfg.out_dir / "sweep.csv", rec.config, *rec.sweep);
    if (cfg.svg) write_radius_svg(cfg.out_dir / "radius.svg", rec);
  }
  return rec;
}

}  // namespace gnls::harness
