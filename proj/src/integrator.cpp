#include "gnls/integrator.hpp"

#include "gnls/errors.hpp"
#include "gnls/fft.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace gnls {

void SolverConfig::validate() const {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError(fmt::format("solver.dt: must be > 0 (got {})", dt));
  if (!(t_end >= 0.0) || !std::isfinite(t_end))
    throw ValidationError(fmt::format("solver.t_end: must be >= 0 (got {})", t_end));
  if (snapshot_stride < 1)
    throw ValidationError(fmt::format("solver.snapshot_stride: must be >= 1 (got {})", snapshot_stride));
  const double steps = t_end / dt;
  if (std::abs(steps - std::round(steps)) > 1e-9 * std::max(1.0, steps))
    throw ValidationError(fmt::format("solver.t_end: {} is not an integer multiple of dt = {}", t_end, dt));
}

long long SolverConfig::step_count() const { return std::llround(t_end / dt); }

Field linear_half_step(const Field& u, double dt) {
  if (!u.is_spectral()) throw ValidationError("linear_half_step: field must be spectral");
  return apply_multiplier(u, Multiplier::free_propagator(0.5 * dt));
}

Field nonlinear_step(const Field& u, double dt, bool focusing) {
  if (u.is_spectral()) throw ValidationError("nonlinear_step: field must be physical");
  const double s = focusing ? 1.0 : -1.0;
  ComplexArray out(u.values().size());
  for (Eigen::Index i = 0; i < out.size(); ++i)
    out[i] = u.values()[i] * std::polar(1.0, s * std::norm(u.values()[i]) * dt);
  return Field::physical(u.grid(), std::move(out));
}

StrangStepper::StrangStepper(FourierGrid grid, double dt, SplittingOptions opts)
    : grid_(std::move(grid)),
      dt_(dt),
      opts_(opts),
      half_phase_(Multiplier::free_propagator(0.5 * dt).symbol(grid_)) {}

double StrangStepper::step(ComplexArray& u_hat) const {
  u_hat *= half_phase_;
  double peak = 0.0;
  if (!opts_.linear_only) {
    // Round trip through unscaled FFTs: only the exact 1/N^d factor is
    // applied, so no per-step scale bias accumulates in the mass.
    const FourierGrid work = opts_.dealias ? grid_.with_points(2 * grid_.points()) : grid_;
    ComplexArray c = opts_.dealias ? pad_spectrum(Field::spectral(grid_, std::move(u_hat)), 2).values()
                                   : std::move(u_hat);
    const auto n = static_cast<std::size_t>(work.size());
    c *= work.origin_sign().cast<Complex>();
    ComplexArray w(work.size());
    fft::transform({c.data(), n}, {w.data(), n}, work.shape(), fft::Direction::backward);
    const double to_phys_sq = std::pow(work.period(), -static_cast<double>(work.dim()));
    const double s = opts_.focusing ? 1.0 : -1.0;
    double peak_sq = 0.0;
    for (Eigen::Index i = 0; i < w.size(); ++i) {
      const double a = std::norm(w[i]) * to_phys_sq;
      peak_sq = std::max(peak_sq, a);
      w[i] *= std::polar(1.0, s * a * dt_);
    }
    peak = std::sqrt(peak_sq);
    fft::transform({w.data(), n}, {c.data(), n}, work.shape(), fft::Direction::forward);
    c *= (work.origin_sign() / static_cast<double>(work.size())).cast<Complex>();
    u_hat = opts_.dealias ? truncate_spectrum(Field::spectral(work, std::move(c)), grid_).values() : std::move(c);
  }
  u_hat *= half_phase_;
  return peak;
}

Field strang_step(const Field& u, double dt, const SplittingOptions& opts) {
  ComplexArray c = to_spectral(u).values();
  StrangStepper(u.grid(), dt, opts).step(c);
  Field out = Field::spectral(u.grid(), std::move(c));
  return u.is_spectral() ? out : inverse_transform(out);
}

Trajectory evolve(const Field& u0, const SolverConfig& cfg, const SnapshotObserver& observer) {
  cfg.validate();
  require_finite(u0, "evolve: initial data");
  Trajectory traj;
  traj.config = cfg;

  auto record = [&](double t, const Field& phys) {
    traj.snapshots.push_back({t, phys});
    if (observer) observer(traj.snapshots.back());
  };

  const Field phys0 = to_physical(u0);
  record(0.0, phys0);
  const double initial_peak = phys0.values().abs().maxCoeff();

  const StrangStepper stepper(u0.grid(), cfg.dt, cfg.options());
  ComplexArray c = to_spectral(u0).values();
  Snapshot last_good{0.0, phys0};
  const long long n = cfg.step_count();
  for (long long k = 1; k <= n; ++k) {
    const double peak = stepper.step(c);
    const double t = static_cast<double>(k) * cfg.dt;
    if (!c.isFinite().all())
      throw IntegrationAborted(fmt::format("evolve: non-finite state at step {} (t = {})", k, t), k,
                               last_good);
    if (initial_peak > 0.0 && peak > kBlowupFactor * initial_peak)
      throw IntegrationAborted(
          fmt::format("evolve: max|u| grew by more than {:g}x at step {} (t = {})", kBlowupFactor, k, t),
          k, last_good);
    if (k % cfg.snapshot_stride == 0 || k == n) {
      last_good = {t, inverse_transform(Field::spectral(u0.grid(), c))};
      record(t, last_good.field);
    }
  }
  return traj;
}

}  // namespace gnls
