#pragma once

// Strang-split spectral time stepping for i u_t + Lap u = s |u|^2 u
// (s = +1 defocusing, s = -1 focusing). Both substeps are solved exactly:
// the linear flow is the Fourier phase e^{-i|xi|^2 t} and the nonlinear flow
// is the pointwise rotation u e^{-i s |u|^2 t}.

#include "gnls/snapshot_io.hpp"
#include "gnls/spectral.hpp"

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gnls {

struct SplittingOptions {
  bool dealias = true;      // nonlinear substep on the 2x-padded grid
  bool linear_only = false; // skip the nonlinear substep entirely
  bool focusing = false;
};

struct SolverConfig {
  double dt = 1e-3;
  double t_end = 1.0;
  int snapshot_stride = 1;
  bool dealias = true;
  bool linear_only = false;
  bool focusing = false;

  // Throws ValidationError naming the offending field.
  void validate() const;
  long long step_count() const;
  SplittingOptions options() const { return {dealias, linear_only, focusing}; }
};

struct Trajectory {
  std::vector<Snapshot> snapshots;  // physical fields, t strictly increasing, first at t=0
  SolverConfig config;
  std::string data_descriptor;
  std::uint64_t seed = 0;
};

// Raised when the state turns non-finite or blows up mid-run.
class IntegrationAborted : public std::runtime_error {
 public:
  IntegrationAborted(const std::string& what, long long step, Snapshot last_good)
      : std::runtime_error(what), step_(step), last_good_(std::move(last_good)) {}
  long long step() const noexcept { return step_; }
  const Snapshot& last_good() const noexcept { return last_good_; }

 private:
  long long step_;
  Snapshot last_good_;
};

// u spectral; multiplies coefficients by e^{-i|xi|^2 dt/2}.
Field linear_half_step(const Field& u, double dt);

// u physical; pointwise u e^{-i|u|^2 dt} (e^{+i...} when focusing).
Field nonlinear_step(const Field& u, double dt, bool focusing = false);

// One Strang step; the result has the representation of the input.
Field strang_step(const Field& u, double dt, const SplittingOptions& opts = {});

// Reusable stepper operating in place on spectral coefficients.
class StrangStepper {
 public:
  StrangStepper(FourierGrid grid, double dt, SplittingOptions opts);

  // Advances u_hat by dt; returns max|u| seen in the nonlinear substep
  // (0 in linear-only mode).
  double step(ComplexArray& u_hat) const;

  const FourierGrid& grid() const noexcept { return grid_; }

 private:
  FourierGrid grid_;
  double dt_;
  SplittingOptions opts_;
  ComplexArray half_phase_;
};

using SnapshotObserver = std::function<void(const Snapshot&)>;

// Blow-up guard: abort once max|u| exceeds this multiple of its initial value.
inline constexpr double kBlowupFactor = 1e6;

Trajectory evolve(const Field& u0, const SolverConfig& cfg, const SnapshotObserver& observer = {});

}  // namespace gnls
