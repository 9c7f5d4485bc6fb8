#pragma once

// Numerical bench for the space-time estimates behind the almost-conservation
// law: X^{sigma,s,b} norms of sampled space-time spectra, the commutator
// remainder f(v), the pointwise multiplier bound, the trilinear product
// estimates and the Gagliardo-Nirenberg step.

#include "gnls/integrator.hpp"
#include "gnls/spectral.hpp"

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace gnls {

// Samples u(t_j, x) on a periodic window [0, T_win) x torus, stored as
// u_tilde(tau_m, xi_k) with tau_m = 2 pi m / T_win, m in [-M/2, M/2). Storage
// is time-major (time index slowest), FFT order on every axis. Normalization
// is unitary: sum |u_tilde|^2 = int int |u|^2 dx dt.
class SpaceTimeSpectrum {
 public:
  SpaceTimeSpectrum(FourierGrid grid, int time_modes, double window, ComplexArray coefficients);
  static SpaceTimeSpectrum zeros(FourierGrid grid, int time_modes, double window);

  // Transform samples (time-major, t_j = j T_win / M) into a spectrum.
  static SpaceTimeSpectrum from_samples(FourierGrid grid, int time_modes, double window,
                                        const ComplexArray& samples);
  ComplexArray samples() const;

  const FourierGrid& grid() const noexcept { return grid_; }
  int time_modes() const noexcept { return time_modes_; }
  double window() const noexcept { return window_; }
  const ComplexArray& coefficients() const noexcept { return coeffs_; }
  ComplexArray& coefficients() noexcept { return coeffs_; }

  int time_mode_of(int position) const noexcept {
    return position < time_modes_ / 2 ? position : position - time_modes_;
  }
  int time_position_of(int mode) const noexcept { return mode >= 0 ? mode : mode + time_modes_; }
  double tau(int position) const noexcept;

  // Zero-padded copy with factor x more modes in time and every space axis.
  SpaceTimeSpectrum padded(int factor) const;

 private:
  FourierGrid grid_;
  int time_modes_;
  double window_;
  ComplexArray coeffs_;
};

struct XsbParams {
  double sigma = 0.0;
  double s = 0.0;
  double b = 0.0;
};

// || e^{sigma|xi|} <xi>^s <tau + |xi|^2>^b u_tilde ||_{l^2}.
double xsb_norm(const SpaceTimeSpectrum& w, XsbParams p);

// Product U1 U2 U3 (conjugations per pattern) formed in physical space-time on
// the 2x padded grid; the result lives on that padded grid.
SpaceTimeSpectrum space_time_triple_product(const SpaceTimeSpectrum& u1, const SpaceTimeSpectrum& u2,
                                            const SpaceTimeSpectrum& u3, ConjugationPattern pattern);

// Fraction of coefficient energy outside the alias-safe band |m| <= (M-1)/3,
// |k_a| <= (N-1)/3, within which a cubic product is exact on the 2x grid.
double alias_unsafe_fraction(const SpaceTimeSpectrum& w);

// ---------------------------------------------------------------- reports

struct AuditRow {
  std::size_t member = 0;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;
  bool rejected = false;
};

struct EnsembleStats {
  std::size_t count = 0;
  double max_ratio = 0.0;
  double median_ratio = 0.0;
  std::uint64_t seed = 0;
};

struct AuditReport {
  std::string kind;
  double lhs = 0.0;  // for ensembles: the member attaining max_ratio
  double rhs = 0.0;
  double ratio = 0.0;
  EnsembleStats ensemble;
  std::size_t violations = 0;
  std::size_t rejected = 0;
  std::vector<AuditRow> rows;
};

// Fills ensemble stats and the headline lhs/rhs/ratio from non-rejected rows.
void summarize(AuditReport& report);

double median(std::vector<double> values);

// --------------------------------------------------------------- remainder

// f(v) = -{ |v|^2 v - e^{sigma|D|}( |e^{-sigma|D|} v|^2 e^{-sigma|D|} v ) },
// both cubic terms via the dealiased triple product. Physical result.
Field f_of_v(const Field& v, double sigma);

// ------------------------------------------------------ multiplier bound

using Wavevector = Eigen::Vector3d;

struct WavenumberTriple {
  Wavevector xi1 = Wavevector::Zero();
  Wavevector xi2 = Wavevector::Zero();
  Wavevector xi3 = Wavevector::Zero();
};

struct MultiplierCheck {
  double lhs;  // 1 - exp(-sigma(|xi1|+|xi2|+|xi3| - |xi|)), xi = xi1 - xi2 - xi3
  double rhs;  // 12 sigma xi_med
  bool violated() const noexcept { return lhs > rhs; }
};

MultiplierCheck check_multiplier_bound(double sigma, const WavenumberTriple& t);

AuditReport audit_multiplier_inequality(double sigma, std::span<const WavenumberTriple> triples);

// Random triples with |xi_j| <= max_abs in dimension dim; every fourth triple
// is rounded to integer components.
std::vector<WavenumberTriple> random_triples(int dim, std::size_t count, double max_abs,
                                             std::uint64_t seed);

// ------------------------------------------------------ f(v) estimate

struct FEstimateReport {
  AuditReport audit;            // lhs = ||f(v)||_{L^2}, rhs = sigma ||v||_{H^1}^3
  double halving_ratio = 0.0;   // ||f(v;sigma)|| / ||f(v;sigma/2)||
};

FEstimateReport audit_f_estimate(const Field& v, double sigma);

struct FEnsembleSpec {
  FourierGrid grid{1, 64, 6.283185307179586};
  std::size_t members = 100;
  double sigma = 1e-2;
  int band = 10;      // |m_a| <= band, dealias-safe when band <= N/6
  double decay = 0.3;
  std::uint64_t seed = 0;
  // sigmas at which ||f(v; sigma)|| monotonicity is checked (logged, not asserted)
  std::vector<double> monotonicity_sigmas{1e-3, 3e-3, 1e-2, 3e-2, 1e-1};
};

struct FEnsembleReport {
  AuditReport audit;
  std::vector<double> halving_ratios;  // per member
  std::size_t monotonicity_failures = 0;
};

FEnsembleReport audit_f_ensemble(const FEnsembleSpec& spec, int threads = 1);

// Windowed space-time version: the solution from u0 is extended to the
// window [-1.5 delta, 2.5 delta] (T_win = 4 delta) by evolving forward and
// backward, multiplied by a taper equal to 1 on [-delta/2, 3delta/2] with
// raised-cosine ramps over the outer quarters, and transformed in time.
struct WindowSpec {
  double delta = 0.1;
  int time_modes = 32;  // multiple of 8 so that t = 0 is a sample
  int substeps = 8;     // solver steps per time sample
  double b = 0.55;
};

double window_taper(double t, double delta);

SpaceTimeSpectrum windowed_extension(const Field& u0, const WindowSpec& window,
                                     const SplittingOptions& opts = {});

// lhs = ||f(v)||_{L^2_{t,x}} over the window, rhs = sigma ||v||^3_{X^{1,b}},
// v = e^{sigma|D|} (windowed extension of the solution from u0).
AuditReport audit_f_spacetime(const Field& u0, double sigma, const WindowSpec& window);

// ------------------------------------------------------ trilinear

enum class TrilinearKind { x0_minus_b = 1, l2 = 2, gevrey_x10 = 3 };

struct TrilinearValue {
  double lhs = 0.0;
  double rhs = 0.0;
  bool rejected = false;
};

// kind 1: ||U1U2U3||_{X^{0,-b}}      vs ||u1||_{X^{1,b}} ||u2||_{X^{0,b}} ||u3||_{X^{0,b}}
// kind 2: ||U1U2U3||_{L^2}           vs ||u1||_{X^{1,b}} ||u2||_{X^{1,b}} ||u3||_{X^{0,b}}
// kind 3: ||U1U2U3||_{X^{sigma,1,0}} vs prod ||uj||_{X^{sigma,1,b}}
TrilinearValue evaluate_trilinear(TrilinearKind kind, const SpaceTimeSpectrum& u1,
                                  const SpaceTimeSpectrum& u2, const SpaceTimeSpectrum& u3, double b,
                                  double sigma, ConjugationPattern pattern);

struct TrilinearSpec {
  TrilinearKind kind = TrilinearKind::l2;
  FourierGrid grid{1, 64, 6.283185307179586};
  int time_modes = 64;
  double window = 6.283185307179586;
  std::size_t members = 200;
  double b = 0.55;
  double sigma = 0.1;  // used by kind 3
  ConjugationPattern pattern{{false, true, true}};  // (u, conj u, conj u)
  int xi_band = -1;    // defaults to N/6
  int tau_band = -1;   // defaults to M/6
  double xi_decay = 0.3;
  double tau_decay = 0.3;
  std::uint64_t seed = 0;
};

// Random decaying spectrum with coefficients on |k_a| <= xi_band, |m| <= tau_band.
SpaceTimeSpectrum random_space_time_spectrum(const FourierGrid& grid, int time_modes, double window,
                                             int xi_band, int tau_band, double xi_decay,
                                             double tau_decay, std::mt19937_64& rng);

// Members whose inputs carry more than this energy fraction outside the
// alias-safe band are rejected.
inline constexpr double kUnderResolvedFraction = 1e-8;

AuditReport audit_trilinear(const TrilinearSpec& spec, int threads = 1);

// ------------------------------------------------------ Gagliardo-Nirenberg

// ratio = ||u||_{L^4}^4 / (||grad u||^d ||u||^{4-d}); throws for zero u or
// vanishing gradient.
AuditReport audit_gagliardo_nirenberg(const Field& u);

}  // namespace gnls
