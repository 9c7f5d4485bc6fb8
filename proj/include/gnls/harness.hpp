#pragma once

// Experiment orchestration: INI configuration, named experiments and their
// CSV/SVG outputs.

#include "gnls/bookkeeper.hpp"
#include "gnls/bourgain.hpp"
#include "gnls/gevrey.hpp"
#include "gnls/initial_data.hpp"
#include "gnls/integrator.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace gnls::harness {

std::string version();

struct GridConfig {
  int dim = 1;
  int points = 256;
  double period = 40.0;

  FourierGrid make() const { return {dim, points, period}; }
};

struct SweepConfig {
  std::vector<double> sigmas;  // strictly increasing, >= 0
  int steps = 200;             // solver steps across [0, delta]
  int stride = 10;
  double c0 = 1.0;
  double eps = 0.05;
  std::optional<double> sigma0;  // defaults to the largest sigma of the grid

  static std::vector<double> default_sigmas();  // 0 and 9 log-spaced in [1e-3, 1e-1]
};

struct FitConfig {
  std::optional<double> C;       // almost-conservation constant; fitted when absent
  double c0 = 1.0;
  double eps = 0.05;
  std::optional<double> sigma0;  // defaults to sigma_hat(0) / 2
  double sigma = 0.0;            // radius at which Gevrey columns are reported
  RadiusBandPolicy policy;
};

struct ExperimentConfig {
  std::string source = "<defaults>";
  GridConfig grid;
  DataDescriptor data;
  SolverConfig solver;
  SweepConfig sweep{SweepConfig::default_sigmas()};
  FitConfig fit;
  std::filesystem::path out_dir;  // empty: nothing written
  int threads = 1;
  bool svg = false;

  // Throws ValidationError naming the offending field.
  void validate() const;
  // "key = value" lines of the effective configuration, deterministic order.
  std::vector<std::pair<std::string, std::string>> echo() const;
};

// [grid] d N L | [data] kind amplitude width k band decay seed |
// [solver] dt t_end stride dealias linear_only focusing |
// [sweep] sigmas steps stride c0 eps sigma0 |
// [fit] C c0 eps sigma0 sigma band_upper band_lower min_shells curvature_ratio
ExperimentConfig parse_config(std::istream& in, const std::string& source = "<stream>");
ExperimentConfig load_config(const std::filesystem::path& path);

// ------------------------------------------------------------ run records

struct RadiusRow {
  double t = 0.0;
  RadiusEstimate estimate;
  double sigma_floor = 0.0;
  std::string verdict;  // ok | fail | entire | floor
};

struct SweepPoint {
  double sigma = 0.0;
  double a_sigma0 = 0.0;  // A_sigma(0)
  double D = 0.0;         // max_t A_sigma(t) - A_sigma(0)
  double D_corrected = 0.0;
  double C_estimate = 0.0;  // D_corrected / (sigma A^2 (1+A)), 0 for sigma = 0
  bool in_fit = false;
};

struct SweepResult {
  double A0 = 0.0;  // A_{sigma0}(0)
  double sigma0 = 0.0;
  double delta = 0.0;
  double noise_floor = 0.0;  // D(0)
  std::vector<SweepPoint> points;
  double slope = 0.0;
  double fitted_C = 0.0;
  bool monotone = true;
  std::vector<std::string> warnings;
};

struct RunRecord {
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<NormReport> norms;
  std::vector<RadiusEstimate> radii;  // same length as norms; sigma_hat NaN when undefined
  double mass_drift = 0.0;            // max relative drift over snapshots
  double energy_drift = 0.0;
  std::optional<double> exactness_error;  // plane-wave data only

  std::vector<RadiusRow> radius_rows;
  BookkeeperParams floor_params;
  std::optional<double> c_hat;
  std::optional<double> fitted_C;
  std::vector<std::size_t> failures;  // indices into radius_rows

  std::optional<SweepResult> sweep;
  std::vector<std::string> warnings;
};

RunRecord run_simulate(const ExperimentConfig& cfg);
RunRecord run_radius_tracking(const ExperimentConfig& cfg);
SweepResult run_almost_conservation_sweep(const ExperimentConfig& cfg);

// Offline verdict from the quantities stored in a radius CSV row.
std::string radius_verdict(double sigma_hat, double sigma_floor, bool entire_flag, bool floor_flag);

// Tail constant: median of t sigma_hat over the last third of rows with a
// finite radius.
std::optional<double> tail_constant(const std::vector<RadiusRow>& rows);

// Plane-wave closed form A e^{i k.x} e^{-i(|k|^2 + A^2) t}.
Field plane_wave_solution(const FourierGrid& grid, const DataDescriptor& data, double t, bool focusing = false);

// ------------------------------------------------------------ outputs

using Echo = std::vector<std::pair<std::string, std::string>>;

// Writes '#' lines: version, then every echo entry.
void write_preamble(std::ostream& out, const Echo& echo);

void write_norms_csv(const std::filesystem::path& path, const Echo& echo, const RunRecord& rec);
void write_radius_csv(const std::filesystem::path& path, const Echo& echo, const RunRecord& rec);
void write_sweep_csv(const std::filesystem::path& path, const Echo& echo, const SweepResult& sweep);
void write_audit_csv(const std::filesystem::path& path, const Echo& echo, const std::vector<AuditReport>& reports);
void write_audit_summary(std::ostream& out, const Echo& echo, const std::vector<AuditReport>& reports);
void write_bookkeeper_csv(const std::filesystem::path& path, const Echo& echo, const InductionTrace& trace);
std::string bookkeeper_summary(const InductionTrace& trace);
void write_radius_svg(const std::filesystem::path& path, const RunRecord& rec);

struct RadiusCsvRow {
  double t, sigma_hat, sigma_floor;
  bool entire_flag, floor_flag;
  std::string verdict;
};
// Reads back a radius CSV (skipping '#' lines and the header).
std::vector<RadiusCsvRow> read_radius_csv(const std::filesystem::path& path);

// Number formatting used by every output file.
std::string num(double v);

}  // namespace gnls::harness
