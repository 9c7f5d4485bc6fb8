#include "gnls/errors.hpp"
#include "gnls/harness.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace gnls::harness {
namespace {

namespace pt = boost::property_tree;

const std::map<std::string, std::set<std::string>> kKnownKeys{
    {"grid", {"d", "N", "L"}},
    {"data", {"kind", "amplitude", "width", "k", "band", "decay", "seed"}},
    {"solver", {"dt", "t_end", "stride", "dealias", "linear_only", "focusing"}},
    {"sweep", {"sigmas", "steps", "stride", "c0", "eps", "sigma0"}},
    {"fit", {"C", "c0", "eps", "sigma0", "sigma", "band_upper", "band_lower", "min_shells", "curvature_ratio"}},
};

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

double to_double(const std::string& field, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty())
    throw ValidationError(fmt::format("{}: expected a number, got '{}'", field, text));
  return v;
}

long long to_int(const std::string& field, const std::string& text) {
  const std::string t = trim(text);
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty())
    throw ValidationError(fmt::format("{}: expected an integer, got '{}'", field, text));
  return v;
}

std::uint64_t to_u64(const std::string& field, const std::string& text) {
  const std::string t = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc{} || ptr != t.data() + t.size() || t.empty())
    throw ValidationError(fmt::format("{}: expected an unsigned integer, got '{}'", field, text));
  return v;
}

bool to_bool(const std::string& field, const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw ValidationError(fmt::format("{}: expected true or false, got '{}'", field, text));
}

std::vector<double> to_list(const std::string& field, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(field, item));
  if (out.empty()) throw ValidationError(fmt::format("{}: expected a comma-separated list", field));
  return out;
}

int narrow(const std::string& field, long long v) {
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max())
    throw ValidationError(fmt::format("{}: value {} out of range", field, v));
  return static_cast<int>(v);
}

}  // namespace

std::vector<double> SweepConfig::default_sigmas() {
  std::vector<double> s{0.0};
  for (int i = 0; i < 9; ++i) s.push_back(std::pow(10.0, -3.0 + 2.0 * i / 8.0));
  return s;
}

void ExperimentConfig::validate() const {
  if (grid.dim < 1 || grid.dim > 3) throw ValidationError(fmt::format("grid.d: must be 1, 2 or 3 (got {})", grid.dim));
  if (grid.points < 8 || grid.points % 2 != 0)
    throw ValidationError(fmt::format("grid.N: must be even and >= 8 (got {})", grid.points));
  if (!(grid.period > 0.0) || !std::isfinite(grid.period))
    throw ValidationError(fmt::format("grid.L: must be > 0 (got {})", grid.period));
  solver.validate();
  if (sweep.sigmas.empty()) throw ValidationError("sweep.sigmas: must not be empty");
  for (std::size_t i = 0; i < sweep.sigmas.size(); ++i) {
    if (!(sweep.sigmas[i] >= 0.0) || !std::isfinite(sweep.sigmas[i]))
      throw ValidationError(fmt::format("sweep.sigmas: entries must be finite and >= 0 (got {})", sweep.sigmas[i]));
    if (i > 0 && !(sweep.sigmas[i] > sweep.sigmas[i - 1]))
      throw ValidationError("sweep.sigmas: must be strictly increasing");
  }
  if (sweep.steps < 1) throw ValidationError(fmt::format("sweep.steps: must be >= 1 (got {})", sweep.steps));
  if (sweep.stride < 1) throw ValidationError(fmt::format("sweep.stride: must be >= 1 (got {})", sweep.stride));
  if (!(sweep.c0 > 0.0)) throw ValidationError("sweep.c0: must be > 0");
  if (!(sweep.eps >= 0.0)) throw ValidationError("sweep.eps: must be >= 0");
  if (sweep.sigma0 && !(*sweep.sigma0 > 0.0)) throw ValidationError("sweep.sigma0: must be > 0");
  if (fit.C && !(*fit.C > 0.0)) throw ValidationError("fit.C: must be > 0");
  if (!(fit.c0 > 0.0)) throw ValidationError("fit.c0: must be > 0");
  if (!(fit.eps >= 0.0)) throw ValidationError("fit.eps: must be >= 0");
  if (fit.sigma0 && !(*fit.sigma0 > 0.0)) throw ValidationError("fit.sigma0: must be > 0");
  if (!(fit.sigma >= 0.0)) throw ValidationError("fit.sigma: must be >= 0");
  if (!(fit.policy.upper > fit.policy.lower && fit.policy.lower > 0.0 && fit.policy.upper <= 1.0))
    throw ValidationError("fit.band_upper/band_lower: need 0 < band_lower < band_upper <= 1");
  if (fit.policy.min_shells < 2) throw ValidationError("fit.min_shells: must be >= 2");
  if (!(fit.policy.curvature_ratio > 0.0)) throw ValidationError("fit.curvature_ratio: must be > 0");
  if (threads < 1) throw ValidationError(fmt::format("threads: must be >= 1 (got {})", threads));
  if (data.kind == DataKind::random_bandlimited && (data.band < 0 || data.band >= grid.points / 2))
    throw ValidationError(fmt::format("data.band: must be in [0, N/2) (got {})", data.band));
  if ((data.kind == DataKind::gaussian || data.kind == DataKind::periodized_sech) && !(data.width > 0.0))
    throw ValidationError(fmt::format("data.width: must be > 0 (got {})", data.width));
  if (!std::isfinite(data.amplitude)) throw ValidationError("data.amplitude: must be finite");
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::echo() const {
  std::vector<std::pair<std::string, std::string>> e{
      {"config", source},
      {"grid.d", fmt::format("{}", grid.dim)},
      {"grid.N", fmt::format("{}", grid.points)},
      {"grid.L", num(grid.period)},
      {"data.kind", to_string(data.kind)},
      {"data.amplitude", num(data.amplitude)},
      {"data.width", num(data.width)},
      {"data.k", fmt::format("{}", fmt::join(data.wavevector, ","))},
      {"data.band", fmt::format("{}", data.band)},
      {"data.decay", num(data.decay)},
      {"data.seed", fmt::format("{}", data.seed)},
      {"solver.dt", num(solver.dt)},
      {"solver.t_end", num(solver.t_end)},
      {"solver.stride", fmt::format("{}", solver.snapshot_stride)},
      {"solver.dealias", solver.dealias ? "true" : "false"},
      {"solver.linear_only", solver.linear_only ? "true" : "false"},
      {"solver.focusing", solver.focusing ? "true" : "false"},
      {"sweep.sigmas", fmt::format("{}", fmt::join(sweep.sigmas, ","))},
      {"sweep.steps", fmt::format("{}", sweep.steps)},
      {"sweep.stride", fmt::format("{}", sweep.stride)},
      {"sweep.c0", num(sweep.c0)},
      {"sweep.eps", num(sweep.eps)},
      {"sweep.sigma0", sweep.sigma0 ? num(*sweep.sigma0) : "auto"},
      {"fit.C", fit.C ? num(*fit.C) : "auto"},
      {"fit.c0", num(fit.c0)},
      {"fit.eps", num(fit.eps)},
      {"fit.sigma0", fit.sigma0 ? num(*fit.sigma0) : "auto"},
      {"fit.sigma", num(fit.sigma)},
      {"fit.band_upper", num(fit.policy.upper)},
      {"fit.band_lower", num(fit.policy.lower)},
      {"fit.min_shells", fmt::format("{}", fit.policy.min_shells)},
      {"fit.curvature_ratio", num(fit.policy.curvature_ratio)},
      {"threads", fmt::format("{}", threads)},
  };
  return e;
}

ExperimentConfig parse_config(std::istream& in, const std::string& source) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ValidationError(fmt::format("config {}: line {}: {}", source, e.line(), e.message()));
  }

  ExperimentConfig cfg;
  cfg.source = source;
  for (const auto& [section, body] : tree) {
    const auto known = kKnownKeys.find(section);
    if (known == kKnownKeys.end() || body.empty())
      throw ValidationError(fmt::format("config {}: unknown section or top-level key '{}'", source, section));
    for (const auto& [key, node] : body) {
      const std::string field = section + "." + key;
      if (!known->second.contains(key)) throw ValidationError(fmt::format("{}: unknown key", field));
      const std::string v = trim(node.data());

      if (section == "grid") {
        if (key == "d") cfg.grid.dim = narrow(field, to_int(field, v));
        if (key == "N") cfg.grid.points = narrow(field, to_int(field, v));
        if (key == "L") cfg.grid.period = to_double(field, v);
      } else if (section == "data") {
        if (key == "kind") cfg.data.kind = parse_data_kind(v);
        if (key == "amplitude") cfg.data.amplitude = to_double(field, v);
        if (key == "width") cfg.data.width = to_double(field, v);
        if (key == "k") cfg.data.wavevector = to_list(field, v);
        if (key == "band") cfg.data.band = narrow(field, to_int(field, v));
        if (key == "decay") cfg.data.decay = to_double(field, v);
        if (key == "seed") cfg.data.seed = to_u64(field, v);
      } else if (section == "solver") {
        if (key == "dt") cfg.solver.dt = to_double(field, v);
        if (key == "t_end") cfg.solver.t_end = to_double(field, v);
        if (key == "stride") cfg.solver.snapshot_stride = narrow(field, to_int(field, v));
        if (key == "dealias") cfg.solver.dealias = to_bool(field, v);
        if (key == "linear_only") cfg.solver.linear_only = to_bool(field, v);
        if (key == "focusing") cfg.solver.focusing = to_bool(field, v);
      } else if (section == "sweep") {
        if (key == "sigmas") cfg.sweep.sigmas = to_list(field, v);
        if (key == "steps") cfg.sweep.steps = narrow(field, to_int(field, v));
        if (key == "stride") cfg.sweep.stride = narrow(field, to_int(field, v));
        if (key == "c0") cfg.sweep.c0 = to_double(field, v);
        if (key == "eps") cfg.sweep.eps = to_double(field, v);
        if (key == "sigma0") cfg.sweep.sigma0 = to_double(field, v);
      } else if (section == "fit") {
        if (key == "C") cfg.fit.C = to_double(field, v);
        if (key == "c0") cfg.fit.c0 = to_double(field, v);
        if (key == "eps") cfg.fit.eps = to_double(field, v);
        if (key == "sigma0") cfg.fit.sigma0 = to_double(field, v);
        if (key == "sigma") cfg.fit.sigma = to_double(field, v);
        if (key == "band_upper") cfg.fit.policy.upper = to_double(field, v);
        if (key == "band_lower") cfg.fit.policy.lower = to_double(field, v);
        if (key == "min_shells") cfg.fit.policy.min_shells = narrow(field, to_int(field, v));
        if (key == "curvature_ratio") cfg.fit.policy.curvature_ratio = to_double(field, v);
      }
    }
  }
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(fmt::format("config: cannot open '{}'", path.string()));
  return parse_config(in, path.string());
}

}  // namespace gnls::harness
