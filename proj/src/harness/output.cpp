#include "gnls/errors.hpp"
#include "gnls/harness.hpp"

#include <fmt/format.h>
#include <fmt/os.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#ifndef GNLS_VERSION
#define GNLS_VERSION "0.0.0"
#endif

namespace gnls::harness {
namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
  return out;
}

}  // namespace

std::string version() { return GNLS_VERSION; }

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return fmt::format("{:.17g}", v);
}

void write_preamble(std::ostream& out, const Echo& echo) {
  out << "# gnls " << version() << '\n';
  for (const auto& [k, v] : echo) out << "# " << k << " = " << v << '\n';
}

void write_norms_csv(const std::filesystem::path& path, const Echo& echo, const RunRecord& rec) {
  auto out = open_out(path);
  write_preamble(out, echo);
  out << "t,sigma,mass,energy,gevrey_s1_sq,l4_gevrey,a_sigma,sigma_hat,entire_flag,floor_flag\n";
  for (std::size_t i = 0; i < rec.norms.size(); ++i) {
    const auto& n = rec.norms[i];
    const auto& r = rec.radii[i];
    out << fmt::format("{},{},{},{},{},{},{},{},{:d},{:d}\n", num(n.t), num(n.sigma), num(n.mass), num(n.energy),
                       num(n.gevrey_s1 * n.gevrey_s1), num(n.l4_gevrey), num(n.a_sigma), num(r.sigma_hat),
                       r.entire_flag, r.floor_flag);
  }
}

void write_radius_csv(const std::filesystem::path& path, const Echo& echo, const RunRecord& rec) {
  auto out = open_out(path);
  write_preamble(out, echo);
  const auto& p = rec.floor_params;
  out << fmt::format("# floor.sigma0 = {}\n# floor.A0 = {}\n# floor.c0 = {}\n# floor.C = {}\n# floor.eps = {}\n",
                     num(p.sigma0), num(p.A0), num(p.c0), num(p.C), num(p.eps));
  out << "t,sigma_hat,sigma_floor,entire_flag,floor_flag,shells_used,residual,verdict\n";
  for (const auto& row : rec.radius_rows)
    out << fmt::format("{},{},{},{:d},{:d},{},{},{}\n", num(row.t), num(row.estimate.sigma_hat), num(row.sigma_floor),
                       row.estimate.entire_flag, row.estimate.floor_flag, row.estimate.shells_used,
                       num(row.estimate.residual), row.verdict);
}

void write_sweep_csv(const std::filesystem::path& path, const Echo& echo, const SweepResult& s) {
  auto out = open_out(path);
  write_preamble(out, echo);
  out << fmt::format("# A0 = {}\n# sigma0 = {}\n# delta = {}\n# noise_floor = {}\n# slope = {}\n# fitted_C = {}\n"
                     "# monotone = {}\n",
                     num(s.A0), num(s.sigma0), num(s.delta), num(s.noise_floor), num(s.slope), num(s.fitted_C),
                     s.monotone);
  for (const auto& w : s.warnings) out << "# warning: " << w << '\n';
  out << "sigma,a_sigma0,D,D_corrected,C_estimate,in_fit\n";
  for (const auto& p : s.points)
    out << fmt::format("{},{},{},{},{},{:d}\n", num(p.sigma), num(p.a_sigma0), num(p.D), num(p.D_corrected),
                       num(p.C_estimate), p.in_fit);
}

void write_audit_csv(const std::filesystem::path& path, const Echo& echo, const std::vector<AuditReport>& reports) {
  auto out = open_out(path);
  write_preamble(out, echo);
  out << "kind,seed,member,lhs,rhs,ratio\n";
  for (const auto& r : reports) {
    if (r.rows.empty()) {
      out << fmt::format("{},{},{},{},{},{}\n", r.kind, r.ensemble.seed, 0, num(r.lhs), num(r.rhs), num(r.ratio));
      continue;
    }
    for (const auto& row : r.rows) {
      if (row.rejected) continue;
      out << fmt::format("{},{},{},{},{},{}\n", r.kind, r.ensemble.seed, row.member, num(row.lhs), num(row.rhs),
                         num(row.ratio));
    }
  }
}

void write_audit_summary(std::ostream& out, const Echo& echo, const std::vector<AuditReport>& reports) {
  write_preamble(out, echo);
  out << "{\n";
  for (std::size_t i = 0; i < reports.size(); ++i) {
    const auto& r = reports[i];
    out << fmt::format(
        "  \"{}\": {{\"count\": {}, \"max_ratio\": {}, \"median_ratio\": {}, \"violations\": {}, \"rejected\": {}, "
        "\"seed\": {}}}{}\n",
        r.kind, r.ensemble.count, num(r.ensemble.max_ratio), num(r.ensemble.median_ratio), r.violations, r.rejected,
        r.ensemble.seed, i + 1 < reports.size() ? "," : "");
  }
  out << "}\n";
}

void write_bookkeeper_csv(const std::filesystem::path& path, const Echo& echo, const InductionTrace& trace) {
  auto out = open_out(path);
  write_preamble(out, echo);
  out << "# " << bookkeeper_summary(trace) << '\n';
  out << "k,bound_k,ok_k\n";
  for (const auto& s : trace.steps) out << fmt::format("{},{},{:d}\n", s.k, num(s.bound), s.ok);
}

std::string bookkeeper_summary(const InductionTrace& t) {
  return fmt::format("delta = {}, n = {}, sigma = {}, c1 = {}, all_ok = {}{}", num(t.delta), t.n, num(t.sigma),
                     num(t.c1), t.all_ok,
                     t.first_failure ? fmt::format(", first_failure = {}", *t.first_failure) : std::string{});
}

void write_radius_svg(const std::filesystem::path& path, const RunRecord& rec) {
  constexpr double W = 640, H = 400, pad = 50;
  double t_max = 0.0, y_max = 0.0;
  for (const auto& r : rec.radius_rows) {
    t_max = std::max(t_max, r.t);
    if (std::isfinite(r.estimate.sigma_hat)) y_max = std::max(y_max, r.estimate.sigma_hat);
    y_max = std::max(y_max, r.sigma_floor);
  }
  if (t_max <= 0.0) t_max = 1.0;
  if (y_max <= 0.0) y_max = 1.0;
  y_max *= 1.1;
  auto px = [&](double t) { return pad + (W - 2 * pad) * t / t_max; };
  auto py = [&](double y) { return H - pad - (H - 2 * pad) * y / y_max; };
  auto polyline = [&](auto value, const char* colour) {
    std::string pts;
    for (const auto& r : rec.radius_rows) {
      const double y = value(r);
      if (std::isfinite(y)) pts += fmt::format("{:.2f},{:.2f} ", px(r.t), py(y));
    }
    return fmt::format("<polyline fill=\"none\" stroke=\"{}\" stroke-width=\"2\" points=\"{}\"/>\n", colour, pts);
  };

  auto out = open_out(path);
  out << fmt::format("<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{}\" height=\"{}\">\n", W, H);
  out << fmt::format("<!-- gnls {} -->\n", version());
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{2}\" y2=\"{1}\" stroke=\"black\"/>\n", pad, H - pad, W - pad);
  out << fmt::format("<line x1=\"{0}\" y1=\"{1}\" x2=\"{0}\" y2=\"{2}\" stroke=\"black\"/>\n", pad, H - pad, pad);
  out << fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"12\">t (max {:.3g})</text>\n", W / 2, H - 15, t_max);
  out << fmt::format("<text x=\"5\" y=\"{}\" font-size=\"12\">sigma (max {:.3g})</text>\n", pad - 15, y_max);
  out << polyline([](const RadiusRow& r) { return r.estimate.sigma_hat; }, "steelblue");
  out << polyline([](const RadiusRow& r) { return r.sigma_floor; }, "firebrick");
  out << fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"12\" fill=\"steelblue\">sigma_hat(t)</text>\n", W - 170, pad);
  out << fmt::format("<text x=\"{}\" y=\"{}\" font-size=\"12\" fill=\"firebrick\">sigma_floor(t)</text>\n", W - 170,
                     pad + 16);
  out << "</svg>\n";
}

std::vector<RadiusCsvRow> read_radius_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(fmt::format("cannot open '{}'", path.string()));
  std::vector<RadiusCsvRow> rows;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (header) {
      header = false;
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 8) throw ValidationError(fmt::format("{}: malformed row '{}'", path.string(), line));
    rows.push_back({std::stod(cells[0]), std::stod(cells[1]), std::stod(cells[2]), cells[3] == "1", cells[4] == "1",
                    cells[7]});
  }
  return rows;
}

}  // namespace gnls::harness
