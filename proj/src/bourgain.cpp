#include "gnls/bourgain.hpp"

#include "gnls/errors.hpp"
#include "gnls/fft.hpp"
#include "gnls/gevrey.hpp"
#include "gnls/initial_data.hpp"
#include "gnls/parallel.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace gnls {
namespace {

std::vector<int> space_time_shape(const FourierGrid& g, int time_modes) {
  std::vector<int> shape{time_modes};
  for (int a = 0; a < g.dim(); ++a) shape.push_back(g.points());
  return shape;
}

std::mt19937_64 member_rng(std::uint64_t seed, std::size_t member) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(member), static_cast<std::uint32_t>(member >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

// ------------------------------------------------------------ SpaceTimeSpectrum

SpaceTimeSpectrum::SpaceTimeSpectrum(FourierGrid grid, int time_modes, double window,
                                     ComplexArray coefficients)
    : grid_(std::move(grid)), time_modes_(time_modes), window_(window), coeffs_(std::move(coefficients)) {
  if (time_modes < 8 || time_modes % 2 != 0)
    throw ValidationError(fmt::format("space-time spectrum: M must be even and >= 8 (got {})", time_modes));
  if (!(window > 0.0) || !std::isfinite(window))
    throw ValidationError(fmt::format("space-time spectrum: window must be > 0 (got {})", window));
  if (coeffs_.size() != time_modes * grid_.size())
    throw ValidationError("space-time spectrum: coefficient count does not match M * N^d");
  if (!coeffs_.isFinite().all()) throw NonFiniteError("space-time spectrum: non-finite coefficient");
}

SpaceTimeSpectrum SpaceTimeSpectrum::zeros(FourierGrid grid, int time_modes, double window) {
  const Eigen::Index n = time_modes * grid.size();
  return {std::move(grid), time_modes, window, ComplexArray::Zero(n)};
}

SpaceTimeSpectrum SpaceTimeSpectrum::from_samples(FourierGrid grid, int time_modes, double window,
                                                  const ComplexArray& samples) {
  const Eigen::Index n = time_modes * grid.size();
  if (samples.size() != n) throw ValidationError("space-time samples: size does not match M * N^d");
  if (!samples.isFinite().all()) throw NonFiniteError("space-time samples: non-finite value");
  ComplexArray out(n);
  fft::transform({samples.data(), static_cast<std::size_t>(n)}, {out.data(), static_cast<std::size_t>(n)},
                 space_time_shape(grid, time_modes), fft::Direction::forward);
  const double scale = std::sqrt(window * std::pow(grid.period(), grid.dim())) / static_cast<double>(n);
  const RealArray& sign = grid.origin_sign();
  for (int m = 0; m < time_modes; ++m) out.segment(m * grid.size(), grid.size()) *= (scale * sign).cast<Complex>();
  return {std::move(grid), time_modes, window, std::move(out)};
}

ComplexArray SpaceTimeSpectrum::samples() const {
  const Eigen::Index n = coeffs_.size();
  const double scale = 1.0 / std::sqrt(window_ * std::pow(grid_.period(), grid_.dim()));
  ComplexArray in(n);
  const RealArray& sign = grid_.origin_sign();
  for (int m = 0; m < time_modes_; ++m)
    in.segment(m * grid_.size(), grid_.size()) =
        coeffs_.segment(m * grid_.size(), grid_.size()) * (scale * sign).cast<Complex>();
  ComplexArray out(n);
  fft::transform({in.data(), static_cast<std::size_t>(n)}, {out.data(), static_cast<std::size_t>(n)},
                 space_time_shape(grid_, time_modes_), fft::Direction::backward);
  return out;
}

double SpaceTimeSpectrum::tau(int position) const noexcept {
  return 2.0 * std::numbers::pi * time_mode_of(position) / window_;
}

SpaceTimeSpectrum SpaceTimeSpectrum::padded(int factor) const {
  if (factor < 1) throw ValidationError("SpaceTimeSpectrum::padded: factor must be >= 1");
  if (factor == 1) return *this;
  const FourierGrid big = grid_.with_points(grid_.points() * factor);
  const int big_m = time_modes_ * factor;
  ComplexArray c = ComplexArray::Zero(big_m * big.size());
  for (int mp = 0; mp < time_modes_; ++mp) {
    const int bmp = time_mode_of(mp) >= 0 ? time_mode_of(mp) : time_mode_of(mp) + big_m;
    for (Eigen::Index s = 0; s < grid_.size(); ++s) {
      auto pos = grid_.unflatten(s);
      for (int a = 0; a < grid_.dim(); ++a) pos[a] = big.position_of(grid_.mode_of(pos[a]));
      c[bmp * big.size() + big.flatten(pos)] = coeffs_[mp * grid_.size() + s];
    }
  }
  return {big, big_m, window_, std::move(c)};
}

double xsb_norm(const SpaceTimeSpectrum& w, XsbParams p) {
  const auto& g = w.grid();
  const RealArray space_weight =
      (Multiplier::exp_gevrey(p.sigma) * Multiplier::japanese_bracket(p.s)).symbol(g).real();
  const RealArray& xi_sq = g.wavenumber_sq();
  double sum = 0.0;
  for (int mp = 0; mp < w.time_modes(); ++mp) {
    const double tau = w.tau(mp);
    const auto block = w.coefficients().segment(mp * g.size(), g.size());
    RealArray weight = space_weight;
    if (p.b != 0.0) weight *= (1.0 + (tau + xi_sq).square()).pow(0.5 * p.b);
    sum += (weight.square() * block.abs2()).sum();
  }
  return std::sqrt(sum);
}

SpaceTimeSpectrum space_time_triple_product(const SpaceTimeSpectrum& u1, const SpaceTimeSpectrum& u2,
                                            const SpaceTimeSpectrum& u3, ConjugationPattern pattern) {
  const std::array<const SpaceTimeSpectrum*, 3> factors{&u1, &u2, &u3};
  for (const auto* f : factors) {
    require_same_grid(u1.grid(), f->grid(), "space_time_triple_product");
    if (f->time_modes() != u1.time_modes() || f->window() != u1.window())
      throw ValidationError("space_time_triple_product: time sampling mismatch");
  }
  ComplexArray product;
  for (int j = 0; j < 3; ++j) {
    ComplexArray s = factors[j]->padded(2).samples();
    if (pattern.conj[j]) s = s.conjugate();
    if (j == 0)
      product = std::move(s);
    else
      product *= s;
  }
  return SpaceTimeSpectrum::from_samples(u1.grid().with_points(2 * u1.grid().points()),
                                         2 * u1.time_modes(), u1.window(), product);
}

double alias_unsafe_fraction(const SpaceTimeSpectrum& w) {
  const auto& g = w.grid();
  const int cut_x = (g.points() - 1) / 3;
  const int cut_t = (w.time_modes() - 1) / 3;
  double outside = 0.0;
  double total = 0.0;
  for (int mp = 0; mp < w.time_modes(); ++mp) {
    const bool t_out = std::abs(w.time_mode_of(mp)) > cut_t;
    for (Eigen::Index s = 0; s < g.size(); ++s) {
      const double e = std::norm(w.coefficients()[mp * g.size() + s]);
      total += e;
      bool out = t_out;
      const auto pos = g.unflatten(s);
      for (int a = 0; a < g.dim() && !out; ++a) out = std::abs(g.mode_of(pos[a])) > cut_x;
      if (out) outside += e;
    }
  }
  return total > 0.0 ? outside / total : 0.0;
}

// ------------------------------------------------------------------ reports

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  const auto mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + mid, values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + mid);
  return 0.5 * (lower + upper);
}

void summarize(AuditReport& report) {
  std::vector<double> ratios;
  report.rejected = 0;
  const AuditRow* worst = nullptr;
  for (const auto& row : report.rows) {
    if (row.rejected) {
      ++report.rejected;
      continue;
    }
    ratios.push_back(row.ratio);
    if (worst == nullptr || row.ratio > worst->ratio) worst = &row;
  }
  report.ensemble.count = ratios.size();
  report.ensemble.median_ratio = median(ratios);
  if (worst != nullptr) {
    report.ensemble.max_ratio = worst->ratio;
    report.lhs = worst->lhs;
    report.rhs = worst->rhs;
    report.ratio = worst->ratio;
  }
}

namespace {

double safe_ratio(double lhs, double rhs) {
  if (rhs > 0.0) return lhs / rhs;
  return lhs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
}

}  // namespace

// ---------------------------------------------------------------- remainder

Field f_of_v(const Field& v, double sigma) {
  const Field v_hat = to_spectral(v);
  const auto& g = v_hat.grid();
  const double top = sigma * 2.0 * g.max_abs_wavenumber();
  if (top > Multiplier::kOverflowLimit)
    throw MultiplierOverflow(fmt::format(
        "f_of_v: multiplier overflow: sigma*|xi|_max on the padded band = {:.6g} exceeds {}", top,
        Multiplier::kOverflowLimit));

  const Field direct = to_spectral(dealiased_triple_product(v_hat, v_hat, v_hat, kCubicPattern));
  const Field damped = apply_multiplier(v_hat, Multiplier::exp_gevrey(-sigma));
  const Field inner = to_spectral(dealiased_triple_product(damped, damped, damped, kCubicPattern));
  const Field lifted = apply_multiplier(inner, Multiplier::exp_gevrey(sigma));
  return inverse_transform(Field::spectral(g, lifted.values() - direct.values()));
}

// ------------------------------------------------------- multiplier bound

MultiplierCheck check_multiplier_bound(double sigma, const WavenumberTriple& t) {
  const Wavevector xi = t.xi1 - t.xi2 - t.xi3;
  std::array<double, 3> n{t.xi1.norm(), t.xi2.norm(), t.xi3.norm()};
  const double gap = n[0] + n[1] + n[2] - xi.norm();
  std::sort(n.begin(), n.end());
  return {-std::expm1(-sigma * gap), 12.0 * sigma * n[1]};
}

AuditReport audit_multiplier_inequality(double sigma, std::span<const WavenumberTriple> triples) {
  if (!(sigma > 0.0)) throw ValidationError(fmt::format("audit_multiplier_inequality: sigma must be > 0 (got {})", sigma));
  AuditReport report;
  report.kind = "multiplier";
  std::vector<double> ratios(triples.size());
  for (std::size_t i = 0; i < triples.size(); ++i) {
    const auto c = check_multiplier_bound(sigma, triples[i]);
    ratios[i] = safe_ratio(c.lhs, c.rhs);
    if (c.violated()) ++report.violations;
    if (i == 0 || ratios[i] > report.ratio) {
      report.lhs = c.lhs;
      report.rhs = c.rhs;
      report.ratio = ratios[i];
    }
  }
  report.ensemble.count = triples.size();
  report.ensemble.max_ratio = report.ratio;
  report.ensemble.median_ratio = median(std::move(ratios));
  return report;
}

std::vector<WavenumberTriple> random_triples(int dim, std::size_t count, double max_abs,
                                             std::uint64_t seed) {
  if (dim < 1 || dim > 3) throw ValidationError("random_triples: dim must be 1, 2 or 3");
  std::mt19937_64 rng(seed);
  const double r = max_abs / std::sqrt(static_cast<double>(dim));
  std::uniform_real_distribution<double> uni(-r, r);
  std::vector<WavenumberTriple> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    for (Wavevector* xi : {&out[i].xi1, &out[i].xi2, &out[i].xi3}) {
      for (int a = 0; a < dim; ++a) {
        const double c = uni(rng);
        (*xi)[a] = i % 4 == 3 ? std::trunc(c) : c;
      }
    }
  }
  return out;
}

// ------------------------------------------------------------ f estimate

FEstimateReport audit_f_estimate(const Field& v, double sigma) {
  if (!(sigma > 0.0)) throw ValidationError(fmt::format("audit_f_estimate: sigma must be > 0 (got {})", sigma));
  FEstimateReport out;
  out.audit.kind = "f-estimate";
  const double lhs = std::sqrt(l2_norm_sq(f_of_v(v, sigma)));
  const double half = std::sqrt(l2_norm_sq(f_of_v(v, 0.5 * sigma)));
  const double h1 = gevrey_norm(v, {0.0, 1.0});
  out.audit.lhs = lhs;
  out.audit.rhs = sigma * h1 * h1 * h1;
  out.audit.ratio = safe_ratio(lhs, out.audit.rhs);
  out.audit.ensemble = {1, out.audit.ratio, out.audit.ratio, 0};
  out.halving_ratio = half > 0.0 ? lhs / half : std::numeric_limits<double>::quiet_NaN();
  return out;
}

FEnsembleReport audit_f_ensemble(const FEnsembleSpec& spec, int threads) {
  FEnsembleReport out;
  out.audit.kind = "f-estimate";
  out.audit.rows.resize(spec.members);
  out.halving_ratios.resize(spec.members);
  std::vector<char> mono_fail(spec.members, 0);
  parallel_for(spec.members, threads, [&](std::size_t i) {
    auto rng = member_rng(spec.seed, i);
    const Field v = inverse_transform(random_bandlimited(spec.grid, spec.band, spec.decay, 1.0, rng));
    const auto r = audit_f_estimate(v, spec.sigma);
    out.audit.rows[i] = {i, r.audit.lhs, r.audit.rhs, r.audit.ratio, false};
    out.halving_ratios[i] = r.halving_ratio;
    double prev = -1.0;
    for (double s : spec.monotonicity_sigmas) {
      const double n = std::sqrt(l2_norm_sq(f_of_v(v, s)));
      if (n < prev) mono_fail[i] = 1;
      prev = n;
    }
  });
  out.monotonicity_failures = static_cast<std::size_t>(std::count(mono_fail.begin(), mono_fail.end(), 1));
  out.audit.ensemble.seed = spec.seed;
  summarize(out.audit);
  return out;
}

double window_taper(double t, double delta) {
  const double lo = -1.5 * delta;
  const double hi = 2.5 * delta;
  if (t <= lo || t >= hi) return 0.0;
  if (t < -0.5 * delta) return 0.5 * (1.0 - std::cos(std::numbers::pi * (t - lo) / delta));
  if (t > 1.5 * delta) return 0.5 * (1.0 - std::cos(std::numbers::pi * (hi - t) / delta));
  return 1.0;
}

SpaceTimeSpectrum windowed_extension(const Field& u0, const WindowSpec& window, const SplittingOptions& opts) {
  if (!(window.delta > 0.0)) throw ValidationError("window.delta: must be > 0");
  if (window.time_modes < 8 || window.time_modes % 8 != 0)
    throw ValidationError(fmt::format("window.time_modes: must be a positive multiple of 8 (got {})", window.time_modes));
  if (window.substeps < 1) throw ValidationError("window.substeps: must be >= 1");

  const auto& g = u0.grid();
  const int M = window.time_modes;
  const double T = 4.0 * window.delta;
  const double sample_dt = T / M;
  const double dt = sample_dt / window.substeps;
  const int origin = 3 * M / 8;
  auto time_of = [&](int j) { return -1.5 * window.delta + j * sample_dt; };

  ComplexArray samples(M * g.size());
  auto store = [&](int j, const ComplexArray& c_hat) {
    const Field phys = inverse_transform(Field::spectral(g, c_hat));
    samples.segment(j * g.size(), g.size()) = window_taper(time_of(j), window.delta) * phys.values();
  };

  const ComplexArray start = to_spectral(u0).values();
  ComplexArray c = start;
  const StrangStepper forward(g, dt, opts);
  store(origin, c);
  for (int j = origin + 1; j < M; ++j) {
    for (int k = 0; k < window.substeps; ++k) forward.step(c);
    store(j, c);
  }
  c = start;
  const StrangStepper backward(g, -dt, opts);
  for (int j = origin - 1; j >= 0; --j) {
    for (int k = 0; k < window.substeps; ++k) backward.step(c);
    store(j, c);
  }
  return SpaceTimeSpectrum::from_samples(g, M, T, samples);
}

AuditReport audit_f_spacetime(const Field& u0, double sigma, const WindowSpec& window) {
  if (!(sigma > 0.0)) throw ValidationError("audit_f_spacetime: sigma must be > 0");
  const SpaceTimeSpectrum ext = windowed_extension(u0, window);
  const auto& g = ext.grid();
  const ComplexArray slices = ext.samples();
  const Multiplier lift = Multiplier::exp_gevrey(sigma);
  double lhs_sq = 0.0;
  for (int m = 0; m < ext.time_modes(); ++m) {
    const Field slice = Field::physical(g, slices.segment(m * g.size(), g.size()));
    const Field v = apply_multiplier(forward_transform(slice), lift);
    lhs_sq += l2_norm_sq(f_of_v(v, sigma)) * (ext.window() / ext.time_modes());
  }
  AuditReport r;
  r.kind = "f-spacetime";
  r.lhs = std::sqrt(lhs_sq);
  const double xnorm = xsb_norm(ext, {sigma, 1.0, window.b});
  r.rhs = sigma * xnorm * xnorm * xnorm;
  r.ratio = safe_ratio(r.lhs, r.rhs);
  r.ensemble = {1, r.ratio, r.ratio, 0};
  return r;
}

// ------------------------------------------------------------- trilinear

TrilinearValue evaluate_trilinear(TrilinearKind kind, const SpaceTimeSpectrum& u1,
                                  const SpaceTimeSpectrum& u2, const SpaceTimeSpectrum& u3, double b,
                                  double sigma, ConjugationPattern pattern) {
  TrilinearValue out;
  for (const auto* f : {&u1, &u2, &u3})
    if (alias_unsafe_fraction(*f) > kUnderResolvedFraction) out.rejected = true;
  if (out.rejected) return out;

  const SpaceTimeSpectrum p = space_time_triple_product(u1, u2, u3, pattern);
  switch (kind) {
    case TrilinearKind::x0_minus_b:
      out.lhs = xsb_norm(p, {0.0, 0.0, -b});
      out.rhs = xsb_norm(u1, {0.0, 1.0, b}) * xsb_norm(u2, {0.0, 0.0, b}) * xsb_norm(u3, {0.0, 0.0, b});
      break;
    case TrilinearKind::l2:
      out.lhs = xsb_norm(p, {0.0, 0.0, 0.0});
      out.rhs = xsb_norm(u1, {0.0, 1.0, b}) * xsb_norm(u2, {0.0, 1.0, b}) * xsb_norm(u3, {0.0, 0.0, b});
      break;
    case TrilinearKind::gevrey_x10:
      out.lhs = xsb_norm(p, {sigma, 1.0, 0.0});
      out.rhs = xsb_norm(u1, {sigma, 1.0, b}) * xsb_norm(u2, {sigma, 1.0, b}) * xsb_norm(u3, {sigma, 1.0, b});
      break;
  }
  return out;
}

SpaceTimeSpectrum random_space_time_spectrum(const FourierGrid& grid, int time_modes, double window,
                                             int xi_band, int tau_band, double xi_decay,
                                             double tau_decay, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, std::numbers::sqrt2 / 2.0);
  SpaceTimeSpectrum w = SpaceTimeSpectrum::zeros(grid, time_modes, window);
  for (int mp = 0; mp < time_modes; ++mp) {
    if (std::abs(w.time_mode_of(mp)) > tau_band) continue;
    const double tau = w.tau(mp);
    for (Eigen::Index s = 0; s < grid.size(); ++s) {
      const auto pos = grid.unflatten(s);
      bool inside = true;
      for (int a = 0; a < grid.dim(); ++a) inside = inside && std::abs(grid.mode_of(pos[a])) <= xi_band;
      if (!inside) continue;
      const double re = normal(rng);
      const double im = normal(rng);
      w.coefficients()[mp * grid.size() + s] =
          Complex(re, im) * std::exp(-xi_decay * grid.abs_wavenumber()[s] - tau_decay * std::abs(tau));
    }
  }
  return w;
}

AuditReport audit_trilinear(const TrilinearSpec& spec, int threads) {
  const int xi_band = spec.xi_band >= 0 ? spec.xi_band : spec.grid.points() / 6;
  const int tau_band = spec.tau_band >= 0 ? spec.tau_band : spec.time_modes / 6;
  AuditReport report;
  report.kind = fmt::format("trilinear-{}", static_cast<int>(spec.kind));
  report.rows.resize(spec.members);
  parallel_for(spec.members, threads, [&](std::size_t i) {
    auto rng = member_rng(spec.seed, i);
    std::uniform_real_distribution<double> jitter(0.5, 1.5);
    std::array<SpaceTimeSpectrum, 3> u{SpaceTimeSpectrum::zeros(spec.grid, spec.time_modes, spec.window),
                                       SpaceTimeSpectrum::zeros(spec.grid, spec.time_modes, spec.window),
                                       SpaceTimeSpectrum::zeros(spec.grid, spec.time_modes, spec.window)};
    for (auto& f : u) {
      const double xd = spec.xi_decay * jitter(rng);
      const double td = spec.tau_decay * jitter(rng);
      f = random_space_time_spectrum(spec.grid, spec.time_modes, spec.window, xi_band, tau_band, xd, td, rng);
    }
    const auto v = evaluate_trilinear(spec.kind, u[0], u[1], u[2], spec.b, spec.sigma, spec.pattern);
    report.rows[i] = {i, v.lhs, v.rhs, safe_ratio(v.lhs, v.rhs), v.rejected};
  });
  report.ensemble.seed = spec.seed;
  summarize(report);
  return report;
}

// ---------------------------------------------------- Gagliardo-Nirenberg

AuditReport audit_gagliardo_nirenberg(const Field& u) {
  const Field u_hat = to_spectral(u);
  const double m = l2_norm_sq(u_hat);
  if (!(m > 0.0)) throw ValidationError("audit_gagliardo_nirenberg: zero field");
  const double grad_sq = (u_hat.grid().wavenumber_sq() * u_hat.values().abs2()).sum();
  if (!(grad_sq > 0.0)) throw ValidationError("audit_gagliardo_nirenberg: gradient vanishes (constant field)");
  const int d = u_hat.grid().dim();
  AuditReport r;
  r.kind = "gagliardo-nirenberg";
  r.lhs = std::pow(l4_norm(u_hat), 4);
  r.rhs = std::pow(grad_sq, 0.5 * d) * std::pow(m, 0.5 * (4 - d));
  r.ratio = r.lhs / r.rhs;
  r.ensemble = {1, r.ratio, r.ratio, 0};
  return r;
}

}  // namespace gnls
