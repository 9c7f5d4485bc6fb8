#include "gnls/gevrey.hpp"

#include "gnls/errors.hpp"

#include <Eigen/QR>
#include <fmt/format.h>

#include <cmath>

namespace gnls {
namespace {

void require_valid(GevreyParams p) {
  if (!(p.sigma >= 0.0) || !std::isfinite(p.sigma) || !std::isfinite(p.s))
    throw ValidationError(fmt::format("gevrey params: sigma must be finite and >= 0 (got {})", p.sigma));
}

// sum over the padded grid of |v|^4 times the padded cell volume.
double l4_pow4_spectral(const Field& v_hat) {
  const Field up = inverse_transform(pad_spectrum(v_hat, 2));
  return up.values().abs2().square().sum() * up.grid().cell_volume();
}

struct GevreyPieces {
  double s1_sq;     // ||e^{sigma|D|} u||^2_{H^1}
  double l4_pow4;   // ||e^{sigma|D|} u||^4_{L^4}
};

GevreyPieces gevrey_pieces(const Field& u, double sigma) {
  require_valid({sigma, 1.0});
  const Field u_hat = to_spectral(u);
  const Field v_hat = apply_multiplier(u_hat, Multiplier::exp_gevrey(sigma));
  const double s1_sq = ((1.0 + u_hat.grid().wavenumber_sq()) * v_hat.values().abs2()).sum();
  return {s1_sq, l4_pow4_spectral(v_hat)};
}

}  // namespace

double mass(const Field& u) {
  require_finite(u, "mass");
  return l2_norm_sq(u);
}

double energy(const Field& u) {
  require_finite(u, "energy");
  const Field u_hat = to_spectral(u);
  const double grad_sq = (u_hat.grid().wavenumber_sq() * u_hat.values().abs2()).sum();
  return grad_sq + 0.5 * l4_pow4_spectral(u_hat);
}

double gevrey_norm(const Field& u, GevreyParams p) {
  require_valid(p);
  const Field u_hat = to_spectral(u);
  const ComplexArray w = (Multiplier::exp_gevrey(p.sigma) * Multiplier::japanese_bracket(p.s))
                             .symbol(u_hat.grid());
  return std::sqrt((w.abs2() * u_hat.values().abs2()).sum());
}

double l4_norm(const Field& u) { return l4_gevrey(u, 0.0); }

double l4_gevrey(const Field& u, double sigma) {
  require_valid({sigma, 0.0});
  const Field v_hat = apply_multiplier(to_spectral(u), Multiplier::exp_gevrey(sigma));
  return std::pow(l4_pow4_spectral(v_hat), 0.25);
}

double a_sigma(const Field& u, double sigma) { return norm_report(u, sigma).a_sigma; }

NormReport norm_report(const Field& u, double sigma, double t) {
  require_finite(u, "norm_report");
  const Field u_hat = to_spectral(u);
  const auto pieces = gevrey_pieces(u_hat, sigma);
  NormReport r;
  r.t = t;
  r.sigma = sigma;
  r.mass = mass(u_hat);
  r.energy = energy(u_hat);
  r.gevrey_s1 = std::sqrt(pieces.s1_sq);
  r.l4_gevrey = std::pow(pieces.l4_pow4, 0.25);
  r.a_sigma = r.gevrey_s1 * r.gevrey_s1 + 0.5 * std::pow(r.l4_gevrey, 4);
  return r;
}

RealArray shell_envelope(const Field& u) {
  const Field u_hat = to_spectral(u);
  const auto& g = u_hat.grid();
  const RealArray shell = (g.abs_wavenumber() / g.fundamental()).round();
  RealArray env = RealArray::Zero(static_cast<Eigen::Index>(shell.maxCoeff()) + 1);
  const RealArray mag = u_hat.values().abs();
  for (Eigen::Index i = 0; i < mag.size(); ++i) {
    auto& e = env[static_cast<Eigen::Index>(shell[i])];
    e = std::max(e, mag[i]);
  }
  return env;
}

RadiusEstimate radius_estimate(const Field& u, const RadiusBandPolicy& policy) {
  require_finite(u, "radius_estimate");
  const RealArray env = shell_envelope(u);
  Eigen::Index peak = 0;
  const double top = env.maxCoeff(&peak);
  if (!(top > 0.0)) throw ValidationError("radius_estimate: empty spectrum");

  const double k0 = u.grid().fundamental();
  std::vector<double> xs, ys;
  for (Eigen::Index i = peak; i < env.size(); ++i) {
    if (env[i] < policy.lower * top) break;
    if (env[i] <= policy.upper * top) {
      xs.push_back(k0 * static_cast<double>(i));
      ys.push_back(std::log(env[i]));
    }
  }

  RadiusEstimate est;
  const auto n = static_cast<Eigen::Index>(xs.size());
  est.shells_used = static_cast<int>(n);
  est.floor_flag = n < policy.min_shells;
  if (n < 2) return est;

  est.band_lo = xs.front();
  est.band_hi = xs.back();
  const Eigen::Map<const Eigen::VectorXd> x(xs.data(), n);
  const Eigen::Map<const Eigen::VectorXd> y(ys.data(), n);

  Eigen::MatrixXd lin(n, 2);
  lin.col(0).setOnes();
  lin.col(1) = x;
  const Eigen::VectorXd ab = lin.colPivHouseholderQr().solve(y);
  est.sigma_hat = -ab[1];
  est.residual = std::sqrt((lin * ab - y).squaredNorm() / static_cast<double>(n));

  if (n >= 3) {
    Eigen::MatrixXd quad(n, 3);
    quad.col(0).setOnes();
    quad.col(1) = x;
    quad.col(2) = x.array().square();
    const Eigen::VectorXd abc = quad.colPivHouseholderQr().solve(y);
    est.linear = abc[1];
    est.quadratic = abc[2];
    est.entire_flag = std::abs(abc[2]) > policy.curvature_ratio * std::abs(abc[1]);
  }
  return est;
}

}  // namespace gnls
