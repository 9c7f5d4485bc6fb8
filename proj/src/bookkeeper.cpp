#include "gnls/bookkeeper.hpp"

#include "gnls/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>

namespace gnls {
namespace {

using Real = long double;

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw ValidationError(fmt::format("bookkeeper.{}: must be finite and > 0 (got {})", name, v));
}

Real delta_ld(Real c0, Real A, Real eps) { return c0 * std::pow(1.0L + A, -(4.0L + eps)); }

Real delta_ld(const BookkeeperParams& p) {
  const Real a = p.delta_from_norm && p.data_norm ? *p.data_norm : p.A0;
  return delta_ld(p.c0, a, p.eps);
}

// c0 / (16 C A0 (1+A0) (1+X)^{4+eps}), X = A0 unless the norm-based delta is in use.
Real c1_ld(const BookkeeperParams& p) {
  const Real a0 = p.A0;
  const Real x = p.delta_from_norm && p.data_norm ? *p.data_norm : p.A0;
  return p.c0 / (16.0L * p.C * a0 * (1.0L + a0) * std::pow(1.0L + x, 4.0L + p.eps));
}

}  // namespace

void BookkeeperParams::validate() const {
  require_positive(sigma0, "sigma0");
  require_positive(c0, "c0");
  require_positive(C, "C");
  require_positive(T, "T");
  if (!(A0 >= 0.0) || !std::isfinite(A0))
    throw ValidationError(fmt::format("bookkeeper.A0: must be finite and >= 0 (got {})", A0));
  if (!(eps >= 0.0) || !std::isfinite(eps))
    throw ValidationError(fmt::format("bookkeeper.eps: must be finite and >= 0 (got {})", eps));
  if (delta_from_norm) {
    if (!data_norm) throw ValidationError("bookkeeper.data_norm: required when delta_from_norm is set");
    if (!(*data_norm >= 0.0) || !std::isfinite(*data_norm))
      throw ValidationError(fmt::format("bookkeeper.data_norm: must be finite and >= 0 (got {})", *data_norm));
  }
}

double local_delta(double c0, double A, double eps) {
  require_positive(c0, "c0");
  if (!(A >= 0.0)) throw ValidationError(fmt::format("bookkeeper.A0: must be >= 0 (got {})", A));
  if (!(eps >= 0.0)) throw ValidationError(fmt::format("bookkeeper.eps: must be >= 0 (got {})", eps));
  return static_cast<double>(delta_ld(c0, A, eps));
}

double local_delta(const BookkeeperParams& p) {
  p.validate();
  return static_cast<double>(delta_ld(p));
}

SigmaChoice sigma_for_T(const BookkeeperParams& p) {
  p.validate();
  if (p.A0 == 0.0) throw ValidationError("bookkeeper.A0: must be > 0 to choose sigma");
  const Real delta = delta_ld(p);
  const Real sigma = delta / (16.0L * p.T * p.C * p.A0 * (1.0L + p.A0));
  return {static_cast<double>(sigma), static_cast<double>(c1_ld(p))};
}

double sigma_condition_lhs(const BookkeeperParams& p, double sigma) {
  p.validate();
  const Real a0 = p.A0;
  return static_cast<double>(8.0L * p.C * sigma * p.T * a0 * a0 * (1.0L + a0) / delta_ld(p));
}

InductionTrace run_induction(const BookkeeperParams& p, std::optional<double> sigma_override,
                             std::optional<double> a_sigma_initial) {
  p.validate();
  InductionTrace trace;
  const Real delta = delta_ld(p);
  const auto choice = sigma_for_T(p);
  const Real sigma = sigma_override ? *sigma_override : choice.sigma;
  if (!(sigma > 0.0L)) throw ValidationError("bookkeeper.sigma: override must be > 0");
  trace.delta = static_cast<double>(delta);
  trace.sigma = static_cast<double>(sigma);
  trace.c1 = choice.c1;
  const Real n = std::floor(static_cast<Real>(p.T) / delta);
  if (!(n < static_cast<Real>(kMaxInductionSteps)))
    throw ValidationError(fmt::format("bookkeeper.T: {} local steps exceeds the limit {}",
                                      static_cast<double>(n) + 1, kMaxInductionSteps));
  trace.n = static_cast<long long>(n);

  const Real a0 = p.A0;
  const Real start = a_sigma_initial ? *a_sigma_initial : a0;
  const Real growth = 8.0L * p.C * sigma * a0 * a0 * (1.0L + a0);
  const long long last = trace.n + 1;
  trace.steps.reserve(static_cast<std::size_t>(last));
  for (long long k = 1; k <= last; ++k) {
    // T < delta: the single step covers [0, T] and carries no growth.
    const Real bound = trace.n == 0 ? start : start + growth * static_cast<Real>(k);
    const bool ok = bound <= 2.0L * a0;
    trace.steps.push_back({k, static_cast<double>(bound), ok});
    if (!ok && !trace.first_failure) trace.first_failure = k;
  }
  trace.all_ok = !trace.first_failure;
  return trace;
}

double radius_floor(const BookkeeperParams& p, double t) {
  if (!(t >= 0.0)) throw ValidationError(fmt::format("radius_floor: t must be >= 0 (got {})", t));
  const auto choice = sigma_for_T(p);
  const Real delta = delta_ld(p);
  return static_cast<double>(std::min<Real>(p.sigma0, static_cast<Real>(choice.c1) / std::max<Real>(t, delta)));
}

}  // namespace gnls
