#pragma once

// Constant bookkeeping for the iterated local-existence argument: local step
// delta, the radius sigma that survives to time T, the induction on
// A_sigma(k delta) and the radius lower bound. Everything is computed in long
// double and reported as double.

#include <optional>
#include <vector>

namespace gnls {

struct BookkeeperParams {
  double sigma0 = 1.0;   // initial radius
  double A0 = 1.0;       // A_{sigma0}(0)
  double c0 = 1.0;       // local-existence constant
  double C = 1.0;        // almost-conservation constant
  double eps = 0.05;     // exponent slack shared by the delta and c1 exponents
  double T = 1.0;        // target time
  // When set and delta_from_norm is true, delta uses this data norm X
  // (delta = c0 (1+X)^{-(4+eps)}) instead of A0.
  std::optional<double> data_norm;
  bool delta_from_norm = false;

  void validate() const;
};

// delta = c0 (1 + A)^{-(4+eps)}.
double local_delta(double c0, double A, double eps);
double local_delta(const BookkeeperParams& p);

struct SigmaChoice {
  double sigma;  // delta / (16 T C A0 (1+A0)); A0 must be > 0
  double c1;     // constant in sigma(T) >= c1 / T
};

SigmaChoice sigma_for_T(const BookkeeperParams& p);

// 8 C sigma T A0^2 (1+A0) / delta; the choice of sigma makes this <= A0/2.
double sigma_condition_lhs(const BookkeeperParams& p, double sigma);

struct InductionStep {
  long long k;
  double bound;  // A_sigma(k delta) <= A0 + 8 C sigma k A0^2 (1+A0)
  bool ok;       // bound <= 2 A0
};

struct InductionTrace {
  double delta = 0.0;
  long long n = 0;  // floor(T / delta)
  double sigma = 0.0;
  double c1 = 0.0;
  std::vector<InductionStep> steps;  // k = 1..n+1
  bool all_ok = true;
  std::optional<long long> first_failure;
};

inline constexpr long long kMaxInductionSteps = 50'000'000;

// a_sigma_initial replaces A0 as the starting value of the recursion when
// given (A0 stays the reference for the 2 A0 ceiling).
InductionTrace run_induction(const BookkeeperParams& p, std::optional<double> sigma_override = {},
                             std::optional<double> a_sigma_initial = {});

// min(sigma0, c1 / max(t, delta)).
double radius_floor(const BookkeeperParams& p, double t);

}  // namespace gnls
