#pragma once

// Scalar functionals of a single time-slice: mass, energy, Gevrey norms
// ||e^{sigma|D|}<D>^s u||_{L^2}, the modified energy A_sigma and an estimator
// of the radius of spatial analyticity read off the spectral decay rate.

#include "gnls/spectral.hpp"

namespace gnls {

struct GevreyParams {
  double sigma = 0.0;  // strip half-width, >= 0
  double s = 0.0;      // Sobolev index
};

struct NormReport {
  double t = 0.0;
  double sigma = 0.0;
  double mass = 0.0;
  double energy = 0.0;
  double gevrey_s1 = 0.0;  // ||u||_{G^{sigma,1}}
  double l4_gevrey = 0.0;  // ||e^{sigma|D|} u||_{L^4}
  double a_sigma = 0.0;    // gevrey_s1^2 + l4_gevrey^4 / 2
};

struct RadiusBandPolicy {
  double upper = 1e-3;          // band starts once the envelope drops below upper*max
  double lower = 1e-13;         // band ends before the envelope reaches lower*max
  int min_shells = 8;           // fewer usable shells sets floor_flag
  double curvature_ratio = 0.1; // |quadratic| > ratio*|linear| sets entire_flag
};

struct RadiusEstimate {
  double sigma_hat = 0.0;
  double band_lo = 0.0;  // |xi| range of the fit band
  double band_hi = 0.0;
  double residual = 0.0; // RMS of the linear fit in log space
  int shells_used = 0;
  double quadratic = 0.0;  // curvature coefficient of the quadratic fit
  double linear = 0.0;     // linear coefficient of the quadratic fit
  bool entire_flag = false;
  bool floor_flag = false;
};

double mass(const Field& u);

// ||grad u||^2 + 1/2 ||u||_{L^4}^4, the L^4 term by quadrature on the 2x grid.
double energy(const Field& u);

double gevrey_norm(const Field& u, GevreyParams p);

// ||u||_{L^4} evaluated on the 2x zero-padded grid.
double l4_norm(const Field& u);
double l4_gevrey(const Field& u, double sigma);

double a_sigma(const Field& u, double sigma);

NormReport norm_report(const Field& u, double sigma, double t = 0.0);

// Throws ValidationError("empty spectrum") for an identically zero field.
RadiusEstimate radius_estimate(const Field& u, const RadiusBandPolicy& policy = {});

// Max of |u_hat| over spherical shells of width 2pi/L, indexed by
// round(|xi| L / 2pi).
RealArray shell_envelope(const Field& u);

}  // namespace gnls
