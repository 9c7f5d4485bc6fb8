#pragma once

// Periodic Fourier substrate: grids, fields, multipliers and dealiased
// products. The domain is the torus [-L/2, L/2)^d sampled with N points per
// axis. Spectral coefficients use the unitary normalization
//
//   u_hat(xi) = L^{-d/2} \int u(x) e^{-i xi.x} dx   (trapezoidal quadrature)
//
// so that sum |u_hat|^2 = \int |u|^2 dx and a coefficient value does not depend
// on N. Zero-padding and truncation are therefore plain coefficient copies.

#include <Eigen/Core>

#include <array>
#include <complex>
#include <memory>
#include <string>
#include <vector>

namespace gnls {

using Complex = std::complex<double>;
using ComplexArray = Eigen::ArrayXcd;
using RealArray = Eigen::ArrayXd;
using BoolArray = Eigen::Array<bool, Eigen::Dynamic, 1>;

class FourierGrid {
 public:
  // Requires dim in {1,2,3}, points >= 8 and even, period > 0.
  FourierGrid(int dim, int points, double period);

  int dim() const noexcept { return dim_; }
  int points() const noexcept { return points_; }
  double period() const noexcept { return period_; }
  Eigen::Index size() const noexcept { return size_; }
  double spacing() const noexcept { return period_ / points_; }
  double cell_volume() const noexcept;
  double fundamental() const noexcept;
  double max_abs_wavenumber() const noexcept;
  std::vector<int> shape() const { return std::vector<int>(dim_, points_); }

  // Signed lattice index in [-N/2, N/2) of an FFT-ordered position.
  int mode_of(int position) const noexcept {
    return position < points_ / 2 ? position : position - points_;
  }
  int position_of(int mode) const noexcept { return mode >= 0 ? mode : mode + points_; }

  // Physical coordinate of sample j along any axis.
  double coordinate(int j) const noexcept { return -0.5 * period_ + j * spacing(); }

  std::array<int, 3> unflatten(Eigen::Index flat) const noexcept;
  Eigen::Index flatten(const std::array<int, 3>& idx) const noexcept;

  // Tables in spectral (FFT) order, one entry per coefficient.
  const RealArray& abs_wavenumber() const noexcept { return tables_->abs_xi; }
  const RealArray& wavenumber_sq() const noexcept { return tables_->xi_sq; }
  const RealArray& wavenumber(int axis) const { return tables_->xi.at(axis); }
  const BoolArray& nyquist_mask() const noexcept { return tables_->nyquist; }
  // e^{-i xi.x0} with x0 = (-L/2, ..., -L/2); equals (-1)^{sum of modes}.
  const RealArray& origin_sign() const noexcept { return tables_->origin_sign; }

  FourierGrid with_points(int points) const { return {dim_, points, period_}; }

  friend bool operator==(const FourierGrid& a, const FourierGrid& b) noexcept {
    return a.dim_ == b.dim_ && a.points_ == b.points_ && a.period_ == b.period_;
  }

 private:
  struct Tables {
    std::vector<RealArray> xi;
    RealArray abs_xi;
    RealArray xi_sq;
    BoolArray nyquist;
    RealArray origin_sign;
  };

  int dim_;
  int points_;
  double period_;
  Eigen::Index size_;
  std::shared_ptr<const Tables> tables_;
};

enum class Representation { physical, spectral };

// One time-slice of a complex field on a grid.
class Field {
 public:
  static Field physical(FourierGrid grid, ComplexArray samples);
  static Field spectral(FourierGrid grid, ComplexArray coefficients);
  static Field zeros(FourierGrid grid, Representation rep = Representation::physical);

  const FourierGrid& grid() const noexcept { return grid_; }
  Representation representation() const noexcept { return rep_; }
  bool is_spectral() const noexcept { return rep_ == Representation::spectral; }
  const ComplexArray& values() const noexcept { return values_; }
  bool all_finite() const;

 private:
  Field(FourierGrid grid, ComplexArray values, Representation rep);

  FourierGrid grid_;
  ComplexArray values_;
  Representation rep_;
};

// A Fourier multiplier m(xi), built as a product of named symbols.
class Multiplier {
 public:
  // sigma*|xi|_max above this is rejected for e^{sigma|xi|}.
  static constexpr double kOverflowLimit = 600.0;

  static Multiplier identity();
  static Multiplier exp_gevrey(double sigma);       // e^{sigma|xi|}
  static Multiplier japanese_bracket(double s);     // (1+|xi|^2)^{s/2}
  static Multiplier free_propagator(double t);      // e^{-i t|xi|^2}
  static Multiplier gradient_magnitude();           // |xi|
  static Multiplier partial(int axis);              // i xi_axis

  Multiplier operator*(const Multiplier& other) const;

  // Symbol sampled on the grid's lattice (spectral order). Throws
  // MultiplierOverflow when an e^{sigma|xi|} factor exceeds the limit.
  ComplexArray symbol(const FourierGrid& grid) const;

  // True when the symbol contains an odd factor (|xi| or xi), whose value at
  // the unpaired Nyquist mode is zeroed.
  bool zeroes_nyquist() const;

  std::string describe() const;

 private:
  enum class Kind { exp_gevrey, japanese_bracket, free_propagator, gradient_magnitude, partial };
  struct Factor {
    Kind kind;
    double param;
    int axis;
  };
  std::vector<Factor> factors_;
};

// Which factors of a triple product enter conjugated.
struct ConjugationPattern {
  std::array<bool, 3> conj{false, false, false};

  static ConjugationPattern from_index(int bits);  // bit j set -> factor j conjugated
  int index() const noexcept;
  std::string describe() const;  // e.g. "u*conj(u)*u"
};

inline constexpr ConjugationPattern kCubicPattern{{false, true, false}};  // u * conj(u) * u

// Unitary transforms. Throw NonFiniteError on NaN/Inf input and
// ValidationError on a representation mismatch.
Field forward_transform(const Field& f);
Field inverse_transform(const Field& f);

// Converting no-ops when the field is already in the requested representation.
Field to_spectral(const Field& f);
Field to_physical(const Field& f);

// Coefficient-wise product with the multiplier symbol.
Field apply_multiplier(const Field& f, const Multiplier& m);

// Zero-pad a spectral field onto a grid with factor*N points per axis, and
// the reverse projection onto a coarser grid with the same period.
Field pad_spectrum(const Field& f, int factor);
Field truncate_spectrum(const Field& f, const FourierGrid& target);

// Pointwise product of three fields (optionally conjugated) evaluated on the
// 2x zero-padded grid and projected back. Result is physical. Exact for
// band-limited inputs except when all three factors are conjugated and carry
// the Nyquist mode.
Field dealiased_triple_product(const Field& f, const Field& g, const Field& h,
                               ConjugationPattern pattern = kCubicPattern);

// ||f||^2_{L^2}: quadrature for physical fields, coefficient sum for spectral.
double l2_norm_sq(const Field& f);

// Relative L^2 distance ||a-b||/||b|| (absolute when b vanishes).
double relative_l2_error(const Field& a, const Field& b);

void require_same_grid(const FourierGrid& a, const FourierGrid& b, const char* what);
void require_finite(const Field& f, const char* what);

}  // namespace gnls
