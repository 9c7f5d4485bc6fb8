#include "gnls/spectral.hpp"

#include "gnls/errors.hpp"
#include "gnls/fft.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numbers>

namespace gnls {

// ---------------------------------------------------------------- FourierGrid

FourierGrid::FourierGrid(int dim, int points, double period)
    : dim_(dim), points_(points), period_(period) {
  if (dim < 1 || dim > 3) throw ValidationError(fmt::format("grid: d must be 1, 2 or 3 (got {})", dim));
  if (points < 8 || points % 2 != 0)
    throw ValidationError(fmt::format("grid: N must be even and >= 8 (got {})", points));
  if (!(period > 0.0) || !std::isfinite(period))
    throw ValidationError(fmt::format("grid: L must be positive (got {})", period));

  size_ = 1;
  for (int a = 0; a < dim; ++a) size_ *= points;

  auto tables = std::make_shared<Tables>();
  tables->xi.assign(dim, RealArray(size_));
  tables->abs_xi.resize(size_);
  tables->xi_sq.resize(size_);
  tables->nyquist.resize(size_);
  tables->origin_sign.resize(size_);
  const double k0 = fundamental();
  for (Eigen::Index flat = 0; flat < size_; ++flat) {
    const auto pos = unflatten(flat);
    double sq = 0.0;
    int mode_sum = 0;
    bool nyq = false;
    for (int a = 0; a < dim; ++a) {
      const int m = mode_of(pos[a]);
      const double xi = k0 * m;
      tables->xi[a][flat] = xi;
      sq += xi * xi;
      mode_sum += m;
      nyq = nyq || pos[a] == points / 2;
    }
    tables->xi_sq[flat] = sq;
    tables->abs_xi[flat] = std::sqrt(sq);
    tables->nyquist[flat] = nyq;
    tables->origin_sign[flat] = (mode_sum % 2 == 0) ? 1.0 : -1.0;
  }
  tables_ = std::move(tables);
}

double FourierGrid::cell_volume() const noexcept { return std::pow(spacing(), dim_); }

double FourierGrid::fundamental() const noexcept { return 2.0 * std::numbers::pi / period_; }

double FourierGrid::max_abs_wavenumber() const noexcept {
  return fundamental() * (points_ / 2) * std::sqrt(static_cast<double>(dim_));
}

std::array<int, 3> FourierGrid::unflatten(Eigen::Index flat) const noexcept {
  std::array<int, 3> idx{0, 0, 0};
  for (int a = dim_ - 1; a >= 0; --a) {
    idx[a] = static_cast<int>(flat % points_);
    flat /= points_;
  }
  return idx;
}

Eigen::Index FourierGrid::flatten(const std::array<int, 3>& idx) const noexcept {
  Eigen::Index flat = 0;
  for (int a = 0; a < dim_; ++a) flat = flat * points_ + idx[a];
  return flat;
}

// ---------------------------------------------------------------------- Field

Field::Field(FourierGrid grid, ComplexArray values, Representation rep)
    : grid_(std::move(grid)), values_(std::move(values)), rep_(rep) {
  if (values_.size() != grid_.size())
    throw ValidationError(fmt::format("field: expected {} values, got {}", grid_.size(),
                                      values_.size()));
}

Field Field::physical(FourierGrid grid, ComplexArray samples) {
  return {std::move(grid), std::move(samples), Representation::physical};
}

Field Field::spectral(FourierGrid grid, ComplexArray coefficients) {
  return {std::move(grid), std::move(coefficients), Representation::spectral};
}

Field Field::zeros(FourierGrid grid, Representation rep) {
  ComplexArray z = ComplexArray::Zero(grid.size());
  return {std::move(grid), std::move(z), rep};
}

bool Field::all_finite() const { return values_.isFinite().all(); }

void require_same_grid(const FourierGrid& a, const FourierGrid& b, const char* what) {
  if (!(a == b))
    throw ValidationError(fmt::format("{}: grid mismatch (d={}, N={}, L={} vs d={}, N={}, L={})",
                                      what, a.dim(), a.points(), a.period(), b.dim(), b.points(),
                                      b.period()));
}

void require_finite(const Field& f, const char* what) {
  if (!f.all_finite()) {
    const auto& v = f.values();
    Eigen::Index bad = 0;
    while (bad < v.size() && std::isfinite(v[bad].real()) && std::isfinite(v[bad].imag())) ++bad;
    throw NonFiniteError(fmt::format("{}: non-finite value at index {}", what, bad));
  }
}

// ----------------------------------------------------------------- transforms

Field forward_transform(const Field& f) {
  if (f.is_spectral()) throw ValidationError("forward_transform: field is already spectral");
  require_finite(f, "forward_transform");
  const auto& g = f.grid();
  ComplexArray out(g.size());
  fft::transform({f.values().data(), static_cast<std::size_t>(g.size())},
                 {out.data(), static_cast<std::size_t>(g.size())}, g.shape(),
                 fft::Direction::forward);
  const double scale = std::pow(g.period(), 0.5 * g.dim()) / static_cast<double>(g.size());
  out *= (scale * g.origin_sign()).cast<Complex>();
  return Field::spectral(g, std::move(out));
}

Field inverse_transform(const Field& f) {
  if (!f.is_spectral()) throw ValidationError("inverse_transform: field is already physical");
  require_finite(f, "inverse_transform");
  const auto& g = f.grid();
  const double scale = std::pow(g.period(), -0.5 * g.dim());
  ComplexArray in = f.values() * (scale * g.origin_sign()).cast<Complex>();
  ComplexArray out(g.size());
  fft::transform({in.data(), static_cast<std::size_t>(g.size())},
                 {out.data(), static_cast<std::size_t>(g.size())}, g.shape(),
                 fft::Direction::backward);
  return Field::physical(g, std::move(out));
}

Field to_spectral(const Field& f) { return f.is_spectral() ? f : forward_transform(f); }

Field to_physical(const Field& f) { return f.is_spectral() ? inverse_transform(f) : f; }

// ----------------------------------------------------------------- multipliers

Multiplier Multiplier::identity() { return {}; }

Multiplier Multiplier::exp_gevrey(double sigma) {
  Multiplier m;
  m.factors_.push_back({Kind::exp_gevrey, sigma, 0});
  return m;
}

Multiplier Multiplier::japanese_bracket(double s) {
  Multiplier m;
  m.factors_.push_back({Kind::japanese_bracket, s, 0});
  return m;
}

Multiplier Multiplier::free_propagator(double t) {
  Multiplier m;
  m.factors_.push_back({Kind::free_propagator, t, 0});
  return m;
}

Multiplier Multiplier::gradient_magnitude() {
  Multiplier m;
  m.factors_.push_back({Kind::gradient_magnitude, 0.0, 0});
  return m;
}

Multiplier Multiplier::partial(int axis) {
  if (axis < 0 || axis > 2) throw ValidationError("Multiplier::partial: axis must be 0, 1 or 2");
  Multiplier m;
  m.factors_.push_back({Kind::partial, 0.0, axis});
  return m;
}

Multiplier Multiplier::operator*(const Multiplier& other) const {
  Multiplier m = *this;
  m.factors_.insert(m.factors_.end(), other.factors_.begin(), other.factors_.end());
  return m;
}

bool Multiplier::zeroes_nyquist() const {
  for (const auto& f : factors_)
    if (f.kind == Kind::gradient_magnitude || f.kind == Kind::partial) return true;
  return false;
}

ComplexArray Multiplier::symbol(const FourierGrid& grid) const {
  ComplexArray sym = ComplexArray::Ones(grid.size());
  for (const auto& f : factors_) {
    switch (f.kind) {
      case Kind::exp_gevrey: {
        const double top = f.param * grid.max_abs_wavenumber();
        if (top > kOverflowLimit)
          throw MultiplierOverflow(fmt::format(
              "multiplier overflow: sigma*|xi|_max = {:.6g} exceeds {} (sigma={}, |xi|_max={:.6g})",
              top, kOverflowLimit, f.param, grid.max_abs_wavenumber()));
        if (f.param != 0.0) sym *= (f.param * grid.abs_wavenumber()).exp().cast<Complex>();
        break;
      }
      case Kind::japanese_bracket:
        if (f.param != 0.0)
          sym *= (1.0 + grid.wavenumber_sq()).pow(0.5 * f.param).cast<Complex>();
        break;
      case Kind::free_propagator: {
        const RealArray phase = -f.param * grid.wavenumber_sq();
        for (Eigen::Index i = 0; i < sym.size(); ++i) sym[i] *= std::polar(1.0, phase[i]);
        break;
      }
      case Kind::gradient_magnitude:
        sym *= grid.abs_wavenumber().cast<Complex>();
        break;
      case Kind::partial:
        if (f.axis >= grid.dim()) throw ValidationError("Multiplier::partial: axis exceeds grid dimension");
        sym *= Complex(0.0, 1.0) * grid.wavenumber(f.axis).cast<Complex>();
        break;
    }
  }
  if (zeroes_nyquist()) sym = grid.nyquist_mask().select(Complex(0.0), sym);
  return sym;
}

std::string Multiplier::describe() const {
  if (factors_.empty()) return "1";
  std::string out;
  for (const auto& f : factors_) {
    if (!out.empty()) out += " * ";
    switch (f.kind) {
      case Kind::exp_gevrey: out += fmt::format("exp({}|xi|)", f.param); break;
      case Kind::japanese_bracket: out += fmt::format("<xi>^{}", f.param); break;
      case Kind::free_propagator: out += fmt::format("exp(-i {} |xi|^2)", f.param); break;
      case Kind::gradient_magnitude: out += "|xi|"; break;
      case Kind::partial: out += fmt::format("i xi_{}", f.axis); break;
    }
  }
  return out;
}

Field apply_multiplier(const Field& f, const Multiplier& m) {
  if (!f.is_spectral()) throw ValidationError("apply_multiplier: field must be spectral");
  return Field::spectral(f.grid(), f.values() * m.symbol(f.grid()));
}

// -------------------------------------------------------- padding / products

ConjugationPattern ConjugationPattern::from_index(int bits) {
  if (bits < 0 || bits > 7) throw ValidationError("conjugation pattern index must be in [0, 7]");
  return ConjugationPattern{{(bits & 1) != 0, (bits & 2) != 0, (bits & 4) != 0}};
}

int ConjugationPattern::index() const noexcept {
  return (conj[0] ? 1 : 0) | (conj[1] ? 2 : 0) | (conj[2] ? 4 : 0);
}

std::string ConjugationPattern::describe() const {
  std::string out;
  for (int j = 0; j < 3; ++j) {
    if (j > 0) out += "*";
    out += conj[j] ? fmt::format("conj(u{})", j + 1) : fmt::format("u{}", j + 1);
  }
  return out;
}

namespace {

// Copy coefficients with matching lattice index between grids of equal
// period; modes absent from the destination are dropped.
ComplexArray remap_modes(const ComplexArray& src, const FourierGrid& from, const FourierGrid& to) {
  ComplexArray dst = ComplexArray::Zero(to.size());
  const bool growing = to.points() > from.points();
  const FourierGrid& small = growing ? from : to;
  const FourierGrid& large = growing ? to : from;
  for (Eigen::Index s = 0; s < small.size(); ++s) {
    auto pos = small.unflatten(s);
    for (int a = 0; a < small.dim(); ++a) pos[a] = large.position_of(small.mode_of(pos[a]));
    const Eigen::Index l = large.flatten(pos);
    if (growing)
      dst[l] = src[s];
    else
      dst[s] = src[l];
  }
  return dst;
}

}  // namespace

Field pad_spectrum(const Field& f, int factor) {
  if (!f.is_spectral()) throw ValidationError("pad_spectrum: field must be spectral");
  if (factor < 1) throw ValidationError("pad_spectrum: factor must be >= 1");
  if (factor == 1) return f;
  const FourierGrid target = f.grid().with_points(f.grid().points() * factor);
  return Field::spectral(target, remap_modes(f.values(), f.grid(), target));
}

Field truncate_spectrum(const Field& f, const FourierGrid& target) {
  if (!f.is_spectral()) throw ValidationError("truncate_spectrum: field must be spectral");
  const auto& g = f.grid();
  if (target.dim() != g.dim() || target.period() != g.period() || target.points() > g.points())
    throw ValidationError("truncate_spectrum: target must be a coarser grid with the same d and L");
  if (target == g) return f;
  return Field::spectral(target, remap_modes(f.values(), g, target));
}

Field dealiased_triple_product(const Field& f, const Field& g, const Field& h,
                               ConjugationPattern pattern) {
  require_same_grid(f.grid(), g.grid(), "dealiased_triple_product");
  require_same_grid(f.grid(), h.grid(), "dealiased_triple_product");
  const std::array<const Field*, 3> factors{&f, &g, &h};
  ComplexArray product;
  FourierGrid padded = f.grid().with_points(2 * f.grid().points());
  for (int j = 0; j < 3; ++j) {
    const Field up = inverse_transform(pad_spectrum(to_spectral(*factors[j]), 2));
    ComplexArray v = pattern.conj[j] ? ComplexArray(up.values().conjugate()) : up.values();
    if (j == 0)
      product = std::move(v);
    else
      product *= v;
  }
  const Field spec = forward_transform(Field::physical(padded, std::move(product)));
  return inverse_transform(truncate_spectrum(spec, f.grid()));
}

double l2_norm_sq(const Field& f) {
  const double sum = f.values().abs2().sum();
  return f.is_spectral() ? sum : sum * f.grid().cell_volume();
}

double relative_l2_error(const Field& a, const Field& b) {
  require_same_grid(a.grid(), b.grid(), "relative_l2_error");
  const Field pa = to_physical(a);
  const Field pb = to_physical(b);
  const double diff = (pa.values() - pb.values()).abs2().sum();
  const double ref = pb.values().abs2().sum();
  return ref > 0.0 ? std::sqrt(diff / ref) : std::sqrt(diff * a.grid().cell_volume());
}

}  // namespace gnls
