#include "gnls/initial_data.hpp"

#include "gnls/errors.hpp"

#include <fmt/format.h>
#include <fmt/ranges.h>

#include <cmath>
#include <numbers>

namespace gnls {

DataKind parse_data_kind(const std::string& name) {
  if (name == "gaussian") return DataKind::gaussian;
  if (name == "periodized_sech") return DataKind::periodized_sech;
  if (name == "plane_wave") return DataKind::plane_wave;
  if (name == "random_bandlimited") return DataKind::random_bandlimited;
  throw ValidationError(fmt::format(
      "data.kind: unknown data kind '{}' (expected gaussian, periodized_sech, plane_wave or "
      "random_bandlimited)",
      name));
}

std::string to_string(DataKind kind) {
  switch (kind) {
    case DataKind::gaussian: return "gaussian";
    case DataKind::periodized_sech: return "periodized_sech";
    case DataKind::plane_wave: return "plane_wave";
    case DataKind::random_bandlimited: return "random_bandlimited";
  }
  return "unknown";
}

std::string DataDescriptor::describe() const {
  switch (kind) {
    case DataKind::gaussian: return fmt::format("gaussian(A={}, w={})", amplitude, width);
    case DataKind::periodized_sech: return fmt::format("periodized_sech(A={}, a={})", amplitude, width);
    case DataKind::plane_wave: return fmt::format("plane_wave(A={}, k={})", amplitude, fmt::join(wavevector, ","));
    case DataKind::random_bandlimited:
      return fmt::format("random_bandlimited(A={}, band={}, decay={}, seed={})", amplitude, band, decay, seed);
  }
  return "unknown";
}

Field random_bandlimited(const FourierGrid& grid, int band, double decay, double amplitude,
                         std::mt19937_64& rng) {
  if (band < 0 || band >= grid.points() / 2)
    throw ValidationError(fmt::format("data.band: must be in [0, N/2) (got {})", band));
  std::normal_distribution<double> normal(0.0, std::numbers::sqrt2 / 2.0);
  ComplexArray c = ComplexArray::Zero(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const auto pos = grid.unflatten(i);
    bool inside = true;
    for (int a = 0; a < grid.dim(); ++a) inside = inside && std::abs(grid.mode_of(pos[a])) <= band;
    if (!inside) continue;
    const double re = normal(rng);
    const double im = normal(rng);
    c[i] = amplitude * Complex(re, im) * std::exp(-decay * grid.abs_wavenumber()[i]);
  }
  return Field::spectral(grid, std::move(c));
}

namespace {

double periodized_sech_1d(double x, double a, double L) {
  // Terms beyond |j| > J are below 1e-18 relative.
  const int J = static_cast<int>(std::ceil(0.5 + 45.0 * a / L)) + 1;
  double sum = 0.0;
  for (int j = -J; j <= J; ++j) sum += 1.0 / std::cosh((x - j * L) / a);
  return sum;
}

}  // namespace

Field make_initial_data(const FourierGrid& grid, const DataDescriptor& data) {
  if (!std::isfinite(data.amplitude)) throw ValidationError("data.amplitude: must be finite");
  const int d = grid.dim();
  const int n = grid.points();
  const double L = grid.period();

  if (data.kind == DataKind::random_bandlimited) {
    std::mt19937_64 rng(data.seed);
    return inverse_transform(random_bandlimited(grid, data.band, data.decay, data.amplitude, rng));
  }

  if ((data.kind == DataKind::gaussian || data.kind == DataKind::periodized_sech) && !(data.width > 0.0))
    throw ValidationError(fmt::format("data.width: must be > 0 (got {})", data.width));

  std::vector<double> k(d, 0.0);
  if (data.kind == DataKind::plane_wave) {
    if (data.wavevector.empty() || static_cast<int>(data.wavevector.size()) > d)
      throw ValidationError(fmt::format("data.k: expected 1..{} components", d));
    for (std::size_t a = 0; a < data.wavevector.size(); ++a) {
      const double m = data.wavevector[a] / grid.fundamental();
      if (std::abs(m - std::round(m)) > 1e-9 || std::abs(std::round(m)) >= n / 2)
        throw ValidationError(fmt::format(
            "data.k: component {} = {} is not an interior lattice wavenumber (multiple of 2pi/L = {})",
            a, data.wavevector[a], grid.fundamental()));
      k[a] = data.wavevector[a];
    }
  }

  // Tabulate 1d sech sums once per axis coordinate.
  std::vector<double> sech_axis;
  if (data.kind == DataKind::periodized_sech) {
    sech_axis.resize(n);
    for (int j = 0; j < n; ++j) sech_axis[j] = periodized_sech_1d(grid.coordinate(j), data.width, L);
  }

  ComplexArray v(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const auto pos = grid.unflatten(i);
    switch (data.kind) {
      case DataKind::gaussian: {
        double r2 = 0.0;
        for (int a = 0; a < d; ++a) r2 += grid.coordinate(pos[a]) * grid.coordinate(pos[a]);
        v[i] = data.amplitude * std::exp(-r2 / (data.width * data.width));
        break;
      }
      case DataKind::periodized_sech: {
        double prod = 1.0;
        for (int a = 0; a < d; ++a) prod *= sech_axis[pos[a]];
        v[i] = data.amplitude * prod;
        break;
      }
      case DataKind::plane_wave: {
        double phase = 0.0;
        for (int a = 0; a < d; ++a) phase += k[a] * grid.coordinate(pos[a]);
        v[i] = data.amplitude * std::polar(1.0, phase);
        break;
      }
      case DataKind::random_bandlimited: break;
    }
  }
  return Field::physical(grid, std::move(v));
}

}  // namespace gnls
