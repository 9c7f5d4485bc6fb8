#pragma once

#include "gnls/spectral.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace gnls {

enum class DataKind { gaussian, periodized_sech, plane_wave, random_bandlimited };

// gaussian:            A exp(-|x|^2 / w^2)
// periodized_sech:     A prod_axes sum_j sech((x_a - jL)/a)    (width = a)
// plane_wave:          A exp(i k.x), k on the lattice
// random_bandlimited:  A sum_{|m_a| <= band} g_m e^{-decay|xi_m|} e^{i xi_m.x},
//                      g_m standard complex normal drawn from seed
struct DataDescriptor {
  DataKind kind = DataKind::gaussian;
  double amplitude = 1.0;
  double width = 1.0;
  std::vector<double> wavevector{1.0};
  int band = 8;
  double decay = 0.5;
  std::uint64_t seed = 0;

  std::string describe() const;
};

DataKind parse_data_kind(const std::string& name);
std::string to_string(DataKind kind);

Field make_initial_data(const FourierGrid& grid, const DataDescriptor& data);

// Spectral field with i.i.d. complex normal coefficients times e^{-decay|xi|}
// on |m_a| <= band, zero elsewhere.
Field random_bandlimited(const FourierGrid& grid, int band, double decay, double amplitude,
                         std::mt19937_64& rng);

}  // namespace gnls
