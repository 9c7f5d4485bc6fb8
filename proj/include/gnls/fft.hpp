#pragma once

// Thin wrapper over FFTW for unnormalized multi-dimensional complex DFTs.
// Plans are cached per (shape, direction) and shared across threads;
// execution on distinct buffers is thread-safe.

#include <complex>
#include <span>
#include <vector>

namespace gnls::fft {

enum class Direction { forward, backward };

// In-place-free transform: out = DFT(in) over a row-major array of the given
// shape (last axis fastest). Forward uses e^{-i...}, backward e^{+i...}; no
// scaling is applied in either direction.
void transform(std::span<const std::complex<double>> in,
               std::span<std::complex<double>> out,
               const std::vector<int>& shape, Direction dir);

}  // namespace gnls::fft
