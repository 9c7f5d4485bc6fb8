#pragma once

// GNLS binary snapshot format (all little-endian):
//   "GNLS" | u16 version | u8 d | u32 N | f64 L | f64 t | N^d x (f64 re, f64 im)
// Samples are physical-space values, row-major with the last axis fastest.

#include "gnls/spectral.hpp"

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>

namespace gnls {

inline constexpr std::uint16_t kSnapshotVersion = 1;

struct Snapshot {
  double t = 0.0;
  Field field;
};

void write_snapshot(std::ostream& out, const Field& u, double t);
void write_snapshot(const std::filesystem::path& path, const Field& u, double t);

// Throws ValidationError on bad magic, unsupported version, truncated data or
// invalid grid parameters.
Snapshot read_snapshot(std::istream& in);
Snapshot read_snapshot(const std::filesystem::path& path);

// Run-metadata sidecar: one "key = value" per line, keys sorted.
void write_sidecar(const std::filesystem::path& path, const std::map<std::string, std::string>& kv);
std::map<std::string, std::string> read_sidecar(const std::filesystem::path& path);

}  // namespace gnls
