#include "gnls/snapshot_io.hpp"

#include "gnls/errors.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace gnls {
namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

template <typename T>
void put(std::ostream& out, T value) {
  std::array<char, sizeof(T)> bytes;
  std::memcpy(bytes.data(), &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  out.write(bytes.data(), bytes.size());
}

template <typename T>
T get(std::istream& in, const char* what) {
  std::array<char, sizeof(T)> bytes;
  if (!in.read(bytes.data(), bytes.size()))
    throw ValidationError(fmt::format("snapshot: truncated while reading {}", what));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
  T value;
  std::memcpy(&value, bytes.data(), sizeof(T));
  return value;
}

constexpr std::array<char, 4> kMagic{'G', 'N', 'L', 'S'};

}  // namespace

void write_snapshot(std::ostream& out, const Field& u, double t) {
  const Field phys = to_physical(u);
  require_finite(phys, "write_snapshot");
  const auto& g = phys.grid();
  out.write(kMagic.data(), kMagic.size());
  put<std::uint16_t>(out, kSnapshotVersion);
  put<std::uint8_t>(out, static_cast<std::uint8_t>(g.dim()));
  put<std::uint32_t>(out, static_cast<std::uint32_t>(g.points()));
  put<double>(out, g.period());
  put<double>(out, t);
  for (const auto& z : phys.values()) {
    put<double>(out, z.real());
    put<double>(out, z.imag());
  }
  if (!out) throw std::runtime_error("snapshot: write failed");
}

void write_snapshot(const std::filesystem::path& path, const Field& u, double t) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error(fmt::format("snapshot: cannot open {}", path.string()));
  write_snapshot(out, u, t);
}

Snapshot read_snapshot(std::istream& in) {
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic)
    throw ValidationError("snapshot: bad magic (expected \"GNLS\")");
  const auto version = get<std::uint16_t>(in, "version");
  if (version != kSnapshotVersion)
    throw ValidationError(fmt::format("snapshot: unsupported format version {}", version));
  const int d = get<std::uint8_t>(in, "d");
  const auto n = get<std::uint32_t>(in, "N");
  const double L = get<double>(in, "L");
  const double t = get<double>(in, "t");
  FourierGrid grid(d, static_cast<int>(n), L);
  ComplexArray values(grid.size());
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const double re = get<double>(in, "samples");
    const double im = get<double>(in, "samples");
    values[i] = {re, im};
  }
  return {t, Field::physical(std::move(grid), std::move(values))};
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(fmt::format("snapshot: cannot open {}", path.string()));
  return read_snapshot(in);
}

void write_sidecar(const std::filesystem::path& path,
                   const std::map<std::string, std::string>& kv) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(fmt::format("sidecar: cannot open {}", path.string()));
  for (const auto& [k, v] : kv) out << k << " = " << v << '\n';
}

std::map<std::string, std::string> read_sidecar(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(fmt::format("sidecar: cannot open {}", path.string()));
  std::map<std::string, std::string> kv;
  std::string line;
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

}  // namespace gnls
