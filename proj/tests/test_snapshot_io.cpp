#include "gnls/errors.hpp"
#include "gnls/snapshot_io.hpp"

#include <doctest.h>

#include <cstring>
#include <filesystem>
#include <random>
#include <sstream>

using namespace gnls;

namespace {

Field sample_field(int d, int n) {
  const FourierGrid g(d, n, 2.5);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1, 1);
  ComplexArray v(g.size());
  for (auto& z : v) z = {u(rng), u(rng)};
  return Field::physical(g, v);
}

}  // namespace

TEST_CASE("snapshot round trip is bit exact") {
  for (int d : {1, 2, 3}) {
    const Field f = sample_field(d, 8);
    std::stringstream ss;
    write_snapshot(ss, f, 0.125);
    const std::string bytes = ss.str();
    CHECK(bytes.size() == 27 + 16 * static_cast<std::size_t>(f.grid().size()));
    CHECK(bytes.substr(0, 4) == "GNLS");
    CHECK(static_cast<unsigned char>(bytes[4]) == 1);  // version, little-endian
    CHECK(static_cast<unsigned char>(bytes[6]) == d);

    const Snapshot s = read_snapshot(ss);
    CHECK(s.t == 0.125);
    CHECK(s.field.grid() == f.grid());
    CHECK((s.field.values() == f.values()).all());
  }
}

TEST_CASE("spectral fields are stored as physical samples") {
  const Field f = sample_field(1, 16);
  std::stringstream ss;
  write_snapshot(ss, forward_transform(f), 0.0);
  const Snapshot s = read_snapshot(ss);
  CHECK_FALSE(s.field.is_spectral());
  CHECK((s.field.values() - f.values()).abs().maxCoeff() < 1e-14);
}

TEST_CASE("malformed snapshots are rejected") {
  const Field f = sample_field(1, 8);
  std::stringstream ss;
  write_snapshot(ss, f, 1.0);
  std::string bytes = ss.str();

  std::string bad_magic = bytes;
  bad_magic[0] = 'X';
  std::stringstream a(bad_magic);
  CHECK_THROWS_AS(read_snapshot(a), ValidationError);

  std::string bad_version = bytes;
  bad_version[4] = 9;
  std::stringstream b(bad_version);
  CHECK_THROWS_AS(read_snapshot(b), ValidationError);

  std::stringstream c(bytes.substr(0, bytes.size() - 3));
  CHECK_THROWS_AS(read_snapshot(c), ValidationError);
}

TEST_CASE("files and sidecars") {
  const auto dir = std::filesystem::temp_directory_path() / "gnls_test_snapshot_io";
  std::filesystem::create_directories(dir);
  const Field f = sample_field(2, 8);
  write_snapshot(dir / "a.gnls", f, 2.0);
  const Snapshot s = read_snapshot(dir / "a.gnls");
  CHECK((s.field.values() == f.values()).all());
  CHECK_THROWS_AS(read_snapshot(dir / "missing.gnls"), ValidationError);

  const std::map<std::string, std::string> kv{{"d", "2"}, {"N", "8"}, {"data_params", "gaussian(A=1, w=1)"}};
  write_sidecar(dir / "run.meta", kv);
  CHECK(read_sidecar(dir / "run.meta") == kv);
  std::filesystem::remove_all(dir);
}
