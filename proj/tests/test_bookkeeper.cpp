#include "gnls/bookkeeper.hpp"
#include "gnls/errors.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace gnls;

namespace {

BookkeeperParams unit_params() {
  BookkeeperParams p;
  p.sigma0 = 1.0;
  p.A0 = 1.0;
  p.c0 = 1.0;
  p.C = 1.0;
  p.eps = 0.0;
  p.T = 1.0;
  return p;
}

}  // namespace

TEST_CASE("local step") {
  CHECK(local_delta(1.0, 1.0, 0.0) == 0.0625);
  CHECK(local_delta(2.5, 0.0, 0.05) == 2.5);
  CHECK(local_delta(1.0, 2.0, 0.05) < local_delta(1.0, 1.0, 0.05));
  CHECK_THROWS_AS(local_delta(0.0, 1.0, 0.0), ValidationError);
  CHECK_THROWS_AS(local_delta(1.0, -1.0, 0.0), ValidationError);
  CHECK(BookkeeperParams{}.eps == 0.05);
}

TEST_CASE("sigma for T at the reference point") {
  auto p = unit_params();
  const auto s = sigma_for_T(p);
  CHECK(s.c1 == 1.0 / 512);
  CHECK(s.sigma == 1.0 / 512);
  CHECK(sigma_condition_lhs(p, s.sigma) == doctest::Approx(0.5));
  p.T = 2.0;
  CHECK(sigma_for_T(p).sigma == s.sigma / 2);
  p.T = 0.0;
  CHECK_THROWS_AS(sigma_for_T(p), ValidationError);
  p = unit_params();
  p.A0 = 0.0;
  CHECK_THROWS_AS(sigma_for_T(p), ValidationError);
}

TEST_CASE("sigma branches agree and the induction closes") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 10000; ++i) {
    BookkeeperParams p;
    p.sigma0 = 0.1 + u(rng);
    p.A0 = std::pow(10.0, -2 + 4 * u(rng));
    p.c0 = 0.1 + u(rng);
    p.C = std::pow(10.0, -3 + 4 * u(rng));
    p.eps = 0.1 * u(rng);
    p.T = std::pow(10.0, -1 + 3 * u(rng));
    const auto s = sigma_for_T(p);
    CHECK(std::abs(s.sigma - s.c1 / p.T) <= 1e-15 * s.sigma);
    if (i % 50 == 0 && p.T / local_delta(p) < 1e5) {
      const auto tr = run_induction(p);
      CHECK(tr.all_ok);
      CHECK(tr.steps.size() == static_cast<std::size_t>(tr.n + 1));
    }
  }
}

TEST_CASE("step count limit") {
  BookkeeperParams p;
  p.A0 = 1e4;
  p.T = 1e3;
  CHECK_THROWS_WITH_AS(run_induction(p), doctest::Contains("bookkeeper.T"), ValidationError);
}

TEST_CASE("induction trace") {
  auto p = unit_params();
  const auto tr = run_induction(p);
  CHECK(tr.delta == 0.0625);
  CHECK(tr.n == 16);
  REQUIRE(tr.steps.size() == 17);
  for (std::size_t i = 1; i < tr.steps.size(); ++i) CHECK(tr.steps[i].bound > tr.steps[i - 1].bound);
  // closed form for the last step
  const double direct = p.A0 + 8 * p.C * tr.sigma * 17 * p.A0 * p.A0 * (1 + p.A0);
  CHECK(tr.steps.back().bound == direct);
  CHECK(tr.all_ok);
  CHECK_FALSE(tr.first_failure);
}

TEST_CASE("doubled sigma fails where the closed form says") {
  auto p = unit_params();
  p.T = 1.03;  // T / delta not an integer
  const auto base = sigma_for_T(p);
  const auto tr = run_induction(p, 2 * base.sigma);
  REQUIRE(tr.first_failure);
  // bound_k > 2 A0  <=>  k > A0 / (8 C sigma A0^2 (1+A0))
  const double k_star = p.A0 / (8 * p.C * 2 * base.sigma * p.A0 * p.A0 * (1 + p.A0));
  CHECK(*tr.first_failure == static_cast<long long>(std::floor(k_star)) + 1);
  CHECK(*tr.first_failure > tr.n / 2);
  CHECK_FALSE(tr.all_ok);
}

TEST_CASE("short horizon") {
  auto p = unit_params();
  p.T = 0.01;
  const auto tr = run_induction(p);
  CHECK(tr.n == 0);
  REQUIRE(tr.steps.size() == 1);
  CHECK(tr.steps[0].bound == p.A0);
  CHECK(tr.all_ok);
}

TEST_CASE("recomputed initial value") {
  auto p = unit_params();
  const auto tr = run_induction(p, std::nullopt, 0.5);
  CHECK(tr.steps[0].bound == doctest::Approx(0.5 + 8 * tr.sigma * 2));
  CHECK(tr.all_ok);
}

TEST_CASE("norm-based local step") {
  auto p = unit_params();
  p.delta_from_norm = true;
  CHECK_THROWS_AS(p.validate(), ValidationError);
  p.data_norm = 3.0;
  CHECK(local_delta(p) == doctest::Approx(std::pow(4.0, -4)));
  const auto s = sigma_for_T(p);
  CHECK(s.sigma == doctest::Approx(s.c1 / p.T).epsilon(1e-15));
  CHECK(run_induction(p).all_ok);
}

TEST_CASE("monotonicities") {
  auto p = unit_params();
  const double base = sigma_for_T(p).sigma;
  for (auto field : {&BookkeeperParams::T, &BookkeeperParams::C, &BookkeeperParams::A0}) {
    auto q = p;
    q.*field *= 1.5;
    CHECK(sigma_for_T(q).sigma < base);
  }
}

TEST_CASE("radius floor") {
  auto p = unit_params();
  p.sigma0 = 0.001;
  const auto s = sigma_for_T(p);
  const double delta = local_delta(p);
  CHECK(radius_floor(p, 0.0) == p.sigma0);
  CHECK(radius_floor(p, delta / 2) == p.sigma0);
  CHECK(radius_floor(p, 1000.0) == doctest::Approx(s.c1 / 1000.0));
  const double t_star = s.c1 / p.sigma0;
  REQUIRE(t_star > delta);
  CHECK(radius_floor(p, t_star) == doctest::Approx(p.sigma0));
  double prev = radius_floor(p, 0.0);
  for (double t = 0.0; t < 10.0; t += 0.01) {
    const double f = radius_floor(p, t);
    CHECK(f <= prev);
    prev = f;
  }
  CHECK_THROWS_AS(radius_floor(p, -1.0), ValidationError);
}
