#include "gnls/bourgain.hpp"
#include "gnls/errors.hpp"
#include "gnls/gevrey.hpp"
#include "gnls/initial_data.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

using namespace gnls;

namespace {

constexpr double kPi = std::numbers::pi;

double bracket(double x) { return std::sqrt(1.0 + x * x); }

SpaceTimeSpectrum single_mode(const FourierGrid& g, int M, double T, int m0, int k0, Complex c) {
  auto w = SpaceTimeSpectrum::zeros(g, M, T);
  w.coefficients()[w.time_position_of(m0) * g.size() + g.position_of(k0)] = c;
  return w;
}

Field plane(const FourierGrid& g, double A, double k) {
  ComplexArray v(g.size());
  for (int j = 0; j < g.points(); ++j) v[j] = A * std::polar(1.0, k * g.coordinate(j));
  return Field::physical(g, v);
}

}  // namespace

TEST_CASE("space-time spectrum normalization") {
  const FourierGrid g(1, 16, 3.0);
  const int M = 8;
  const double T = 2.5;
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n;
  ComplexArray s(M * g.size());
  for (auto& z : s) z = {n(rng), n(rng)};
  const auto w = SpaceTimeSpectrum::from_samples(g, M, T, s);
  const double quad = s.abs2().sum() * (T / M) * g.cell_volume();
  CHECK(w.coefficients().abs2().sum() == doctest::Approx(quad).epsilon(1e-13));
  CHECK((w.samples() - s).abs().maxCoeff() < 1e-13);
  CHECK(w.tau(1) == doctest::Approx(2 * kPi / T));
  CHECK(w.tau(M - 1) == doctest::Approx(-2 * kPi / T));
  CHECK_THROWS_AS(SpaceTimeSpectrum(g, 7, T, ComplexArray::Zero(7 * 16)), ValidationError);
  CHECK_THROWS_AS(SpaceTimeSpectrum(g, 8, 0.0, ComplexArray::Zero(8 * 16)), ValidationError);
}

TEST_CASE("X^{sigma,s,b} norm of a single mode") {
  const FourierGrid g(1, 32, 2 * kPi);
  const auto w = single_mode(g, 16, 2 * kPi, 3, -2, {0.6, -0.8});
  const double xi = -2.0, tau = 3.0;
  CHECK(xsb_norm(w, {0.0, 0.0, 0.0}) == doctest::Approx(1.0));
  CHECK(xsb_norm(w, {0.2, 1.5, 0.55}) ==
        doctest::Approx(std::exp(0.4) * std::pow(bracket(xi), 1.5) * std::pow(bracket(tau + xi * xi), 0.55)));
}

TEST_CASE("padding keeps coefficients and the norm") {
  const FourierGrid g(1, 16, 2 * kPi);
  const auto w = single_mode(g, 8, 1.0, -2, 5, {1.0, 2.0});
  const auto p = w.padded(2);
  CHECK(p.time_modes() == 16);
  CHECK(p.grid().points() == 32);
  CHECK(xsb_norm(p, {0.1, 1.0, 0.5}) == doctest::Approx(xsb_norm(w, {0.1, 1.0, 0.5})).epsilon(1e-15));
  CHECK(p.coefficients()[p.time_position_of(-2) * 32 + p.grid().position_of(5)] == Complex(1.0, 2.0));
}

TEST_CASE("alias-unsafe fraction") {
  const FourierGrid g(1, 64, 2 * kPi);
  CHECK(alias_unsafe_fraction(single_mode(g, 64, 2 * kPi, 21, -21, 1.0)) == 0.0);
  CHECK(alias_unsafe_fraction(single_mode(g, 64, 2 * kPi, 22, 0, 1.0)) == 1.0);
  CHECK(alias_unsafe_fraction(single_mode(g, 64, 2 * kPi, 0, 22, 1.0)) == 1.0);
}

TEST_CASE("trilinear single-mode members match closed forms") {
  const FourierGrid g(1, 64, 2 * kPi);
  const int M = 64;
  const double T = 2 * kPi, L = 2 * kPi, b = 0.55, sigma = 0.1;
  const ConjugationPattern pat{{false, true, true}};
  for (auto [m0, k0] : {std::pair{0, 0}, std::pair{3, -2}, std::pair{-7, 5}, std::pair{15, 20}}) {
    const Complex c(0.3, -1.1);
    const auto u = single_mode(g, M, T, m0, k0, c);
    const double xi = k0, tau = m0, a = std::abs(c);
    const double prod = a * a * a / (T * L);
    const double out_bracket = bracket(-tau + xi * xi);  // output sits at (-tau, -xi)
    const double in_bracket = bracket(tau + xi * xi);
    CAPTURE(m0);
    CAPTURE(k0);

    const auto v1 = evaluate_trilinear(TrilinearKind::x0_minus_b, u, u, u, b, sigma, pat);
    CHECK(v1.lhs == doctest::Approx(prod * std::pow(out_bracket, -b)).epsilon(1e-10));
    CHECK(v1.rhs == doctest::Approx(a * a * a * bracket(xi) * std::pow(in_bracket, 3 * b)).epsilon(1e-10));

    const auto v2 = evaluate_trilinear(TrilinearKind::l2, u, u, u, b, sigma, pat);
    CHECK(v2.lhs == doctest::Approx(prod).epsilon(1e-10));
    CHECK(v2.rhs == doctest::Approx(a * a * a * std::pow(bracket(xi), 2) * std::pow(in_bracket, 3 * b)).epsilon(1e-10));

    const auto v3 = evaluate_trilinear(TrilinearKind::gevrey_x10, u, u, u, b, sigma, pat);
    const double lift = std::exp(sigma * std::abs(xi)) * bracket(xi);
    CHECK(v3.lhs == doctest::Approx(lift * prod).epsilon(1e-10));
    CHECK(v3.rhs == doctest::Approx(std::pow(lift * std::pow(in_bracket, b) * a, 3)).epsilon(1e-10));
  }
}

TEST_CASE("under-resolved trilinear members are rejected") {
  const FourierGrid g(1, 64, 2 * kPi);
  const auto good = single_mode(g, 64, 2 * kPi, 1, 1, 1.0);
  const auto bad = single_mode(g, 64, 2 * kPi, 1, 30, 1.0);
  CHECK(evaluate_trilinear(TrilinearKind::l2, good, bad, good, 0.55, 0.1, {}).rejected);
  CHECK_FALSE(evaluate_trilinear(TrilinearKind::l2, good, good, good, 0.55, 0.1, {}).rejected);
}

TEST_CASE("trilinear ensemble is stable and deterministic") {
  TrilinearSpec spec;
  spec.members = 12;
  spec.seed = 4;
  for (auto kind : {TrilinearKind::x0_minus_b, TrilinearKind::l2, TrilinearKind::gevrey_x10}) {
    spec.kind = kind;
    const auto r = audit_trilinear(spec);
    CHECK(r.rows.size() == 12);
    CHECK(r.rejected == 0);
    CHECK(std::isfinite(r.ensemble.max_ratio));
    CHECK(r.ensemble.max_ratio < 10 * r.ensemble.median_ratio);
    const auto again = audit_trilinear(spec, 2);
    for (std::size_t i = 0; i < r.rows.size(); ++i) CHECK(r.rows[i].ratio == again.rows[i].ratio);
  }
}

TEST_CASE("remainder f(v)") {
  const FourierGrid g(1, 64, 2 * kPi);
  SUBCASE("vanishes at sigma = 0") {
    std::mt19937_64 rng(2);
    const Field v = inverse_transform(random_bandlimited(g, 10, 0.3, 1.0, rng));
    CHECK(f_of_v(v, 0.0).values().abs().maxCoeff() == 0.0);
  }
  SUBCASE("constant function") {
    CHECK(f_of_v(plane(g, 0.8, 0.0), 0.05).values().abs().maxCoeff() < 1e-13);
  }
  SUBCASE("plane wave closed form") {
    // f(A e^{ikx}) = -(1 - e^{-2 sigma |k|}) |A|^2 A e^{ikx}
    const double A = 0.8, k = 3.0, sigma = 0.05;
    const Field f = f_of_v(plane(g, A, k), sigma);
    const Field ref = plane(g, -(1 - std::exp(-2 * sigma * k)) * A * A * A, k);
    CHECK((f.values() - ref.values()).abs().maxCoeff() < 1e-13);
  }
  SUBCASE("linear in sigma") {
    std::mt19937_64 rng(8);
    const Field v = inverse_transform(random_bandlimited(g, 10, 0.3, 1.0, rng));
    for (double sigma : {1e-2, 5e-3}) {
      const auto r = audit_f_estimate(v, sigma);
      CHECK(r.halving_ratio == doctest::Approx(2.0).epsilon(0.05));
      CHECK(r.audit.ratio > 0.0);
      CHECK(r.audit.lhs == doctest::Approx(std::sqrt(l2_norm_sq(f_of_v(v, sigma)))));
      CHECK(r.audit.rhs == doctest::Approx(sigma * std::pow(gevrey_norm(v, {0.0, 1.0}), 3)));
    }
  }
  SUBCASE("overflow") {
    CHECK_THROWS_AS(f_of_v(plane(g, 1.0, 1.0), 10.0), MultiplierOverflow);
  }
}

TEST_CASE("remainder ensemble") {
  FEnsembleSpec spec;
  spec.members = 10;
  spec.seed = 3;
  const auto r = audit_f_ensemble(spec);
  CHECK(r.audit.rows.size() == 10);
  CHECK(r.halving_ratios.size() == 10);
  for (double h : r.halving_ratios) CHECK(h == doctest::Approx(2.0).epsilon(0.05));
  CHECK(r.audit.ensemble.median_ratio > 0.0);
}

TEST_CASE("window taper and extension") {
  const double d = 0.2;
  CHECK(window_taper(-1.5 * d, d) == 0.0);
  CHECK(window_taper(2.5 * d, d) == 0.0);
  CHECK(window_taper(0.0, d) == 1.0);
  CHECK(window_taper(1.5 * d, d) == 1.0);
  CHECK(window_taper(-d, d) == doctest::Approx(0.5));
  CHECK(window_taper(-0.5 * d - 1e-9, d) == doctest::Approx(1.0));

  const FourierGrid g(1, 32, 2 * kPi);
  const Field u0 = make_initial_data(g, {DataKind::gaussian, 1.0, 1.0});
  WindowSpec w;
  w.delta = d;
  const auto ext = windowed_extension(u0, w);
  const ComplexArray s = ext.samples();
  const int origin = 3 * w.time_modes / 8;
  CHECK((s.segment(origin * g.size(), g.size()) - u0.values()).abs().maxCoeff() < 1e-12);
  CHECK(s.segment(0, g.size()).abs().maxCoeff() < 1e-15);  // taper vanishes at the window edge
  w.time_modes = 12;
  CHECK_THROWS_AS(windowed_extension(u0, w), ValidationError);

  w.time_modes = 32;
  const auto r = audit_f_spacetime(u0, 0.01, w);
  CHECK(std::isfinite(r.ratio));
  CHECK(r.ratio > 0.0);
}

TEST_CASE("multiplier bound") {
  WavenumberTriple t;
  t.xi1 = {1, 0, 0};
  t.xi2 = {-1, 0, 0};
  const auto c0 = check_multiplier_bound(0.5, t);
  CHECK(c0.lhs == doctest::Approx(0.0));

  t.xi1 = {3, 0, 0};
  t.xi2 = {3, 0, 0};
  t.xi3 = {0, 0, 0};
  const auto c1 = check_multiplier_bound(0.1, t);
  CHECK(c1.lhs == doctest::Approx(1 - std::exp(-0.6)));
  CHECK(c1.rhs == doctest::Approx(12 * 0.1 * 3));
  CHECK_FALSE(c1.violated());

  for (int d : {1, 2, 3}) {
    const auto triples = random_triples(d, 20000, 50.0, 17);
    for (std::size_t i = 0; i < triples.size(); ++i) {
      CHECK(triples[i].xi1.norm() <= 50.0 + 1e-12);
      if (d < 3) CHECK(triples[i].xi1[2] == 0.0);
      if (i % 4 == 3) CHECK(triples[i].xi2[0] == std::trunc(triples[i].xi2[0]));
    }
    for (double s : {1e-3, 1e-1, 1.0}) {
      const auto r = audit_multiplier_inequality(s, triples);
      CHECK(r.violations == 0);
      CHECK(r.ensemble.count == triples.size());
      CHECK(r.ensemble.max_ratio <= 1.0);
    }
  }
  CHECK_THROWS_AS(random_triples(4, 1, 1.0, 0), ValidationError);
}

TEST_CASE("Gagliardo-Nirenberg ratio") {
  // plane wave in d = 1: ||u||_4^4 / (||u_x|| ||u||^3) = 1 / (|k| L)
  const FourierGrid g(1, 64, 2 * kPi);
  const auto r = audit_gagliardo_nirenberg(plane(g, 0.7, 3.0));
  CHECK(r.ratio == doctest::Approx(1.0 / (3.0 * 2 * kPi)).epsilon(1e-13));
  CHECK_THROWS_AS(audit_gagliardo_nirenberg(Field::zeros(g)), ValidationError);
  CHECK_THROWS_AS(audit_gagliardo_nirenberg(plane(g, 1.0, 0.0)), ValidationError);
}

TEST_CASE("median") {
  CHECK(median({}) == 0.0);
  CHECK(median({3.0, 1.0, 2.0}) == 2.0);
  CHECK(median({4.0, 1.0, 3.0, 2.0}) == 2.5);
}
