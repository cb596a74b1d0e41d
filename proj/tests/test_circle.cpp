#include <doctest.h>

#include <cmath>
#include <random>

#include "sadj/circle.hpp"
#include "sadj/errors.hpp"

using namespace sadj;
using namespace sadj::circle;

namespace {
CircleParams flux(double theta) {
  CircleParams c;
  c.theta = theta;
  return c;
}

IntervalParams box(double L, double b0, double bL) {
  IntervalParams p;
  p.length = L;
  p.lambda0 = ExtensionLambda(b0);
  p.lambdaL = ExtensionLambda(bL);
  return p;
}
}  // namespace

TEST_CASE("angular momentum ladder") {
  CHECK(angular_eigenvalue(flux(0.0), 3) == 3.0);
  CHECK(angular_eigenvalue(flux(kPi), 0) == doctest::Approx(0.5).epsilon(1e-15));
  for (int n = -4; n < 4; ++n) CHECK(angular_eigenvalue(flux(1.1), n + 1) - angular_eigenvalue(flux(1.1), n) == doctest::Approx(1.0).epsilon(1e-14));

  CircleParams c = flux(1.0);
  c.charge_flux = 1.0 + 4.0 * kPi;
  CHECK_NOTHROW(c.validate());
  c.charge_flux = 1.5;
  CHECK_THROWS_AS(c.validate(), InputError);
  CHECK_THROWS_AS(flux(-0.1).validate(), InputError);
}

TEST_CASE("angular eigenfunctions") {
  for (int n : {-2, 0, 5}) CHECK(std::abs(angular_eigenfunction(flux(0.0), n, kPi) - angular_eigenfunction(flux(0.0), n, -kPi)) < 1e-14);
  const cplx ratio = angular_eigenfunction(flux(kPi / 2), 0, kPi) / angular_eigenfunction(flux(kPi / 2), 0, -kPi);
  CHECK(std::abs(ratio - cplx(0.0, 1.0)) < 1e-12);
  for (double th : {0.3, 4.0})
    for (int n : {-1, 2}) {
      const auto c = flux(th);
      CHECK(std::abs(angular_eigenfunction(c, n, kPi) - std::polar(1.0, th) * angular_eigenfunction(c, n, -kPi)) < 1e-12);
    }
  const Grid g = Grid::span(-kPi, kPi, 4001);
  const auto c = flux(2.2);
  for (int n : {-2, 0, 3})
    for (int m : {-2, 0, 1, 3}) {
      std::vector<cplx> v(g.count());
      for (std::size_t j = 0; j < v.size(); ++j) v[j] = std::conj(angular_eigenfunction(c, m, g[j])) * angular_eigenfunction(c, n, g[j]);
      CHECK(std::abs(integrate(v, g) - (m == n ? 1.0 : 0.0)) < 1e-10);
    }
  CHECK_THROWS_AS(angular_eigenfunction(c, 0, 3.2), DomainError);
}

TEST_CASE("rotations with a twisted wraparound") {
  const auto c = flux(0.9);
  auto r = u_alpha_action(c, 0.2, 0.5);
  CHECK(r.phi == doctest::Approx(0.3).epsilon(1e-15));
  CHECK(r.phase == cplx(1.0));
  r = u_alpha_action(c, 0.5, -3.0);
  CHECK(r.phi == doctest::Approx(-3.5 + 2 * kPi).epsilon(1e-15));
  CHECK(std::abs(r.phase - std::polar(1.0, 0.9)) < 1e-15);
  r = u_alpha_action(c, -0.5, 3.0);
  CHECK(std::abs(r.phase - std::polar(1.0, -0.9)) < 1e-15);
  CHECK(normalize_angle(kPi) == doctest::Approx(-kPi).epsilon(1e-15));
  CHECK_THROWS_AS(u_alpha_action(c, kPi, 0.0), InputError);

  std::mt19937_64 gen(21);
  std::uniform_real_distribution<double> u(-kPi, kPi);
  for (int i = 0; i < 1000; ++i) {
    const double a = u(gen), b = u(gen), phi = u(gen);
    if (!(a + b >= -kPi && a + b < kPi)) continue;
    const auto first = u_alpha_action(c, b, phi);
    const auto second = u_alpha_action(c, a, first.phi);
    const auto direct = u_alpha_action(c, a + b, phi);
    CHECK(std::abs(second.phi - direct.phi) < 1e-12);
    CHECK(std::abs(first.phase * second.phase - direct.phase) < 1e-12);
  }
}

TEST_CASE("interval to circle map") {
  const auto p = box(2.0, 0.6, -1.4);
  const cplx s = p.lambda0.sigma(), sL = p.lambdaL.sigma();
  auto m = map_interval_to_circle(p, {1.0, Sector::Plus, 1.0});
  CHECK(m.phi == doctest::Approx(kPi / 2).epsilon(1e-15));
  CHECK(m.phase == cplx(1.0));
  m = map_interval_to_circle(p, {1.0, Sector::Minus, 1.0});
  CHECK(m.phi == doctest::Approx(-kPi / 2).epsilon(1e-15));
  CHECK(std::abs(m.phase - std::conj(s)) < 1e-15);

  const auto c = from_interval(p);
  // L <= x - a < 2L: both paths give the twist phase sigma_L sigma^*
  const StateLabel st{1.8, Sector::Plus, 1.0};
  const auto via_interval = map_interval_to_circle(p, interval::va_action(p, -1.0, st));
  const auto start = map_interval_to_circle(p, st);
  const auto via_circle = u_alpha_action(c, -kPi / 2, start.phi);
  CHECK(std::abs(via_interval.phi - via_circle.phi) < 1e-12);
  CHECK(std::abs(via_interval.phase - start.phase * via_circle.phase) < 1e-12);
  CHECK(std::abs(via_circle.phase - sL * std::conj(s)) < 1e-12);

  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> ux(0.0, 2.0), ua(-2.0, 2.0);
  for (int i = 0; i < 500; ++i) {
    const StateLabel s0{ux(gen), i % 2 ? Sector::Plus : Sector::Minus, std::polar(1.0, ua(gen))};
    const double a = ua(gen);
    const auto lhs = map_interval_to_circle(p, interval::va_action(p, a, s0));
    const auto mid = map_interval_to_circle(p, s0);
    const auto rhs = u_alpha_action(c, kPi * a / p.length, mid.phi);
    CHECK(std::abs(lhs.phi - rhs.phi) < 1e-12);
    CHECK(std::abs(lhs.phase - mid.phase * rhs.phase) < 1e-12);
  }
}

TEST_CASE("weyl relation and ladder commutator on the circle") {
  std::mt19937_64 gen(13);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> un(-5, 5);
  std::vector<AngularSuperposition> states;
  for (int s = 0; s < 64; ++s) {
    std::vector<std::pair<int, cplx>> c;
    for (int j = 0; j < 3; ++j) c.emplace_back(un(gen), cplx(u(gen), u(gen)));
    states.emplace_back(flux(std::fmod(7.0 * std::abs(u(gen)), 2 * kPi)), c);
  }
  std::vector<double> phis;
  for (int j = 0; j < 64; ++j) phis.push_back(-kPi + 2 * kPi * j / 64.0);
  for (double alpha : {0.4, -2.5, 3.0}) CHECK(weyl_check(alpha, states, phis) < 1e-10);
  CHECK(weyl_check(0.0, states, phis) < 1e-14);
  CHECK(commutator_check(states, phis) < 1e-12);

  // the flux multiplier turns twisted functions into periodic ones
  const auto c = flux(1.7);
  const AngularSuperposition psi(c, {{2, 1.0}, {-1, cplx(0.3, 0.4)}});
  CHECK(std::abs(psi.value(kPi) * flux_gauge_multiplier(c, -kPi) * std::conj(flux_gauge_multiplier(c, kPi)) -
                 psi.value(-kPi)) < 1e-12);
  CHECK(std::abs(psi.value(0.4 + 2 * kPi) - std::polar(1.0, 1.7) * psi.value(0.4)) < 1e-12);
  CHECK_THROWS_AS(AngularSuperposition(c, {}), RepresentationError);
}
