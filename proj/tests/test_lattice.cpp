#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "sadj/errors.hpp"
#include "sadj/lattice.hpp"

using namespace sadj;
using namespace sadj::lattice;

namespace {
LatticeConfig cfg(int n, double a = 1.0, double b0 = 0.0, double bL = 0.0) {
  LatticeConfig c;
  c.sites = n;
  c.spacing = a;
  c.lambda0 = ExtensionLambda(b0);
  c.lambdaL = ExtensionLambda(bL);
  return c;
}
const cplx I(0.0, 1.0);
}  // namespace

TEST_CASE("lattice configuration") {
  const auto c = cfg(9, 0.5);
  CHECK(c.length() == 4.5);
  CHECK(c.site(1) == 0.25);
  CHECK_THROWS_AS(cfg(1).validate(), InputError);
  CHECK_THROWS_AS(cfg(4, 0.0).validate(), InputError);
}

TEST_CASE("momentum matrices") {
  const auto ops = build_momentum_matrices(cfg(2));
  Eigen::MatrixXcd want(2, 2);
  want << 0.0, -0.5 * I, 0.5 * I, 0.0;
  CHECK((to_dense(ops.pR) - want).cwiseAbs().maxCoeff() < 1e-15);

  for (auto c : {cfg(2, 0.3, 1.0, -2.0), cfg(7, 0.1, 0.5, 0.5), cfg(12, 2.0, -3.0, 0.2)}) {
    const auto o = build_momentum_matrices(c);
    const Eigen::MatrixXcd pr = to_dense(o.pR);
    CHECK((pr - pr.adjoint()).cwiseAbs().maxCoeff() == 0.0);
    CHECK((pr - 0.25 * (o.pF + o.pF.adjoint() + o.pB + o.pB.adjoint())).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((o.pF - o.pF.adjoint()).cwiseAbs().maxCoeff() > 0.0);
    CHECK((o.pB - o.pB.adjoint()).cwiseAbs().maxCoeff() > 0.0);
    const int n = c.sites;
    CHECK(o.pI.front() == doctest::Approx(0.5 / c.spacing).epsilon(1e-15));
    CHECK(o.pI.back() == doctest::Approx(-0.5 / c.spacing).epsilon(1e-15));
    for (int j = 1; j + 1 < n; ++j) CHECK(o.pI[j] == 0.0);
    Eigen::MatrixXcd half = 0.5 * (o.pF + o.pB) - pr;
    for (int j = 0; j < n; ++j) CHECK(std::abs(half(j, j) - I * o.pI[j]) < 1e-14);
    CHECK(std::abs(o.pF(n - 1, n - 1) - (-I / c.spacing) * c.lambdaL.lambda()) < 1e-15);
    CHECK(std::abs(o.pB(0, 0) - (-I / c.spacing) * (-c.lambda0.lambda())) < 1e-15);
  }
}

TEST_CASE("lattice momentum spectrum") {
  auto e2 = lattice_momentum_spectrum(cfg(2, 0.5));
  CHECK(e2.values[0] == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(e2.values[1] == doctest::Approx(1.0).epsilon(1e-14));
  auto e3 = lattice_momentum_spectrum(cfg(3));
  CHECK(e3.values[0] == doctest::Approx(-std::sqrt(2.0) / 2).epsilon(1e-14));
  CHECK(std::abs(e3.values[1]) < 1e-15);
  CHECK(e3.values[2] == doctest::Approx(std::sqrt(2.0) / 2).epsilon(1e-14));

  for (int n : {4, 9, 64, 511, 512}) {
    const double a = 1.0 / n;
    const auto e = lattice_momentum_spectrum(cfg(n, a));
    for (int m = 1; m <= n; ++m) CHECK(std::abs(e.values[n - m] - std::cos(kPi * m / (n + 1.0)) / a) < 1e-10);
  }
  // k <-> -k symmetry for equal parameters
  const auto sym = lattice_momentum_spectrum(cfg(15, 0.2, 0.7, 0.7));
  for (std::size_t j = 0; j < sym.values.size(); ++j) CHECK(std::abs(sym.values[j] + sym.values[sym.values.size() - 1 - j]) < 1e-10);
}

TEST_CASE("every eigenvalue satisfies the lattice quantization condition") {
  for (auto c : {cfg(2), cfg(3), cfg(8, 0.125, 0.0, 1.0), cfg(9, 0.3, -0.4, 2.0), cfg(40, 0.025, 1.5, -0.5)}) {
    for (double s : lattice_momentum_spectrum(c).values) CHECK(quantization_residual_for_eigenvalue(c, s) <= 1e-8);
  }
}

TEST_CASE("quantization residual in the continuum limit") {
  // odd N: e^{2ikL} - sigma sigma_L^*
  for (auto [b0, bL] : {std::pair{0.0, 0.0}, std::pair{0.0, 1.0}, std::pair{0.6, -1.1}}) {
    const double k = 2.3, L = 1.0;
    const cplx sig = ExtensionLambda(b0).sigma() * std::conj(ExtensionLambda(bL).sigma());
    const cplx target = std::polar(1.0, 2 * k * L) - sig;
    double prev = 1e9;
    std::vector<cplx> r;
    for (int n : {101, 201, 401, 801}) {
      const cplx res = lattice_quantization_residual(cfg(n, L / n, b0, bL), k);
      const double err = std::abs(res - target);
      CHECK(err < prev);
      prev = err;
      r.push_back(res);
    }
    CHECK(prev < 1e-2);
    // Richardson on the O(a) term
    const cplx extrap = 2.0 * r[3] - r[2];
    CHECK(std::abs(extrap - target) < 10 * std::abs(r[3] - target) * (1.0 / 801.0) + 1e-5);
  }
  const double coarse = std::abs(lattice_quantization_residual(cfg(1001, 1e-3), 3 * kPi));
  const double fine = std::abs(lattice_quantization_residual(cfg(10001, 1e-4), 3 * kPi));
  CHECK(fine < 1e-2);
  CHECK(coarse / fine == doctest::Approx(10.0).epsilon(0.05));
  // pole at z = -lambda: lambda = i, z = -i means k a = -pi/2
  CHECK_THROWS_AS(lattice_quantization_residual(cfg(3, 1.0, 1.0, 0.0), -kPi / 2), SingularError);
}

TEST_CASE("continuum convergence report") {
  const auto odd = continuum_convergence(0.0, 0.0, 4, {65, 129, 257, 513});
  REQUIRE(odd.size() == 4);
  for (const auto& lv : odd) {
    CHECK_FALSE(lv.skipped);
    CHECK(lv.target == doctest::Approx(kPi * lv.level).epsilon(1e-14));
    CHECK(lv.errors.size() == 4);
    CHECK(lv.slope > 0.9);
    CHECK(std::abs(lv.k_lattice.back() - lv.target) < 1e-1);
  }
  const auto twisted = continuum_convergence(0.0, 1.0, 2, {65, 129, 257});
  for (const auto& lv : twisted) CHECK(lv.target == doctest::Approx(kPi * (lv.level - 1 + 0.25)).epsilon(1e-12).scale(1e-12));
  CHECK_THROWS_AS(continuum_convergence(0.0, 0.0, 2, {64}), InputError);
  CHECK_THROWS_AS(continuum_convergence(0.0, 0.0, 2, {128, 64}), InputError);
}

TEST_CASE("doubled hamiltonian") {
  const auto c = cfg(64, 1.0 / 64);
  const Eigen::MatrixXd h = build_doubled_hamiltonian(c, Robin(0.7), 100.0);
  CHECK((h - h.transpose()).cwiseAbs().maxCoeff() < 1e-12);

  // block solve agrees with a dense solve of the assembled matrix
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> dense(h, Eigen::EigenvaluesOnly);
  const auto blocks = doubled_hamiltonian_spectrum(c, Robin(0.7), 100.0);
  REQUIRE(blocks.size() == 128);
  for (int j = 0; j < 128; ++j) CHECK(std::abs(blocks[j] - dense.eigenvalues()[j]) < 1e-9 * (1.0 + std::abs(blocks[j])));

  const auto free = doubled_hamiltonian_spectrum(c, Robin::dirichlet(), 0.0);
  for (std::size_t j = 0; j + 1 < free.size(); j += 2) CHECK(std::abs(free[j] - free[j + 1]) < 1e-9 * (1.0 + free[j]));

  const auto d512 = doubled_hamiltonian_spectrum(cfg(512, 1.0 / 512), Robin::dirichlet(), 1e6);
  for (int l = 1; l <= 3; ++l) CHECK(std::abs(d512[l - 1] - kPi * kPi * l * l / 2) / (kPi * kPi * l * l / 2) < 1e-2);

  std::vector<double> prev;
  for (double mu : {1e2, 1e4, 1e6}) {
    const auto s = doubled_hamiltonian_spectrum(c, Robin::dirichlet(), mu);
    if (!prev.empty())
      for (std::size_t j = 0; j < 10; ++j) CHECK(s[j] >= prev[j] - 1e-10);
    prev = s;
  }
  // Neumann closure: the lowest level sits near zero
  const auto n = doubled_hamiltonian_spectrum(c, Robin(0.0), 1e6);
  CHECK(std::abs(n[0]) < 1e-6);
}
