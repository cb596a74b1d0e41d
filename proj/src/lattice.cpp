#include "sadj/lattice.hpp"

#include <algorithm>
#include <cmath>

#include "sadj/errors.hpp"
#include "sadj/interval.hpp"

namespace sadj {

namespace {
const cplx kI(0.0, 1.0);
}

void LatticeConfig::validate() const {
  if (sites < 2) throw InputError("LatticeConfig: at least two sites required");
  if (!(spacing > 0.0) || !std::isfinite(spacing)) throw InputError("LatticeConfig: spacing must be positive");
  if (!(mass > 0.0) || !std::isfinite(mass)) throw InputError("LatticeConfig: mass must be positive");
  if (!std::isfinite(lambda0.beta()) || !std::isfinite(lambdaL.beta()))
    throw InputError("LatticeConfig: lambda must be finite");
}

namespace lattice {

LatticeOperators build_momentum_matrices(const LatticeConfig& cfg) {
  cfg.validate();
  const int n = cfg.sites;
  const double a = cfg.spacing;
  const cplx pre = -kI / a;

  Eigen::MatrixXcd pF = Eigen::MatrixXcd::Zero(n, n);
  Eigen::MatrixXcd pB = Eigen::MatrixXcd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    pF(j, j) = -1.0;
    pB(j, j) = 1.0;
    if (j + 1 < n) {
      pF(j, j + 1) = 1.0;
      pB(j + 1, j) = -1.0;
    }
  }
  pF(n - 1, n - 1) = cfg.lambdaL.lambda();
  pB(0, 0) = -cfg.lambda0.lambda();
  pF *= pre;
  pB *= pre;

  const Eigen::MatrixXcd sym = 0.25 * (pF + pF.adjoint() + pB + pB.adjoint());
  std::vector<cplx> diag(n), upper(n - 1);
  for (int j = 0; j < n; ++j) diag[j] = cplx(sym(j, j).real(), 0.0);
  for (int j = 0; j + 1 < n; ++j) upper[j] = sym(j, j + 1);
  for (int j = 0; j < n; ++j)
    if (std::abs(sym(j, j).imag()) > 1e-14) throw InvariantError("build_momentum_matrices: p_R is not Hermitian");

  std::vector<double> pI(n, 0.0);
  pI.front() = 0.5 / a;
  pI.back() = -0.5 / a;
  return LatticeOperators{std::move(pF), std::move(pB), HermitianTridiagonal(diag, upper), std::move(pI)};
}

Eigen::MatrixXcd to_dense(const HermitianTridiagonal& m) {
  const auto n = static_cast<Eigen::Index>(m.size());
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    out(j, j) = m.diag()[j];
    if (j + 1 < n) {
      out(j, j + 1) = m.upper()[j];
      out(j + 1, j) = std::conj(m.upper()[j]);
    }
  }
  return out;
}

TridiagonalEigen lattice_momentum_spectrum(const LatticeConfig& cfg) {
  return eig_hermitian_tridiagonal(build_momentum_matrices(cfg).pR);
}

cplx lattice_quantization_residual(const LatticeConfig& cfg, double k) {
  cfg.validate();
  const double a = cfg.spacing;
  const cplx z = std::polar(1.0, k * a);
  const cplx lam = cfg.lambda0.lambda();
  const cplx lamL = cfg.lambdaL.lambda();
  const cplx den = (z + lam) * (z - lamL);
  if (std::abs(den) < 1e-14) throw SingularError("lattice_quantization_residual: pole of the quantization condition");
  const double parity = cfg.sites % 2 == 1 ? 1.0 : -1.0;
  const cplx rhs = parity * (1.0 - lam * z) * (1.0 + lamL * z) / den;
  return std::polar(1.0, 2.0 * k * cfg.length()) - rhs;
}

double quantization_residual_for_eigenvalue(const LatticeConfig& cfg, double s) {
  const double a = cfg.spacing;
  const double x = std::clamp(s * a, -1.0, 1.0);
  const double ka = std::asin(x);
  double best = std::numeric_limits<double>::infinity();
  for (const double branch : {ka, kPi - ka}) {
    try {
      best = std::min(best, std::abs(lattice_quantization_residual(cfg, branch / a)));
    } catch (const SingularError&) {
    }
  }
  return best;
}

std::vector<LevelConvergence> continuum_convergence(double beta0, double betaL, int levels,
                                                    const std::vector<int>& sizes, double length) {
  if (levels < 1) throw InputError("continuum_convergence: need at least one level");
  if (sizes.size() < 2) throw InputError("continuum_convergence: need at least two lattice sizes");
  for (std::size_t j = 0; j < sizes.size(); ++j) {
    if (sizes[j] < 2) throw InputError("continuum_convergence: sizes must be >= 2");
    if (j > 0 && sizes[j] <= sizes[j - 1]) throw InputError("continuum_convergence: sizes must increase");
  }
  if (!(length > 0.0)) throw InputError("continuum_convergence: length must be positive");

  IntervalParams ip;
  ip.length = length;
  ip.lambda0 = ExtensionLambda(beta0);
  ip.lambdaL = ExtensionLambda(betaL);
  std::vector<double> targets;
  for (int n = 0; static_cast<int>(targets.size()) < levels; ++n) {
    const double k = interval::momentum_value(ip, n);
    if (k > 1e-12) targets.push_back(k);
  }

  std::vector<LevelConvergence> out(levels);
  for (int lv = 0; lv < levels; ++lv) {
    out[lv].level = lv + 1;
    out[lv].target = targets[lv];
  }
  for (const int n : sizes) {
    LatticeConfig cfg{n, length / n, ExtensionLambda(beta0), ExtensionLambda(betaL), 1.0};
    const auto eig = lattice_momentum_spectrum(cfg);
    const double a = cfg.spacing;
    for (auto& lc : out) {
      // Eigenvalue closest to the lattice image of the target, then the arcsin branch closest to it.
      const double want = std::sin(lc.target * a) / a;
      double s = eig.values.front();
      for (double v : eig.values)
        if (std::abs(v - want) < std::abs(s - want)) s = v;
      if (std::abs(s * a) > 1.0 - 1e-9) {
        lc.skipped = true;
        lc.notice = "branch ambiguity near |s| = 1/a at N = " + std::to_string(n);
        lc.k_lattice.push_back(std::nan(""));
        lc.errors.push_back(std::nan(""));
        continue;
      }
      const double ka = std::asin(s * a);
      const double k1 = ka / a;
      const double k2 = (kPi - ka) / a;
      const double k = std::abs(k1 - lc.target) <= std::abs(k2 - lc.target) ? k1 : k2;
      lc.k_lattice.push_back(k);
      lc.errors.push_back(std::abs(k - lc.target));
    }
  }
  for (auto& lc : out) {
    if (lc.skipped) continue;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t m = 0;
    for (std::size_t j = 0; j < sizes.size(); ++j) {
      if (!(lc.errors[j] > 0.0)) continue;
      const double x = std::log(length / sizes[j]);
      const double y = std::log(lc.errors[j]);
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
      ++m;
    }
    if (m < 2) {
      lc.notice = "error vanished; no slope fitted";
      lc.slope = std::numeric_limits<double>::infinity();
      continue;
    }
    const double dm = static_cast<double>(m);
    lc.slope = (dm * sxy - sx * sy) / (dm * sxx - sx * sx);
    lc.intercept = (sy - lc.slope * sx) / dm;
  }
  return out;
}

namespace {

// (1/2 m a^2) tridiag(-1, 2, -1) with ghost-cell closure psi_ghost = r psi_edge at both walls.
Eigen::MatrixXd kinetic(int n, double a, double mass, double r) {
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    k(j, j) = 2.0;
    if (j + 1 < n) k(j, j + 1) = k(j + 1, j) = -1.0;
  }
  k(0, 0) -= r;
  k(n - 1, n - 1) -= r;
  return k / (2.0 * mass * a * a);
}

}  // namespace

namespace {

// Ghost-cell ratio Psi(x_0) = r Psi(x_1) of the wall closure; -1 for Dirichlet.
double closure_ratio(const LatticeConfig& cfg, Robin gamma) {
  if (gamma.is_dirichlet()) return -1.0;
  const double g = gamma.value();
  const double a = cfg.spacing;
  if (!std::isfinite(g)) throw InputError("build_doubled_hamiltonian: gamma must be finite");
  if (std::abs(1.0 + 0.5 * g * a) < 1e-14) throw SingularError("build_doubled_hamiltonian: ghost-cell closure is singular");
  return (1.0 - 0.5 * g * a) / (1.0 + 0.5 * g * a);
}

double penalty(const LatticeConfig& cfg, double mu_units) {
  if (!(mu_units >= 0.0) || !std::isfinite(mu_units)) throw InputError("build_doubled_hamiltonian: mu must be >= 0");
  return mu_units / (2.0 * cfg.mass * cfg.length() * cfg.length());
}

Eigen::VectorXd tridiagonal_values(const Eigen::MatrixXd& k) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  const Eigen::VectorXd diag = k.diagonal();
  const Eigen::VectorXd sub = k.diagonal(-1);
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("doubled_hamiltonian_spectrum: eigensolver failed");
  return solver.eigenvalues();
}

}  // namespace

Eigen::MatrixXd build_doubled_hamiltonian(const LatticeConfig& cfg, Robin gamma, double mu_units) {
  cfg.validate();
  const double mu = penalty(cfg, mu_units);
  const double r = closure_ratio(cfg, gamma);
  const int n = cfg.sites;
  const Eigen::MatrixXd kr = kinetic(n, cfg.spacing, cfg.mass, r);
  const Eigen::MatrixXd kd = kinetic(n, cfg.spacing, cfg.mass, -1.0);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);

  Eigen::MatrixXd h(2 * n, 2 * n);
  const Eigen::MatrixXd same = 0.5 * (kr + kd) + 0.5 * mu * id;
  const Eigen::MatrixXd cross = 0.5 * (kr - kd) - 0.5 * mu * id;
  h.topLeftCorner(n, n) = same;
  h.bottomRightCorner(n, n) = same;
  h.topRightCorner(n, n) = cross;
  h.bottomLeftCorner(n, n) = cross;
  return h;
}

std::vector<double> doubled_hamiltonian_spectrum(const LatticeConfig& cfg, Robin gamma, double mu_units) {
  cfg.validate();
  const double mu = penalty(cfg, mu_units);
  const double r = closure_ratio(cfg, gamma);
  // In the (Psi_e + Psi_o, Psi_e - Psi_o)/sqrt2 basis the matrix is block diagonal:
  // K_R on P+ and K_D + mu on P-. Solving the blocks separately keeps the P+ levels
  // independent of mu to the last bit.
  const Eigen::VectorXd plus = tridiagonal_values(kinetic(cfg.sites, cfg.spacing, cfg.mass, r));
  const Eigen::VectorXd minus = tridiagonal_values(kinetic(cfg.sites, cfg.spacing, cfg.mass, -1.0));
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(2 * cfg.sites));
  for (double v : plus) out.push_back(v);
  for (double v : minus) out.push_back(v + mu);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace lattice
}  // namespace sadj
