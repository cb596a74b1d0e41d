#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "sadj/halfline.hpp"
#include "sadj/numerics.hpp"
#include "sadj/types.hpp"

namespace sadj {

/// N sites at x_n = (n - 1/2) a, n = 1..N, so L = N a.
struct LatticeConfig {
  int sites = 2;
  double spacing = 1.0;
  ExtensionLambda lambda0{};
  ExtensionLambda lambdaL{};
  double mass = 1.0;

  void validate() const;
  double length() const { return sites * spacing; }
  double site(int n) const { return (n - 0.5) * spacing; }
};

struct LatticeOperators {
  Eigen::MatrixXcd pF;
  Eigen::MatrixXcd pB;
  HermitianTridiagonal pR;
  std::vector<double> pI;  // diagonal, (pF + pB)/2 = pR + i diag(pI)
};

namespace lattice {

LatticeOperators build_momentum_matrices(const LatticeConfig& cfg);

/// Dense copy of a Hermitian tridiagonal matrix.
Eigen::MatrixXcd to_dense(const HermitianTridiagonal& m);

TridiagonalEigen lattice_momentum_spectrum(const LatticeConfig& cfg);

/// z^{2N} - (-1)^{N+1} (1 - lambda z)(1 + lambda_L z) / ((z + lambda)(z - lambda_L)),  z = e^{ika}.
/// The sign factor comes from the alternating site parity of the lattice plane waves;
/// for odd N it is +1.
cplx lattice_quantization_residual(const LatticeConfig& cfg, double k);

/// Smallest |residual| over the two arcsin branches ka and pi - ka of s = sin(ka)/a.
double quantization_residual_for_eigenvalue(const LatticeConfig& cfg, double s);

struct LevelConvergence {
  int level = 0;            // 1-based index among positive continuum momenta
  double target = 0.0;      // continuum k_n
  std::vector<double> k_lattice;
  std::vector<double> errors;
  double slope = 0.0;       // d log|error| / d log a
  double intercept = 0.0;
  bool skipped = false;
  std::string notice;
};

/// Fits the convergence order of the lowest `levels` positive momenta at fixed L.
/// sizes must be strictly increasing with at least two entries.
std::vector<LevelConvergence> continuum_convergence(double beta0, double betaL, int levels,
                                                    const std::vector<int>& sizes, double length = 1.0);

/// Doubled Hamiltonian on 2N sites, ordered (Psi_e(1..N), Psi_o(1..N)). The P+ sector
/// carries the Robin closure, the P- sector Dirichlet, and mu_units * 1/(2 m L^2) penalizes P-.
Eigen::MatrixXd build_doubled_hamiltonian(const LatticeConfig& cfg, Robin gamma, double mu_units);

/// Ascending eigenvalues of build_doubled_hamiltonian, from its two sector blocks.
std::vector<double> doubled_hamiltonian_spectrum(const LatticeConfig& cfg, Robin gamma, double mu_units);

}  // namespace lattice
}  // namespace sadj
