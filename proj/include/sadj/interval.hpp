#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "sadj/halfline.hpp"
#include "sadj/superposition.hpp"
#include "sadj/types.hpp"

namespace sadj {

/// Interval [0, L] with momentum extension parameters at both ends.
struct IntervalParams {
  double length = 1.0;
  double mass = 1.0;
  ExtensionLambda lambda0{};
  ExtensionLambda lambdaL{};

  void validate() const;
};

/// Boundary condition of the interval Hamiltonian. Robin uses
/// gamma0 psi(0) - psi'(0) = 0 and gammaL psi(L) + psi'(L) = 0.
struct BoundaryKind {
  enum class Kind { Neumann, Dirichlet, Robin };
  Kind kind = Kind::Neumann;
  double gamma0 = 0.0;
  double gammaL = 0.0;

  static BoundaryKind neumann() { return {Kind::Neumann, 0.0, 0.0}; }
  static BoundaryKind dirichlet() { return {Kind::Dirichlet, 0.0, 0.0}; }
  static BoundaryKind robin(double g0, double gL);
};

/// Four-parameter boundary family (Psi_o, Psi_o')(0) = e^{i eta} [[a,-b],[-c,d]] (Psi_e, Psi_e')(0).
struct GeneralBoundary {
  double eta = 0.0;
  double a = 1.0;
  double b = 0.0;
  double c = 0.0;
  double d = -1.0;

  void validate() const;  // a d - b c = -1
  /// Robin parameter of the embedded Hamiltonian (gamma = -c/2). Only the
  /// specialization e^{i eta} = 1, a = 1, b = 0, d = -1 embeds the original
  /// Hamiltonian; anything else throws InputError.
  Robin embedded_robin() const;
};

struct MeasurementEntry {
  int n = 0;
  double k = 0.0;
  double probability = 0.0;
};

struct MeasurementDistribution {
  std::vector<MeasurementEntry> entries;
  double tail_bound = 0.0;
  BoundaryKind bc{};
  int level = 0;
  double length = 1.0;
  double theta = 0.0;
  bool closed_form = false;

  double sum() const;
};

/// Vector potential along the interval. e A(x) = charge_times_a - d(e phi)/dx
/// where phase_profile is the accumulated gauge function e phi(x).
struct GaugeField {
  double charge_times_a = 0.0;
  std::function<double(double)> phase_profile;

  /// e * int_0^L A dx
  double line_integral(double length) const;
  double profile(double x) const { return phase_profile ? phase_profile(x) : 0.0; }
};

namespace interval {

/// theta = arg(sigma sigma_L^*) in [0, 2 pi).
double theta_from_lambdas(const IntervalParams& p);

/// Symmetric choice sigma = e^{i theta/2}, sigma_L = e^{-i theta/2} realizing a given theta.
IntervalParams params_for_theta(double length, double theta, double mass = 1.0);

/// k_n = (pi/L)(n + theta/(2 pi)) for n in [nmin, nmax].
std::vector<std::pair<int, double>> momentum_spectrum(const IntervalParams& p, int nmin, int nmax);
double momentum_value(const IntervalParams& p, int n);

/// phi_{k_n}(x) = (1/(2 sqrt L))(e^{ikx} + sigma e^{-ikx}, e^{ikx} - sigma e^{-ikx}).
Spinor momentum_eigenfunction(const IntervalParams& p, int n, double x);

/// Finite superposition of quantized eigenfunctions sum_n c_n phi_{k_n}.
MomentumSuperposition superposition(const IntervalParams& p, const std::vector<std::pair<int, cplx>>& coeffs);

struct EnergyEigenstate {
  int level = 0;
  double energy = 0.0;
  double wavenumber = 0.0;  // kappa for E = kappa^2/2m; q for bound states E = -q^2/2m
  bool bound = false;
  TwoComponentWave wave;    // (psi, psi)/sqrt2

  /// Normalized single-component wavefunction and its derivative.
  double value(double x) const;
  double derivative(double x) const;

  // psi(x) = norm * (cos_coeff * c(x) + sin_coeff * s(x)) with c = cos(kx), s = sin(kx)/k
  // (cosh and sinh/q for bound states, s = x at k = 0).
  double norm = 1.0;
  double cos_coeff = 1.0;
  double sin_coeff = 0.0;
};

EnergyEigenstate energy_eigenstate(const IntervalParams& p, const BoundaryKind& bc, int level, const Grid& grid);
EnergyEigenstate energy_eigenstate(const IntervalParams& p, const BoundaryKind& bc, int level);

/// Robin wavenumbers in ascending energy order (bound states first), at least `count` of them.
std::vector<std::pair<double, bool>> robin_wavenumbers(double length, double gamma0, double gammaL, int count);

/// Closed-form |<phi_k|psi_l>|^2 for theta = 0 (Neumann or Dirichlet). Exact zeros
/// for parity-forbidden n.
double closed_form_probability(const BoundaryKind& bc, int level, int n);

/// sum_{n >= n0} of closed_form_probability, evaluated analytically.
double closed_form_upper_tail(const BoundaryKind& bc, int level, int n0);

/// <phi_{k_n}|psi_l> by Simpson quadrature on `points` nodes.
cplx overlap_by_quadrature(const IntervalParams& p, const BoundaryKind& bc, int level, int n, std::size_t points);

MeasurementDistribution measurement_distribution(const IntervalParams& p, const BoundaryKind& bc, int level,
                                                 int nmin, int nmax);

struct SecondMoment {
  bool divergent = false;
  double value = 0.0;        // partial sum (plus closed-form tail when requested and convergent)
  double growth_rate = 0.0;  // dS/dN of the partial sums over the outer half of the range
};

SecondMoment second_moment(const MeasurementDistribution& dist, bool closed_form_tail);
double first_moment(const MeasurementDistribution& dist);

/// Conveyor-belt action of V_a on |x,+->, a in [-L, L).
StateLabel va_action(const IntervalParams& p, double a, const StateLabel& state);

/// Position-space V_a on a two-component field in [0, L], via the twisted
/// periodic unfolding g(t + 2L) = e^{i theta} g(t).
SpinorField va_apply_field(const IntervalParams& p, double a, SpinorField field);

struct CommutatorReport {
  double commutator = 0.0;         // [p_R, Vt] - (pi/L) Vt
  double commutator_dagger = 0.0;  // [p_R, Vt^dag] + (pi/L) Vt^dag
  double weyl = 0.0;               // V_a Vt - e^{i pi a/L} Vt V_a
};

/// Checks the momentum-shift commutators and the Weyl relation on finite
/// superpositions of quantized eigenfunctions, evaluated at xs.
CommutatorReport commutator_check(const IntervalParams& p, double a, std::span<const MomentumSuperposition> samples,
                                  const std::vector<double>& xs);

struct GaugeShift {
  IntervalParams shifted;  // theta' = 0
  GaugeField field;        // e A_x = theta/(2L)
};

GaugeShift gauge_shift_theta(const IntervalParams& p);

/// Multiplies samples by exp(i e phi(x)).
std::vector<cplx> gauge_apply(std::span<const cplx> psi, const Grid& grid, const std::function<double(double)>& phase);
/// A -> A - d phi/dx (profiles compose additively).
GaugeField gauge_transform(const GaugeField& field, const std::function<double(double)>& phase);

/// Psi(0)^* exp(i e int A) Psi(L) with the grid spanning [0, L].
cplx gauge_string_expectation(std::span<const cplx> psi, const Grid& grid, const GaugeField& field);

/// Residuals of gamma Psi'(0) - D Psi'(0) and gammaL Psi'(L) + D Psi'(L) for the
/// state moved into the theta' = 0 frame, Psi'(x) = e^{-i eA x} psi(x).
std::pair<cplx, cplx> covariant_robin_residuals(const EnergyEigenstate& state, const BoundaryKind& bc,
                                                const GaugeField& field, double length);

struct SampleResult {
  std::vector<std::uint64_t> counts;  // parallel to dist.entries
  std::uint64_t rejected = 0;         // draws that fell into the tail bucket
  int last_n = 0;                     // collapse target phi_{k_n} of the final shot
  double last_k = 0.0;
};

SampleResult sample_measurement(const MeasurementDistribution& dist, std::uint64_t shots, std::uint64_t seed);

/// Spectral propagation over the first `max_states` energy eigenstates.
TwoComponentWave evolve(const IntervalParams& p, const BoundaryKind& bc, const TwoComponentWave& psi0, double t,
                        int max_states = 64);

}  // namespace interval
}  // namespace sadj
