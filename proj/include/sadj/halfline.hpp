#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "sadj/numerics.hpp"
#include "sadj/superposition.hpp"
#include "sadj/types.hpp"

namespace sadj {

/// Robin parameter gamma of gamma*psi(0) - psi'(0) = 0. Dirichlet (gamma = infinity)
/// is a distinct state rather than a large number.
class Robin {
 public:
  constexpr explicit Robin(double gamma) : gamma_(gamma), dirichlet_(false) {}
  static constexpr Robin dirichlet() { return Robin(); }

  constexpr bool is_dirichlet() const { return dirichlet_; }
  /// Only meaningful when !is_dirichlet().
  constexpr double value() const { return gamma_; }

 private:
  constexpr Robin() : gamma_(0.0), dirichlet_(true) {}
  double gamma_;
  bool dirichlet_;
};

struct PhysicalParams {
  double mass = 1.0;
  Robin gamma{0.0};
  double xmax = 40.0;
  Grid grid = Grid::span(0.0, 40.0, 4001);

  void validate() const;
};

namespace halfline {

/// R(p) = (ip + gamma)/(ip - gamma); -1 for Dirichlet.
cplx reflection_amplitude(Robin gamma, double p);

struct ScatteringState {
  double p = 0.0;
  double energy = 0.0;
  cplx reflection{};
  TwoComponentWave wave;  // equal components psi_E/sqrt(2)

  /// psi_E(x) = e^{-ipx} + R e^{ipx}
  cplx value(double x) const;
  cplx derivative(double x) const;
};

ScatteringState scattering_state(const PhysicalParams& params, double p);

struct BoundState {
  double gamma = 0.0;
  double energy = 0.0;
  TwoComponentWave wave;

  cplx value(double x) const;  // sqrt(-2 gamma) e^{gamma x}
};

BoundState bound_state(const PhysicalParams& params);

/// Probability density -gamma / (pi (gamma^2 + k^2)) of a standard momentum
/// measurement on the bound state.
double standard_momentum_density_bound(double gamma, double k);

/// <k|psi_E> = -i (1/(k - i eps + p) + R(p)/(k - i eps - p)).
cplx standard_momentum_overlap_scattering(Robin gamma, double p, double k, double epsilon = 1e-8);

/// phi_k(x) = (1/sqrt2)(e^{ikx} + sigma e^{-ikx}, e^{ikx} - sigma e^{-ikx}).
Spinor momentum_eigenfunction(const ExtensionLambda& lambda, double k, double x);

/// Psi+ = (psi, psi)/sqrt(2).
TwoComponentWave embed_plus(std::span<const cplx> psi, const Grid& grid);

/// <phi_k|Psi+> by quadrature. Throws SectorError unless even == odd.
cplx new_momentum_amplitude(const TwoComponentWave& psi_plus, const ExtensionLambda& lambda, double k);

TwoComponentWave projector_apply(Sector sign, const TwoComponentWave& wave);

/// lambda' of the rotated boundary condition under W = exp(i omega sigma_1).
ExtensionLambda w_transform(const ExtensionLambda& lambda, double omega);

/// V_a = exp(i p_R a) on |x,+-> (conveyor belt through the origin).
StateLabel va_action(double a, const StateLabel& state, cplx sigma);

TwoComponentWave vtilde_apply(double q, const TwoComponentWave& wave);

/// Position-space action of V_a on a two-component field over x >= 0:
/// the field is unfolded onto the real x_R axis, shifted by a and folded back.
SpinorField va_apply_field(double a, cplx sigma, SpinorField field);
SpinorField vtilde_apply_field(double q, SpinorField field);

/// Max over samples and evaluation points of |V_a Vt_q psi - e^{iqa} Vt_q V_a psi|,
/// both orderings computed in position space.
double weyl_check(double a, double q, std::span<const MomentumSuperposition> samples,
                  const std::vector<double>& xs);

struct DilationParams {
  double kappa = 0.0;
  double scale_ref = 1.0;  // the arbitrary length l
};

/// <x|kappa> = l^{-1/2} (x/l)^{i kappa - 1/2}
cplx dilation_eigenfunction(const DilationParams& d, double x);

/// Mellin-type transform  int_0^inf <kappa|x> psi(x) dx  from samples on a grid with x0 > 0.
/// The kernel singularity at small x is integrated exactly against a piecewise
/// quadratic interpolant of psi; [0, x0] is closed with psi held at psi(x0).
cplx mellin_transform(std::span<const cplx> psi, const Grid& grid, const DilationParams& d);

/// |<chi|d psi> - <d chi|psi>| with d = -i(1/2 + x d/dx), derivatives by finite differences.
double dilation_hermiticity_check(std::span<const cplx> chi, std::span<const cplx> psi, const Grid& grid);

/// <psi| d |psi> for the dilation generator, by quadrature.
cplx dilation_expectation(std::span<const cplx> psi, const Grid& grid);

/// j = (1/2mi)[Psi^* dPsi - dPsi^* Psi] summed over both components at grid index `at`.
double current_density(const TwoComponentWave& wave, double mass, std::size_t at);

/// Finite-difference derivative: five-point centered in the interior, three-point next to and at the ends.
std::vector<cplx> differentiate(std::span<const cplx> f, const Grid& grid);

}  // namespace halfline
}  // namespace sadj
