#pragma once

#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "sadj/interval.hpp"
#include "sadj/numerics.hpp"

namespace sadj {

/// Particle on a circle threaded by flux; rho = e^{i theta}.
struct CircleParams {
  double theta = 0.0;
  std::optional<double> charge_flux;  // e Phi, equal to theta mod 2 pi when set

  void validate() const;
};

namespace circle {

/// Maps an angle into [-pi, pi).
double normalize_angle(double phi);

double angular_eigenvalue(const CircleParams& c, int n);

/// <phi|n> = (2 pi)^{-1/2} exp(i (n + theta/2 pi) phi) for phi in [-pi, pi].
cplx angular_eigenfunction(const CircleParams& c, int n, double phi);

struct AngleLabel {
  double phi = 0.0;
  cplx phase{1.0, 0.0};
};

/// U_alpha |phi> with the twisted wraparound, alpha in [-pi, pi).
AngleLabel u_alpha_action(const CircleParams& c, double alpha, double phi);

/// U|x,+> = |pi x / L>,  U|x,-> = sigma^* |-pi x / L>. Angles are reported in [-pi, pi);
/// x = L on the + side lands on -pi with the twist phase e^{-i theta}.
AngleLabel map_interval_to_circle(const IntervalParams& p, const StateLabel& state);

/// Circle parameters induced by an interval, theta = arg(sigma sigma_L^*).
CircleParams from_interval(const IntervalParams& p);

/// Multiplier exp(i (theta / 2 pi) phi) that moves the flux out of the boundary twist.
cplx flux_gauge_multiplier(const CircleParams& c, double phi);

/// Finite superposition sum_n c_n |n>.
class AngularSuperposition {
 public:
  AngularSuperposition(CircleParams c, std::vector<std::pair<int, cplx>> coeffs);

  const CircleParams& params() const { return params_; }
  const std::vector<std::pair<int, cplx>>& coeffs() const { return coeffs_; }

  /// Value at any real angle, continued with psi(phi + 2 pi) = e^{i theta} psi(phi).
  cplx value(double phi) const;
  AngularSuperposition raised() const;         // |n> -> |n+1>, the action of U~
  AngularSuperposition angular_applied() const;  // c_n -> (n + theta/2pi) c_n

 private:
  CircleParams params_;
  std::vector<std::pair<int, cplx>> coeffs_;
};

/// max |U_alpha U~ psi - e^{i alpha} U~ U_alpha psi| over samples and angles, in position space.
double weyl_check(double alpha, std::span<const AngularSuperposition> samples, const std::vector<double>& phis);

/// max |[L, U~] psi - U~ psi|, with L applied spectrally and U~ as multiplication by e^{i phi}.
double commutator_check(std::span<const AngularSuperposition> samples, const std::vector<double>& phis);

}  // namespace circle
}  // namespace sadj
