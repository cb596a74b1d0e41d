#pragma once

#include <functional>
#include <vector>

#include "sadj/types.hpp"

namespace sadj {

using SpinorField = std::function<Spinor(double)>;

struct MomentumComponent {
  double k = 0.0;
  cplx coeff{1.0, 0.0};
};

/// Finite superposition sum_j c_j phi_{k_j}(x) of doubled-momentum eigenfunctions
///   phi_k(x) = scale * (e^{ikx} + sigma e^{-ikx}, e^{ikx} - sigma e^{-ikx}).
/// scale is 1/sqrt(2) on the half-line and 1/(2 sqrt(L)) in an interval.
class MomentumSuperposition {
 public:
  MomentumSuperposition(cplx sigma, double scale, std::vector<MomentumComponent> components);

  cplx sigma() const { return sigma_; }
  double scale() const { return scale_; }
  const std::vector<MomentumComponent>& components() const { return components_; }

  Spinor value(double x) const;
  /// Analytic x-derivative of value().
  Spinor derivative(double x) const;

  /// Spectral actions on the coefficient list.
  MomentumSuperposition shifted(double q) const;           // k -> k + q
  MomentumSuperposition translated(double a) const;        // c -> c e^{ika}
  MomentumSuperposition momentum_applied() const;          // c -> k c
  MomentumSuperposition scaled(cplx factor) const;

  SpinorField field() const;

 private:
  cplx sigma_;
  double scale_;
  std::vector<MomentumComponent> components_;
};

/// Pointwise matrix [[cos qx, i sin qx], [i sin qx, cos qx]] = exp(i q sigma_1 x).
Spinor vtilde_matrix_apply(double q, double x, const Spinor& s);

double max_deviation(const SpinorField& lhs, const SpinorField& rhs, const std::vector<double>& xs);

}  // namespace sadj
