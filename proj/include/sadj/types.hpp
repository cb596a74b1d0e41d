#pragma once

#include <array>
#include <complex>
#include <vector>

#include "sadj/numerics.hpp"

namespace sadj {

/// Pair (Psi_e, Psi_o) of the two-component wavefunction at one point.
using Spinor = std::array<cplx, 2>;

/// Self-adjoint extension parameter of the doubled momentum operator.
/// lambda = i*beta is purely imaginary, so only beta is stored.
class ExtensionLambda {
 public:
  constexpr explicit ExtensionLambda(double beta = 0.0) : beta_(beta) {}

  /// Recovers lambda from the boundary phase sigma = (1 - lambda)/(1 + lambda).
  /// sigma = -1 corresponds to |lambda| = infinity and is rejected.
  static ExtensionLambda from_sigma(cplx sigma);

  constexpr double beta() const { return beta_; }
  cplx lambda() const { return {0.0, beta_}; }
  cplx sigma() const;

  friend bool operator==(const ExtensionLambda&, const ExtensionLambda&) = default;

 private:
  double beta_;
};

/// Sampled two-component wavefunction on a uniform grid.
struct TwoComponentWave {
  Grid grid;
  std::vector<cplx> even;
  std::vector<cplx> odd;

  TwoComponentWave(Grid g, std::vector<cplx> e, std::vector<cplx> o);

  Spinor at(std::size_t j) const { return {even[j], odd[j]}; }
  /// Integral of |Psi_e|^2 + |Psi_o|^2.
  double norm_squared() const;
  /// <this|other> by quadrature; both waves must share a grid.
  cplx inner(const TwoComponentWave& other) const;
};

enum class Sector { Plus, Minus };

/// Position eigenstate label |x,+> or |x,->, times a unit-modulus phase.
struct StateLabel {
  double x = 0.0;
  Sector sign = Sector::Plus;
  cplx phase{1.0, 0.0};
};

}  // namespace sadj
