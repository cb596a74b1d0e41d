#include "sadj/types.hpp"

#include <cmath>

#include "sadj/errors.hpp"

namespace sadj {

ExtensionLambda ExtensionLambda::from_sigma(cplx sigma) {
  if (std::abs(std::abs(sigma) - 1.0) > 1e-10) throw InputError("from_sigma: sigma must have unit modulus");
  const cplx denom = 1.0 + sigma;
  if (std::abs(denom) < 1e-14) throw SingularError("from_sigma: sigma = -1 has no finite lambda");
  // lambda = (1 - sigma)/(1 + sigma) is purely imaginary for |sigma| = 1.
  return ExtensionLambda(((1.0 - sigma) / denom).imag());
}

cplx ExtensionLambda::sigma() const {
  const cplx lam = lambda();
  return (1.0 - lam) / (1.0 + lam);
}

TwoComponentWave::TwoComponentWave(Grid g, std::vector<cplx> e, std::vector<cplx> o)
    : grid(g), even(std::move(e)), odd(std::move(o)) {
  if (even.size() != grid.count() || odd.size() != grid.count())
    throw InputError("TwoComponentWave: component length does not match grid");
}

double TwoComponentWave::norm_squared() const {
  std::vector<double> dens(grid.count());
  for (std::size_t j = 0; j < dens.size(); ++j) dens[j] = std::norm(even[j]) + std::norm(odd[j]);
  return integrate(dens, grid);
}

cplx TwoComponentWave::inner(const TwoComponentWave& other) const {
  if (other.grid.count() != grid.count() || std::abs(other.grid.x0() - grid.x0()) > 1e-14 ||
      std::abs(other.grid.dx() - grid.dx()) > 1e-14 * grid.dx())
    throw InputError("inner: waves live on different grids");
  std::vector<cplx> f(grid.count());
  for (std::size_t j = 0; j < f.size(); ++j)
    f[j] = std::conj(even[j]) * other.even[j] + std::conj(odd[j]) * other.odd[j];
  return integrate(f, grid);
}

}  // namespace sadj
