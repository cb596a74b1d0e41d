#include "sadj/halfline.hpp"

#include <algorithm>
#include <cmath>

#include "sadj/errors.hpp"

namespace sadj {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
const cplx kI(0.0, 1.0);
}  // namespace

void PhysicalParams::validate() const {
  if (!(mass > 0.0)) throw InputError("PhysicalParams: mass must be positive");
  if (!(xmax > 0.0)) throw InputError("PhysicalParams: xmax must be positive");
  if (!gamma.is_dirichlet() && gamma.value() < 0.0 && xmax < 10.0 / std::abs(gamma.value()))
    throw InputError("PhysicalParams: xmax too small to resolve the bound-state tail");
}

namespace halfline {

cplx reflection_amplitude(Robin gamma, double p) {
  if (gamma.is_dirichlet()) return {-1.0, 0.0};
  const double g = gamma.value();
  if (g == 0.0 && p == 0.0) throw SingularError("reflection_amplitude: gamma = p = 0 is singular");
  return (kI * p + g) / (kI * p - g);
}

cplx ScatteringState::value(double x) const {
  return std::polar(1.0, -p * x) + reflection * std::polar(1.0, p * x);
}

cplx ScatteringState::derivative(double x) const {
  return -kI * p * std::polar(1.0, -p * x) + reflection * kI * p * std::polar(1.0, p * x);
}

ScatteringState scattering_state(const PhysicalParams& params, double p) {
  params.validate();
  if (!(p >= 0.0)) throw InputError("scattering_state: p must be non-negative");
  const cplx r = reflection_amplitude(params.gamma, p);
  std::vector<cplx> comp(params.grid.count());
  for (std::size_t j = 0; j < comp.size(); ++j) {
    const double x = params.grid[j];
    comp[j] = kInvSqrt2 * (std::polar(1.0, -p * x) + r * std::polar(1.0, p * x));
  }
  return ScatteringState{p, p * p / (2.0 * params.mass), r, TwoComponentWave(params.grid, comp, comp)};
}

cplx BoundState::value(double x) const { return std::sqrt(-2.0 * gamma) * std::exp(gamma * x); }

BoundState bound_state(const PhysicalParams& params) {
  params.validate();
  if (params.gamma.is_dirichlet() || params.gamma.value() >= 0.0)
    throw InputError("bound_state: a bound state requires finite gamma < 0");
  const double g = params.gamma.value();
  std::vector<cplx> comp(params.grid.count());
  for (std::size_t j = 0; j < comp.size(); ++j)
    comp[j] = kInvSqrt2 * std::sqrt(-2.0 * g) * std::exp(g * params.grid[j]);
  return BoundState{g, -g * g / (2.0 * params.mass), TwoComponentWave(params.grid, comp, comp)};
}

double standard_momentum_density_bound(double gamma, double k) {
  if (!(gamma < 0.0)) throw InputError("standard_momentum_density_bound: gamma must be negative");
  return -gamma / (kPi * (gamma * gamma + k * k));
}

cplx standard_momentum_overlap_scattering(Robin gamma, double p, double k, double epsilon) {
  if (!(epsilon > 0.0)) throw InputError("standard_momentum_overlap_scattering: epsilon must be positive");
  const cplx r = reflection_amplitude(gamma, p);
  const cplx shifted = k - kI * epsilon;
  return -kI * (1.0 / (shifted + p) + r / (shifted - p));
}

Spinor momentum_eigenfunction(const ExtensionLambda& lambda, double k, double x) {
  if (x < 0.0) throw DomainError("momentum_eigenfunction: x must be non-negative");
  const cplx fwd = std::polar(1.0, k * x);
  const cplx bwd = lambda.sigma() * std::conj(fwd);
  return {kInvSqrt2 * (fwd + bwd), kInvSqrt2 * (fwd - bwd)};
}

TwoComponentWave embed_plus(std::span<const cplx> psi, const Grid& grid) {
  std::vector<cplx> comp(psi.begin(), psi.end());
  for (auto& v : comp) v *= kInvSqrt2;
  return TwoComponentWave(grid, comp, comp);
}

cplx new_momentum_amplitude(const TwoComponentWave& psi_plus, const ExtensionLambda& lambda, double k) {
  double scale = 0.0;
  for (const auto& v : psi_plus.even) scale = std::max(scale, std::abs(v));
  for (std::size_t j = 0; j < psi_plus.even.size(); ++j)
    if (std::abs(psi_plus.even[j] - psi_plus.odd[j]) > 1e-10 * (1.0 + scale))
      throw SectorError("new_momentum_amplitude: state is not in the P+ sector");

  const Grid& g = psi_plus.grid;
  std::vector<cplx> f(g.count());
  for (std::size_t j = 0; j < f.size(); ++j) {
    const Spinor phi = momentum_eigenfunction(lambda, k, g[j]);
    f[j] = std::conj(phi[0]) * psi_plus.even[j] + std::conj(phi[1]) * psi_plus.odd[j];
  }
  return integrate(f, g);
}

TwoComponentWave projector_apply(Sector sign, const TwoComponentWave& wave) {
  const double s = sign == Sector::Plus ? 1.0 : -1.0;
  std::vector<cplx> e(wave.even.size()), o(wave.odd.size());
  for (std::size_t j = 0; j < e.size(); ++j) {
    e[j] = 0.5 * (wave.even[j] + s * wave.odd[j]);
    o[j] = 0.5 * (s * wave.even[j] + wave.odd[j]);
  }
  return TwoComponentWave(wave.grid, std::move(e), std::move(o));
}

ExtensionLambda w_transform(const ExtensionLambda& lambda, double omega) {
  const cplx lam = lambda.lambda();
  const cplx num = kI * std::sin(omega) + lam * std::cos(omega);
  const cplx den = std::cos(omega) + lam * kI * std::sin(omega);
  if (std::abs(den) < 1e-14) throw SingularError("w_transform: rotation sends lambda to infinity");
  return ExtensionLambda((num / den).imag());
}

StateLabel va_action(double a, const StateLabel& state, cplx sigma) {
  if (state.x < 0.0) throw DomainError("va_action: x must be non-negative");
  if (state.sign == Sector::Plus) {
    const double y = state.x - a;
    if (y >= 0.0) return {y, Sector::Plus, state.phase};
    return {a - state.x, Sector::Minus, state.phase * sigma};
  }
  const double y = state.x + a;
  if (y >= 0.0) return {y, Sector::Minus, state.phase};
  return {-state.x - a, Sector::Plus, state.phase * std::conj(sigma)};
}

TwoComponentWave vtilde_apply(double q, const TwoComponentWave& wave) {
  std::vector<cplx> e(wave.even.size()), o(wave.odd.size());
  for (std::size_t j = 0; j < e.size(); ++j) {
    const Spinor s = vtilde_matrix_apply(q, wave.grid[j], wave.at(j));
    e[j] = s[0];
    o[j] = s[1];
  }
  return TwoComponentWave(wave.grid, std::move(e), std::move(o));
}

SpinorField va_apply_field(double a, cplx sigma, SpinorField field) {
  if (a == 0.0) return field;  // V_0 is the identity; skip the fold round trip
  // f+(x) = <x,+|Psi>, f-(x) = <x,-|Psi>; g(t) = f+(t) for t >= 0, sigma^* f-(-t) for t < 0.
  auto unfolded = [sigma, field](double t) -> cplx {
    if (t >= 0.0) {
      const Spinor s = field(t);
      return kInvSqrt2 * (s[0] + s[1]);
    }
    const Spinor s = field(-t);
    return std::conj(sigma) * kInvSqrt2 * (s[0] - s[1]);
  };
  return [a, sigma, unfolded](double y) -> Spinor {
    const cplx plus = unfolded(y + a);
    const cplx minus = sigma * unfolded(-y + a);
    return {kInvSqrt2 * (plus + minus), kInvSqrt2 * (plus - minus)};
  };
}

SpinorField vtilde_apply_field(double q, SpinorField field) {
  return [q, field](double x) { return vtilde_matrix_apply(q, x, field(x)); };
}

double weyl_check(double a, double q, std::span<const MomentumSuperposition> samples,
                  const std::vector<double>& xs) {
  if (samples.empty()) throw RepresentationError("weyl_check: no sample states");
  const cplx phase = std::polar(1.0, q * a);
  double worst = 0.0;
  for (const auto& psi : samples) {
    for (const double x : xs)
      if (x < 0.0) throw DomainError("weyl_check: evaluation points must be non-negative");
    const cplx sigma = psi.sigma();
    const SpinorField lhs = va_apply_field(a, sigma, vtilde_apply_field(q, psi.field()));
    const SpinorField inner = vtilde_apply_field(q, va_apply_field(a, sigma, psi.field()));
    const SpinorField rhs = [phase, inner](double x) {
      const Spinor s = inner(x);
      return Spinor{phase * s[0], phase * s[1]};
    };
    worst = std::max(worst, max_deviation(lhs, rhs, xs));
  }
  return worst;
}

cplx dilation_eigenfunction(const DilationParams& d, double x) {
  if (!(x > 0.0)) throw DomainError("dilation_eigenfunction: x must be positive");
  if (!(d.scale_ref > 0.0)) throw InputError("dilation_eigenfunction: scale must be positive");
  return std::exp(cplx(-0.5, d.kappa) * std::log(x / d.scale_ref)) / std::sqrt(d.scale_ref);
}

cplx mellin_transform(std::span<const cplx> psi, const Grid& grid, const DilationParams& d) {
  if (!(grid.x0() > 0.0)) throw DomainError("mellin_transform: grid must be strictly positive");
  if (!(d.scale_ref > 0.0)) throw InputError("mellin_transform: scale must be positive");
  if (psi.size() != grid.count()) throw InputError("mellin_transform: sample count does not match grid");

  // conj(<x|kappa>) = l^{i kappa} x^s with s = -i kappa - 1/2.
  const cplx s(-0.5, -d.kappa);
  const cplx prefactor = std::exp(kI * d.kappa * std::log(d.scale_ref));
  auto power = [](double x, cplx p) { return std::exp(p * std::log(x)); };
  auto moment = [&](double lo, double hi, int m) {
    const cplx p = s + static_cast<double>(m + 1);
    return (power(hi, p) - power(lo, p)) / p;
  };

  const std::size_t n = grid.count();
  const double x0 = grid.x0();
  cplx total = psi[0] * power(x0, s + 1.0) / (s + 1.0);

  // Product integration near the origin, where the kernel is steep.
  const std::size_t pairs = (n - 1) / 2;
  const std::size_t near = std::min<std::size_t>(20, pairs);
  for (std::size_t k = 0; k < near; ++k) {
    const std::size_t j = 2 * k;
    const double xa = grid[j], xb = grid[j + 1], xc = grid[j + 2];
    const cplx f01 = (psi[j + 1] - psi[j]) / (xb - xa);
    const cplx f12 = (psi[j + 2] - psi[j + 1]) / (xc - xb);
    const cplx f012 = (f12 - f01) / (xc - xa);
    const cplx c2 = f012;
    const cplx c1 = f01 - f012 * (xa + xb);
    const cplx c0 = psi[j] - f01 * xa + f012 * xa * xb;
    total += c0 * moment(xa, xc, 0) + c1 * moment(xa, xc, 1) + c2 * moment(xa, xc, 2);
  }

  const std::size_t start = 2 * near;
  if (start + 1 < n) {
    std::vector<cplx> f(n - start);
    for (std::size_t j = start; j < n; ++j) f[j - start] = power(grid[j], s) * psi[j];
    total += integrate(f, Grid(grid[start], grid.dx(), n - start));
  }
  return prefactor * total;
}

std::vector<cplx> differentiate(std::span<const cplx> f, const Grid& grid) {
  const std::size_t n = f.size();
  if (n != grid.count()) throw InputError("differentiate: sample count does not match grid");
  if (n < 3) throw InputError("differentiate: at least three samples required");
  const double h = grid.dx();
  std::vector<cplx> df(n);
  df[0] = (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
  df[n - 1] = (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
  for (std::size_t j = 1; j + 1 < n; ++j) {
    if (j >= 2 && j + 2 < n)
      df[j] = (f[j - 2] - 8.0 * f[j - 1] + 8.0 * f[j + 1] - f[j + 2]) / (12.0 * h);
    else
      df[j] = (f[j + 1] - f[j - 1]) / (2.0 * h);
  }
  return df;
}

namespace {

std::vector<cplx> apply_dilation(std::span<const cplx> f, const Grid& grid) {
  const auto df = differentiate(f, grid);
  std::vector<cplx> out(f.size());
  for (std::size_t j = 0; j < f.size(); ++j) out[j] = -kI * (0.5 * f[j] + grid[j] * df[j]);
  return out;
}

cplx overlap(std::span<const cplx> bra, std::span<const cplx> ket, const Grid& grid) {
  std::vector<cplx> f(bra.size());
  for (std::size_t j = 0; j < f.size(); ++j) f[j] = std::conj(bra[j]) * ket[j];
  return integrate(f, grid);
}

}  // namespace

double dilation_hermiticity_check(std::span<const cplx> chi, std::span<const cplx> psi, const Grid& grid) {
  if (chi.size() != grid.count() || psi.size() != grid.count())
    throw InputError("dilation_hermiticity_check: sample count does not match grid");
  const auto dpsi = apply_dilation(psi, grid);
  const auto dchi = apply_dilation(chi, grid);
  return std::abs(overlap(chi, dpsi, grid) - overlap(dchi, psi, grid));
}

cplx dilation_expectation(std::span<const cplx> psi, const Grid& grid) {
  const auto dpsi = apply_dilation(psi, grid);
  return overlap(psi, dpsi, grid);
}

double current_density(const TwoComponentWave& wave, double mass, std::size_t at) {
  if (!(mass > 0.0)) throw InputError("current_density: mass must be positive");
  if (at >= wave.grid.count()) throw InputError("current_density: index out of range");
  const std::size_t n = wave.grid.count();
  const double h = wave.grid.dx();
  auto deriv = [&](const std::vector<cplx>& f) -> cplx {
    if (at == 0) return (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
    if (at == n - 1) return (3.0 * f[n - 1] - 4.0 * f[n - 2] + f[n - 3]) / (2.0 * h);
    return (f[at + 1] - f[at - 1]) / (2.0 * h);
  };
  const cplx de = deriv(wave.even);
  const cplx dodd = deriv(wave.odd);
  const cplx bracket = std::conj(wave.even[at]) * de - std::conj(de) * wave.even[at] +
                       std::conj(wave.odd[at]) * dodd - std::conj(dodd) * wave.odd[at];
  return (bracket / (2.0 * mass * kI)).real();
}

}  // namespace halfline
}  // namespace sadj
