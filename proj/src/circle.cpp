#include "sadj/circle.hpp"

#include <algorithm>
#include <cmath>

#include "sadj/errors.hpp"

namespace sadj {

namespace {
const cplx kI(0.0, 1.0);
const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * kPi);
}  // namespace

void CircleParams::validate() const {
  if (!std::isfinite(theta) || theta < 0.0 || theta >= 2.0 * kPi)
    throw InputError("CircleParams: theta must lie in [0, 2 pi)");
  if (charge_flux) {
    if (!std::isfinite(*charge_flux)) throw InputError("CircleParams: flux must be finite");
    double r = std::remainder(*charge_flux - theta, 2.0 * kPi);
    if (std::abs(r) > 1e-12) throw InputError("CircleParams: theta and e Phi disagree mod 2 pi");
  }
}

namespace circle {

double normalize_angle(double phi) {
  if (!std::isfinite(phi)) throw InputError("normalize_angle: angle must be finite");
  double r = std::fmod(phi + kPi, 2.0 * kPi);
  if (r < 0.0) r += 2.0 * kPi;
  r -= kPi;
  if (r >= kPi) r -= 2.0 * kPi;
  return r;
}

double angular_eigenvalue(const CircleParams& c, int n) {
  c.validate();
  return static_cast<double>(n) + c.theta / (2.0 * kPi);
}

cplx angular_eigenfunction(const CircleParams& c, int n, double phi) {
  if (phi < -kPi - 1e-12 || phi > kPi + 1e-12) throw DomainError("angular_eigenfunction: phi outside [-pi, pi]");
  return kInvSqrt2Pi * std::polar(1.0, angular_eigenvalue(c, n) * phi);
}

AngleLabel u_alpha_action(const CircleParams& c, double alpha, double phi) {
  c.validate();
  if (!(alpha >= -kPi && alpha < kPi)) throw InputError("u_alpha_action: alpha must lie in [-pi, pi)");
  if (!(phi >= -kPi && phi < kPi)) throw DomainError("u_alpha_action: phi must lie in [-pi, pi)");
  const double t = phi - alpha;
  if (t < -kPi) return {t + 2.0 * kPi, std::polar(1.0, c.theta)};
  if (t >= kPi) return {t - 2.0 * kPi, std::polar(1.0, -c.theta)};
  return {t, {1.0, 0.0}};
}

CircleParams from_interval(const IntervalParams& p) {
  CircleParams c;
  c.theta = interval::theta_from_lambdas(p);
  return c;
}

AngleLabel map_interval_to_circle(const IntervalParams& p, const StateLabel& state) {
  p.validate();
  if (state.x < 0.0 || state.x > p.length) throw DomainError("map_interval_to_circle: x outside [0, L]");
  const double theta = interval::theta_from_lambdas(p);
  const double phi = kPi * state.x / p.length;
  if (state.sign == Sector::Minus) return {-phi, state.phase * std::conj(p.lambda0.sigma())};
  // |pi> = e^{-i theta} |-pi> under the twisted identification.
  if (phi >= kPi) return {phi - 2.0 * kPi, state.phase * std::polar(1.0, -theta)};
  return {phi, state.phase};
}

cplx flux_gauge_multiplier(const CircleParams& c, double phi) {
  c.validate();
  return std::polar(1.0, c.theta * phi / (2.0 * kPi));
}

AngularSuperposition::AngularSuperposition(CircleParams c, std::vector<std::pair<int, cplx>> coeffs)
    : params_(c), coeffs_(std::move(coeffs)) {
  params_.validate();
  if (coeffs_.empty()) throw RepresentationError("AngularSuperposition: no components");
  for (const auto& [n, v] : coeffs_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw RepresentationError("AngularSuperposition: non-finite coefficient");
}

cplx AngularSuperposition::value(double phi) const {
  // Reduce to [-pi, pi) and restore the twist picked up on the way.
  const double base = normalize_angle(phi);
  const double windings = std::round((phi - base) / (2.0 * kPi));
  cplx acc{};
  for (const auto& [n, v] : coeffs_) acc += v * angular_eigenfunction(params_, n, base);
  return acc * std::polar(1.0, windings * params_.theta);
}

AngularSuperposition AngularSuperposition::raised() const {
  auto out = coeffs_;
  for (auto& [n, v] : out) ++n;
  return AngularSuperposition(params_, std::move(out));
}

AngularSuperposition AngularSuperposition::angular_applied() const {
  auto out = coeffs_;
  for (auto& [n, v] : out) v *= angular_eigenvalue(params_, n);
  return AngularSuperposition(params_, std::move(out));
}

double weyl_check(double alpha, std::span<const AngularSuperposition> samples, const std::vector<double>& phis) {
  if (samples.empty()) throw RepresentationError("weyl_check: no sample states");
  if (!(alpha >= -kPi && alpha < kPi)) throw InputError("weyl_check: alpha must lie in [-pi, pi)");
  const cplx phase = std::polar(1.0, alpha);
  double worst = 0.0;
  for (const auto& psi : samples) {
    const AngularSuperposition up = psi.raised();
    // (U_alpha f)(phi) = f(phi + alpha) on the twisted continuation; U~ raises n.
    for (const double phi : phis) {
      const cplx lhs = up.value(phi + alpha);
      const cplx rhs = phase * std::polar(1.0, phi) * psi.value(phi + alpha);
      worst = std::max(worst, std::abs(lhs - rhs));
      // Spectral cross-check: U_alpha |n> = e^{i nu_n alpha} |n>.
      cplx spectral{};
      for (const auto& [n, v] : up.coeffs())
        spectral += v * std::polar(1.0, angular_eigenvalue(psi.params(), n) * alpha) *
                    angular_eigenfunction(psi.params(), n, normalize_angle(phi));
      const double base = normalize_angle(phi);
      const cplx direct = std::polar(1.0, base + alpha) * psi.value(base + alpha);
      worst = std::max(worst, std::abs(spectral - direct));
    }
  }
  return worst;
}

double commutator_check(std::span<const AngularSuperposition> samples, const std::vector<double>& phis) {
  if (samples.empty()) throw RepresentationError("commutator_check: no sample states");
  double worst = 0.0;
  for (const auto& psi : samples) {
    const AngularSuperposition lu = psi.raised().angular_applied();
    const AngularSuperposition lpsi = psi.angular_applied();
    for (const double phi : phis) {
      const double base = normalize_angle(phi);
      const cplx u = std::polar(1.0, base);
      const cplx lhs = lu.value(base) - u * lpsi.value(base);
      const cplx rhs = u * psi.value(base);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  return worst;
}

}  // namespace circle
}  // namespace sadj
