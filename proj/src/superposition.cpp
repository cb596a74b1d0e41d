#include "sadj/superposition.hpp"

#include <algorithm>
#include <cmath>

#include "sadj/errors.hpp"

namespace sadj {

MomentumSuperposition::MomentumSuperposition(cplx sigma, double scale, std::vector<MomentumComponent> components)
    : sigma_(sigma), scale_(scale), components_(std::move(components)) {
  if (std::abs(std::abs(sigma_) - 1.0) > 1e-12)
    throw RepresentationError("MomentumSuperposition: sigma must have unit modulus");
  if (components_.empty()) throw RepresentationError("MomentumSuperposition: no components");
  for (const auto& c : components_)
    if (!std::isfinite(c.k) || !std::isfinite(std::abs(c.coeff)))
      throw RepresentationError("MomentumSuperposition: non-finite component");
}

Spinor MomentumSuperposition::value(double x) const {
  Spinor out{};
  for (const auto& c : components_) {
    const cplx fwd = std::polar(1.0, c.k * x);
    const cplx bwd = sigma_ * std::conj(fwd);
    out[0] += c.coeff * (fwd + bwd);
    out[1] += c.coeff * (fwd - bwd);
  }
  out[0] *= scale_;
  out[1] *= scale_;
  return out;
}

Spinor MomentumSuperposition::derivative(double x) const {
  const cplx i(0.0, 1.0);
  Spinor out{};
  for (const auto& c : components_) {
    const cplx fwd = i * c.k * std::polar(1.0, c.k * x);
    const cplx bwd = -i * c.k * sigma_ * std::polar(1.0, -c.k * x);
    out[0] += c.coeff * (fwd + bwd);
    out[1] += c.coeff * (fwd - bwd);
  }
  out[0] *= scale_;
  out[1] *= scale_;
  return out;
}

MomentumSuperposition MomentumSuperposition::shifted(double q) const {
  auto comps = components_;
  for (auto& c : comps) c.k += q;
  return {sigma_, scale_, std::move(comps)};
}

MomentumSuperposition MomentumSuperposition::translated(double a) const {
  auto comps = components_;
  for (auto& c : comps) c.coeff *= std::polar(1.0, c.k * a);
  return {sigma_, scale_, std::move(comps)};
}

MomentumSuperposition MomentumSuperposition::momentum_applied() const {
  auto comps = components_;
  for (auto& c : comps) c.coeff *= c.k;
  return {sigma_, scale_, std::move(comps)};
}

MomentumSuperposition MomentumSuperposition::scaled(cplx factor) const {
  auto comps = components_;
  for (auto& c : comps) c.coeff *= factor;
  return {sigma_, scale_, std::move(comps)};
}

SpinorField MomentumSuperposition::field() const {
  return [self = *this](double x) { return self.value(x); };
}

Spinor vtilde_matrix_apply(double q, double x, const Spinor& s) {
  const double c = std::cos(q * x);
  const cplx is(0.0, std::sin(q * x));
  return {c * s[0] + is * s[1], is * s[0] + c * s[1]};
}

double max_deviation(const SpinorField& lhs, const SpinorField& rhs, const std::vector<double>& xs) {
  double worst = 0.0;
  for (const double x : xs) {
    const Spinor l = lhs(x);
    const Spinor r = rhs(x);
    worst = std::max({worst, std::abs(l[0] - r[0]), std::abs(l[1] - r[1])});
  }
  return worst;
}

}  // namespace sadj
