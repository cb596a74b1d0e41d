#include "sadj/interval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "sadj/errors.hpp"
#include "sadj/random.hpp"

namespace sadj {

namespace {
constexpr double kInvSqrt2 = 0.70710678118654752440;
const cplx kI(0.0, 1.0);

bool is_finite(double v) { return std::isfinite(v); }

std::size_t odd_count(std::size_t n) { return n % 2 == 1 ? n : n + 1; }
}  // namespace

void IntervalParams::validate() const {
  if (!(length > 0.0) || !is_finite(length)) throw InputError("IntervalParams: length must be positive");
  if (!(mass > 0.0) || !is_finite(mass)) throw InputError("IntervalParams: mass must be positive");
  if (!is_finite(lambda0.beta()) || !is_finite(lambdaL.beta()))
    throw InputError("IntervalParams: lambda must be finite");
}

BoundaryKind BoundaryKind::robin(double g0, double gL) {
  if (!is_finite(g0) || !is_finite(gL)) throw InputError("BoundaryKind: Robin parameters must be finite");
  return {Kind::Robin, g0, gL};
}

void GeneralBoundary::validate() const {
  if (!is_finite(eta) || !is_finite(a) || !is_finite(b) || !is_finite(c) || !is_finite(d))
    throw InputError("GeneralBoundary: parameters must be finite");
  if (std::abs(a * d - b * c + 1.0) > 1e-12) throw InputError("GeneralBoundary: a d - b c must equal -1");
}

Robin GeneralBoundary::embedded_robin() const {
  validate();
  if (std::abs(std::polar(1.0, eta) - 1.0) > 1e-12 || std::abs(a - 1.0) > 1e-12 || std::abs(b) > 1e-12 ||
      std::abs(d + 1.0) > 1e-12)
    throw InputError("GeneralBoundary: only e^{i eta} = 1, a = 1, b = 0, d = -1 embeds a Robin Hamiltonian");
  return Robin(-c / 2.0);
}

double MeasurementDistribution::sum() const {
  double s = 0.0;
  for (const auto& e : entries) s += e.probability;
  return s;
}

double GaugeField::line_integral(double length) const {
  return charge_times_a * length - (profile(length) - profile(0.0));
}

namespace interval {

double theta_from_lambdas(const IntervalParams& p) {
  p.validate();
  double th = std::arg(p.lambda0.sigma() * std::conj(p.lambdaL.sigma()));
  if (th < 0.0) th += 2.0 * kPi;
  if (th >= 2.0 * kPi) th -= 2.0 * kPi;
  return th;
}

IntervalParams params_for_theta(double length, double theta, double mass) {
  if (!(theta >= 0.0 && theta < 2.0 * kPi)) throw InputError("params_for_theta: theta must lie in [0, 2 pi)");
  IntervalParams p;
  p.length = length;
  p.mass = mass;
  p.lambda0 = ExtensionLambda(-std::tan(theta / 4.0));
  p.lambdaL = ExtensionLambda(std::tan(theta / 4.0));
  p.validate();
  return p;
}

double momentum_value(const IntervalParams& p, int n) {
  const double theta = theta_from_lambdas(p);
  return kPi / p.length * (static_cast<double>(n) + theta / (2.0 * kPi));
}

std::vector<std::pair<int, double>> momentum_spectrum(const IntervalParams& p, int nmin, int nmax) {
  if (nmax < nmin) throw InputError("momentum_spectrum: empty range");
  const double theta = theta_from_lambdas(p);
  std::vector<std::pair<int, double>> out;
  out.reserve(static_cast<std::size_t>(nmax - nmin) + 1);
  for (int n = nmin; n <= nmax; ++n)
    out.emplace_back(n, kPi / p.length * (static_cast<double>(n) + theta / (2.0 * kPi)));
  return out;
}

Spinor momentum_eigenfunction(const IntervalParams& p, int n, double x) {
  const double tol = 1e-12 * p.length;
  if (x < -tol || x > p.length + tol) throw DomainError("momentum_eigenfunction: x outside [0, L]");
  const double k = momentum_value(p, n);
  const double scale = 0.5 / std::sqrt(p.length);
  const cplx fwd = std::polar(1.0, k * x);
  const cplx bwd = p.lambda0.sigma() * std::conj(fwd);
  return {scale * (fwd + bwd), scale * (fwd - bwd)};
}

MomentumSuperposition superposition(const IntervalParams& p, const std::vector<std::pair<int, cplx>>& coeffs) {
  std::vector<MomentumComponent> comps;
  comps.reserve(coeffs.size());
  for (const auto& [n, c] : coeffs) comps.push_back({momentum_value(p, n), c});
  return MomentumSuperposition(p.lambda0.sigma(), 0.5 / std::sqrt(p.length), std::move(comps));
}

// ---------------------------------------------------------------------------
// Energy eigenstates

namespace {

double shape_c(bool bound, double k, double x) { return bound ? std::cosh(k * x) : std::cos(k * x); }

double shape_s(bool bound, double k, double x) {
  if (k == 0.0) return x;
  return bound ? std::sinh(k * x) / k : std::sin(k * x) / k;
}

double shape_dc(bool bound, double k, double x) { return bound ? k * std::sinh(k * x) : -k * std::sin(k * x); }
double shape_ds(bool bound, double k, double x) { return bound ? std::cosh(k * x) : std::cos(k * x); }

}  // namespace

double EnergyEigenstate::value(double x) const {
  return norm * (cos_coeff * shape_c(bound, wavenumber, x) + sin_coeff * shape_s(bound, wavenumber, x));
}

double EnergyEigenstate::derivative(double x) const {
  return norm * (cos_coeff * shape_dc(bound, wavenumber, x) + sin_coeff * shape_ds(bound, wavenumber, x));
}

std::vector<std::pair<double, bool>> robin_wavenumbers(double length, double gamma0, double gammaL, int count) {
  if (!(length > 0.0)) throw InputError("robin_wavenumbers: length must be positive");
  if (!is_finite(gamma0) || !is_finite(gammaL)) throw InputError("robin_wavenumbers: gammas must be finite");
  std::vector<std::pair<double, bool>> out;
  if (count <= 0) return out;
  const double L = length;
  const double g0 = gamma0, gL = gammaL;
  const double zero_det = g0 + gL + g0 * gL * L;
  const double scale = std::abs(g0) + std::abs(gL) + std::abs(g0 * gL) * L + 1.0 / L;
  const bool zero_mode = std::abs(zero_det) <= 1e-12 * scale;

  // Bound states: roots of B(q)/(q e^{qL}), which stays finite on (0, inf).
  auto bound_det = [=](double q) {
    const double e = std::exp(-2.0 * q * L);
    return ((g0 + gL) * (1.0 + e) / 2.0 + (g0 * gL + q * q) * (1.0 - e) / (2.0 * q));
  };
  std::vector<double> bound;
  if (g0 < 0.0 || gL < 0.0) {
    const double qmax = 2.0 * std::max(std::abs(g0), std::abs(gL)) + 10.0 / L;
    const int steps = 20000;
    const double h = qmax / steps;
    double qa = zero_mode ? h * 0.25 : 1e-9 * h;
    double fa = bound_det(qa);
    for (int j = 1; j <= steps; ++j) {
      const double qb = h * j;
      const double fb = bound_det(qb);
      if (fa == 0.0) {
        bound.push_back(qa);
      } else if (fa * fb < 0.0) {
        bound.push_back(find_root(bound_det, qa, qb, 1e-15 * scale));
      }
      qa = qb;
      fa = fb;
    }
  }
  std::sort(bound.begin(), bound.end(), std::greater<>());
  for (double q : bound) out.emplace_back(q, true);
  if (zero_mode) out.emplace_back(0.0, false);

  // Scattering-like states: roots of (g0 + gL) cos kL + (g0 gL / k - k) sin kL on k > 0.
  auto det = [=](double k) { return (g0 + gL) * std::cos(k * L) + (g0 * gL / k - k) * std::sin(k * L); };
  const double feature = std::max({std::abs(g0), std::abs(gL), 1.0 / L});
  const double h = std::min(kPi / (64.0 * L), 0.05 / feature);
  double ka = zero_mode ? 0.25 * h : 1e-9 * h;
  double fa = det(ka);
  std::size_t guard = 0;
  while (static_cast<int>(out.size()) < count) {
    const double kb = ka + h;
    const double fb = det(kb);
    if (fa == 0.0) {
      out.emplace_back(ka, false);
    } else if (fa * fb < 0.0) {
      out.emplace_back(find_root(det, ka, kb, 1e-14 * (1.0 + kb) * scale), false);
    }
    ka = kb;
    fa = fb;
    if (++guard > 100000000) throw BracketError("robin_wavenumbers: root scan did not terminate");
  }
  out.resize(static_cast<std::size_t>(count));
  return out;
}

EnergyEigenstate energy_eigenstate(const IntervalParams& p, const BoundaryKind& bc, int level, const Grid& grid) {
  p.validate();
  const double L = p.length;
  EnergyEigenstate st{level, 0.0, 0.0, false,
                      TwoComponentWave(Grid(0.0, 1.0, 2), {cplx{}, cplx{}}, {cplx{}, cplx{}}), 1.0, 1.0, 0.0};
  switch (bc.kind) {
    case BoundaryKind::Kind::Neumann:
      if (level < 0) throw InputError("energy_eigenstate: Neumann level must be >= 0");
      st.wavenumber = kPi * level / L;
      st.norm = level == 0 ? 1.0 / std::sqrt(L) : std::sqrt(2.0 / L);
      break;
    case BoundaryKind::Kind::Dirichlet:
      if (level < 1) throw InputError("energy_eigenstate: Dirichlet level must be >= 1");
      st.wavenumber = kPi * level / L;
      st.norm = std::sqrt(2.0 / L);
      st.cos_coeff = 0.0;
      st.sin_coeff = st.wavenumber;
      break;
    case BoundaryKind::Kind::Robin: {
      if (level < 0) throw InputError("energy_eigenstate: Robin level must be >= 0");
      const auto ks = robin_wavenumbers(L, bc.gamma0, bc.gammaL, level + 1);
      st.wavenumber = ks.back().first;
      st.bound = ks.back().second;
      st.cos_coeff = 1.0;
      st.sin_coeff = bc.gamma0;
      // Normalize on a grid fine enough for the oscillation or decay scale.
      const std::size_t pts = odd_count(std::max<std::size_t>(
          20001, static_cast<std::size_t>(64.0 * st.wavenumber * L / kPi) * 16));
      st.norm = 1.0;
      const Grid g = Grid::span(0.0, L, pts);
      std::vector<double> sq(pts);
      for (std::size_t j = 0; j < pts; ++j) {
        const double v = st.value(g[j]);
        sq[j] = v * v;
      }
      st.norm = 1.0 / std::sqrt(integrate(std::span<const double>(sq), g));
      break;
    }
  }
  const double k = st.wavenumber;
  st.energy = (st.bound ? -1.0 : 1.0) * k * k / (2.0 * p.mass);

  std::vector<cplx> comp(grid.count());
  for (std::size_t j = 0; j < comp.size(); ++j) comp[j] = kInvSqrt2 * st.value(grid[j]);
  st.wave = TwoComponentWave(grid, comp, comp);
  return st;
}

EnergyEigenstate energy_eigenstate(const IntervalParams& p, const BoundaryKind& bc, int level) {
  return energy_eigenstate(p, bc, level, Grid::span(0.0, p.length, 2001));
}

// ---------------------------------------------------------------------------
// Measurement probabilities

namespace {

bool parity_allowed(int level, int n) { return ((n + level) % 2 + 2) % 2 == 1; }

void require_closed_form(const BoundaryKind& bc, int level) {
  if (bc.kind == BoundaryKind::Kind::Robin) throw InputError("closed form available only for Neumann/Dirichlet");
  if (bc.kind == BoundaryKind::Kind::Neumann && level < 0) throw InputError("Neumann level must be >= 0");
  if (bc.kind == BoundaryKind::Kind::Dirichlet && level < 1) throw InputError("Dirichlet level must be >= 1");
}

// sum over n = m, m+2, ... of (1/(n-l) + sign/(n+l))^2 for m > l with n - l odd.
double core_tail(int level, int m, double sign) {
  const double l = level;
  const double a = m - l;
  const double b = m + l;
  double cross = 0.0;
  for (int j = 0; j < level; ++j) cross += 1.0 / (a + 2.0 * j);
  return 0.25 * trigamma(a / 2.0) + 0.25 * trigamma(b / 2.0) + sign * cross / l;
}

// sum_{n >= n0} k_n^2 P(n) / (pi/L)^2 for Dirichlet, i.e. n^2 P(n).
double dirichlet_n2_upper_tail(int level, int n0) {
  double s = 0.0;
  int n = n0;
  for (; n <= level; ++n) s += static_cast<double>(n) * n * closed_form_probability(BoundaryKind::dirichlet(), level, n);
  if (!parity_allowed(level, n)) ++n;
  return s + static_cast<double>(level) * level / (kPi * kPi) * core_tail(level, n, 1.0);
}

}  // namespace

double closed_form_probability(const BoundaryKind& bc, int level, int n) {
  require_closed_form(bc, level);
  const double pi2 = kPi * kPi;
  if (bc.kind == BoundaryKind::Kind::Neumann && level == 0) {
    if (n == 0) return 0.5;
    if (n % 2 != 0) return 2.0 / (pi2 * n * n);
    return 0.0;
  }
  if (n == level || n == -level) return 0.25;
  if (!parity_allowed(level, n)) return 0.0;
  const double l = level;
  const double d = l * l - static_cast<double>(n) * n;
  const double num = bc.kind == BoundaryKind::Kind::Neumann ? 4.0 * n * n : 4.0 * l * l;
  return num / (pi2 * d * d);
}

double closed_form_upper_tail(const BoundaryKind& bc, int level, int n0) {
  require_closed_form(bc, level);
  double s = 0.0;
  int n = n0;
  for (; n <= level; ++n) s += closed_form_probability(bc, level, n);
  if (!parity_allowed(level, n)) ++n;
  if (level == 0) return s + 2.0 / (kPi * kPi) * 0.25 * trigamma(n / 2.0);
  const double sign = bc.kind == BoundaryKind::Kind::Neumann ? 1.0 : -1.0;
  return s + core_tail(level, n, sign) / (kPi * kPi);
}

cplx overlap_by_quadrature(const IntervalParams& p, const BoundaryKind& bc, int level, int n, std::size_t points) {
  if (points < 3) throw InputError("overlap_by_quadrature: too few points");
  const Grid g = Grid::span(0.0, p.length, odd_count(points));
  const EnergyEigenstate st = energy_eigenstate(p, bc, level, Grid(0.0, p.length, 2));
  const double k = momentum_value(p, n);
  std::vector<cplx> f(g.count());
  for (std::size_t j = 0; j < f.size(); ++j) f[j] = std::polar(1.0, -k * g[j]) * st.value(g[j]);
  // <phi_k|Psi+> collapses to (1/sqrt(2L)) int e^{-ikx} psi(x) dx; the sigma terms cancel.
  return integrate(f, g) / std::sqrt(2.0 * p.length);
}

namespace {

// Tail estimate beyond the last entry of one side of the table. For each parity
// class of n, k^2 P is fitted over the outer half as a polynomial in 1/k (the
// two classes carry different envelopes), and the fitted envelope is summed on
// the continuation of the k ladder.
double envelope_tail(const std::vector<MeasurementEntry>& side, double spacing) {
  if (side.empty()) return 0.0;
  const double kmax = std::abs(side.back().k);
  constexpr int kTerms = 5;
  double total = 0.0;
  for (int parity = 0; parity < 2; ++parity) {
    std::vector<std::pair<double, double>> pts;
    double last = 0.0;
    for (const auto& e : side) {
      if (std::abs(e.n) % 2 != parity) continue;
      const double ak = std::abs(e.k);
      last = std::max(last, ak);
      if (ak >= 0.5 * kmax && ak > 0.0) pts.emplace_back(ak, e.probability * ak * ak);
    }
    if (pts.size() < 2 * kTerms) continue;
    Eigen::MatrixXd design(static_cast<Eigen::Index>(pts.size()), kTerms);
    Eigen::VectorXd rhs(static_cast<Eigen::Index>(pts.size()));
    for (std::size_t j = 0; j < pts.size(); ++j) {
      const auto r = static_cast<Eigen::Index>(j);
      // Columns scaled by kmax so the system stays well conditioned.
      for (int c = 0; c < kTerms; ++c) design(r, c) = std::pow(kmax / pts[j].first, c);
      rhs(r) = pts[j].second;
    }
    const Eigen::VectorXd a = design.colPivHouseholderQr().solve(rhs);
    auto envelope = [&](double k) {
      double v = 0.0;
      for (int c = kTerms - 1; c >= 0; --c) v = v * (kmax / k) + a(c);
      return std::max(0.0, v) / (k * k);
    };
    const double step = 2.0 * spacing;
    double k = last + step;
    for (int j = 0; j < 200000; ++j, k += step) total += envelope(k);
    // Remainder of the leading 1/k^2 term.
    total += std::max(0.0, a(0)) / (step * (k - 0.5 * step));
  }
  return total;
}

}  // namespace

MeasurementDistribution measurement_distribution(const IntervalParams& p, const BoundaryKind& bc, int level,
                                                 int nmin, int nmax) {
  p.validate();
  if (nmax < nmin) throw InputError("measurement_distribution: empty range");
  const double theta = theta_from_lambdas(p);
  MeasurementDistribution dist;
  dist.bc = bc;
  dist.level = level;
  dist.length = p.length;
  dist.theta = theta;
  const bool closed = bc.kind != BoundaryKind::Kind::Robin && theta == 0.0;
  dist.closed_form = closed;
  const auto spectrum = momentum_spectrum(p, nmin, nmax);
  dist.entries.reserve(spectrum.size());

  if (closed) {
    for (const auto& [n, k] : spectrum) dist.entries.push_back({n, k, closed_form_probability(bc, level, n)});
    dist.tail_bound = closed_form_upper_tail(bc, level, nmax + 1) + closed_form_upper_tail(bc, level, 1 - nmin);
    return dist;
  }

  // Quadrature: psi sampled once, e^{-ikx} by rotation with periodic reseeding.
  const EnergyEigenstate st = energy_eigenstate(p, bc, level, Grid(0.0, p.length, 2));
  double kmax = st.wavenumber;
  for (const auto& [n, k] : spectrum) kmax = std::max(kmax, std::abs(k));
  const std::size_t pts = odd_count(std::max<std::size_t>(4001, static_cast<std::size_t>(kmax * p.length / kPi * 400.0)));
  const Grid g = Grid::span(0.0, p.length, pts);
  std::vector<double> psi(pts);
  for (std::size_t j = 0; j < pts; ++j) psi[j] = st.value(g[j]);
  const double pref = 1.0 / std::sqrt(2.0 * p.length);
  std::vector<cplx> f(pts);
  for (const auto& [n, k] : spectrum) {
    const cplx step = std::polar(1.0, -k * g.dx());
    cplx rot(1.0, 0.0);
    for (std::size_t j = 0; j < pts; ++j) {
      if (j % 256 == 0) rot = std::polar(1.0, -k * g[j]);
      f[j] = rot * psi[j];
      rot *= step;
    }
    const double amp = std::abs(pref * integrate(f, g));
    dist.entries.push_back({n, k, amp * amp});
  }
  std::vector<MeasurementEntry> upper, lower;
  for (const auto& e : dist.entries) {
    if (e.n > 0) upper.push_back(e);
    if (e.n < 0) lower.insert(lower.begin(), e);
  }
  dist.tail_bound = envelope_tail(upper, kPi / p.length) + envelope_tail(lower, kPi / p.length);
  return dist;
}

SecondMoment second_moment(const MeasurementDistribution& dist, bool closed_form_tail) {
  if (dist.entries.empty()) throw InputError("second_moment: empty distribution");
  const int nmin = dist.entries.front().n;
  const int nmax = dist.entries.back().n;
  if (nmin != -nmax) throw InputError("second_moment: range must be symmetric about n = 0");
  // Partial sums S(N) over |n| <= N.
  std::vector<double> partial(static_cast<std::size_t>(nmax) + 1, 0.0);
  for (const auto& e : dist.entries) partial[static_cast<std::size_t>(std::abs(e.n))] += e.k * e.k * e.probability;
  for (std::size_t j = 1; j < partial.size(); ++j) partial[j] += partial[j - 1];

  SecondMoment out;
  out.value = partial.back();
  const int half = nmax / 2;
  if (nmax > half) out.growth_rate = (partial.back() - partial[static_cast<std::size_t>(half)]) / (nmax - half);
  // A nonzero boundary value gives P ~ 1/n^2, so k^2 P does not decay.
  out.divergent = dist.bc.kind != BoundaryKind::Kind::Dirichlet;
  if (closed_form_tail && !out.divergent && dist.closed_form) {
    const double scale = kPi * kPi / (dist.length * dist.length);
    out.value += scale * 2.0 * dirichlet_n2_upper_tail(dist.level, nmax + 1);
  }
  return out;
}

double first_moment(const MeasurementDistribution& dist) {
  double s = 0.0;
  for (const auto& e : dist.entries) s += e.k * e.probability;
  return s;
}

// ---------------------------------------------------------------------------
// Translations along the unfolded interval

StateLabel va_action(const IntervalParams& p, double a, const StateLabel& state) {
  const double L = p.length;
  if (!(a >= -L && a < L)) throw InputError("va_action: a must lie in [-L, L)");
  if (state.x < 0.0 || state.x > L) throw DomainError("va_action: x outside [0, L]");
  const cplx s0 = p.lambda0.sigma();
  const cplx sL = p.lambdaL.sigma();
  const double x = state.x;
  if (state.sign == Sector::Plus) {
    const double t = x - a;
    if (t > L) return {2.0 * L - x + a, Sector::Minus, state.phase * sL};
    if (t >= 0.0) return {t, Sector::Plus, state.phase};
    return {a - x, Sector::Minus, state.phase * s0};
  }
  const double t = -x - a;
  if (t < -L) return {2.0 * L - x - a, Sector::Plus, state.phase * std::conj(sL)};
  if (t <= 0.0) return {x + a, Sector::Minus, state.phase};
  return {-x - a, Sector::Plus, state.phase * std::conj(s0)};
}

SpinorField va_apply_field(const IntervalParams& p, double a, SpinorField field) {
  if (a == 0.0) return field;  // V_0 is the identity; skip the fold round trip
  const double L = p.length;
  const cplx sigma = p.lambda0.sigma();
  const cplx twist = sigma * std::conj(p.lambdaL.sigma());
  auto unfolded = [=](double t) -> cplx {
    cplx phase(1.0, 0.0);
    while (t >= L) {
      t -= 2.0 * L;
      phase *= twist;
    }
    while (t < -L) {
      t += 2.0 * L;
      phase *= std::conj(twist);
    }
    if (t >= 0.0) {
      const Spinor s = field(t);
      return phase * kInvSqrt2 * (s[0] + s[1]);
    }
    const Spinor s = field(-t);
    return phase * std::conj(sigma) * kInvSqrt2 * (s[0] - s[1]);
  };
  return [a, sigma, unfolded](double y) -> Spinor {
    const cplx plus = unfolded(y + a);
    const cplx minus = sigma * unfolded(-y + a);
    return {kInvSqrt2 * (plus + minus), kInvSqrt2 * (plus - minus)};
  };
}

CommutatorReport commutator_check(const IntervalParams& p, double a, std::span<const MomentumSuperposition> samples,
                                  const std::vector<double>& xs) {
  p.validate();
  if (samples.empty()) throw RepresentationError("commutator_check: no sample states");
  for (const double x : xs)
    if (x < 0.0 || x > p.length) throw DomainError("commutator_check: evaluation point outside [0, L]");
  const double q = kPi / p.length;
  const cplx weyl_phase = std::polar(1.0, q * a);
  const double spacing_tol = 1e-9;
  CommutatorReport rep;
  for (const auto& psi : samples) {
    if (std::abs(psi.sigma() - p.lambda0.sigma()) > 1e-12)
      throw RepresentationError("commutator_check: sample built for a different boundary phase");
    for (const auto& c : psi.components()) {
      const double frac = c.k / q - theta_from_lambdas(p) / (2.0 * kPi);
      if (std::abs(frac - std::round(frac)) > spacing_tol)
        throw RepresentationError("commutator_check: sample contains an unquantized momentum");
    }
    const MomentumSuperposition ppsi = psi.momentum_applied();
    for (const double sign : {1.0, -1.0}) {
      const double qq = sign * q;
      // Spectral route: Vt shifts every k_n to k_{n +- 1}.
      const MomentumSuperposition vpsi = psi.shifted(qq);
      const MomentumSuperposition pvpsi = vpsi.momentum_applied();
      double worst = 0.0;
      for (const double x : xs) {
        const Spinor pv = pvpsi.value(x);
        const Spinor vp = vtilde_matrix_apply(qq, x, ppsi.value(x));
        const Spinor v = vtilde_matrix_apply(qq, x, psi.value(x));
        const Spinor vs = vpsi.value(x);
        // Position-space route: p_R (M psi) = -i sigma_1 (M' psi + M psi') with M' = i q sigma_1 M.
        const Spinor d = psi.derivative(x);
        const Spinor md = vtilde_matrix_apply(qq, x, d);
        const Spinor mpsi = v;
        const Spinor deriv{kI * qq * mpsi[1] + md[0], kI * qq * mpsi[0] + md[1]};
        const Spinor pv_pos{-kI * deriv[1], -kI * deriv[0]};
        for (int c = 0; c < 2; ++c) {
          worst = std::max(worst, std::abs(pv[c] - vp[c] - qq * v[c]));
          worst = std::max(worst, std::abs(pv_pos[c] - vp[c] - qq * v[c]));
          worst = std::max(worst, std::abs(vs[c] - v[c]));
        }
      }
      if (sign > 0.0)
        rep.commutator = std::max(rep.commutator, worst);
      else
        rep.commutator_dagger = std::max(rep.commutator_dagger, worst);
    }
    const SpinorField vt = [q, f = psi.field()](double x) { return vtilde_matrix_apply(q, x, f(x)); };
    const SpinorField lhs = va_apply_field(p, a, vt);
    const SpinorField shifted = va_apply_field(p, a, psi.field());
    const SpinorField rhs = [q, weyl_phase, shifted](double x) {
      const Spinor s = vtilde_matrix_apply(q, x, shifted(x));
      return Spinor{weyl_phase * s[0], weyl_phase * s[1]};
    };
    rep.weyl = std::max(rep.weyl, max_deviation(lhs, rhs, xs));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Gauge structure

GaugeShift gauge_shift_theta(const IntervalParams& p) {
  const double theta = theta_from_lambdas(p);
  GaugeShift out;
  out.shifted = p;
  // sigma_L' = sigma, so sigma' sigma_L'^* = 1. The removed phase is carried by e A_x.
  out.shifted.lambdaL = p.lambda0;
  out.field.charge_times_a = theta / (2.0 * p.length);
  return out;
}

std::vector<cplx> gauge_apply(std::span<const cplx> psi, const Grid& grid, const std::function<double(double)>& phase) {
  if (psi.size() != grid.count()) throw InputError("gauge_apply: sample count does not match grid");
  std::vector<cplx> out(psi.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = psi[j] * std::polar(1.0, phase(grid[j]));
  return out;
}

GaugeField gauge_transform(const GaugeField& field, const std::function<double(double)>& phase) {
  GaugeField out;
  out.charge_times_a = field.charge_times_a;
  out.phase_profile = [old = field, phase](double x) { return old.profile(x) + phase(x); };
  return out;
}

cplx gauge_string_expectation(std::span<const cplx> psi, const Grid& grid, const GaugeField& field) {
  if (psi.size() != grid.count() || psi.empty())
    throw InputError("gauge_string_expectation: sample count does not match grid");
  if (grid.x0() != 0.0) throw InputError("gauge_string_expectation: grid must start at x = 0");
  return std::conj(psi.front()) * std::polar(1.0, field.line_integral(grid.back())) * psi.back();
}

std::pair<cplx, cplx> covariant_robin_residuals(const EnergyEigenstate& state, const BoundaryKind& bc,
                                                const GaugeField& field, double length) {
  const double ea = field.charge_times_a;
  auto transformed = [&](double x) { return std::polar(1.0, -ea * x) * state.value(x); };
  auto covariant_derivative = [&](double x) {
    const cplx u = std::polar(1.0, -ea * x);
    const cplx d = u * (state.derivative(x) - kI * ea * state.value(x));
    return d + kI * ea * transformed(x);
  };
  switch (bc.kind) {
    case BoundaryKind::Kind::Dirichlet:
      return {transformed(0.0), transformed(length)};
    case BoundaryKind::Kind::Neumann:
      return {-covariant_derivative(0.0), covariant_derivative(length)};
    case BoundaryKind::Kind::Robin:
      break;
  }
  return {bc.gamma0 * transformed(0.0) - covariant_derivative(0.0),
          bc.gammaL * transformed(length) + covariant_derivative(length)};
}

// ---------------------------------------------------------------------------
// Sampling and time evolution

SampleResult sample_measurement(const MeasurementDistribution& dist, std::uint64_t shots, std::uint64_t seed) {
  if (shots == 0) throw InputError("sample_measurement: shots must be positive");
  if (dist.entries.empty()) throw InputError("sample_measurement: empty distribution");
  std::vector<double> cdf(dist.entries.size());
  double acc = 0.0;
  for (std::size_t j = 0; j < cdf.size(); ++j) {
    if (!(dist.entries[j].probability >= 0.0)) throw InputError("sample_measurement: negative probability");
    acc += dist.entries[j].probability;
    cdf[j] = acc;
  }
  if (!(acc > 0.0)) throw InputError("sample_measurement: distribution carries no weight");

  Xoshiro256ss rng(seed);
  SampleResult res;
  res.counts.assign(cdf.size(), 0);
  for (std::uint64_t s = 0; s < shots; ++s) {
    std::size_t idx;
    for (;;) {
      const double u = rng.uniform();
      idx = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
      if (idx < cdf.size()) break;
      ++res.rejected;  // u fell into the tail bucket beyond the table
    }
    ++res.counts[idx];
    res.last_n = dist.entries[idx].n;
    res.last_k = dist.entries[idx].k;
  }
  return res;
}

TwoComponentWave evolve(const IntervalParams& p, const BoundaryKind& bc, const TwoComponentWave& psi0, double t,
                        int max_states) {
  p.validate();
  if (max_states <= 0) throw InputError("evolve: max_states must be positive");
  double scale = 0.0;
  for (const auto& v : psi0.even) scale = std::max(scale, std::abs(v));
  for (std::size_t j = 0; j < psi0.even.size(); ++j)
    if (std::abs(psi0.even[j] - psi0.odd[j]) > 1e-10 * (1.0 + scale))
      throw SectorError("evolve: initial state is not in the P+ sector");

  const int first = bc.kind == BoundaryKind::Kind::Dirichlet ? 1 : 0;
  const double norm2 = psi0.norm_squared();
  double captured = 0.0;
  std::vector<cplx> even = psi0.even;
  for (int l = first; l < first + max_states; ++l) {
    const EnergyEigenstate st = energy_eigenstate(p, bc, l, psi0.grid);
    const cplx c = st.wave.inner(psi0);
    captured += std::norm(c);
    // Psi(t) = Psi0 + sum c_l (e^{-i E_l t} - 1) psi_l keeps t = 0 exact.
    const cplx factor = c * (std::polar(1.0, -st.energy * t) - 1.0);
    if (factor != cplx{})
      for (std::size_t j = 0; j < even.size(); ++j) even[j] += factor * st.wave.even[j];
  }
  const double residual = std::max(0.0, norm2 - captured);
  if (residual > 1e-8 * std::max(1.0, norm2))
    throw TruncationError("evolve: initial state is not captured by the retained eigenstates");
  return TwoComponentWave(psi0.grid, even, even);
}

}  // namespace interval
}  // namespace sadj
