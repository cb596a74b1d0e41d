#include "sadj/numerics.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <numeric>

#include "sadj/errors.hpp"

namespace sadj {

Grid::Grid(double x0, double dx, std::size_t count) : x0_(x0), dx_(dx), count_(count) {
  if (!(dx > 0.0) || !std::isfinite(dx)) throw InputError("Grid: spacing must be positive");
  if (count < 2) throw InputError("Grid: at least two points required");
  if (!std::isfinite(x0)) throw InputError("Grid: origin must be finite");
}

Grid Grid::span(double lo, double hi, std::size_t count) {
  if (count < 2) throw InputError("Grid: at least two points required");
  return Grid(lo, (hi - lo) / static_cast<double>(count - 1), count);
}

std::vector<double> Grid::points() const {
  std::vector<double> xs(count_);
  for (std::size_t j = 0; j < count_; ++j) xs[j] = (*this)[j];
  return xs;
}

namespace {

template <typename T>
T simpson(std::span<const T> f, const Grid& grid) {
  if (f.size() != grid.count()) throw InputError("integrate: sample count does not match grid");
  const std::size_t intervals = f.size() - 1;
  const double h = grid.dx();
  if (intervals == 1) return 0.5 * h * (f[0] + f[1]);

  const std::size_t even = intervals % 2 == 0 ? intervals : intervals - 1;
  T odd_sum{};
  T even_sum{};
  for (std::size_t j = 1; j < even; j += 2) odd_sum += f[j];
  for (std::size_t j = 2; j < even; j += 2) even_sum += f[j];
  T total = (h / 3.0) * (f[0] + 4.0 * odd_sum + 2.0 * even_sum + f[even]);
  if (even != intervals) total += 0.5 * h * (f[even] + f[intervals]);
  return total;
}

// Real symmetric tridiagonal eigenproblem, implicit QL with Wilkinson-type
// shifts. d: diagonal, e[i]: coupling of rows i and i+1 (e[n-1] unused).
// z is row-major n x n and accumulates the rotations (eigenvectors in columns).
void tql_implicit(std::vector<double>& d, std::vector<double>& e, std::vector<double>& z) {
  const int n = static_cast<int>(d.size());
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m = l;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= DBL_EPSILON * dd) break;
      }
      if (m != l) {
        if (iter++ == 64) throw NumericalError("eig_hermitian_tridiagonal: QL iteration did not converge");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0;
        double c = 1.0;
        double p = 0.0;
        int i = m - 1;
        for (; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          for (int k = 0; k < n; ++k) {
            f = z[k * n + i + 1];
            z[k * n + i + 1] = s * z[k * n + i] + c * f;
            z[k * n + i] = c * z[k * n + i] - s * f;
          }
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

}  // namespace

cplx integrate(std::span<const cplx> values, const Grid& grid) { return simpson(values, grid); }

double integrate(std::span<const double> values, const Grid& grid) { return simpson(values, grid); }

std::vector<cplx> sample(const Grid& grid, const std::function<cplx(double)>& f) {
  std::vector<cplx> out(grid.count());
  for (std::size_t j = 0; j < grid.count(); ++j) out[j] = f(grid[j]);
  return out;
}

HermitianTridiagonal::HermitianTridiagonal(std::vector<cplx> diag, std::vector<cplx> upper)
    : diag_(std::move(diag)), upper_(std::move(upper)) {
  if (diag_.empty()) throw InputError("HermitianTridiagonal: empty matrix");
  if (upper_.size() + 1 != diag_.size())
    throw InputError("HermitianTridiagonal: superdiagonal must have length N-1");
  for (auto& v : diag_) {
    if (std::abs(v.imag()) > 1e-12 * (1.0 + std::abs(v.real())))
      throw InvariantError("HermitianTridiagonal: diagonal entries must be real");
    v = cplx(v.real(), 0.0);
  }
}

cplx HermitianTridiagonal::at(std::size_t row, std::size_t col) const {
  if (row == col) return diag_[row];
  if (col == row + 1) return upper_[row];
  if (row == col + 1) return std::conj(upper_[col]);
  return {};
}

double HermitianTridiagonal::norm_inf() const {
  double best = 0.0;
  const std::size_t n = size();
  for (std::size_t i = 0; i < n; ++i) {
    double row = std::abs(diag_[i]);
    if (i > 0) row += std::abs(upper_[i - 1]);
    if (i + 1 < n) row += std::abs(upper_[i]);
    best = std::max(best, row);
  }
  return best;
}

std::vector<cplx> HermitianTridiagonal::apply(std::span<const cplx> v) const {
  const std::size_t n = size();
  if (v.size() != n) throw InputError("HermitianTridiagonal::apply: dimension mismatch");
  std::vector<cplx> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    cplx acc = diag_[i] * v[i];
    if (i > 0) acc += std::conj(upper_[i - 1]) * v[i - 1];
    if (i + 1 < n) acc += upper_[i] * v[i + 1];
    out[i] = acc;
  }
  return out;
}

TridiagonalEigen eig_hermitian_tridiagonal(const HermitianTridiagonal& m) {
  const std::size_t n = m.size();

  // D = diag(phase), D^* M D has real non-negative off-diagonals.
  std::vector<cplx> phase(n, cplx(1.0, 0.0));
  std::vector<double> d(n), e(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) d[j] = m.diag()[j].real();
  for (std::size_t j = 0; j + 1 < n; ++j) {
    const cplx u = m.upper()[j];
    const double mod = std::abs(u);
    phase[j + 1] = mod > 0.0 ? phase[j] * std::conj(u) / mod : phase[j];
    e[j] = mod;
  }

  std::vector<double> z(n * n, 0.0);
  for (std::size_t j = 0; j < n; ++j) z[j * n + j] = 1.0;
  tql_implicit(d, e, z);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return d[a] < d[b]; });

  TridiagonalEigen out;
  out.values.reserve(n);
  out.vectors.reserve(n);
  for (const std::size_t col : order) {
    std::vector<cplx> v(n);
    double vmax = 0.0;
    for (std::size_t row = 0; row < n; ++row) {
      v[row] = phase[row] * z[row * n + col];
      vmax = std::max(vmax, std::abs(v[row]));
    }
    for (const cplx c : v) {
      if (std::abs(c) > 1e-10 * vmax) {
        const cplx rot = std::conj(c) / std::abs(c);
        for (auto& x : v) x *= rot;
        break;
      }
    }
    out.values.push_back(d[col]);
    out.vectors.push_back(std::move(v));
  }
  return out;
}

double find_root(const std::function<double(double)>& f, double lo, double hi, double tol) {
  if (!(tol > 0.0)) throw InputError("find_root: tolerance must be positive");
  double a = lo;
  double b = hi;
  double fa = f(a);
  double fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  if (fa * fb > 0.0 || !std::isfinite(fa) || !std::isfinite(fb))
    throw BracketError("find_root: no sign change on the bracket");

  double c = b;
  double fc = fb;
  double step = 0.0;
  double prev_step = 0.0;
  for (int iter = 0; iter < 200; ++iter) {
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      step = prev_step = b - a;
    }
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol1 = 2.0 * DBL_EPSILON * std::abs(b) + 0.5 * tol;
    const double half = 0.5 * (c - b);
    if (std::abs(half) <= tol1 || fb == 0.0 || std::abs(fb) <= tol) return b;

    if (std::abs(prev_step) >= tol1 && std::abs(fa) > std::abs(fb)) {
      // Inverse quadratic interpolation, or secant when only two points are distinct.
      double p;
      double q;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * half * s;
        q = 1.0 - s;
      } else {
        const double qa = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * half * qa * (qa - r) - (b - a) * (r - 1.0));
        q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::abs(p);
      if (2.0 * p < std::min(3.0 * half * q - std::abs(tol1 * q), std::abs(prev_step * q))) {
        prev_step = step;
        step = p / q;
      } else {
        step = half;
        prev_step = step;
      }
    } else {
      step = half;
      prev_step = step;
    }
    a = b;
    fa = fb;
    b += std::abs(step) > tol1 ? step : std::copysign(tol1, half);
    fb = f(b);
  }
  throw NumericalError("find_root: iteration limit reached");
}

double trigamma(double x) {
  if (!(x > 0.0)) throw InputError("trigamma: argument must be positive");
  double acc = 0.0;
  while (x < 20.0) {
    acc += 1.0 / (x * x);
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  // Asymptotic series; Bernoulli-number coefficients.
  const double series =
      inv + 0.5 * inv2 +
      inv * inv2 * (1.0 / 6.0 - inv2 * (1.0 / 30.0 - inv2 * (1.0 / 42.0 - inv2 * (1.0 / 30.0 - inv2 * 5.0 / 66.0))));
  return acc + series;
}

}  // namespace sadj
