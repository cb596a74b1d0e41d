#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace sadj {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;

/// Uniform sampling grid x_j = x0 + j*dx, j = 0..count-1.
class Grid {
 public:
  Grid(double x0, double dx, std::size_t count);

  /// Grid with `count` points spanning [lo, hi] inclusive.
  static Grid span(double lo, double hi, std::size_t count);

  double x0() const { return x0_; }
  double dx() const { return dx_; }
  std::size_t count() const { return count_; }
  double back() const { return x0_ + dx_ * static_cast<double>(count_ - 1); }
  double operator[](std::size_t j) const { return x0_ + dx_ * static_cast<double>(j); }

  std::vector<double> points() const;

 private:
  double x0_;
  double dx_;
  std::size_t count_;
};

/// Composite Simpson rule over the grid. When the number of intervals is odd
/// the last panel is closed with the trapezoid rule.
cplx integrate(std::span<const cplx> values, const Grid& grid);
double integrate(std::span<const double> values, const Grid& grid);

/// Samples f on every grid point.
std::vector<cplx> sample(const Grid& grid, const std::function<cplx(double)>& f);

/// Hermitian tridiagonal matrix stored by its diagonal and first superdiagonal.
/// The subdiagonal is the conjugate of `upper`.
class HermitianTridiagonal {
 public:
  HermitianTridiagonal(std::vector<cplx> diag, std::vector<cplx> upper);

  std::size_t size() const { return diag_.size(); }
  const std::vector<cplx>& diag() const { return diag_; }
  const std::vector<cplx>& upper() const { return upper_; }

  cplx at(std::size_t row, std::size_t col) const;
  /// Max-row-sum norm, used to scale residual tolerances.
  double norm_inf() const;
  std::vector<cplx> apply(std::span<const cplx> v) const;

 private:
  std::vector<cplx> diag_;
  std::vector<cplx> upper_;
};

struct TridiagonalEigen {
  std::vector<double> values;               // ascending
  std::vector<std::vector<cplx>> vectors;   // vectors[j] belongs to values[j]
};

/// Diagonalizes a Hermitian tridiagonal matrix. The off-diagonal phases are
/// removed by a diagonal unitary similarity, the resulting real symmetric
/// tridiagonal is solved with implicit-shift QL, and the phases are restored.
/// Each eigenvector is normalized so that its first non-negligible component
/// is real and positive.
TridiagonalEigen eig_hermitian_tridiagonal(const HermitianTridiagonal& m);

/// Bracketed root of f on [lo, hi] (Brent's method with bisection fallback).
/// Requires f(lo)*f(hi) <= 0. The iterate never leaves the bracket.
double find_root(const std::function<double(double)>& f, double lo, double hi, double tol);

/// Trigamma function psi_1(x) = sum_{j>=0} 1/(x+j)^2 for x > 0.
double trigamma(double x);

}  // namespace sadj
