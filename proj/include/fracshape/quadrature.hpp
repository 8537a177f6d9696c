#pragma once
/// 1D quadrature building blocks: Gauss–Legendre rules, power-graded composite
/// intervals for endpoint singularities, periodic trapezoid grids, and an
/// adaptive Gauss–Kronrod integrator for one-off constants.

#include <functional>
#include <vector>

namespace fracshape {

struct QuadRule {
  std::vector<double> x;
  std::vector<double> w;
  std::size_t size() const { return x.size(); }
};

/// n-point Gauss–Legendre rule on [-1, 1]. Results are cached per n.
const QuadRule& gauss_legendre(int n);

/// Gauss–Legendre rule mapped onto [a, b].
QuadRule gauss_legendre_on(int n, double a, double b);

/// Composite rule on [a, b] whose nodes cluster toward one or both endpoints.
/// The interval is split at its midpoint; the half ending at `a` uses the
/// substitution x = a + (m-a) u^gamma_a (u in (0,1), Gauss–Legendre in u), and
/// symmetrically for `b`. gamma = 1 means no grading. n is the total point
/// count (split evenly between the halves).
QuadRule graded_rule(double a, double b, int n, double gamma_a, double gamma_b);

/// Uniform periodic grid: angles 2*pi*k/n with equal weights 2*pi/n
/// (the trapezoid rule for periodic integrands, spectrally accurate).
QuadRule periodic_trapezoid(int n);

struct AdaptiveResult {
  double value = 0.0;
  double error = 0.0;  // estimated absolute error
};

/// Adaptive Gauss–Kronrod (15|7) integration of f over [a, b].
/// Splits the worst interval until the global error estimate satisfies
/// err <= max(abs_tol, rel_tol * |value|). Throws
/// NumericalError(QuadratureNotConverged) if the budget of subdivisions is
/// exhausted first.
AdaptiveResult integrate_adaptive(const std::function<double(double)>& f, double a,
                                  double b, double abs_tol, double rel_tol,
                                  int max_intervals = 2000);

}  // namespace fracshape
