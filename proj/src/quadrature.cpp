#include "fracshape/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <queue>

#include "fracshape/errors.hpp"

namespace fracshape {

namespace {

/// Newton iteration on the Legendre polynomial roots; standard construction.
QuadRule make_gauss_legendre(int n) {
  QuadRule rule;
  rule.x.resize(n);
  rule.w.resize(n);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Chebyshev-based initial guess for the i-th positive root.
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (z * p0 - p1) / (z * z - 1.0);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    rule.x[i] = -z;
    rule.x[n - 1 - i] = z;
    const double w = 2.0 / ((1.0 - z * z) * pp * pp);
    rule.w[i] = w;
    rule.w[n - 1 - i] = w;
  }
  return rule;
}

// Gauss–Kronrod 15-point nodes/weights (with the embedded 7-point Gauss rule).
constexpr double kGK15Nodes[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
    0.7415311855993944, 0.5860872354676911, 0.4058451513773972,
    0.2077849550078985, 0.0};
constexpr double kGK15Weights[8] = {
    0.02293532201052922, 0.06309209262997855, 0.1047900103222502,
    0.1406532597155259,  0.1690047266392679,  0.1903505780647854,
    0.2044329400752989,  0.2094821410847278};
constexpr double kG7Weights[4] = {0.1294849661688697, 0.2797053914892767,
                                  0.3818300505051189, 0.4179591836734694};

struct PanelEstimate {
  double value;
  double error;
};

PanelEstimate gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double kronrod = kGK15Weights[7] * fc;
  double gauss = kG7Weights[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = h * kGK15Nodes[i];
    const double fsum = f(c - dx) + f(c + dx);
    kronrod += kGK15Weights[i] * fsum;
    if (i % 2 == 1) gauss += kG7Weights[i / 2] * fsum;
  }
  kronrod *= h;
  gauss *= h;
  const double diff = std::abs(kronrod - gauss);
  // QUADPACK-style sharpened error estimate.
  const double err = diff > 0.0 ? diff * std::min(1.0, std::pow(200.0 * diff, 1.5))
                                : 0.0;
  return {kronrod, std::max(err, diff * 1e-6)};
}

}  // namespace

const QuadRule& gauss_legendre(int n) {
  static std::mutex mutex;
  static std::map<int, QuadRule> cache;
  std::lock_guard<std::mutex> lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, make_gauss_legendre(n)).first;
  return it->second;
}

QuadRule gauss_legendre_on(int n, double a, double b) {
  const QuadRule& base = gauss_legendre(n);
  QuadRule rule;
  rule.x.resize(n);
  rule.w.resize(n);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    rule.x[i] = mid + half * base.x[i];
    rule.w[i] = half * base.w[i];
  }
  return rule;
}

QuadRule graded_rule(double a, double b, int n, double gamma_a, double gamma_b) {
  QuadRule rule;
  const int n_lo = n / 2;
  const int n_hi = n - n_lo;
  const double m = 0.5 * (a + b);
  auto append_graded = [&rule](double endpoint, double span, double gamma, int np,
                               bool ascending) {
    // x = endpoint + sign*span*u^gamma, u in (0,1); nodes emitted in ascending x.
    const QuadRule& base = gauss_legendre(np);
    for (int k = 0; k < np; ++k) {
      const int i = ascending ? k : np - 1 - k;
      const double u = 0.5 * (base.x[i] + 1.0);
      const double du = 0.5 * base.w[i];
      const double up = std::pow(u, gamma - 1.0);
      const double x = endpoint + (ascending ? 1.0 : -1.0) * span * up * u;
      const double w = span * gamma * up * du;
      rule.x.push_back(x);
      rule.w.push_back(w);
    }
  };
  append_graded(a, m - a, gamma_a, n_lo, true);
  append_graded(b, b - m, gamma_b, n_hi, false);
  // second half was emitted descending from b; restore ascending order
  std::reverse(rule.x.begin() + n_lo, rule.x.end());
  std::reverse(rule.w.begin() + n_lo, rule.w.end());
  return rule;
}

QuadRule periodic_trapezoid(int n) {
  QuadRule rule;
  rule.x.resize(n);
  rule.w.assign(n, 2.0 * M_PI / n);
  for (int k = 0; k < n; ++k) rule.x[k] = 2.0 * M_PI * k / n;
  return rule;
}

AdaptiveResult integrate_adaptive(const std::function<double(double)>& f, double a,
                                  double b, double abs_tol, double rel_tol,
                                  int max_intervals) {
  struct Interval {
    double a, b, value, error;
    bool operator<(const Interval& o) const { return error < o.error; }
  };
  std::priority_queue<Interval> queue;
  PanelEstimate first = gk15(f, a, b);
  queue.push({a, b, first.value, first.error});
  double total_value = first.value;
  double total_error = first.error;
  int used = 1;
  while (total_error > std::max(abs_tol, rel_tol * std::abs(total_value))) {
    if (used >= max_intervals || queue.empty()) {
      throw NumericalError(ErrorCode::QuadratureNotConverged,
                           "adaptive integration did not reach tolerance (err=" +
                               std::to_string(total_error) + ")");
    }
    const Interval worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(worst.a < mid && mid < worst.b)) {
      throw NumericalError(ErrorCode::QuadratureNotConverged,
                           "interval too small to split further");
    }
    const PanelEstimate left = gk15(f, worst.a, mid);
    const PanelEstimate right = gk15(f, mid, worst.b);
    total_value += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    queue.push({worst.a, mid, left.value, left.error});
    queue.push({mid, worst.b, right.value, right.error});
    ++used;
  }
  return {total_value, total_error};
}

}  // namespace fracshape
