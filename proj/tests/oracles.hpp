#ifndef SPX_TEST_ORACLES_HPP
#define SPX_TEST_ORACLES_HPP

// Test-only reference implementations, kept independent of the library
// code paths they check.

#include <cmath>
#include <random>
#include <vector>

namespace oracle {

/// Numeric Cox-de Boor evaluation of a B-spline over explicit knots.
inline double bspline_eval(const std::vector<double> &knots, int i, int p, double t) {
  if (p == 0) return (t >= knots[i] && t < knots[i + 1]) ? 1.0 : 0.0;
  double left = 0.0, right = 0.0;
  const double dl = knots[i + p] - knots[i];
  const double dr = knots[i + p + 1] - knots[i + 1];
  if (dl > 0.0) left = (t - knots[i]) / dl * bspline_eval(knots, i, p - 1, t);
  if (dr > 0.0)
    right = (knots[i + p + 1] - t) / dr * bspline_eval(knots, i + 1, p - 1, t);
  return left + right;
}

/// Eigenvalues of a small symmetric matrix by cyclic Jacobi rotations.
inline std::vector<double> jacobi_eigenvalues(std::vector<std::vector<double>> a) {
  const int n = static_cast<int>(a.size());
  for (int sweep = 0; sweep < 200; ++sweep) {
    double off = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
    if (off < 1e-30) break;
    for (int pp = 0; pp < n - 1; ++pp)
      for (int q = pp + 1; q < n; ++q) {
        if (std::abs(a[pp][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[pp][pp]) / (2.0 * a[pp][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0), s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a[k][pp], akq = a[k][q];
          a[k][pp] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a[pp][k], aqk = a[q][k];
          a[pp][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
  }
  std::vector<double> ev(n);
  for (int i = 0; i < n; ++i) ev[i] = a[i][i];
  std::sort(ev.begin(), ev.end());
  return ev;
}

/// Largest-magnitude eigenvalue by power iteration.
inline double power_iteration(const std::vector<std::vector<double>> &a,
                              int iters = 20000, unsigned seed = 7) {
  const int n = static_cast<int>(a.size());
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> x(n);
  for (auto &v : x) v = u(rng);
  double lambda = 0.0;
  for (int it = 0; it < iters; ++it) {
    std::vector<double> y(n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) y[i] += a[i][j] * x[j];
    double norm = 0.0;
    for (double v : y) norm += v * v;
    norm = std::sqrt(norm);
    for (int i = 0; i < n; ++i) x[i] = y[i] / norm;
    lambda = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) lambda += x[i] * a[i][j] * x[j];
  }
  return lambda;
}

/// Dense least-squares solve via normal equations with Gauss elimination.
inline std::vector<double> least_squares(const std::vector<std::vector<double>> &A,
                                         const std::vector<double> &b) {
  const int m = static_cast<int>(A.size());
  const int n = static_cast<int>(A[0].size());
  std::vector<std::vector<double>> N(n, std::vector<double>(n + 1, 0.0));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < m; ++k) N[i][j] += A[k][i] * A[k][j];
    for (int k = 0; k < m; ++k) N[i][n] += A[k][i] * b[k];
  }
  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(N[i][k]) > std::abs(N[piv][k])) piv = i;
    std::swap(N[k], N[piv]);
    for (int i = k + 1; i < n; ++i) {
      const double f = N[i][k] / N[k][k];
      for (int j = k; j <= n; ++j) N[i][j] -= f * N[k][j];
    }
  }
  std::vector<double> x(n);
  for (int i = n - 1; i >= 0; --i) {
    double s = N[i][n];
    for (int j = i + 1; j < n; ++j) s -= N[i][j] * x[j];
    x[i] = s / N[i][i];
  }
  return x;
}

}  // namespace oracle

#endif
