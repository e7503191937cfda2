#include "spx/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace spx {

CoeffMatrix CoeffMatrix::from_triplets(int rows, int cols, std::vector<Triplet> t) {
  for (const auto &e : t)
    if (e.row < 0 || e.row >= rows || e.col < 0 || e.col >= cols)
      throw std::out_of_range("from_triplets: index out of range");
  std::sort(t.begin(), t.end(), [](const Triplet &a, const Triplet &b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  CoeffMatrix m(rows, cols);
  m.col_idx_.reserve(t.size());
  m.values_.reserve(t.size());
  std::size_t i = 0;
  for (int r = 0; r < rows; ++r) {
    while (i < t.size() && t[i].row == r) {
      const int c = t[i].col;
      double v = 0.0;
      while (i < t.size() && t[i].row == r && t[i].col == c) v += t[i++].value;
      if (v != 0.0) {
        m.col_idx_.push_back(c);
        m.values_.push_back(v);
      }
    }
    m.row_ptr_[r + 1] = static_cast<int>(m.col_idx_.size());
  }
  return m;
}

CoeffMatrix CoeffMatrix::identity(int n) {
  std::vector<Triplet> t;
  t.reserve(n);
  for (int i = 0; i < n; ++i) t.push_back({i, i, 1.0});
  return from_triplets(n, n, std::move(t));
}

double CoeffMatrix::at(int r, int c) const {
  for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
    if (col_idx_[k] == c) return values_[k];
  return 0.0;
}

std::vector<double> CoeffMatrix::multiply(const std::vector<double> &x) const {
  if (static_cast<int>(x.size()) != cols_)
    throw std::invalid_argument("multiply: dimension mismatch");
  std::vector<double> y(rows_, 0.0);
  for (int r = 0; r < rows_; ++r) {
    double s = 0.0;
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
      s += values_[k] * x[col_idx_[k]];
    y[r] = s;
  }
  return y;
}

std::vector<double> CoeffMatrix::multiply_transpose(const std::vector<double> &x) const {
  if (static_cast<int>(x.size()) != rows_)
    throw std::invalid_argument("multiply_transpose: dimension mismatch");
  std::vector<double> y(cols_, 0.0);
  for (int r = 0; r < rows_; ++r) {
    const double xr = x[r];
    if (xr == 0.0) continue;
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
      y[col_idx_[k]] += values_[k] * xr;
  }
  return y;
}

CoeffMatrix CoeffMatrix::transpose() const {
  std::vector<Triplet> t;
  t.reserve(values_.size());
  for (int r = 0; r < rows_; ++r)
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
      t.push_back({col_idx_[k], r, values_[k]});
  return from_triplets(cols_, rows_, std::move(t));
}

CoeffMatrix CoeffMatrix::multiply(const CoeffMatrix &other) const {
  if (cols_ != other.rows_)
    throw std::invalid_argument("multiply: dimension mismatch");
  // Row-by-row merge with a dense accumulator over touched columns.
  std::vector<Triplet> t;
  std::vector<double> acc(other.cols_, 0.0);
  std::vector<int> touched;
  for (int r = 0; r < rows_; ++r) {
    touched.clear();
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      const int c = col_idx_[k];
      const double v = values_[k];
      for (int k2 = other.row_ptr_[c]; k2 < other.row_ptr_[c + 1]; ++k2) {
        const int c2 = other.col_idx_[k2];
        if (acc[c2] == 0.0) touched.push_back(c2);
        acc[c2] += v * other.values_[k2];
      }
    }
    std::sort(touched.begin(), touched.end());
    for (int c2 : touched) {
      if (acc[c2] != 0.0) t.push_back({r, c2, acc[c2]});
      acc[c2] = 0.0;
    }
  }
  return from_triplets(rows_, other.cols_, std::move(t));
}

CoeffMatrix CoeffMatrix::select_columns(const std::vector<int> &cols) const {
  std::vector<int> newcol(cols_, -1);
  for (std::size_t j = 0; j < cols.size(); ++j) {
    if (cols[j] < 0 || cols[j] >= cols_)
      throw std::out_of_range("select_columns: index out of range");
    newcol[cols[j]] = static_cast<int>(j);
  }
  std::vector<Triplet> t;
  for (int r = 0; r < rows_; ++r)
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      const int c = newcol[col_idx_[k]];
      if (c >= 0) t.push_back({r, c, values_[k]});
    }
  return from_triplets(rows_, static_cast<int>(cols.size()), std::move(t));
}

std::vector<double> CoeffMatrix::diagonal() const {
  std::vector<double> d(std::min(rows_, cols_), 0.0);
  for (int r = 0; r < static_cast<int>(d.size()); ++r) d[r] = at(r, r);
  return d;
}

double CoeffMatrix::symmetry_error() const {
  double err = 0.0;
  for (int r = 0; r < rows_; ++r)
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
      err = std::max(err, std::abs(values_[k] - at(col_idx_[k], r)));
  return err;
}

std::vector<std::vector<double>> CoeffMatrix::to_dense() const {
  std::vector<std::vector<double>> d(rows_, std::vector<double>(cols_, 0.0));
  for (int r = 0; r < rows_; ++r)
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k)
      d[r][col_idx_[k]] = values_[k];
  return d;
}

void CoeffMatrix::write_matrix_market(std::ostream &os) const {
  os << "%%MatrixMarket matrix coordinate real general\n";
  os << rows_ << " " << cols_ << " " << nnz() << "\n";
  char buf[64];
  for (int r = 0; r < rows_; ++r)
    for (int k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      std::snprintf(buf, sizeof buf, "%d %d %.17g\n", r + 1, col_idx_[k] + 1,
                    values_[k]);
      os << buf;
    }
}

CoeffMatrix triple_product(const CoeffMatrix &E, const CoeffMatrix &A) {
  if (A.rows() != A.cols() || E.rows() != A.rows())
    throw std::invalid_argument("triple_product: dimension mismatch");
  CoeffMatrix Et = E.transpose();
  return Et.multiply(A.multiply(E));
}

DenseMatrix DenseMatrix::from_sparse(const CoeffMatrix &m) {
  DenseMatrix d(m.rows(), m.cols());
  for (int r = 0; r < m.rows(); ++r)
    for (int k = m.row_ptr()[r]; k < m.row_ptr()[r + 1]; ++k)
      d(r, m.col_idx()[k]) = m.values()[k];
  return d;
}

std::vector<double> DenseMatrix::multiply(const std::vector<double> &x) const {
  std::vector<double> y(rows_, 0.0);
  for (int i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (int j = 0; j < cols_; ++j) s += (*this)(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

std::vector<double> DenseMatrix::solve(std::vector<double> rhs) const {
  if (rows_ != cols_ || static_cast<int>(rhs.size()) != rows_)
    throw std::invalid_argument("solve: dimension mismatch");
  const int n = rows_;
  std::vector<double> a = a_;
  std::vector<int> piv(n);
  for (int i = 0; i < n; ++i) piv[i] = i;
  for (int k = 0; k < n; ++k) {
    int pr = k;
    double pv = std::abs(a[std::size_t(k) * n + k]);
    for (int i = k + 1; i < n; ++i) {
      const double v = std::abs(a[std::size_t(i) * n + k]);
      if (v > pv) { pv = v; pr = i; }
    }
    if (pv == 0.0) throw std::runtime_error("solve: singular matrix");
    if (pr != k) {
      for (int j = 0; j < n; ++j)
        std::swap(a[std::size_t(k) * n + j], a[std::size_t(pr) * n + j]);
      std::swap(rhs[k], rhs[pr]);
    }
    const double akk = a[std::size_t(k) * n + k];
    for (int i = k + 1; i < n; ++i) {
      const double f = a[std::size_t(i) * n + k] / akk;
      if (f == 0.0) continue;
      a[std::size_t(i) * n + k] = 0.0;
      for (int j = k + 1; j < n; ++j)
        a[std::size_t(i) * n + j] -= f * a[std::size_t(k) * n + j];
      rhs[i] -= f * rhs[k];
    }
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = rhs[i];
    for (int j = i + 1; j < n; ++j) s -= a[std::size_t(i) * n + j] * rhs[j];
    rhs[i] = s / a[std::size_t(i) * n + i];
  }
  return rhs;
}

std::vector<double> DenseMatrix::solve_precise(const std::vector<double> &rhs) const {
  if (rows_ != cols_ || static_cast<int>(rhs.size()) != rows_)
    throw std::invalid_argument("solve_precise: dimension mismatch");
  const int n = rows_;
  std::vector<long double> a(a_.begin(), a_.end());
  std::vector<long double> b(rhs.begin(), rhs.end());
  for (int k = 0; k < n; ++k) {
    int pr = k;
    long double pv = std::abs(a[std::size_t(k) * n + k]);
    for (int i = k + 1; i < n; ++i) {
      const long double v = std::abs(a[std::size_t(i) * n + k]);
      if (v > pv) { pv = v; pr = i; }
    }
    if (pv == 0.0L) throw std::runtime_error("solve_precise: singular matrix");
    if (pr != k) {
      for (int j = 0; j < n; ++j)
        std::swap(a[std::size_t(k) * n + j], a[std::size_t(pr) * n + j]);
      std::swap(b[k], b[pr]);
    }
    const long double akk = a[std::size_t(k) * n + k];
    for (int i = k + 1; i < n; ++i) {
      const long double f = a[std::size_t(i) * n + k] / akk;
      if (f == 0.0L) continue;
      for (int j = k + 1; j < n; ++j)
        a[std::size_t(i) * n + j] -= f * a[std::size_t(k) * n + j];
      b[i] -= f * b[k];
    }
  }
  std::vector<long double> xl(n);
  for (int i = n - 1; i >= 0; --i) {
    long double s = b[i];
    for (int j = i + 1; j < n; ++j) s -= a[std::size_t(i) * n + j] * xl[j];
    xl[i] = s / a[std::size_t(i) * n + i];
  }
  return std::vector<double>(xl.begin(), xl.end());
}

std::vector<double> DenseMatrix::symmetric_eigenvalues() const {
  if (rows_ != cols_) throw std::invalid_argument("symmetric_eigenvalues: not square");
  const int n = rows_;
  // Householder reduction to tridiagonal form (values-only variant).
  std::vector<double> a = a_;
  std::vector<double> d(n, 0.0), e(n, 0.0);
  auto A = [&](int i, int j) -> double & { return a[std::size_t(i) * n + j]; };
  for (int i = n - 1; i > 0; --i) {
    const int l = i - 1;
    double h = 0.0, scale = 0.0;
    if (l > 0) {
      for (int k = 0; k <= l; ++k) scale += std::abs(A(i, k));
      if (scale == 0.0) {
        e[i] = A(i, l);
      } else {
        for (int k = 0; k <= l; ++k) {
          A(i, k) /= scale;
          h += A(i, k) * A(i, k);
        }
        double f = A(i, l);
        double g = (f >= 0.0) ? -std::sqrt(h) : std::sqrt(h);
        e[i] = scale * g;
        h -= f * g;
        A(i, l) = f - g;
        f = 0.0;
        for (int j = 0; j <= l; ++j) {
          g = 0.0;
          for (int k = 0; k <= j; ++k) g += A(j, k) * A(i, k);
          for (int k = j + 1; k <= l; ++k) g += A(k, j) * A(i, k);
          e[j] = g / h;
          f += e[j] * A(i, j);
        }
        const double hh = f / (h + h);
        for (int j = 0; j <= l; ++j) {
          f = A(i, j);
          e[j] = g = e[j] - hh * f;
          for (int k = 0; k <= j; ++k)
            A(j, k) -= f * e[k] + g * A(i, k);
        }
      }
    } else {
      e[i] = A(i, l);
    }
    d[i] = h;
  }
  e[0] = 0.0;
  for (int i = 0; i < n; ++i) d[i] = A(i, i);

  // Implicit QL with Wilkinson shifts on the tridiagonal (d, e).
  for (int i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= 1e-300 || std::abs(e[m]) <= 1e-16 * dd) break;
      }
      if (m != l) {
        if (++iter == 100)
          throw std::runtime_error("symmetric_eigenvalues: QL failed to converge");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + (g >= 0.0 ? std::abs(r) : -std::abs(r)));
        double s = 1.0, c = 1.0, p = 0.0;
        bool underflow = false;
        int i_stop = l - 1;
        for (int i = m - 1; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            underflow = true;
            i_stop = i;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
        }
        if (underflow && i_stop >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
  std::sort(d.begin(), d.end());
  return d;
}

PcgResult pcg_solve(const CoeffMatrix &A, const std::vector<double> &b,
                    Preconditioner precond, double tol, int max_iter) {
  const int n = A.rows();
  if (A.cols() != n || static_cast<int>(b.size()) != n)
    throw std::invalid_argument("pcg_solve: dimension mismatch");
  if (max_iter <= 0) max_iter = 20 * n + 200;
  std::vector<double> minv(n, 1.0);
  if (precond == Preconditioner::Diagonal) {
    auto diag = A.diagonal();
    for (int i = 0; i < n; ++i) minv[i] = diag[i] > 0.0 ? 1.0 / diag[i] : 1.0;
  }
  PcgResult res;
  res.x.assign(n, 0.0);
  std::vector<double> r = b;
  const double bnorm = norm2(b);
  if (bnorm == 0.0) {
    res.converged = true;
    return res;
  }
  std::vector<double> z(n), p(n), Ap(n);
  for (int i = 0; i < n; ++i) z[i] = minv[i] * r[i];
  p = z;
  double rz = dot(r, z);
  for (int it = 0; it < max_iter; ++it) {
    Ap = A.multiply(p);
    const double pAp = dot(p, Ap);
    if (pAp <= 0.0) break;  // not SPD (or stagnation)
    const double alpha = rz / pAp;
    for (int i = 0; i < n; ++i) {
      res.x[i] += alpha * p[i];
      r[i] -= alpha * Ap[i];
    }
    const double rnorm = norm2(r);
    res.relative_residual = rnorm / bnorm;
    res.residual_history.push_back(res.relative_residual);
    res.iterations = it + 1;
    if (res.relative_residual <= tol) {
      res.converged = true;
      return res;
    }
    for (int i = 0; i < n; ++i) z[i] = minv[i] * r[i];
    const double rz_new = dot(r, z);
    const double beta = rz_new / rz;
    rz = rz_new;
    for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
  }
  return res;
}

double condition_number(const CoeffMatrix &A, const ConditionOptions &opts) {
  if (A.rows() != A.cols())
    throw std::invalid_argument("condition_number: matrix not square");
  if (A.rows() > opts.dense_cap)
    throw std::runtime_error(
        "condition_number: matrix size " + std::to_string(A.rows()) +
        " exceeds the dense cap " + std::to_string(opts.dense_cap));
  DenseMatrix d = DenseMatrix::from_sparse(A);
  if (opts.precond == Preconditioner::Diagonal) {
    const int n = A.rows();
    std::vector<double> s(n, 1.0);
    for (int i = 0; i < n; ++i) {
      const double di = d(i, i);
      s[i] = di > 0.0 ? 1.0 / std::sqrt(di) : 1.0;
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) d(i, j) *= s[i] * s[j];
  }
  auto ev = d.symmetric_eigenvalues();
  double lo = 1e300, hi = 0.0;
  for (double v : ev) {
    const double a = std::abs(v);
    lo = std::min(lo, a);
    hi = std::max(hi, a);
  }
  if (lo == 0.0) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

double dot(const std::vector<double> &a, const std::vector<double> &b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const std::vector<double> &a) { return std::sqrt(dot(a, a)); }

}  // namespace spx
