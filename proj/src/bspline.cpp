#include "spx/bspline.hpp"

#include <stdexcept>

#include "spx/quadrature.hpp"

namespace spx {

Poly1 Poly1::shifted(double a) const {
  Poly1 out;
  out.c.assign(c.size(), 0.0);
  // binomial table up to the degree in play
  const std::size_t n = c.size();
  std::vector<double> binom(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    binom[i * n] = 1.0;
    for (std::size_t j = 1; j <= i; ++j)
      binom[i * n + j] =
          binom[(i - 1) * n + j - 1] + (j <= i - 1 ? binom[(i - 1) * n + j] : 0.0);
  }
  // (t+a)^k = sum_j C(k,j) a^(k-j) t^j
  for (std::size_t k = 0; k < n; ++k) {
    double apow = 1.0;  // a^(k-j) built from j = k down to 0
    for (std::size_t jj = 0; jj <= k; ++jj) {
      const std::size_t j = k - jj;  // descending
      out.c[j] += c[k] * binom[k * n + j] * apow;
      apow *= a;
    }
  }
  return out;
}

double Poly2::eval(double sx, double sy) const {
  double v = 0.0;
  for (int b = n - 1; b >= 0; --b) {
    double row = 0.0;
    for (int a = n - 1; a >= 0; --a) row = row * sx + coef[b * n + a];
    v = v * sy + row;
  }
  return v;
}

Poly2 Poly2::dx() const {
  Poly2 d;
  d.n = n;
  d.coef.assign(coef.size(), 0.0);
  for (int b = 0; b < n; ++b)
    for (int a = 1; a < n; ++a)
      d.coef[b * n + a - 1] = coef[b * n + a] * a;
  return d;
}

Poly2 Poly2::dy() const {
  Poly2 d;
  d.n = n;
  d.coef.assign(coef.size(), 0.0);
  for (int b = 1; b < n; ++b)
    for (int a = 0; a < n; ++a)
      d.coef[(b - 1) * n + a] = coef[b * n + a] * b;
  return d;
}

Poly2 Poly2::shifted(const Vec2 &d) const {
  // Shift each row in x, then each column in y.
  Poly2 out;
  out.n = n;
  out.coef.assign(coef.size(), 0.0);
  std::vector<double> tmp(coef.size(), 0.0);
  for (int b = 0; b < n; ++b) {
    Poly1 row;
    row.c.assign(n, 0.0);
    for (int a = 0; a < n; ++a) row.c[a] = coef[b * n + a];
    Poly1 rs = row.shifted(d.x);
    for (int a = 0; a < n; ++a) tmp[b * n + a] = rs.c[a];
  }
  for (int a = 0; a < n; ++a) {
    Poly1 col;
    col.c.assign(n, 0.0);
    for (int b = 0; b < n; ++b) col.c[b] = tmp[b * n + a];
    Poly1 cs = col.shifted(d.y);
    for (int b = 0; b < n; ++b) out.coef[b * n + a] = cs.c[b];
  }
  return out;
}

std::vector<Poly1> cardinal_bspline_pieces(int degree) {
  if (degree < 0) throw std::invalid_argument("degree must be >= 0");
  // Cox-de Boor recursion carried out on polynomial pieces over integer
  // knots; piece[j][m] is B_{j,r} on the span [m, m+1) in the global
  // coordinate t.
  const int p = degree;
  const int spans = p + 1;
  // piece storage indexed by (function j, span m) for the current order r.
  auto idx = [&](int j, int m) { return j * (p + 2) + m; };
  std::vector<Poly1> cur((p + 2) * (p + 2));
  for (int j = 0; j <= p + 1; ++j)
    for (int m = 0; m <= p + 1; ++m)
      cur[idx(j, m)].c = {(j == m) ? 1.0 : 0.0};
  for (int r = 1; r <= p; ++r) {
    std::vector<Poly1> next((p + 2) * (p + 2));
    for (int j = 0; j + r <= p + 1; ++j) {
      for (int m = 0; m <= p; ++m) {
        // B_{j,r}(t) = (t-j)/r * B_{j,r-1}(t) + (j+r+1-t)/r * B_{j+1,r-1}(t)
        const Poly1 &left = cur[idx(j, m)];
        const Poly1 &right = (j + 1 <= p + 1) ? cur[idx(j + 1, m)] : Poly1{};
        Poly1 res;
        res.c.assign(r + 1, 0.0);
        auto axpy_linear = [&](const Poly1 &q, double c0, double c1) {
          // res += (c0 + c1 t) * q
          for (std::size_t k = 0; k < q.c.size(); ++k) {
            if (q.c[k] == 0.0) continue;
            res.c[k] += c0 * q.c[k];
            res.c[k + 1] += c1 * q.c[k];
          }
        };
        if (!left.c.empty()) axpy_linear(left, -double(j) / r, 1.0 / r);
        if (!right.c.empty() && !(right.c.size() == 1 && right.c[0] == 0.0))
          axpy_linear(right, double(j + r + 1) / r, -1.0 / r);
        next[idx(j, m)] = res;
      }
    }
    cur = std::move(next);
  }
  std::vector<Poly1> out(spans);
  for (int m = 0; m < spans; ++m) out[m] = cur[idx(0, m)].shifted(double(m));
  return out;
}

BasisLocal::BasisLocal(int degree) : p_(degree) {
  if (degree < 0 || degree > 7)
    throw std::invalid_argument("BasisLocal: degree out of supported range");
  auto pieces = cardinal_bspline_pieces(p_);
  // Local function a on an element is the cardinal spline piece p - a.
  pieces_.resize(p_ + 1);
  pieces_d_.resize(p_ + 1);
  for (int a = 0; a <= p_; ++a) {
    pieces_[a] = pieces[p_ - a];
    pieces_[a].c.resize(p_ + 1, 0.0);
    pieces_d_[a] = pieces_[a].derivative();
  }
  const int n = p_ + 1;
  polys_.resize(n * n);
  for (int ly = 0; ly < n; ++ly)
    for (int lx = 0; lx < n; ++lx) {
      Poly2 q;
      q.n = n;
      q.coef.assign(n * n, 0.0);
      for (int b = 0; b < n; ++b)
        for (int a = 0; a < n; ++a)
          q.coef[b * n + a] = pieces_[lx].c[a] * pieces_[ly].c[b];
      polys_[ly * n + lx] = q;
    }
  // Reference Gram by tensor Gauss, exact for degree 2p.
  const int nl = n * n;
  gram_.assign(nl * nl, 0.0);
  auto qp = tensor_gauss_01(p_ + 1);
  std::vector<double> vals(nl);
  for (const auto &q : qp) {
    eval_all(q.x, vals.data(), nullptr);
    for (int i = 0; i < nl; ++i)
      for (int j = 0; j < nl; ++j) gram_[i * nl + j] += q.w * vals[i] * vals[j];
  }
}

void BasisLocal::eval_all(const Vec2 &s, double *values, Vec2 *grads_local) const {
  const int n = p_ + 1;
  double vx[8], vy[8], dx[8], dy[8];
  for (int a = 0; a < n; ++a) {
    vx[a] = pieces_[a].eval(s.x);
    vy[a] = pieces_[a].eval(s.y);
    if (grads_local) {
      dx[a] = pieces_d_[a].eval(s.x);
      dy[a] = pieces_d_[a].eval(s.y);
    }
  }
  for (int ly = 0; ly < n; ++ly)
    for (int lx = 0; lx < n; ++lx) {
      const int l = ly * n + lx;
      values[l] = vx[lx] * vy[ly];
      if (grads_local) grads_local[l] = {dx[lx] * vy[ly], vx[lx] * dy[ly]};
    }
}

}  // namespace spx
