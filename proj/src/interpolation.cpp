#include "spx/interpolation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "spx/quadrature.hpp"

namespace spx {

namespace {

long double eval_poly1_ld(const std::vector<double> &c, long double t) {
  long double v = 0.0L;
  for (std::size_t k = c.size(); k-- > 0;) v = v * t + c[k];
  return v;
}

/// Local Gram solver carried in extended precision end to end. The local
/// Gram reaches condition 5e7 at p = 3; double-precision assembly and
/// factorization would cap projection exactness near 1e-9.
class LocalGramSolver {
 public:
  explicit LocalGramSolver(const BasisLocal &local) : p_(local.degree()) {
    const int n1 = p_ + 1;
    n_ = n1 * n1;
    // Univariate Gram of the local pieces, then the tensor Gram as a
    // Kronecker square, all in long double.
    const QuadRule1D &g = gauss_legendre_01(n1);
    std::vector<long double> g1(std::size_t(n1) * n1, 0.0L);
    for (std::size_t q = 0; q < g.points.size(); ++q) {
      const long double t = g.points[q];
      const long double w = g.weights[q];
      std::vector<long double> vals(n1);
      for (int a = 0; a < n1; ++a) vals[a] = eval_poly1_ld(local.piece(a).c, t);
      for (int a = 0; a < n1; ++a)
        for (int b = 0; b < n1; ++b) g1[a * n1 + b] += w * vals[a] * vals[b];
    }
    lu_.assign(std::size_t(n_) * n_, 0.0L);
    for (int iy = 0; iy < n1; ++iy)
      for (int ix = 0; ix < n1; ++ix)
        for (int jy = 0; jy < n1; ++jy)
          for (int jx = 0; jx < n1; ++jx)
            lu_[std::size_t(iy * n1 + ix) * n_ + (jy * n1 + jx)] =
                g1[iy * n1 + jy] * g1[ix * n1 + jx];
    piv_.resize(n_);
    for (int i = 0; i < n_; ++i) piv_[i] = i;
    for (int k = 0; k < n_; ++k) {
      int pr = k;
      long double pv = std::abs(lu_[std::size_t(k) * n_ + k]);
      for (int i = k + 1; i < n_; ++i) {
        const long double v = std::abs(lu_[std::size_t(i) * n_ + k]);
        if (v > pv) { pv = v; pr = i; }
      }
      if (pr != k) {
        for (int j = 0; j < n_; ++j)
          std::swap(lu_[std::size_t(k) * n_ + j], lu_[std::size_t(pr) * n_ + j]);
        std::swap(piv_[k], piv_[pr]);
      }
      const long double akk = lu_[std::size_t(k) * n_ + k];
      for (int i = k + 1; i < n_; ++i) {
        const long double f = lu_[std::size_t(i) * n_ + k] / akk;
        lu_[std::size_t(i) * n_ + k] = f;
        for (int j = k + 1; j < n_; ++j)
          lu_[std::size_t(i) * n_ + j] -= f * lu_[std::size_t(k) * n_ + j];
      }
    }
  }

  std::vector<double> solve(const std::vector<long double> &rhs) const {
    std::vector<long double> x(n_);
    for (int i = 0; i < n_; ++i) x[i] = rhs[piv_[i]];
    for (int i = 1; i < n_; ++i)
      for (int j = 0; j < i; ++j) x[i] -= lu_[std::size_t(i) * n_ + j] * x[j];
    for (int i = n_ - 1; i >= 0; --i) {
      for (int j = i + 1; j < n_; ++j) x[i] -= lu_[std::size_t(i) * n_ + j] * x[j];
      x[i] /= lu_[std::size_t(i) * n_ + i];
    }
    return std::vector<double>(x.begin(), x.end());
  }

 private:
  int p_, n_;
  std::vector<long double> lu_;
  std::vector<int> piv_;
};

const LocalGramSolver &local_gram_solver(const BasisLocal &local) {
  static std::map<int, LocalGramSolver> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(local.degree());
  if (it == cache.end()) it = cache.emplace(local.degree(), LocalGramSolver(local)).first;
  return it->second;
}

struct DerivTable {
  // derivative (a,b) of each local polynomial, indexed [a][b][l]
  std::vector<std::vector<std::vector<Poly2>>> d;
  std::vector<std::vector<double>> binom;
};

const DerivTable &deriv_table(const BasisLocal &local) {
  static std::map<int, DerivTable> cache;
  static std::mutex mtx;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(local.degree());
  if (it == cache.end()) {
    const int p = local.degree();
    DerivTable t;
    t.d.assign(p + 1, std::vector<std::vector<Poly2>>(p + 1));
    for (int a = 0; a <= p; ++a)
      for (int b = 0; a + b <= p; ++b) {
        auto &vec = t.d[a][b];
        vec.resize(local.count());
        for (int l = 0; l < local.count(); ++l) {
          Poly2 q = local.local_poly(l);
          for (int k = 0; k < a; ++k) q = q.dx();
          for (int k = 0; k < b; ++k) q = q.dy();
          vec[l] = q;
        }
      }
    t.binom.assign(p + 1, std::vector<double>(p + 1, 0.0));
    for (int l = 0; l <= p; ++l) {
      t.binom[l][0] = 1.0;
      for (int a = 1; a <= l; ++a)
        t.binom[l][a] = t.binom[l - 1][a - 1] + (a <= l - 1 ? t.binom[l - 1][a] : 0.0);
    }
    it = cache.emplace(p, std::move(t)).first;
  }
  return it->second;
}

}  // namespace

double WeightScheme::raw_weight(int g, int e, const TrimmedDomain &dom) const {
  if (restricted && basis_is_large[g] && !elem_is_large[e]) return 0.0;
  switch (mode) {
    case WeightMode::CutArea: return dom.cut_area(e);
    case WeightMode::Uniform: return 1.0;
    case WeightMode::SingleElement: return dom.cut_area(e);  // resolved below
  }
  return 0.0;
}

std::vector<double> WeightScheme::weights(int g, const std::vector<int> &supp,
                                          const TrimmedDomain &dom) const {
  std::vector<double> w(supp.size(), 0.0);
  if (mode == WeightMode::SingleElement) {
    int best = -1;
    double best_area = -1.0;
    for (std::size_t k = 0; k < supp.size(); ++k) {
      const double a = raw_weight(g, supp[k], dom);
      if (a > best_area) { best_area = a; best = static_cast<int>(k); }
    }
    if (best < 0 || best_area <= 0.0)
      throw std::runtime_error("WeightScheme: no admissible element for basis");
    w[best] = 1.0;
    return w;
  }
  double total = 0.0;
  for (std::size_t k = 0; k < supp.size(); ++k) {
    w[k] = raw_weight(g, supp[k], dom);
    total += w[k];
  }
  if (total <= 0.0)
    throw std::runtime_error("WeightScheme: zero total weight for basis");
  for (auto &v : w) v /= total;
  return w;
}

std::vector<double> local_projection(const SplineSpace &space, int element,
                                     const ScalarField &f, int quad_order) {
  const BasisLocal &local = space.local();
  const int p = space.degree();
  const int n1 = p + 1;
  const int nl = local.count();
  const int nq = std::max(quad_order, p + 1);
  const QuadRule1D &g = gauss_legendre_01(nq);
  // univariate piece values at the 1D nodes, in extended precision
  std::vector<long double> pv(std::size_t(nq) * n1);
  for (int q = 0; q < nq; ++q)
    for (int a = 0; a < n1; ++a)
      pv[std::size_t(q) * n1 + a] = eval_poly1_ld(local.piece(a).c, g.points[q]);
  std::vector<long double> rhs(nl, 0.0L);
  for (int qy = 0; qy < nq; ++qy)
    for (int qx = 0; qx < nq; ++qx) {
      const Vec2 x = space.mesh().to_global(element, {g.points[qx], g.points[qy]});
      const long double wf = (long double)(g.weights[qx] * g.weights[qy]) * f(x);
      for (int ly = 0; ly < n1; ++ly) {
        const long double wy = wf * pv[std::size_t(qy) * n1 + ly];
        for (int lx = 0; lx < n1; ++lx)
          rhs[ly * n1 + lx] += wy * pv[std::size_t(qx) * n1 + lx];
      }
    }
  // The element Gram is h^2 times the reference Gram; the h^2 cancels
  // against the Jacobian omitted from rhs, so the reference system applies.
  return local_gram_solver(local).solve(rhs);
}

std::vector<double> dg_projection(const ActiveMesh &am, const ScalarField &f,
                                  int quad_order) {
  const DgSpace dg(am);
  std::vector<double> out(dg.dim(), 0.0);
  for (int r = 0; r < am.element_count(); ++r) {
    const auto c = local_projection(*am.space, am.elements[r], f, quad_order);
    std::copy(c.begin(), c.end(), out.begin() + dg.index(r, 0));
  }
  return out;
}

CoeffMatrix assemble_Ih(const ActiveMesh &am, const TrimmedDomain &dom,
                        const WeightScheme &scheme) {
  const DgSpace dg(am);
  const SplineSpace &space = *am.space;
  const int nl = dg.block;
  std::vector<Triplet> trip;
  std::vector<int> ids(nl);
  for (int bi = 0; bi < am.dof_count(); ++bi) {
    const int g = am.basis[bi];
    const auto supp = am.active_support_elements(g);
    const auto w = scheme.weights(g, supp, dom);
    for (std::size_t k = 0; k < supp.size(); ++k) {
      if (w[k] == 0.0) continue;
      const int e = supp[k];
      const int r = am.element_rank[e];
      space.element_basis(e, ids.data());
      int l = -1;
      for (int m = 0; m < nl; ++m)
        if (ids[m] == g) { l = m; break; }
      if (l < 0) throw std::logic_error("assemble_Ih: ordering mismatch");
      trip.push_back({bi, dg.index(r, l), w[k]});
    }
  }
  return CoeffMatrix::from_triplets(am.dof_count(), dg.dim(), std::move(trip));
}

std::vector<double> interpolate(const ActiveMesh &am, const TrimmedDomain &dom,
                                const WeightScheme &weights, const ScalarField &f,
                                int quad_order) {
  const CoeffMatrix Ih = assemble_Ih(am, dom, weights);
  return Ih.multiply(dg_projection(am, f, quad_order));
}

std::vector<double> spline_to_dg(const ActiveMesh &am,
                                 const std::vector<double> &coeffs) {
  const DgSpace dg(am);
  const SplineSpace &space = *am.space;
  std::vector<double> out(dg.dim(), 0.0);
  std::vector<int> ids(dg.block);
  for (int r = 0; r < am.element_count(); ++r) {
    space.element_basis(am.elements[r], ids.data());
    for (int l = 0; l < dg.block; ++l) {
      const int bi = am.basis_rank[ids[l]];
      out[dg.index(r, l)] = bi >= 0 ? coeffs[bi] : 0.0;
    }
  }
  return out;
}

std::vector<double> jump_norm_parts(const ActiveMesh &am,
                                    const std::vector<double> &dg) {
  const SplineSpace &space = *am.space;
  const BackgroundMesh &mesh = space.mesh();
  const BasisLocal &local = space.local();
  const int p = space.degree();
  const int nl = local.count();
  const DerivTable &tab = deriv_table(local);
  const QuadRule1D &g1 = gauss_legendre_01(p + 1);
  std::vector<double> parts(p + 1, 0.0);

  auto face_term = [&](int r1, int r2, bool vertical) {
    // face integrals of squared derivative jumps, by order l
    for (std::size_t q = 0; q < g1.points.size(); ++q) {
      const double t = g1.points[q];
      const Vec2 s1 = vertical ? Vec2{1.0, t} : Vec2{t, 1.0};
      const Vec2 s2 = vertical ? Vec2{0.0, t} : Vec2{t, 0.0};
      for (int l = 0; l <= p; ++l) {
        double frob = 0.0;
        for (int a = 0; a <= l; ++a) {
          const int b = l - a;
          double v1 = 0.0, v2 = 0.0;
          const auto &der = tab.d[a][b];
          for (int m = 0; m < nl; ++m) {
            v1 += dg[r1 * nl + m] * der[m].eval(s1.x, s1.y);
            v2 += dg[r2 * nl + m] * der[m].eval(s2.x, s2.y);
          }
          const double jump = (v1 - v2) / std::pow(mesh.h, l);
          frob += tab.binom[l][a] * jump * jump;
        }
        parts[l] += g1.weights[q] * mesh.h * frob;  // ds = h dt
      }
    }
  };

  for (int r = 0; r < am.element_count(); ++r) {
    const int e = am.elements[r];
    const int ex = mesh.element_x(e), ey = mesh.element_y(e);
    if (ex + 1 < mesh.nx) {
      const int er = mesh.element_id(ex + 1, ey);
      if (am.element_rank[er] >= 0) face_term(r, am.element_rank[er], true);
    }
    if (ey + 1 < mesh.ny) {
      const int et = mesh.element_id(ex, ey + 1);
      if (am.element_rank[et] >= 0) face_term(r, am.element_rank[et], false);
    }
  }
  for (int l = 0; l <= p; ++l)
    parts[l] *= std::pow(mesh.h, 2 * l + 1);
  return parts;
}

double jump_norm(const ActiveMesh &am, const std::vector<double> &dg) {
  double s = 0.0;
  for (double v : jump_norm_parts(am, dg)) s += v;
  return std::sqrt(s);
}

double dg_l2_norm(const ActiveMesh &am, const std::vector<double> &dg) {
  const BasisLocal &local = am.space->local();
  const int nl = local.count();
  const double h2 = am.space->mesh().h * am.space->mesh().h;
  const auto &gram = local.reference_gram();
  double s = 0.0;
  for (int r = 0; r < am.element_count(); ++r) {
    const double *c = dg.data() + std::size_t(r) * nl;
    for (int i = 0; i < nl; ++i)
      for (int j = 0; j < nl; ++j) s += c[i] * c[j] * gram[i * nl + j] * h2;
  }
  return std::sqrt(std::max(0.0, s));
}

double eval_dg(const ActiveMesh &am, const std::vector<double> &dg, int element,
               const Vec2 &s, Vec2 *grad_global) {
  const BasisLocal &local = am.space->local();
  const int nl = local.count();
  const int r = am.element_rank[element];
  if (r < 0) throw std::out_of_range("eval_dg: element not active");
  double vals[64];
  Vec2 grads[64];
  local.eval_all(s, vals, grad_global ? grads : nullptr);
  double v = 0.0;
  if (grad_global) *grad_global = {0.0, 0.0};
  const double h = am.space->mesh().h;
  for (int l = 0; l < nl; ++l) {
    const double c = dg[r * nl + l];
    v += c * vals[l];
    if (grad_global) {
      grad_global->x += c * grads[l].x / h;
      grad_global->y += c * grads[l].y / h;
    }
  }
  return v;
}

}  // namespace spx
