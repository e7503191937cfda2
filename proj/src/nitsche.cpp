#include "spx/nitsche.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace spx {

NitscheSystem assemble_nitsche(const ActiveMesh &am, const TrimmedDomain &dom,
                               const PoissonData &data, double beta,
                               const SurfaceMap &map) {
  const SplineSpace &space = *am.space;
  const BackgroundMesh &mesh = space.mesh();
  const BasisLocal &local = space.local();
  const int nl = local.count();
  const double h = mesh.h;
  const int ndof = am.dof_count();

  NitscheSystem sys;
  sys.beta = beta;
  sys.h = h;
  sys.b.assign(ndof, 0.0);
  std::vector<Triplet> trip;
  trip.reserve(std::size_t(am.element_count()) * nl * nl);

  std::vector<int> ids(nl);
  std::vector<double> vals(nl);
  std::vector<Vec2> grads(nl);
  std::vector<double> Aloc(nl * nl);
  std::vector<double> bloc(nl);
  std::vector<double> dn(nl);

  for (int r = 0; r < am.element_count(); ++r) {
    const int e = am.elements[r];
    const CutCell *cell = dom.cell(e);
    space.element_basis(e, ids.data());
    std::fill(Aloc.begin(), Aloc.end(), 0.0);
    std::fill(bloc.begin(), bloc.end(), 0.0);

    // volume terms
    for (std::size_t q = 0; q < cell->vol_s.size(); ++q) {
      const Vec2 s = cell->vol_s[q];
      const double w = cell->vol_w[q];
      const Vec2 x = mesh.to_global(e, s);
      const MetricData m = map.metric(x);
      local.eval_all(s, vals.data(), grads.data());
      for (int l = 0; l < nl; ++l) grads[l] = grads[l] * (1.0 / h);
      const double fv = data.f ? data.f(x) : 0.0;
      for (int i = 0; i < nl; ++i) {
        const Vec2 gi = m.G.solve(grads[i]);
        for (int j = 0; j < nl; ++j)
          Aloc[i * nl + j] += w * m.sqrt_det * (gi.x * grads[j].x + gi.y * grads[j].y);
        bloc[i] += w * m.sqrt_det * fv * vals[i];
      }
    }

    // boundary terms
    for (std::size_t q = 0; q < cell->bnd_s.size(); ++q) {
      const Vec2 s = cell->bnd_s[q];
      const double w = cell->bnd_w[q];
      const Vec2 n = cell->bnd_n[q];
      const Vec2 x = mesh.to_global(e, s);
      const MetricData m = map.metric(x);
      local.eval_all(s, vals.data(), grads.data());
      for (int l = 0; l < nl; ++l) grads[l] = grads[l] * (1.0 / h);
      // conormal derivative n . G^{-1} grad v
      for (int l = 0; l < nl; ++l) {
        const Vec2 gi = m.G.solve(grads[l]);
        dn[l] = n.x * gi.x + n.y * gi.y;
      }
      const double gv = data.g_d ? data.g_d(x) : 0.0;
      const double pen = beta / h;
      for (int i = 0; i < nl; ++i) {
        for (int j = 0; j < nl; ++j)
          Aloc[i * nl + j] += w * m.sqrt_det *
                              (-dn[j] * vals[i] - vals[j] * dn[i] + pen * vals[i] * vals[j]);
        bloc[i] += w * m.sqrt_det * gv * (pen * vals[i] - dn[i]);
      }
    }

    for (int i = 0; i < nl; ++i) {
      const int bi = am.basis_rank[ids[i]];
      sys.b[bi] += bloc[i];
      for (int j = 0; j < nl; ++j) {
        const double v = Aloc[i * nl + j];
        if (v != 0.0) trip.push_back({bi, am.basis_rank[ids[j]], v});
      }
    }
  }
  sys.A = CoeffMatrix::from_triplets(ndof, ndof, std::move(trip));
  return sys;
}

SolveResult solve_reduced(const NitscheSystem &sys, const CoeffMatrix &Eh,
                          const SolveOptions &opts) {
  if (Eh.rows() != sys.A.rows())
    throw std::invalid_argument("solve_reduced: extension/stiffness mismatch");
  const CoeffMatrix R = triple_product(Eh, sys.A);
  const std::vector<double> rb = Eh.multiply_transpose(sys.b);
  SolveResult res;
  const int n = R.rows();
  if (n <= opts.dense_threshold) {
    res.u_reduced = DenseMatrix::from_sparse(R).solve(rb);
    res.used_dense = true;
    res.iterations = 0;
  } else {
    PcgResult pcg = pcg_solve(R, rb, Preconditioner::Diagonal, opts.tol);
    res.u_reduced = std::move(pcg.x);
    res.converged = pcg.converged;
    res.iterations = pcg.iterations;
    res.residual_history = std::move(pcg.residual_history);
  }
  // relative residual of the reduced system
  const auto Ax = R.multiply(res.u_reduced);
  double rn = 0.0, bn = 0.0;
  for (std::size_t i = 0; i < rb.size(); ++i) {
    rn += (Ax[i] - rb[i]) * (Ax[i] - rb[i]);
    bn += rb[i] * rb[i];
  }
  res.relative_residual = bn > 0.0 ? std::sqrt(rn / bn) : std::sqrt(rn);
  if (!res.used_dense && !res.converged)
    throw std::runtime_error("solve_reduced: PCG did not converge after " +
                             std::to_string(res.iterations) +
                             " iterations, residual " +
                             std::to_string(res.relative_residual));
  res.u_full = Eh.multiply(res.u_reduced);
  return res;
}

ErrorNorms error_norms(const ActiveMesh &am, const TrimmedDomain &dom,
                       const std::vector<double> &coeffs, const ScalarField &exact,
                       const std::function<Vec2(const Vec2 &)> &exact_grad) {
  const SplineSpace &space = *am.space;
  const BackgroundMesh &mesh = space.mesh();
  const BasisLocal &local = space.local();
  const int nl = local.count();
  const double h = mesh.h;
  std::vector<int> ids(nl);
  std::vector<double> vals(nl);
  std::vector<Vec2> grads(nl);
  double l2 = 0.0, h1 = 0.0;
  for (int r = 0; r < am.element_count(); ++r) {
    const int e = am.elements[r];
    const CutCell *cell = dom.cell(e);
    space.element_basis(e, ids.data());
    for (std::size_t q = 0; q < cell->vol_s.size(); ++q) {
      const Vec2 s = cell->vol_s[q];
      const double w = cell->vol_w[q];
      const Vec2 x = mesh.to_global(e, s);
      local.eval_all(s, vals.data(), grads.data());
      double uh = 0.0;
      Vec2 guh{0.0, 0.0};
      for (int l = 0; l < nl; ++l) {
        const double c = coeffs[am.basis_rank[ids[l]]];
        uh += c * vals[l];
        guh.x += c * grads[l].x / h;
        guh.y += c * grads[l].y / h;
      }
      const double du = uh - exact(x);
      l2 += w * du * du;
      if (exact_grad) {
        const Vec2 dg = guh - exact_grad(x);
        h1 += w * (dg.x * dg.x + dg.y * dg.y);
      }
    }
  }
  return {std::sqrt(l2), std::sqrt(h1)};
}

double inverse_inequality_ratio(const ActiveMesh &am, const TrimmedDomain &dom,
                                const CoeffMatrix &Eh, int samples,
                                unsigned long long seed) {
  const SplineSpace &space = *am.space;
  const BackgroundMesh &mesh = space.mesh();
  const BasisLocal &local = space.local();
  const int nl = local.count();
  const double h = mesh.h;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::vector<int> ids(nl);
  std::vector<double> vals(nl);
  std::vector<Vec2> grads(nl);
  double worst = 0.0;
  for (int trial = 0; trial < samples; ++trial) {
    std::vector<double> ur(Eh.cols());
    for (auto &v : ur) v = unif(rng);
    const auto u = Eh.multiply(ur);
    double num = 0.0, den = 0.0;
    for (int r = 0; r < am.element_count(); ++r) {
      const int e = am.elements[r];
      const CutCell *cell = dom.cell(e);
      space.element_basis(e, ids.data());
      for (std::size_t q = 0; q < cell->vol_s.size(); ++q) {
        local.eval_all(cell->vol_s[q], vals.data(), grads.data());
        Vec2 g{0.0, 0.0};
        for (int l = 0; l < nl; ++l) {
          const double c = u[am.basis_rank[ids[l]]];
          g.x += c * grads[l].x / h;
          g.y += c * grads[l].y / h;
        }
        den += cell->vol_w[q] * (g.x * g.x + g.y * g.y);
      }
      for (std::size_t q = 0; q < cell->bnd_s.size(); ++q) {
        local.eval_all(cell->bnd_s[q], vals.data(), grads.data());
        Vec2 g{0.0, 0.0};
        for (int l = 0; l < nl; ++l) {
          const double c = u[am.basis_rank[ids[l]]];
          g.x += c * grads[l].x / h;
          g.y += c * grads[l].y / h;
        }
        const double dn = cell->bnd_n[q].x * g.x + cell->bnd_n[q].y * g.y;
        num += cell->bnd_w[q] * dn * dn;
      }
    }
    if (den > 0.0) worst = std::max(worst, h * num / den);
  }
  return worst;
}

double max_boundary_length_ratio(const ActiveMesh &am, const TrimmedDomain &dom) {
  double worst = 0.0;
  const double h = am.space->mesh().h;
  for (int e : am.elements) {
    const CutCell *cell = dom.cell(e);
    double len = 0.0;
    for (double w : cell->bnd_w) len += w;
    worst = std::max(worst, len / h);
  }
  return worst;
}

}  // namespace spx
