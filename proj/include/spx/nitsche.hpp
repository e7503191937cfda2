#ifndef SPX_NITSCHE_HPP
#define SPX_NITSCHE_HPP

#include <functional>
#include <optional>
#include <vector>

#include "spx/extension.hpp"
#include "spx/interpolation.hpp"
#include "spx/linalg.hpp"
#include "spx/mesh.hpp"
#include "spx/surface.hpp"
#include "spx/trim.hpp"

namespace spx {

struct PoissonData {
  ScalarField f;    // volume source on the reference domain
  ScalarField g_d;  // Dirichlet data on the reference boundary
};

inline double default_beta(int p) { return 25.0 * p * p; }

struct NitscheSystem {
  CoeffMatrix A;           // full active-basis stiffness
  std::vector<double> b;   // load
  double beta = 0.0;
  double h = 0.0;
};

/// Assembles the symmetric Nitsche form over the cut-cell volume and
/// boundary rules. A surface map inserts |G|^{1/2} and G^{-1}; the flat
/// problem is the identity map.
NitscheSystem assemble_nitsche(const ActiveMesh &am, const TrimmedDomain &dom,
                               const PoissonData &data, double beta,
                               const SurfaceMap &map = SurfaceMap::identity());

struct SolveOptions {
  int dense_threshold = 3000;
  double tol = 1e-12;
};

struct SolveResult {
  std::vector<double> u_reduced;  // coefficients on the large dofs
  std::vector<double> u_full;    // expanded coefficients on all dofs
  double relative_residual = 0.0;
  bool used_dense = false;
  bool converged = true;
  int iterations = 0;
  std::vector<double> residual_history;
};

/// Solves (E^T A E) u_r = E^T b, then expands u = E u_r.
SolveResult solve_reduced(const NitscheSystem &sys, const CoeffMatrix &Eh,
                          const SolveOptions &opts = {});

struct ErrorNorms {
  double l2 = 0.0;
  double h1_semi = 0.0;
};

/// L2(Ω) and H1(Ω) seminorm errors of a spline field against an exact
/// solution, integrated with the cut-cell volume rules.
ErrorNorms error_norms(const ActiveMesh &am, const TrimmedDomain &dom,
                       const std::vector<double> &coeffs, const ScalarField &exact,
                       const std::function<Vec2(const Vec2 &)> &exact_grad);

/// max over sampled extended-space functions of
/// h ||grad_n v||^2_{dΩ} / ||grad v||^2_Ω; a coercivity diagnostic.
double inverse_inequality_ratio(const ActiveMesh &am, const TrimmedDomain &dom,
                                const CoeffMatrix &Eh, int samples,
                                unsigned long long seed);

/// Worst per-element ratio |dΩ ∩ T| / h, reported alongside the inverse
/// inequality diagnostic.
double max_boundary_length_ratio(const ActiveMesh &am, const TrimmedDomain &dom);

}  // namespace spx

#endif
