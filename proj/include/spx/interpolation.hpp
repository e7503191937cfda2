#ifndef SPX_INTERPOLATION_HPP
#define SPX_INTERPOLATION_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "spx/linalg.hpp"
#include "spx/mesh.hpp"
#include "spx/trim.hpp"

namespace spx {

using ScalarField = std::function<double(const Vec2 &)>;

/// Element-discontinuous companion of the active spline space. The block of
/// element rank r holds the coefficients of {phi_i|_T : i in I_T} in the
/// fixed local order, so dof (r, l) pairs with element_basis(T)[l].
struct DgSpace {
  const ActiveMesh *active = nullptr;
  int block = 0;  // (p+1)^2

  explicit DgSpace(const ActiveMesh &am)
      : active(&am), block(am.space->local().count()) {}
  int dim() const { return active->element_count() * block; }
  int index(int element_rank, int l) const { return element_rank * block + l; }
};

enum class WeightMode { CutArea, Uniform, SingleElement };

/// Convex-combination weights for blending per-element projection
/// coefficients. In restricted mode the weights of small elements are
/// zeroed for basis functions that see a large element, which keeps the
/// extension from altering the large degrees of freedom.
struct WeightScheme {
  WeightMode mode = WeightMode::CutArea;
  bool restricted = false;
  std::vector<std::uint8_t> elem_is_large;   // by element id (restricted mode)
  std::vector<std::uint8_t> basis_is_large;  // by basis id (restricted mode)

  static WeightScheme plain(WeightMode m) { return {m, false, {}, {}}; }

  /// Unnormalized weight of element e for basis g.
  double raw_weight(int g, int e, const TrimmedDomain &dom) const;
  /// Normalized weights over the active elements in the support of g.
  std::vector<double> weights(int g, const std::vector<int> &support_elems,
                              const TrimmedDomain &dom) const;
};

/// L2(T) projection of f onto the local polynomial space of element e,
/// returned as coefficients over element_basis(e). The projection uses the
/// full element, so f must be evaluable on all of it.
std::vector<double> local_projection(const SplineSpace &space, int element,
                                     const ScalarField &f, int quad_order);

/// Per-element projections of f collected into a dG coefficient vector.
std::vector<double> dg_projection(const ActiveMesh &am, const ScalarField &f,
                                  int quad_order);

/// Interpolation matrix from dG coefficients to active spline coefficients;
/// row sums are 1 and each (basis, element) pair contributes one entry.
CoeffMatrix assemble_Ih(const ActiveMesh &am, const TrimmedDomain &dom,
                        const WeightScheme &weights);

/// The quasi-interpolant: blended per-element projections of f.
std::vector<double> interpolate(const ActiveMesh &am, const TrimmedDomain &dom,
                                const WeightScheme &weights, const ScalarField &f,
                                int quad_order);

/// Restriction of a continuous spline to the dG space (exact).
std::vector<double> spline_to_dg(const ActiveMesh &am,
                                 const std::vector<double> &coeffs);

/// Face-jump norm with derivative jumps of all orders 0..p over the
/// interior faces of the active mesh.
double jump_norm(const ActiveMesh &am, const std::vector<double> &dg);

/// Contribution of derivative order l to the squared jump norm.
std::vector<double> jump_norm_parts(const ActiveMesh &am,
                                    const std::vector<double> &dg);

/// L2 norm of a dG function over the active mesh.
double dg_l2_norm(const ActiveMesh &am, const std::vector<double> &dg);

/// Value (and gradient) of a dG function inside element `element`.
double eval_dg(const ActiveMesh &am, const std::vector<double> &dg, int element,
               const Vec2 &s, Vec2 *grad_global = nullptr);

}  // namespace spx

#endif
