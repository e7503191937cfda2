#ifndef SPX_EXTENSION_HPP
#define SPX_EXTENSION_HPP

#include <vector>

#include "spx/interpolation.hpp"
#include "spx/linalg.hpp"
#include "spx/mesh.hpp"
#include "spx/trim.hpp"

namespace spx {

/// Large/small element partition with the small-to-large association map.
/// An element is large when gamma * h^2 <= |T ∩ Ω|; the large basis set I^L
/// collects every basis function whose support contains a large element.
struct ExtensionPartition {
  double gamma = 0.0;
  std::vector<int> large_elements;  // element ids, ascending
  std::vector<int> small_elements;
  std::vector<std::uint8_t> elem_is_large;  // by element id
  std::vector<int> sh;                      // by element rank: target element id
  bool sh_built = false;
  std::vector<int> basis_large;  // I^L, ascending basis ids
  std::vector<int> basis_small;  // I^S
  std::vector<std::uint8_t> basis_is_large;  // by basis id
  double max_sh_diam_ratio = 0.0;  // max diam(S_h(T) ∪ T) / h

  int large_dof_count() const { return static_cast<int>(basis_large.size()); }
};

/// Classifies active elements by cut area; S_h is not built yet.
ExtensionPartition partition(const ActiveMesh &am, const TrimmedDomain &dom,
                             double gamma);

/// Associates every small element with the large element whose cut centroid
/// is nearest (ties to the smallest element id). The search covers a
/// (2 * radius + 1)^2 neighborhood first and falls back to a global scan.
void build_Sh(ExtensionPartition &part, const ActiveMesh &am,
              const TrimmedDomain &dom, int radius = 0);

/// Weight scheme wired to the partition's large sets (restricted mode).
WeightScheme make_weights(WeightMode mode, const ActiveMesh &am,
                          const ExtensionPartition &part);

/// Preliminary extension matrix from spline coefficients to dG
/// coefficients: identity blocks on large elements, polynomial extension
/// from S_h(T) on small elements. Columns of small basis functions are
/// zeroed unless `zero_small_columns` is cleared (used for equivalence
/// checks).
CoeffMatrix assemble_Bh(const ExtensionPartition &part, const ActiveMesh &am,
                        bool zero_small_columns = true);

/// Final extension matrix E_h = I_h * B_h with columns restricted to the
/// large basis functions. With no small elements this is the identity.
CoeffMatrix assemble_Eh(const ExtensionPartition &part, const ActiveMesh &am,
                        const TrimmedDomain &dom, const WeightScheme &weights);

/// dG-to-dG action of the preliminary extension: each element receives the
/// polynomial of its associated element. Macro-element-wise polynomials are
/// fixed points.
std::vector<double> apply_Bh_dg(const ExtensionPartition &part,
                                const ActiveMesh &am,
                                const std::vector<double> &dg);

/// Change of local coefficients under canonical polynomial extension from
/// an element to one offset by (dx, dy) element steps; column j holds the
/// target-element coefficients of the extended j-th source function.
std::vector<double> extension_block(const BasisLocal &local, int dx, int dy);

/// Support diameter (in units of h), sup-norm estimate, and overlap count
/// of the extended basis functions, measured from the columns of E_h.
struct ExtendedBasisStats {
  double max_support_diam_ratio = 0.0;
  double max_sup_norm = 0.0;
  int max_overlap = 0;
};
ExtendedBasisStats extended_basis_stats(const ExtensionPartition &part,
                                        const ActiveMesh &am,
                                        const CoeffMatrix &Eh);

}  // namespace spx

#endif
