#ifndef SPX_QUADRATURE_HPP
#define SPX_QUADRATURE_HPP

#include <vector>

#include "spx/geometry.hpp"

namespace spx {

struct QuadRule1D {
  std::vector<double> points;   // on [0,1]
  std::vector<double> weights;  // sum to 1
};

/// n-point Gauss-Legendre rule on [0,1]; exact for degree <= 2n-1.
const QuadRule1D &gauss_legendre_01(int n);

struct QuadPoint2D {
  Vec2 x;
  double w;
};

/// Tensor-product Gauss rule on [0,1]^2 with n points per direction.
std::vector<QuadPoint2D> tensor_gauss_01(int n);

/// Gauss rule on a triangle via the collapsed-square map; exact for
/// total degree <= 2n-1. Weights carry the triangle area.
std::vector<QuadPoint2D> triangle_gauss(const Triangle &tri, int n);

}  // namespace spx

#endif
