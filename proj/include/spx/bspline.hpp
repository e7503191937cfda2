#ifndef SPX_BSPLINE_HPP
#define SPX_BSPLINE_HPP

#include <vector>

#include "spx/geometry.hpp"

namespace spx {

/// Univariate polynomial with coefficients over powers of the argument.
struct Poly1 {
  std::vector<double> c;  // c[k] multiplies t^k

  double eval(double t) const {
    double v = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) v = v * t + c[k];
    return v;
  }
  Poly1 derivative() const {
    Poly1 d;
    if (c.size() <= 1) { d.c = {0.0}; return d; }
    d.c.resize(c.size() - 1);
    for (std::size_t k = 1; k < c.size(); ++k) d.c[k - 1] = c[k] * static_cast<double>(k);
    return d;
  }
  /// Coefficients of t -> p(t + a), by binomial expansion.
  Poly1 shifted(double a) const;
};

/// Bivariate tensor polynomial on an element in local coordinates
/// s in [0,1]^2; coef[b * n + a] multiplies sx^a sy^b with a,b < n.
struct Poly2 {
  int n = 0;  // p + 1
  std::vector<double> coef;

  double eval(double sx, double sy) const;
  Poly2 dx() const;
  Poly2 dy() const;
  /// Coefficients of s -> q(s + d) for the same degree bound.
  Poly2 shifted(const Vec2 &d) const;
};

/// Local polynomial data for the uniform B-spline basis of degree p with
/// maximal regularity. The basis is translation invariant, so a single set
/// of reference polynomials serves every element: local index
/// l = ly*(p+1) + lx refers to the basis function whose grid index is the
/// element index plus (lx, ly).
class BasisLocal {
 public:
  explicit BasisLocal(int degree);

  int degree() const { return p_; }
  int count1d() const { return p_ + 1; }
  int count() const { return (p_ + 1) * (p_ + 1); }

  /// Univariate piece of local function a on [0,1]; a = 0 is the basis
  /// function whose support ends in this element.
  const Poly1 &piece(int a) const { return pieces_[a]; }
  const Poly1 &piece_deriv(int a) const { return pieces_d_[a]; }

  /// Tensor polynomial of local function l in element-local coordinates.
  const Poly2 &local_poly(int l) const { return polys_[l]; }

  /// Values (and optionally d/ds gradients) of all local functions at s.
  /// Gradients are with respect to local coordinates; divide by h for
  /// physical derivatives.
  void eval_all(const Vec2 &s, double *values, Vec2 *grads_local) const;

  /// Reference Gram matrix (count x count, row-major) of the local basis
  /// over [0,1]^2 with unit measure.
  const std::vector<double> &reference_gram() const { return gram_; }

 private:
  int p_;
  std::vector<Poly1> pieces_;    // index a in [0, p]
  std::vector<Poly1> pieces_d_;
  std::vector<Poly2> polys_;     // index l in [0, (p+1)^2)
  std::vector<double> gram_;
};

/// Pieces of the cardinal B-spline of degree p on integer knots 0..p+1,
/// span m in [0,p], as a polynomial in the local coordinate s = t - m.
std::vector<Poly1> cardinal_bspline_pieces(int degree);

}  // namespace spx

#endif
