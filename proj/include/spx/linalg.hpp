#ifndef SPX_LINALG_HPP
#define SPX_LINALG_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace spx {

struct Triplet {
  int row = 0, col = 0;
  double value = 0.0;
};

/// Compressed sparse row matrix with sorted, unique column indices per row
/// and no explicitly stored zeros.
class CoeffMatrix {
 public:
  CoeffMatrix() = default;
  CoeffMatrix(int rows, int cols) : rows_(rows), cols_(cols), row_ptr_(rows + 1, 0) {}

  /// Builds from triplets; duplicate entries are summed, exact zeros dropped.
  static CoeffMatrix from_triplets(int rows, int cols, std::vector<Triplet> triplets);
  static CoeffMatrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::int64_t nnz() const { return static_cast<std::int64_t>(values_.size()); }

  const std::vector<int> &row_ptr() const { return row_ptr_; }
  const std::vector<int> &col_idx() const { return col_idx_; }
  const std::vector<double> &values() const { return values_; }

  double at(int r, int c) const;

  std::vector<double> multiply(const std::vector<double> &x) const;
  std::vector<double> multiply_transpose(const std::vector<double> &x) const;
  CoeffMatrix transpose() const;
  CoeffMatrix multiply(const CoeffMatrix &other) const;

  /// Keeps only the listed columns (in the given order), renumbering them
  /// 0..k-1.
  CoeffMatrix select_columns(const std::vector<int> &cols) const;

  std::vector<double> diagonal() const;
  double symmetry_error() const;  // max |A - A^T| entry
  std::vector<std::vector<double>> to_dense() const;

  void write_matrix_market(std::ostream &os) const;

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<int> row_ptr_;
  std::vector<int> col_idx_;
  std::vector<double> values_;
};

/// E^T A E with sparse operands.
CoeffMatrix triple_product(const CoeffMatrix &E, const CoeffMatrix &A);

/// Dense row-major matrix with the few factorizations the solvers need.
class DenseMatrix {
 public:
  DenseMatrix() = default;
  DenseMatrix(int rows, int cols) : rows_(rows), cols_(cols), a_(std::size_t(rows) * cols, 0.0) {}
  static DenseMatrix from_sparse(const CoeffMatrix &m);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double &operator()(int i, int j) { return a_[std::size_t(i) * cols_ + j]; }
  double operator()(int i, int j) const { return a_[std::size_t(i) * cols_ + j]; }

  std::vector<double> multiply(const std::vector<double> &x) const;
  /// LU with partial pivoting; throws on singular input.
  std::vector<double> solve(std::vector<double> rhs) const;
  /// LU carried out in extended precision. The local Gram systems reach
  /// condition numbers near 5e7 at p = 3, which double-precision solves
  /// amplify past the exactness tolerances; 80-bit arithmetic restores
  /// them. Intended for small matrices only.
  std::vector<double> solve_precise(const std::vector<double> &rhs) const;
  /// All eigenvalues of a symmetric matrix (tridiagonalization + implicit QL).
  std::vector<double> symmetric_eigenvalues() const;

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<double> a_;
};

enum class Preconditioner { None, Diagonal };

struct PcgResult {
  std::vector<double> x;
  bool converged = false;
  int iterations = 0;
  double relative_residual = 0.0;
  std::vector<double> residual_history;
};

PcgResult pcg_solve(const CoeffMatrix &A, const std::vector<double> &b,
                    Preconditioner precond, double tol, int max_iter = 0);

struct ConditionOptions {
  Preconditioner precond = Preconditioner::None;
  int dense_cap = 6000;
};

/// Two-norm condition number via a dense symmetric eigensolver; refuses
/// matrices above the dense cap rather than falling back to iteration.
double condition_number(const CoeffMatrix &A, const ConditionOptions &opts);

double dot(const std::vector<double> &a, const std::vector<double> &b);
double norm2(const std::vector<double> &a);

}  // namespace spx

#endif
