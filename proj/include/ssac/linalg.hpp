#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "ssac/gf.hpp"

namespace ssac {

template <typename Scalar>
using DenseMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename Scalar>
using DenseRowVector = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

/// Dense matrix over GF(2^w); the field travels alongside as an argument.
using GfMatrix = DenseMatrix<Symbol>;
/// Dense row vector over GF(2^w).
using GfVector = DenseRowVector<Symbol>;

using Index = Eigen::Index;

/// Throws FieldError if any entry is outside the field.
template <typename Derived>
void require_in_field(const Field& field, const Eigen::MatrixBase<Derived>& m) {
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j)
      if (!field.contains(m(i, j))) throw FieldError("matrix entry outside " + field.describe());
}

/// Reduced row echelon form of a matrix, with the row operations that produced it.
struct RowEchelon {
  GfMatrix reduced;
  /// `transform * original == reduced`.
  GfMatrix transform;
  std::vector<Index> pivot_columns;
  Index rank() const { return static_cast<Index>(pivot_columns.size()); }
};

/// Gauss-Jordan elimination to RREF, pivot columns taken in column order.
RowEchelon row_reduce(const Field& field, const GfMatrix& mat);

Index rank(const Field& field, const GfMatrix& mat);

/// Returns some x with x * E == w, or nullopt if w is outside the row space of E.
/// Solves E^T x^T = w^T; free variables are set to zero.
std::optional<GfVector> left_solve(const Field& field, const GfMatrix& E, const GfVector& w);

/// x * E.
GfVector mat_vec_left(const Field& field, const GfVector& x, const GfMatrix& E);

GfMatrix multiply(const Field& field, const GfMatrix& A, const GfMatrix& B);

/// A^{-1} * B for square A, or nullopt when A is singular.
std::optional<GfMatrix> invert_and_apply(const Field& field, const GfMatrix& A, const GfMatrix& B);

/// Solves A * X = B for A with full column rank (A may have more rows than
/// columns). Returns nullopt if A is rank deficient or the system is inconsistent.
std::optional<GfMatrix> solve_full_column_rank(const Field& field, const GfMatrix& A,
                                               const GfMatrix& B);

/// Membership and left-solve against a fixed matrix E, factored once.
///
/// Keeps the RREF R of E with the transform T (T * E == R). A vector w lies in
/// the row space iff w == sum over pivots p of w[p] * R_p, and then
/// x = sum w[p] * T_p. For sparse w this costs O(nnz(w) * cols) per query.
class RowSpaceSolver {
 public:
  RowSpaceSolver(const Field& field, const GfMatrix& E);

  Index rank() const { return echelon_.rank(); }
  bool contains(const GfVector& w) const;
  std::optional<GfVector> solve(const GfVector& w) const;

 private:
  bool residual_is_zero(const GfVector& w) const;

  Field field_;
  RowEchelon echelon_;
  // pivot_row_[c] is the RREF row whose pivot sits in column c, or -1.
  std::vector<Index> pivot_row_;
};

}  // namespace ssac
