#include "ssac/linalg.hpp"

#include <stdexcept>
#include <string>

namespace ssac {
namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::invalid_argument(std::string("dimension mismatch: ") + what);
}

// row(dst) += c * row(src), over columns [0, cols).
void axpy_row(const Field& f, GfMatrix& m, Index dst, Index src, Symbol c) {
  if (c == 0) return;
  auto d = m.row(dst);
  auto s = m.row(src);
  for (Index j = 0; j < m.cols(); ++j) d(j) ^= f.mul_unchecked(c, s(j));
}

void scale_row(const Field& f, GfMatrix& m, Index r, Symbol c) {
  for (Index j = 0; j < m.cols(); ++j) m(r, j) = f.mul_unchecked(c, m(r, j));
}

// Gauss-Jordan over the first `pivot_limit` columns of `m`, mirroring every
// row operation onto `companion` when given. Returns pivot columns in order.
std::vector<Index> gauss_jordan(const Field& f, GfMatrix& m, Index pivot_limit, GfMatrix* companion) {
  std::vector<Index> pivots;
  Index row = 0;
  for (Index col = 0; col < pivot_limit && row < m.rows(); ++col) {
    Index pick = -1;
    for (Index r = row; r < m.rows(); ++r) {
      if (m(r, col) != 0) {
        pick = r;
        break;
      }
    }
    if (pick < 0) continue;
    if (pick != row) {
      m.row(pick).swap(m.row(row));
      if (companion) companion->row(pick).swap(companion->row(row));
    }
    const Symbol pivot = m(row, col);
    if (pivot == 0) throw std::logic_error("zero pivot");
    const Symbol scale = f.inv_unchecked(pivot);
    scale_row(f, m, row, scale);
    if (companion) scale_row(f, *companion, row, scale);
    for (Index r = 0; r < m.rows(); ++r) {
      if (r == row) continue;
      const Symbol c = m(r, col);
      if (c == 0) continue;
      axpy_row(f, m, r, row, c);
      if (companion) axpy_row(f, *companion, r, row, c);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace

RowEchelon row_reduce(const Field& field, const GfMatrix& mat) {
  require_in_field(field, mat);
  RowEchelon out;
  out.reduced = mat;
  out.transform = GfMatrix::Identity(mat.rows(), mat.rows());
  out.pivot_columns = gauss_jordan(field, out.reduced, mat.cols(), &out.transform);
  return out;
}

Index rank(const Field& field, const GfMatrix& mat) {
  require_in_field(field, mat);
  GfMatrix work = mat;
  return static_cast<Index>(gauss_jordan(field, work, work.cols(), nullptr).size());
}

std::optional<GfVector> left_solve(const Field& field, const GfMatrix& E, const GfVector& w) {
  require(w.cols() == E.cols(), "left_solve expects w.len == E.cols");
  require_in_field(field, E);
  require_in_field(field, w);

  // [E^T | w^T], eliminated over the E^T block.
  const Index n = E.cols();
  const Index k = E.rows();
  GfMatrix aug(n, k + 1);
  aug.leftCols(k) = E.transpose();
  aug.col(k) = w.transpose();
  const auto pivots = gauss_jordan(field, aug, k, nullptr);

  const auto r = static_cast<Index>(pivots.size());
  for (Index i = r; i < n; ++i) {
    if (aug(i, k) != 0) return std::nullopt;
  }
  GfVector x = GfVector::Zero(k);
  for (Index i = 0; i < r; ++i) x(pivots[static_cast<std::size_t>(i)]) = aug(i, k);
  return x;
}

GfVector mat_vec_left(const Field& field, const GfVector& x, const GfMatrix& E) {
  require(x.cols() == E.rows(), "mat_vec_left expects x.len == E.rows");
  require_in_field(field, x);
  require_in_field(field, E);
  GfVector out = GfVector::Zero(E.cols());
  for (Index i = 0; i < E.rows(); ++i) {
    const Symbol c = x(i);
    if (c == 0) continue;
    for (Index j = 0; j < E.cols(); ++j) out(j) ^= field.mul_unchecked(c, E(i, j));
  }
  return out;
}

GfMatrix multiply(const Field& field, const GfMatrix& A, const GfMatrix& B) {
  require(A.cols() == B.rows(), "multiply expects A.cols == B.rows");
  require_in_field(field, A);
  require_in_field(field, B);
  GfMatrix out = GfMatrix::Zero(A.rows(), B.cols());
  for (Index i = 0; i < A.rows(); ++i)
    for (Index l = 0; l < A.cols(); ++l) {
      const Symbol c = A(i, l);
      if (c == 0) continue;
      for (Index j = 0; j < B.cols(); ++j) out(i, j) ^= field.mul_unchecked(c, B(l, j));
    }
  return out;
}

std::optional<GfMatrix> invert_and_apply(const Field& field, const GfMatrix& A, const GfMatrix& B) {
  require(A.rows() == A.cols(), "invert_and_apply expects square A");
  require(A.rows() == B.rows(), "invert_and_apply expects A.rows == B.rows");
  return solve_full_column_rank(field, A, B);
}

std::optional<GfMatrix> solve_full_column_rank(const Field& field, const GfMatrix& A,
                                               const GfMatrix& B) {
  require(A.rows() == B.rows(), "solve expects A.rows == B.rows");
  require_in_field(field, A);
  require_in_field(field, B);
  const Index n = A.cols();
  GfMatrix lhs = A;
  GfMatrix rhs = B;
  const auto pivots = gauss_jordan(field, lhs, n, &rhs);
  if (static_cast<Index>(pivots.size()) != n) return std::nullopt;
  // Rows beyond n are zero on the left; the right side must agree.
  if (!rhs.bottomRows(rhs.rows() - n).isZero()) return std::nullopt;
  return GfMatrix(rhs.topRows(n));
}

RowSpaceSolver::RowSpaceSolver(const Field& field, const GfMatrix& E)
    : field_(field), echelon_(row_reduce(field, E)), pivot_row_(static_cast<std::size_t>(E.cols()), -1) {
  for (std::size_t i = 0; i < echelon_.pivot_columns.size(); ++i) {
    pivot_row_[static_cast<std::size_t>(echelon_.pivot_columns[i])] = static_cast<Index>(i);
  }
}

bool RowSpaceSolver::residual_is_zero(const GfVector& w) const {
  require(w.cols() == echelon_.reduced.cols(), "solver expects w.len == E.cols");
  GfVector residual = w;
  for (Index c = 0; c < w.cols(); ++c) {
    const Symbol coeff = w(c);
    const Index r = pivot_row_[static_cast<std::size_t>(c)];
    if (coeff == 0 || r < 0) continue;
    auto row = echelon_.reduced.row(r);
    for (Index j = 0; j < residual.cols(); ++j) residual(j) ^= field_.mul_unchecked(coeff, row(j));
  }
  return residual.isZero();
}

bool RowSpaceSolver::contains(const GfVector& w) const {
  require_in_field(field_, w);
  return residual_is_zero(w);
}

std::optional<GfVector> RowSpaceSolver::solve(const GfVector& w) const {
  if (!contains(w)) return std::nullopt;
  GfVector x = GfVector::Zero(echelon_.transform.cols());
  for (Index c = 0; c < w.cols(); ++c) {
    const Symbol coeff = w(c);
    const Index r = pivot_row_[static_cast<std::size_t>(c)];
    if (coeff == 0 || r < 0) continue;
    auto t = echelon_.transform.row(r);
    for (Index j = 0; j < x.cols(); ++j) x(j) ^= field_.mul_unchecked(coeff, t(j));
  }
  return x;
}

}  // namespace ssac
