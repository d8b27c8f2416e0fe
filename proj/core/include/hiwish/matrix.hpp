#ifndef HIWISH_MATRIX_HPP
#define HIWISH_MATRIX_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "hiwish/errors.hpp"

namespace hiwish {

// Dense row-major matrix of doubles.  Dimensions are fixed at construction.
// This is deliberately small: the samplers only need products, transposes
// and element access, and everything here is O(p^3) at p around 5 to 50.
class Matrix {
 public:
  Matrix() : rows_(0), cols_(0) {}
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t p);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool is_square() const { return rows_ == cols_; }

  double &operator()(std::size_t i, std::size_t j) {
    return data_[i * cols_ + j];
  }
  double operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  Matrix transpose() const;
  double trace() const;
  double max_abs() const;
  std::vector<double> diagonal() const;

  Matrix &operator+=(const Matrix &rhs);
  Matrix &operator-=(const Matrix &rhs);
  Matrix &operator*=(double s);

  friend bool operator==(const Matrix &a, const Matrix &b) = default;

 private:
  std::size_t rows_, cols_;
  std::vector<double> data_;
};

Matrix operator+(Matrix a, const Matrix &b);
Matrix operator-(Matrix a, const Matrix &b);
Matrix operator*(double s, Matrix a);
Matrix operator*(const Matrix &a, const Matrix &b);

// Symmetric positive definite matrix.  Construction validates: the input
// must be square, symmetric up to an absolute tolerance (default 1e-9),
// and must admit a Cholesky factorization with strictly positive pivots.
// Off-diagonal pairs are averaged so the stored matrix is exactly
// symmetric.  There is no conditioning floor: anything with positive
// pivots passes, however ill-conditioned.
class SpdMatrix {
 public:
  explicit SpdMatrix(const Matrix &m, double symmetry_tol = 1e-9);

  static SpdMatrix identity(std::size_t p);
  static SpdMatrix diagonal(std::span<const double> entries);

  std::size_t dim() const { return m_.rows(); }
  const Matrix &mat() const { return m_; }
  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

 private:
  Matrix m_;
};

// Positive diagonal matrix, stored as its diagonal.  Used for the
// hierarchical scale parameters, which are diagonal in every model.
class DiagMatrix {
 public:
  DiagMatrix(std::size_t dim, double value);
  explicit DiagMatrix(std::vector<double> entries);

  std::size_t dim() const { return entries_.size(); }
  const std::vector<double> &entries() const { return entries_; }
  double operator[](std::size_t i) const { return entries_[i]; }
  Matrix to_matrix() const;
  double sum_log() const;

 private:
  std::vector<double> entries_;
};

// Result of a symmetric eigendecomposition: m = vectors * diag(values) *
// vectors^T, eigenvalues sorted in descending order, eigenvectors in the
// corresponding columns of an orthogonal matrix.
struct EigenDecomp {
  std::vector<double> values;
  Matrix vectors;
};

// Lower-triangular Cholesky factor L with m = L * L^T.  Throws
// NotPositiveDefinite when a pivot is zero or negative.
Matrix cholesky(const SpdMatrix &m);

// Cholesky on a raw square matrix, reading only the lower triangle.
// Returns nullopt instead of throwing; this is the probe the Stein loss
// uses to detect estimates that left the SPD cone.
std::optional<Matrix> try_cholesky(const Matrix &m);

// Inverse via the Cholesky factor.  The result is exactly symmetric.
SpdMatrix spd_inverse(const SpdMatrix &m);

// log det(m) as twice the log-sum of Cholesky pivots, avoiding the
// overflow a determinant-then-log evaluation would hit.
double log_det(const SpdMatrix &m);

// Eigendecomposition by cyclic Jacobi sweeps.  The input must be square
// and symmetric within 1e-9 (it is symmetrized before iterating); positive
// definiteness is not required, so singular sample covariances are fine.
// Converges when the off-diagonal Frobenius norm falls below 1e-13 times
// the Frobenius norm of the input; throws NoConvergence after 100 sweeps.
EigenDecomp symmetric_eigen(const Matrix &m);

// Solves L * X = B for X with L lower triangular.
Matrix solve_lower(const Matrix &l, const Matrix &b);

// Product of p(p-1)/2 plane rotations, one per index pair (i, j), i < j,
// in lexicographic order, each applied by right-multiplication:
//   Q = G(0,1, a_1) * G(0,2, a_2) * ... * G(p-2,p-1, a_m).
// The rotation G(i,j,theta) is the identity except
//   G[i][i] = cos theta, G[j][j] = cos theta,
//   G[i][j] = -sin theta, G[j][i] = sin theta.
// The result is orthogonal with determinant +1.
Matrix givens_rotation_product(std::size_t p, std::span<const double> angles);

}  // namespace hiwish

#endif  // HIWISH_MATRIX_HPP
