#include "hiwish/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace hiwish {

namespace {

void require_same_shape(const Matrix &a, const Matrix &b, const char *op) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionMismatch(std::string(op) + ": shapes " +
                            std::to_string(a.rows()) + "x" +
                            std::to_string(a.cols()) + " vs " +
                            std::to_string(b.rows()) + "x" +
                            std::to_string(b.cols()));
  }
}

void require_square(const Matrix &m, const char *op) {
  if (!m.is_square()) {
    throw DimensionMismatch(std::string(op) + ": matrix is " +
                            std::to_string(m.rows()) + "x" +
                            std::to_string(m.cols()) + ", expected square");
  }
}

}  // namespace

Matrix Matrix::identity(std::size_t p) {
  Matrix m(p, p);
  for (std::size_t i = 0; i < p; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

double Matrix::trace() const {
  double tr = 0.0;
  for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) tr += (*this)(i, i);
  return tr;
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

std::vector<double> Matrix::diagonal() const {
  std::vector<double> d(std::min(rows_, cols_));
  for (std::size_t i = 0; i < d.size(); ++i) d[i] = (*this)(i, i);
  return d;
}

Matrix &Matrix::operator+=(const Matrix &rhs) {
  require_same_shape(*this, rhs, "Matrix::operator+=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += rhs.data_[i];
  return *this;
}

Matrix &Matrix::operator-=(const Matrix &rhs) {
  require_same_shape(*this, rhs, "Matrix::operator-=");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= rhs.data_[i];
  return *this;
}

Matrix &Matrix::operator*=(double s) {
  for (double &v : data_) v *= s;
  return *this;
}

Matrix operator+(Matrix a, const Matrix &b) { return a += b; }
Matrix operator-(Matrix a, const Matrix &b) { return a -= b; }
Matrix operator*(double s, Matrix a) { return a *= s; }

Matrix operator*(const Matrix &a, const Matrix &b) {
  if (a.cols() != b.rows()) {
    throw DimensionMismatch("Matrix product: inner dimensions " +
                            std::to_string(a.cols()) + " vs " +
                            std::to_string(b.rows()));
  }
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  }
  return c;
}

SpdMatrix::SpdMatrix(const Matrix &m, double symmetry_tol) : m_(m) {
  require_square(m, "SpdMatrix");
  const std::size_t p = m.rows();
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = i + 1; j < p; ++j) {
      if (!(std::abs(m(i, j) - m(j, i)) <= symmetry_tol)) {
        throw NotPositiveDefinite(
            "SpdMatrix: entries (" + std::to_string(i) + "," +
            std::to_string(j) + ") differ from their transpose by " +
            std::to_string(std::abs(m(i, j) - m(j, i))));
      }
      const double avg = 0.5 * (m(i, j) + m(j, i));
      m_(i, j) = avg;
      m_(j, i) = avg;
    }
  }
  if (!try_cholesky(m_)) {
    throw NotPositiveDefinite("SpdMatrix: matrix is not positive definite");
  }
}

SpdMatrix SpdMatrix::identity(std::size_t p) {
  return SpdMatrix(Matrix::identity(p));
}

SpdMatrix SpdMatrix::diagonal(std::span<const double> entries) {
  Matrix m(entries.size(), entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i) m(i, i) = entries[i];
  return SpdMatrix(m);
}

DiagMatrix::DiagMatrix(std::size_t dim, double value)
    : DiagMatrix(std::vector<double>(dim, value)) {}

DiagMatrix::DiagMatrix(std::vector<double> entries)
    : entries_(std::move(entries)) {
  if (entries_.empty()) {
    throw InvalidParameter("DiagMatrix: dimension must be positive");
  }
  for (double v : entries_) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw InvalidParameter("DiagMatrix: entries must be positive and finite");
    }
  }
}

Matrix DiagMatrix::to_matrix() const {
  Matrix m(dim(), dim());
  for (std::size_t i = 0; i < dim(); ++i) m(i, i) = entries_[i];
  return m;
}

double DiagMatrix::sum_log() const {
  double s = 0.0;
  for (double v : entries_) s += std::log(v);
  return s;
}

std::optional<Matrix> try_cholesky(const Matrix &m) {
  require_square(m, "try_cholesky");
  const std::size_t p = m.rows();
  Matrix l(p, p);
  for (std::size_t j = 0; j < p; ++j) {
    double diag = m(j, j);
    for (std::size_t k = 0; k < j; ++k) diag -= l(j, k) * l(j, k);
    if (!(diag > 0.0) || !std::isfinite(diag)) return std::nullopt;
    const double ljj = std::sqrt(diag);
    l(j, j) = ljj;
    for (std::size_t i = j + 1; i < p; ++i) {
      double sum = m(i, j);
      for (std::size_t k = 0; k < j; ++k) sum -= l(i, k) * l(j, k);
      l(i, j) = sum / ljj;
    }
  }
  return l;
}

Matrix cholesky(const SpdMatrix &m) {
  auto l = try_cholesky(m.mat());
  if (!l) {
    // SpdMatrix validated at construction, so this only triggers when the
    // matrix sits exactly on the PD boundary and rounding pushed it over.
    throw NotPositiveDefinite("cholesky: non-positive pivot");
  }
  return *std::move(l);
}

Matrix solve_lower(const Matrix &l, const Matrix &b) {
  require_square(l, "solve_lower");
  if (l.rows() != b.rows()) {
    throw DimensionMismatch("solve_lower: dimension mismatch");
  }
  Matrix x = b;
  const std::size_t p = l.rows();
  for (std::size_t c = 0; c < b.cols(); ++c) {
    for (std::size_t i = 0; i < p; ++i) {
      double sum = x(i, c);
      for (std::size_t k = 0; k < i; ++k) sum -= l(i, k) * x(k, c);
      x(i, c) = sum / l(i, i);
    }
  }
  return x;
}

SpdMatrix spd_inverse(const SpdMatrix &m) {
  const std::size_t p = m.dim();
  const Matrix l = cholesky(m);
  const Matrix linv = solve_lower(l, Matrix::identity(p));
  // inv = L^-T * L^-1, assembled symmetric by construction.
  Matrix inv(p, p);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double sum = 0.0;
      // linv is lower triangular: row k has entries for columns <= k.
      for (std::size_t k = i; k < p; ++k) sum += linv(k, i) * linv(k, j);
      inv(i, j) = sum;
      inv(j, i) = sum;
    }
  }
  return SpdMatrix(inv);
}

double log_det(const SpdMatrix &m) {
  const Matrix l = cholesky(m);
  double s = 0.0;
  for (std::size_t i = 0; i < m.dim(); ++i) s += std::log(l(i, i));
  return 2.0 * s;
}

namespace {

double off_diagonal_norm(const Matrix &a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = i + 1; j < a.cols(); ++j) s += a(i, j) * a(i, j);
  return std::sqrt(2.0 * s);
}

double frobenius_norm(const Matrix &a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

}  // namespace

EigenDecomp symmetric_eigen(const Matrix &m) {
  require_square(m, "symmetric_eigen");
  const std::size_t p = m.rows();
  const double sym_tol = 1e-9 * std::max(1.0, m.max_abs());
  Matrix a = m;
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = i + 1; j < p; ++j) {
      if (!(std::abs(m(i, j) - m(j, i)) <= sym_tol)) {
        throw InvalidParameter("symmetric_eigen: matrix is not symmetric");
      }
      const double avg = 0.5 * (m(i, j) + m(j, i));
      a(i, j) = avg;
      a(j, i) = avg;
    }
  }

  Matrix v = Matrix::identity(p);
  const double stop = 1e-13 * frobenius_norm(a);
  constexpr int kMaxSweeps = 100;

  int sweep = 0;
  while (off_diagonal_norm(a) > stop) {
    if (++sweep > kMaxSweeps) {
      throw NoConvergence("symmetric_eigen: no convergence in 100 sweeps");
    }
    for (std::size_t i = 0; i + 1 < p; ++i) {
      for (std::size_t j = i + 1; j < p; ++j) {
        const double apq = a(i, j);
        if (apq == 0.0) continue;
        // Rotation angle choosing the smaller root, which keeps the
        // rotations close to identity and the iteration stable.
        const double theta = 0.5 * (a(j, j) - a(i, i)) / apq;
        double t;
        if (std::abs(theta) > 1e154) {
          t = 0.5 / theta;  // asymptotic form; theta^2 would overflow
        } else {
          t = ((theta >= 0.0) ? 1.0 : -1.0) /
              (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        const double tau = s / (1.0 + c);

        a(i, i) -= t * apq;
        a(j, j) += t * apq;
        a(i, j) = 0.0;
        a(j, i) = 0.0;
        for (std::size_t k = 0; k < p; ++k) {
          if (k == i || k == j) continue;
          const double aki = a(k, i);
          const double akj = a(k, j);
          a(k, i) = aki - s * (akj + tau * aki);
          a(i, k) = a(k, i);
          a(k, j) = akj + s * (aki - tau * akj);
          a(j, k) = a(k, j);
        }
        for (std::size_t k = 0; k < p; ++k) {
          const double vki = v(k, i);
          const double vkj = v(k, j);
          v(k, i) = vki - s * (vkj + tau * vki);
          v(k, j) = vkj + s * (vki - tau * vkj);
        }
      }
    }
  }

  std::vector<std::size_t> order(p);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&a](std::size_t x, std::size_t y) {
    return a(x, x) > a(y, y);
  });

  EigenDecomp out;
  out.values.resize(p);
  out.vectors = Matrix(p, p);
  for (std::size_t idx = 0; idx < p; ++idx) {
    out.values[idx] = a(order[idx], order[idx]);
    for (std::size_t k = 0; k < p; ++k) out.vectors(k, idx) = v(k, order[idx]);
  }
  return out;
}

Matrix givens_rotation_product(std::size_t p, std::span<const double> angles) {
  const std::size_t m = p * (p - 1) / 2;
  if (angles.size() != m) {
    throw DimensionMismatch("givens_rotation_product: expected " +
                            std::to_string(m) + " angles, got " +
                            std::to_string(angles.size()));
  }
  Matrix q = Matrix::identity(p);
  std::size_t k = 0;
  for (std::size_t i = 0; i + 1 < p; ++i) {
    for (std::size_t j = i + 1; j < p; ++j, ++k) {
      const double c = std::cos(angles[k]);
      const double s = std::sin(angles[k]);
      // Right-multiplication touches only columns i and j.
      for (std::size_t r = 0; r < p; ++r) {
        const double qri = q(r, i);
        const double qrj = q(r, j);
        q(r, i) = c * qri + s * qrj;
        q(r, j) = -s * qri + c * qrj;
      }
    }
  }
  return q;
}

}  // namespace hiwish
