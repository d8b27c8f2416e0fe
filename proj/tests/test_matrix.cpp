#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "hiwish/matrix.hpp"
#include "hiwish/rng.hpp"
#include "test_support.hpp"

using hiwish::Matrix;
using hiwish::SpdMatrix;

namespace {

double max_abs_diff(const Matrix &a, const Matrix &b) {
  REQUIRE(a.rows() == b.rows());
  REQUIRE(a.cols() == b.cols());
  double d = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      d = std::max(d, std::abs(a(i, j) - b(i, j)));
  return d;
}

}  // namespace

TEST_CASE("cholesky of the identity is the identity") {
  const Matrix l = hiwish::cholesky(SpdMatrix::identity(3));
  CHECK(max_abs_diff(l, Matrix::identity(3)) == 0.0);
}

TEST_CASE("cholesky of a hand-checkable 2x2") {
  Matrix m(2, 2);
  m(0, 0) = 4.0;
  m(0, 1) = 2.0;
  m(1, 0) = 2.0;
  m(1, 1) = 5.0;
  const Matrix l = hiwish::cholesky(SpdMatrix(m));
  CHECK(l(0, 0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(l(0, 1) == 0.0);
  CHECK(l(1, 0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(l(1, 1) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("indefinite matrix is rejected at construction") {
  Matrix m(2, 2);
  m(0, 0) = 1.0;
  m(0, 1) = 2.0;
  m(1, 0) = 2.0;
  m(1, 1) = 1.0;
  CHECK_THROWS_AS(SpdMatrix{m}, hiwish::NotPositiveDefinite);
}

TEST_CASE("asymmetric input is rejected") {
  Matrix m = Matrix::identity(2);
  m(0, 1) = 0.25;
  CHECK_THROWS_AS(SpdMatrix{m}, hiwish::NotPositiveDefinite);
}

TEST_CASE("cholesky round-trips random L L^T factorizations") {
  hiwish::RngStream rng(7001);
  for (int rep = 0; rep < 50; ++rep) {
    const std::size_t p = 2 + (rng.next_u64() % 6);
    Matrix l(p, p);
    for (std::size_t i = 0; i < p; ++i) {
      for (std::size_t j = 0; j < i; ++j) l(i, j) = 2.0 * rng.uniform01() - 1.0;
      l(i, i) = 0.5 + rng.uniform01();
    }
    const Matrix m = l * l.transpose();
    const SpdMatrix spd(m);
    const Matrix l2 = hiwish::cholesky(spd);
    const Matrix back = l2 * l2.transpose();
    CHECK(max_abs_diff(back, spd.mat()) <= 1e-12 * std::max(1.0, m.max_abs()));
  }
}

TEST_CASE("spd_inverse on identity and diagonals") {
  CHECK(max_abs_diff(hiwish::spd_inverse(SpdMatrix::identity(5)).mat(),
                     Matrix::identity(5)) == 0.0);
  const std::vector<double> d{2.0, 4.0};
  const SpdMatrix inv = hiwish::spd_inverse(SpdMatrix::diagonal(d));
  CHECK(inv(0, 0) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(inv(1, 1) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(inv(0, 1) == 0.0);
}

TEST_CASE("spd_inverse satisfies m * inv = I over 100 random matrices") {
  hiwish::RngStream rng(7002);
  for (int rep = 0; rep < 100; ++rep) {
    const std::size_t p = 2 + (rng.next_u64() % 7);
    const SpdMatrix m = testsupport::random_spd(rng, p);
    const SpdMatrix inv = hiwish::spd_inverse(m);
    CHECK(max_abs_diff(m.mat() * inv.mat(), Matrix::identity(p)) < 1e-9);
    // exact symmetry of the result, not just up to tolerance
    for (std::size_t i = 0; i < p; ++i)
      for (std::size_t j = 0; j < i; ++j) CHECK(inv(i, j) == inv(j, i));
  }
}

TEST_CASE("log_det basics") {
  CHECK(hiwish::log_det(SpdMatrix::identity(4)) == doctest::Approx(0.0).epsilon(1e-15));
  const std::vector<double> d{std::exp(1.0), std::exp(2.0)};
  CHECK(hiwish::log_det(SpdMatrix::diagonal(d)) == doctest::Approx(3.0).epsilon(1e-13));
}

TEST_CASE("log_det matches the eigenvalue product") {
  hiwish::RngStream rng(7003);
  for (int rep = 0; rep < 20; ++rep) {
    const SpdMatrix m = testsupport::random_spd(rng, 4);
    const auto eig = hiwish::symmetric_eigen(m.mat());
    double sum_log = 0.0;
    for (double v : eig.values) sum_log += std::log(v);
    CHECK(hiwish::log_det(m) ==
          doctest::Approx(sum_log).epsilon(1e-8));
  }
}

TEST_CASE("symmetric_eigen sorts a diagonal matrix") {
  Matrix m(3, 3);
  m(0, 0) = 3.0;
  m(1, 1) = 1.0;
  m(2, 2) = 2.0;
  const auto eig = hiwish::symmetric_eigen(m);
  REQUIRE(eig.values.size() == 3);
  CHECK(eig.values[0] == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(eig.values[1] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(eig.values[2] == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("symmetric_eigen of [[2,1],[1,2]]") {
  Matrix m(2, 2);
  m(0, 0) = 2.0;
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  m(1, 1) = 2.0;
  const auto eig = hiwish::symmetric_eigen(m);
  CHECK(eig.values[0] == doctest::Approx(3.0).epsilon(1e-13));
  CHECK(eig.values[1] == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("symmetric_eigen recovers a graded spectrum down to 0.75^20") {
  const std::vector<double> d{1.0, 0.75, 0.75 * 0.75, std::pow(0.75, 10),
                              std::pow(0.75, 20)};
  const auto eig = hiwish::symmetric_eigen(SpdMatrix::diagonal(d).mat());
  const double expected[] = {1.0, 0.75, 0.75 * 0.75, std::pow(0.75, 10),
                             std::pow(0.75, 20)};
  for (std::size_t i = 0; i < 5; ++i)
    CHECK(eig.values[i] == doctest::Approx(expected[i]).epsilon(1e-10));
}

TEST_CASE("eigendecomposition invariants on random SPD matrices") {
  hiwish::RngStream rng(7004);
  for (int rep = 0; rep < 25; ++rep) {
    const std::size_t p = 2 + (rng.next_u64() % 7);
    const SpdMatrix m = testsupport::random_spd(rng, p);
    const auto eig = hiwish::symmetric_eigen(m.mat());

    // descending order
    for (std::size_t i = 1; i < p; ++i) CHECK(eig.values[i - 1] >= eig.values[i]);

    // orthogonality within 1e-10 max-abs
    CHECK(max_abs_diff(eig.vectors.transpose() * eig.vectors,
                       Matrix::identity(p)) <= 1e-10);

    // reconstruction Q Lambda Q^T within 1e-9 * max-abs of the input
    Matrix lam(p, p);
    for (std::size_t i = 0; i < p; ++i) lam(i, i) = eig.values[i];
    const Matrix back = eig.vectors * lam * eig.vectors.transpose();
    CHECK(max_abs_diff(back, m.mat()) <= 1e-9 * m.mat().max_abs());

    // trace and determinant identities
    double sum = 0.0, sum_log = 0.0;
    for (double v : eig.values) {
      sum += v;
      sum_log += std::log(v);
    }
    CHECK(sum == doctest::Approx(m.mat().trace()).epsilon(1e-10));
    CHECK(sum_log == doctest::Approx(hiwish::log_det(m)).epsilon(1e-8));
  }
}

TEST_CASE("symmetric_eigen rejects a visibly asymmetric matrix") {
  Matrix m(2, 2);
  m(0, 1) = 1.0;
  m(1, 0) = 2.0;
  CHECK_THROWS_AS(hiwish::symmetric_eigen(m), hiwish::InvalidParameter);
}

TEST_CASE("givens product with zero angle is the identity") {
  const std::vector<double> angles{0.0};
  CHECK(max_abs_diff(hiwish::givens_rotation_product(2, angles),
                     Matrix::identity(2)) == 0.0);
}

TEST_CASE("givens product 2x2 quarter-turn convention") {
  const std::vector<double> angles{std::numbers::pi / 4.0};
  const Matrix q = hiwish::givens_rotation_product(2, angles);
  const double c = std::sqrt(2.0) / 2.0;
  CHECK(q(0, 0) == doctest::Approx(c).epsilon(1e-15));
  CHECK(q(0, 1) == doctest::Approx(-c).epsilon(1e-15));
  CHECK(q(1, 0) == doctest::Approx(c).epsilon(1e-15));
  CHECK(q(1, 1) == doctest::Approx(c).epsilon(1e-15));
}

TEST_CASE("givens product at p=5 is a proper rotation") {
  std::vector<double> angles(10, std::numbers::pi / 4.0);
  const Matrix q = hiwish::givens_rotation_product(5, angles);
  CHECK(max_abs_diff(q.transpose() * q, Matrix::identity(5)) <= 1e-12);
  CHECK(testsupport::determinant(q) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("givens product validates the angle count") {
  const std::vector<double> angles{0.1, 0.2};
  CHECK_THROWS_AS(hiwish::givens_rotation_product(5, angles),
                  hiwish::DimensionMismatch);
}

TEST_CASE("conjugating a diagonal by a rotation preserves eigenvalues") {
  hiwish::RngStream rng(7005);
  const std::size_t p = 5;
  std::vector<double> angles(p * (p - 1) / 2);
  for (double &a : angles) a = (2.0 * rng.uniform01() - 1.0) * std::numbers::pi;
  const Matrix q = hiwish::givens_rotation_product(p, angles);
  std::vector<double> d{5.0, 3.0, 2.0, 1.0, 0.5};
  Matrix dm(p, p);
  for (std::size_t i = 0; i < p; ++i) dm(i, i) = d[i];
  const Matrix rotated = q.transpose() * dm * q;
  const auto eig = hiwish::symmetric_eigen(rotated);
  for (std::size_t i = 0; i < p; ++i)
    CHECK(eig.values[i] == doctest::Approx(d[i]).epsilon(1e-10));
}

TEST_CASE("solve_lower inverts forward substitution") {
  hiwish::RngStream rng(7006);
  const std::size_t p = 4;
  Matrix l(p, p);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < i; ++j) l(i, j) = 2.0 * rng.uniform01() - 1.0;
    l(i, i) = 0.5 + rng.uniform01();
  }
  Matrix x(p, 3);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j < 3; ++j) x(i, j) = 2.0 * rng.uniform01() - 1.0;
  const Matrix b = l * x;
  CHECK(max_abs_diff(hiwish::solve_lower(l, b), x) < 1e-12);
}

TEST_CASE("DiagMatrix rejects non-positive entries") {
  CHECK_THROWS_AS(hiwish::DiagMatrix(std::vector<double>{1.0, 0.0}),
                  hiwish::InvalidParameter);
  CHECK_THROWS_AS(hiwish::DiagMatrix(std::vector<double>{1.0, -2.0}),
                  hiwish::InvalidParameter);
}

TEST_CASE("try_cholesky reports failure without throwing") {
  Matrix m(2, 2);
  m(0, 0) = 1.0;
  m(0, 1) = 2.0;
  m(1, 0) = 2.0;
  m(1, 1) = 1.0;
  CHECK_FALSE(hiwish::try_cholesky(m).has_value());
  CHECK(hiwish::try_cholesky(Matrix::identity(3)).has_value());
}
