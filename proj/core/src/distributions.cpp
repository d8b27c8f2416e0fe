#include "hiwish/distributions.hpp"

#include <cmath>
#include <string>

namespace hiwish {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

double sample_standard_normal(RngStream &rng) {
  const double u1 = rng.uniform01();
  const double u2 = rng.uniform01();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(kTwoPi * u2);
}

double sample_gamma(RngStream &rng, double shape, double rate) {
  if (!(shape > 0.0) || !std::isfinite(shape)) {
    throw InvalidParameter("sample_gamma: shape must be positive, got " +
                           std::to_string(shape));
  }
  if (!(rate > 0.0) || !std::isfinite(rate)) {
    throw InvalidParameter("sample_gamma: rate must be positive, got " +
                           std::to_string(rate));
  }
  if (shape < 1.0) {
    // Boost: if G ~ Gamma(shape+1), G * U^(1/shape) ~ Gamma(shape).
    const double g = sample_gamma(rng, shape + 1.0, rate);
    return g * std::pow(rng.uniform01(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = sample_standard_normal(rng);
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform01();
    const double x2 = x * x;
    if (u < 1.0 - 0.0331 * x2 * x2) return d * v / rate;
    if (std::log(u) < 0.5 * x2 + d * (1.0 - v + std::log(v))) return d * v / rate;
  }
}

WishartParams::WishartParams(double df_in, SpdMatrix scale_in)
    : df(df_in), scale(std::move(scale_in)) {
  const double dim = static_cast<double>(scale.dim());
  if (!(df > dim - 1.0) || !std::isfinite(df)) {
    throw InvalidParameter("WishartParams: df must exceed dim - 1 = " +
                           std::to_string(dim - 1.0) + ", got " +
                           std::to_string(df));
  }
}

namespace {

// Lower-triangular Bartlett factor A: A_ii = sqrt(chi2(df - i)) for
// zero-based row i, strictly lower entries standard normal.  Every chi2
// degree of freedom is positive because df > p - 1.
Matrix bartlett_factor(RngStream &rng, double df, std::size_t p) {
  Matrix a(p, p);
  for (std::size_t i = 0; i < p; ++i) {
    const double dof = df - static_cast<double>(i);
    a(i, i) = std::sqrt(sample_gamma(rng, 0.5 * dof, 0.5));
    for (std::size_t j = 0; j < i; ++j) a(i, j) = sample_standard_normal(rng);
  }
  return a;
}

Matrix lower_times_lower(const Matrix &a, const Matrix &b) {
  const std::size_t p = a.rows();
  Matrix c(p, p);
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = 0; j <= i; ++j)
      for (std::size_t k = j; k <= i; ++k) c(i, j) += a(i, k) * b(k, j);
  return c;
}

// F F^T assembled exactly symmetric.
Matrix lower_gram(const Matrix &f) {
  const std::size_t p = f.rows();
  Matrix w(p, p);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k <= j; ++k) s += f(i, k) * f(j, k);
      w(i, j) = s;
      w(j, i) = s;
    }
  }
  return w;
}

// F^-T F^-1 for lower-triangular F, assembled exactly symmetric.
Matrix inverse_gram_of_lower(const Matrix &f) {
  const std::size_t p = f.rows();
  const Matrix finv = solve_lower(f, Matrix::identity(p));
  Matrix m(p, p);
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = 0.0;
      for (std::size_t k = i; k < p; ++k) s += finv(k, i) * finv(k, j);
      m(i, j) = s;
      m(j, i) = s;
    }
  }
  return m;
}

}  // namespace

SpdMatrix sample_wishart(RngStream &rng, const WishartParams &params) {
  const std::size_t p = params.scale.dim();
  const Matrix l = cholesky(params.scale);
  const Matrix f = lower_times_lower(l, bartlett_factor(rng, params.df, p));
  return SpdMatrix(lower_gram(f));
}

InverseWishartDraw sample_inverse_wishart_draw(RngStream &rng, double df,
                                               const SpdMatrix &scale) {
  const std::size_t p = scale.dim();
  const double dim = static_cast<double>(p);
  if (!(df > dim - 1.0) || !std::isfinite(df)) {
    throw InvalidParameter(
        "sample_inverse_wishart: df must exceed dim - 1, got " +
        std::to_string(df));
  }
  // sigma^-1 ~ Wishart(df, scale^-1): draw the precision by Bartlett and
  // invert the triangular factor once.
  const Matrix lv = cholesky(spd_inverse(scale));
  const Matrix f = lower_times_lower(lv, bartlett_factor(rng, df, p));

  InverseWishartDraw out;
  out.sigma_inv = lower_gram(f);
  out.sigma = inverse_gram_of_lower(f);
  double logdet_w = 0.0;
  for (std::size_t i = 0; i < p; ++i) logdet_w += std::log(f(i, i));
  out.logdet_sigma = -2.0 * logdet_w;
  return out;
}

SpdMatrix sample_inverse_wishart(RngStream &rng, double df,
                                 const SpdMatrix &scale) {
  return SpdMatrix(sample_inverse_wishart_draw(rng, df, scale).sigma);
}

Matrix sample_mvn_zero(RngStream &rng, const SpdMatrix &cov, std::size_t n) {
  const std::size_t p = cov.dim();
  const Matrix l = cholesky(cov);
  Matrix data(n, p);
  std::vector<double> z(p);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t k = 0; k < p; ++k) z[k] = sample_standard_normal(rng);
    for (std::size_t j = 0; j < p; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k <= j; ++k) s += l(j, k) * z[k];
      data(r, j) = s;
    }
  }
  return data;
}

Matrix scatter_matrix(const Matrix &data) {
  const std::size_t n = data.rows();
  const std::size_t p = data.cols();
  Matrix s(p, p);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t i = 0; i < p; ++i) {
      const double xi = data(r, i);
      for (std::size_t j = 0; j <= i; ++j) s(i, j) += xi * data(r, j);
    }
  }
  for (std::size_t i = 0; i < p; ++i)
    for (std::size_t j = i + 1; j < p; ++j) s(i, j) = s(j, i);
  return s;
}

}  // namespace hiwish
