#ifndef HIWISH_DISTRIBUTIONS_HPP
#define HIWISH_DISTRIBUTIONS_HPP

#include <cstddef>

#include "hiwish/matrix.hpp"
#include "hiwish/rng.hpp"

namespace hiwish {

// Standard normal draw by Box-Muller; consumes exactly two uniforms.
double sample_standard_normal(RngStream &rng);

// Gamma(shape, rate) draw, mean shape/rate, by the Marsaglia-Tsang
// squeeze method; shapes below one go through the power boost.  Both
// parameters must be positive and finite.
double sample_gamma(RngStream &rng, double shape, double rate);

// Degrees of freedom and scale of a Wishart (or, where stated, of an
// inverse Wishart).  Requires df > dim - 1; fractional df are valid.
struct WishartParams {
  WishartParams(double df_in, SpdMatrix scale_in);
  double df;
  SpdMatrix scale;
};

// Wishart draw by Bartlett decomposition: W = (L A)(L A)^T with
// L = chol(scale), A lower triangular with chi distributed diagonal and
// standard normal subdiagonal.  E(W) = df * scale.
SpdMatrix sample_wishart(RngStream &rng, const WishartParams &params);

// One inverse Wishart draw together with the byproducts the Gibbs sweep
// needs every iteration: the precision sigma^-1 (a Wishart draw with the
// inverted scale) and log det(sigma), both free from the Bartlett factor.
struct InverseWishartDraw {
  Matrix sigma;
  Matrix sigma_inv;
  double logdet_sigma;
};
InverseWishartDraw sample_inverse_wishart_draw(RngStream &rng, double df,
                                               const SpdMatrix &scale);

// Inverse Wishart draw with density proportional to
//   |sigma|^-(df+p+1)/2 * exp(-tr(sigma^-1 scale) / 2),
// so E(sigma) = scale / (df - p - 1) when df > p + 1.
SpdMatrix sample_inverse_wishart(RngStream &rng, double df,
                                 const SpdMatrix &scale);

// n independent rows from N_p(0, cov), returned as an n x p matrix.
Matrix sample_mvn_zero(RngStream &rng, const SpdMatrix &cov, std::size_t n);

// Scatter matrix S = sum_i x_i x_i^T of the rows of an n x p data matrix.
// No mean subtraction: the sampling model has known zero mean.
Matrix scatter_matrix(const Matrix &data);

}  // namespace hiwish

#endif  // HIWISH_DISTRIBUTIONS_HPP
