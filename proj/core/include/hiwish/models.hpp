#ifndef HIWISH_MODELS_HPP
#define HIWISH_MODELS_HPP

#include <cstddef>

#include "hiwish/distributions.hpp"
#include "hiwish/matrix.hpp"

namespace hiwish {

// The three hierarchical priors on (Sigma, scale, beta).
//
// All three place an inverse-Wishart on Sigma with degrees of freedom beta
// and a diagonal scale, and differ in how the scale is parametrized and in
// the prior on beta:
//
//   Model1:  scale = phi * I, one free scalar; prior 1/phi, beta^-delta,
//            beta > p+1.
//   Model2:  scale = diag(phi_1..phi_p); priors 1/phi_j, beta^-delta,
//            beta > p+1.
//   ModelDK: scale = diag(alpha_1..alpha_p) entering the inverse-Wishart
//            directly; priors 1/alpha_j, 1/beta on p-1 < beta <= dk_bound.
//
// Model1/Model2 keep the scale on the "expectation" parametrization, which
// is why their conditionals look identical to ModelDK's apart from the
// beta support and the beta prior exponent.
enum class ModelVariant { Model1, Model2, ModelDK };

struct ModelSpec {
  ModelVariant variant = ModelVariant::Model1;
  int delta = 2;          // beta prior exponent, Model1/Model2 only
  double dk_bound = 1e6;  // beta support upper bound, ModelDK only

  static ModelSpec model1(int delta = 2);
  static ModelSpec model2(int delta = 2);
  static ModelSpec model_dk(double bound = 1e6);

  // delta for Model1/Model2, 1 for ModelDK.
  double delta_exponent() const;
  // Open lower end of the beta support: p+1, p+1, p-1.
  double beta_lower(std::size_t p) const;
  // Closed upper end: +inf for Model1/Model2, dk_bound for ModelDK.
  double beta_upper() const;
  bool scale_is_scalar() const { return variant == ModelVariant::Model1; }

  // Proper-posterior requirements: delta >= 2 for Model1/Model2,
  // dk_bound > p-1 for ModelDK.  Throws InvalidParameter.
  void validate(std::size_t p) const;
};

const char *to_string(ModelVariant variant);

// Hyperparameters of the hierarchy.  scale holds phi*I as p equal entries
// for Model1, diag(phi_j) for Model2, diag(alpha_j) for ModelDK.
struct HyperState {
  double beta;
  DiagMatrix scale;
};

// Full state of the Gibbs chain.
struct ChainState {
  SpdMatrix sigma;
  HyperState hyper;
};

// Shape-rate parameters of a Gamma conditional.
struct GammaParams {
  double shape;
  double rate;
};

// Conditional of Sigma given everything else: inverse-Wishart with
// df = beta + n and scale = scatter + diag(hyper.scale), for every model.
// The scatter may be singular PSD (n < p); the added diagonal keeps the
// sum positive definite.
WishartParams conditional_sigma(const ModelSpec &spec, const HyperState &hyper,
                                const Matrix &scatter, std::size_t n);

// Conditional of Model1's phi: Gamma(p*beta/2, trace(sigma_inv)/2).
GammaParams conditional_scale_model1(double beta, const Matrix &sigma_inv);

// Conditional of Model2's phi_j: Gamma(beta/2, (sigma_inv)_jj/2).  The
// shape comes from the |Phi|^(beta/2 - 1) factor of the joint posterior;
// note it is beta/2 per component, not p*beta/2.
GammaParams conditional_scale_model2(double beta, const Matrix &sigma_inv,
                                     std::size_t j);

// Conditional of ModelDK's alpha_j; same algebra as Model2.
GammaParams conditional_scale_dk(double beta, const Matrix &sigma_inv,
                                 std::size_t j);

// log Gamma_p(a) = p(p-1)/4 * log(pi) + sum_j log Gamma(a + (1-j)/2),
// j = 1..p.  Requires a > (p-1)/2 so every factor is finite.
double log_multivariate_gamma(std::size_t p, double a);

// Unnormalized log-density of beta given (Sigma, scale):
//   l(beta) = beta * C - delta_exp * log(beta) - log Gamma_p(beta/2),
//   C = (log|Sigma^-1| + log|scale| - p log 2) / 2,
// on the model's support; -inf outside (a value, not an error, so the
// Metropolis step rejects out-of-support proposals without branching).
// Precomputed-coefficient form, for the quadrature loop:
struct BetaConditional {
  std::size_t p;
  double coeff;      // C above
  double delta_exp;  // delta or 1
  double lower;      // support lower end, exclusive
  double upper;      // support upper end, inclusive

  double log_density(double beta) const;
};

BetaConditional make_beta_conditional(const ModelSpec &spec,
                                      double logdet_sigma,
                                      const DiagMatrix &scale);

double beta_log_conditional(const ModelSpec &spec, const SpdMatrix &sigma,
                            const DiagMatrix &scale, double beta);

// Unnormalized log of the joint posterior density of (Sigma, scale, beta)
// given the scatter matrix of n observations.  Not used by the sampler
// itself; this is the reference the conditionals are tested against and
// the integrand of the small-p quadrature oracles.
double log_joint_posterior(const ModelSpec &spec, const ChainState &state,
                           const Matrix &scatter, std::size_t n);

}  // namespace hiwish

#endif  // HIWISH_MODELS_HPP
