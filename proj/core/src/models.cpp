#include "hiwish/models.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace hiwish {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLogPi = 1.1447298858494001741434273513531;
constexpr double kLog2 = 0.69314718055994530941723212145818;

// Thread-safe log-Gamma: the libm lgamma writes the sign to a global,
// which races when chains run in parallel.
double log_gamma(double x) {
  int sign = 0;
  return ::lgamma_r(x, &sign);
}

}  // namespace

ModelSpec ModelSpec::model1(int delta) {
  ModelSpec spec{ModelVariant::Model1, delta, 1e6};
  if (delta < 2) {
    throw InvalidParameter("ModelSpec: delta must be >= 2 for a proper posterior");
  }
  return spec;
}

ModelSpec ModelSpec::model2(int delta) {
  ModelSpec spec{ModelVariant::Model2, delta, 1e6};
  if (delta < 2) {
    throw InvalidParameter("ModelSpec: delta must be >= 2 for a proper posterior");
  }
  return spec;
}

ModelSpec ModelSpec::model_dk(double bound) {
  ModelSpec spec{ModelVariant::ModelDK, 2, bound};
  if (!(bound > 0.0) || !std::isfinite(bound)) {
    throw InvalidParameter("ModelSpec: dk_bound must be positive and finite");
  }
  return spec;
}

double ModelSpec::delta_exponent() const {
  return variant == ModelVariant::ModelDK ? 1.0 : static_cast<double>(delta);
}

double ModelSpec::beta_lower(std::size_t p) const {
  const double dim = static_cast<double>(p);
  return variant == ModelVariant::ModelDK ? dim - 1.0 : dim + 1.0;
}

double ModelSpec::beta_upper() const {
  return variant == ModelVariant::ModelDK
             ? dk_bound
             : std::numeric_limits<double>::infinity();
}

void ModelSpec::validate(std::size_t p) const {
  if (variant == ModelVariant::ModelDK) {
    if (!(dk_bound > static_cast<double>(p) - 1.0) || !std::isfinite(dk_bound)) {
      throw InvalidParameter("ModelSpec: dk_bound must exceed p - 1 = " +
                             std::to_string(static_cast<double>(p) - 1.0));
    }
  } else if (delta < 2) {
    throw InvalidParameter("ModelSpec: delta must be >= 2 for a proper posterior");
  }
}

const char *to_string(ModelVariant variant) {
  switch (variant) {
    case ModelVariant::Model1: return "model1";
    case ModelVariant::Model2: return "model2";
    case ModelVariant::ModelDK: return "dk";
  }
  return "?";
}

WishartParams conditional_sigma(const ModelSpec &, const HyperState &hyper,
                                const Matrix &scatter, std::size_t n) {
  if (scatter.rows() != hyper.scale.dim() || !scatter.is_square()) {
    throw DimensionMismatch("conditional_sigma: scatter/scale dimensions");
  }
  Matrix scale = scatter;
  for (std::size_t i = 0; i < hyper.scale.dim(); ++i) {
    scale(i, i) += hyper.scale[i];
  }
  return WishartParams(hyper.beta + static_cast<double>(n), SpdMatrix(scale));
}

GammaParams conditional_scale_model1(double beta, const Matrix &sigma_inv) {
  const double p = static_cast<double>(sigma_inv.rows());
  return {0.5 * p * beta, 0.5 * sigma_inv.trace()};
}

GammaParams conditional_scale_model2(double beta, const Matrix &sigma_inv,
                                     std::size_t j) {
  return {0.5 * beta, 0.5 * sigma_inv(j, j)};
}

GammaParams conditional_scale_dk(double beta, const Matrix &sigma_inv,
                                 std::size_t j) {
  return {0.5 * beta, 0.5 * sigma_inv(j, j)};
}

double log_multivariate_gamma(std::size_t p, double a) {
  const double dim = static_cast<double>(p);
  if (p == 0) throw InvalidParameter("log_multivariate_gamma: p must be >= 1");
  if (!(a > 0.5 * (dim - 1.0))) {
    throw InvalidParameter("log_multivariate_gamma: need a > (p-1)/2, got a = " +
                           std::to_string(a));
  }
  double s = 0.25 * dim * (dim - 1.0) * kLogPi;
  for (std::size_t j = 1; j <= p; ++j) {
    s += log_gamma(a + 0.5 * (1.0 - static_cast<double>(j)));
  }
  return s;
}

double BetaConditional::log_density(double beta) const {
  if (!(beta > lower) || !(beta <= upper)) return kNegInf;
  return beta * coeff - delta_exp * std::log(beta) -
         log_multivariate_gamma(p, 0.5 * beta);
}

BetaConditional make_beta_conditional(const ModelSpec &spec,
                                      double logdet_sigma,
                                      const DiagMatrix &scale) {
  const std::size_t p = scale.dim();
  BetaConditional target;
  target.p = p;
  target.coeff =
      0.5 * (-logdet_sigma + scale.sum_log() - static_cast<double>(p) * kLog2);
  target.delta_exp = spec.delta_exponent();
  target.lower = spec.beta_lower(p);
  target.upper = spec.beta_upper();
  return target;
}

double beta_log_conditional(const ModelSpec &spec, const SpdMatrix &sigma,
                            const DiagMatrix &scale, double beta) {
  if (sigma.dim() != scale.dim()) {
    throw DimensionMismatch("beta_log_conditional: sigma/scale dimensions");
  }
  return make_beta_conditional(spec, log_det(sigma), scale).log_density(beta);
}

double log_joint_posterior(const ModelSpec &spec, const ChainState &state,
                           const Matrix &scatter, std::size_t n) {
  const std::size_t p = state.sigma.dim();
  if (scatter.rows() != p || scatter.cols() != p ||
      state.hyper.scale.dim() != p) {
    throw DimensionMismatch("log_joint_posterior: dimension mismatch");
  }
  const double beta = state.hyper.beta;
  if (!(beta > spec.beta_lower(p)) || !(beta <= spec.beta_upper())) {
    return kNegInf;
  }
  const double dim = static_cast<double>(p);
  const DiagMatrix &scale = state.hyper.scale;
  const SpdMatrix sigma_inv = spd_inverse(state.sigma);
  const double logdet_sigma_inv = -log_det(state.sigma);

  // tr(Sigma^-1 (S + diag(scale))).
  double tr = 0.0;
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < p; ++j) tr += sigma_inv(i, j) * scatter(j, i);
    tr += sigma_inv(i, i) * scale[i];
  }

  // Inverse-Wishart kernel in Sigma times the likelihood, the scale
  // normalizer |scale|^(beta/2) / (2^(p beta/2) Gamma_p(beta/2)), the
  // scale prior, and the beta prior.  Model1 has a single free scale
  // parameter, so its prior contributes one 1/phi factor, not p of them.
  double value = 0.5 * (beta + static_cast<double>(n) + dim + 1.0) *
                     logdet_sigma_inv -
                 0.5 * tr;
  value += 0.5 * beta * scale.sum_log();
  value -= spec.scale_is_scalar() ? std::log(scale[0]) : scale.sum_log();
  value -= 0.5 * dim * beta * kLog2;
  value -= log_multivariate_gamma(p, 0.5 * beta);
  value -= spec.delta_exponent() * std::log(beta);
  return value;
}

}  // namespace hiwish
