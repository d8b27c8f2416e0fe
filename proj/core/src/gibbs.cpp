#include "hiwish/gibbs.hpp"

#include <cmath>
#include <string>

#include "hiwish/distributions.hpp"

namespace hiwish {

void SamplerConfig::validate() const {
  if (iterations == 0 || burn_in >= iterations) {
    throw InvalidParameter("SamplerConfig: need burn_in < iterations");
  }
  if (quad_points < 64) {
    throw InvalidParameter("SamplerConfig: quad_points must be >= 64");
  }
  if (!(quad_halfwidth > 0.0) || !std::isfinite(quad_halfwidth)) {
    throw InvalidParameter("SamplerConfig: quad_halfwidth must be positive");
  }
  if (variance_refresh_every == 0) {
    throw InvalidParameter("SamplerConfig: variance_refresh_every must be >= 1");
  }
  // NaN means "unset"; anything else must be a usable value.
  if (!std::isnan(init_beta) && !std::isfinite(init_beta)) {
    throw InvalidParameter("SamplerConfig: init_beta must be finite");
  }
  if (!std::isnan(init_scale) &&
      (!std::isfinite(init_scale) || init_scale <= 0.0)) {
    throw InvalidParameter("SamplerConfig: init_scale must be positive");
  }
}

namespace detail {

double gamma_log_accept_ratio(const BetaConditional &target, double gamma_from,
                              double gamma_to) {
  if (gamma_to == gamma_from) return 0.0;
  const double to = target.log_density(target.lower + std::exp(gamma_to)) + gamma_to;
  const double from =
      target.log_density(target.lower + std::exp(gamma_from)) + gamma_from;
  return to - from;
}

namespace {

struct GammaSpaceTarget {
  const BetaConditional &target;
  double operator()(double gamma) const {
    return target.log_density(target.lower + std::exp(gamma)) + gamma;
  }
};

BetaStepResult gamma_walk_step(const BetaConditional &target, double beta,
                               double variance, bool fell_back,
                               RngStream &rng) {
  const double gamma = std::log(beta - target.lower);
  const double gamma_prop =
      gamma + sample_standard_normal(rng) * std::sqrt(2.0 * variance);
  const double log_ratio = gamma_log_accept_ratio(target, gamma, gamma_prop);
  // The uniform is always consumed, accepted or not, so the draw sequence
  // is a function of the iteration count alone.
  const double u = rng.uniform01();
  if (std::log(u) < log_ratio) {
    return {target.lower + std::exp(gamma_prop), true, fell_back};
  }
  return {beta, false, fell_back};
}

}  // namespace
}  // namespace detail

double estimate_gamma_variance(const BetaConditional &target,
                               const SamplerConfig &config) {
  const auto moments = detail::gamma_moments_by_quadrature(
      detail::GammaSpaceTarget{target}, config.quad_points,
      config.quad_halfwidth);
  if (!moments) {
    throw QuadratureDegenerate(
        "estimate_gamma_variance: quadrature produced no usable variance");
  }
  return moments->variance;
}

double estimate_gamma_variance(const ModelSpec &spec, const ChainState &state,
                               const SamplerConfig &config) {
  return estimate_gamma_variance(
      make_beta_conditional(spec, log_det(state.sigma), state.hyper.scale),
      config);
}

namespace {

// Variance with the documented fallback: degenerate integrals yield 1.0.
double variance_or_fallback(const BetaConditional &target,
                            const SamplerConfig &config, bool &fell_back) {
  const auto moments = detail::gamma_moments_by_quadrature(
      detail::GammaSpaceTarget{target}, config.quad_points,
      config.quad_halfwidth);
  if (!moments) {
    fell_back = true;
    return 1.0;
  }
  fell_back = false;
  return moments->variance;
}

}  // namespace

BetaStepResult metropolis_beta_step(const ModelSpec &spec,
                                    const ChainState &state,
                                    const SamplerConfig &config,
                                    RngStream &rng) {
  const BetaConditional target =
      make_beta_conditional(spec, log_det(state.sigma), state.hyper.scale);
  bool fell_back = false;
  const double variance = variance_or_fallback(target, config, fell_back);
  return detail::gamma_walk_step(target, state.hyper.beta, variance, fell_back,
                                 rng);
}

ChainTrace run_chain(const ModelSpec &spec, const Matrix &scatter,
                     std::size_t n, const SamplerConfig &config,
                     RngStream &rng) {
  config.validate();
  if (!scatter.is_square()) {
    throw DimensionMismatch("run_chain: scatter matrix must be square");
  }
  if (n == 0) throw InvalidParameter("run_chain: n must be >= 1");
  const std::size_t p = scatter.rows();
  spec.validate(p);

  // Start: Sigma = S/n + 0.1 I (SPD even for singular S), scale from its
  // diagonal (Model1 takes the diagonal mean, its entries being tied),
  // beta = p + 3, pulled into the support midpoint if dk_bound is tighter.
  Matrix sigma0 = scatter;
  sigma0 *= 1.0 / static_cast<double>(n);
  for (std::size_t i = 0; i < p; ++i) sigma0(i, i) += 0.1;

  std::vector<double> scale_entries = sigma0.diagonal();
  if (spec.scale_is_scalar()) {
    double mean = 0.0;
    for (double v : scale_entries) mean += v;
    mean /= static_cast<double>(p);
    scale_entries.assign(p, mean);
  }
  if (!std::isnan(config.init_scale)) {
    scale_entries.assign(p, config.init_scale);
  }

  double beta = static_cast<double>(p) + 3.0;
  if (!(beta <= spec.beta_upper())) {
    beta = 0.5 * (spec.beta_lower(p) + spec.beta_upper());
  }
  if (!std::isnan(config.init_beta)) {
    beta = config.init_beta;
    if (!(beta > spec.beta_lower(p)) || !(beta <= spec.beta_upper())) {
      throw InvalidParameter("run_chain: init_beta outside the beta support");
    }
  }

  HyperState hyper{beta, DiagMatrix(std::move(scale_entries))};

  const std::size_t retained_total = config.iterations - config.burn_in;
  ChainTrace trace;
  trace.dim = p;
  trace.burn_in = config.burn_in;
  trace.beta_draws.reserve(retained_total);
  trace.beta_accepts.reserve(retained_total);
  trace.sigma_diag_draws.reserve(retained_total * p);
  if (config.retain_sigma_draws) trace.sigma_draws.reserve(retained_total);
  Matrix sigma_sum(p, p);
  Matrix sigma_inv_sum(p, p);

  double variance = 1.0;
  for (std::size_t k = 1; k <= config.iterations; ++k) {
    const WishartParams iw = conditional_sigma(spec, hyper, scatter, n);
    const InverseWishartDraw draw =
        sample_inverse_wishart_draw(rng, iw.df, iw.scale);

    if (config.update_scale) {
      if (spec.scale_is_scalar()) {
        const GammaParams g =
            conditional_scale_model1(hyper.beta, draw.sigma_inv);
        hyper.scale = DiagMatrix(p, sample_gamma(rng, g.shape, g.rate));
      } else {
        std::vector<double> entries(p);
        for (std::size_t j = 0; j < p; ++j) {
          const GammaParams g =
              spec.variant == ModelVariant::Model2
                  ? conditional_scale_model2(hyper.beta, draw.sigma_inv, j)
                  : conditional_scale_dk(hyper.beta, draw.sigma_inv, j);
          entries[j] = sample_gamma(rng, g.shape, g.rate);
        }
        hyper.scale = DiagMatrix(std::move(entries));
      }
    }

    bool accepted = false;
    if (config.update_beta) {
      const BetaConditional target =
          make_beta_conditional(spec, draw.logdet_sigma, hyper.scale);
      if ((k - 1) % config.variance_refresh_every == 0) {
        bool fell_back = false;
        variance = variance_or_fallback(target, config, fell_back);
        if (fell_back) ++trace.quad_fallbacks;
      }
      const BetaStepResult step = detail::gamma_walk_step(
          target, hyper.beta, variance, false, rng);
      hyper.beta = step.beta;
      accepted = step.accepted;
      if (hyper.beta > 1e12) {
        throw ChainDiverged("run_chain: beta exceeded 1e12 at iteration " +
                            std::to_string(k));
      }
    }

    if (k > config.burn_in) {
      sigma_sum += draw.sigma;
      sigma_inv_sum += draw.sigma_inv;
      trace.beta_draws.push_back(hyper.beta);
      trace.beta_accepts.push_back(accepted ? 1 : 0);
      if (accepted) ++trace.accept_count;
      for (std::size_t i = 0; i < p; ++i) {
        trace.sigma_diag_draws.push_back(draw.sigma(i, i));
      }
      if (config.retain_sigma_draws) {
        trace.sigma_draws.push_back(draw.sigma);
      }
    }
  }

  const double inv_retained = 1.0 / static_cast<double>(retained_total);
  trace.sigma_mean = inv_retained * std::move(sigma_sum);
  trace.sigma_inv_mean = inv_retained * std::move(sigma_inv_sum);
  return trace;
}

}  // namespace hiwish
