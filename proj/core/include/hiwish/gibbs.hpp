#ifndef HIWISH_GIBBS_HPP
#define HIWISH_GIBBS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

#include "hiwish/models.hpp"
#include "hiwish/rng.hpp"

namespace hiwish {

struct SamplerConfig {
  std::size_t iterations = 20000;
  std::size_t burn_in = 5000;
  // Seed recorded for front ends that build the stream from the config;
  // run_chain itself draws from whatever stream it is handed.
  std::uint64_t seed = 1;
  // Trapezoid rule resolution and half-width (in gamma units) for the
  // proposal-variance integration.
  std::size_t quad_points = 512;
  double quad_halfwidth = 12.0;
  // 1 recomputes the proposal variance every iteration (the literal
  // scheme); larger values reuse it and trade exactness for speed.
  std::size_t variance_refresh_every = 1;
  // Keep every retained Sigma draw instead of only running means.
  bool retain_sigma_draws = false;
  // Diagnostic switches: freezing parts of the hierarchy turns the chain
  // into a conjugate sampler with a closed-form answer.
  bool update_scale = true;
  bool update_beta = true;
  // Starting-point overrides for the frozen-hierarchy diagnostics; NaN
  // means "use the documented default start".  init_scale is a single
  // value applied to every component.
  double init_beta = std::numeric_limits<double>::quiet_NaN();
  double init_scale = std::numeric_limits<double>::quiet_NaN();

  void validate() const;
};

// Post-burn-in summaries of one chain.  Full Sigma draws are only kept on
// request; the per-iteration diagonal and the beta trace are always kept
// because the trace dump needs them.
struct ChainTrace {
  std::size_t dim = 0;
  std::size_t burn_in = 0;  // absolute index of the first retained iteration minus 1
  Matrix sigma_mean;
  Matrix sigma_inv_mean;
  std::vector<double> beta_draws;
  std::vector<unsigned char> beta_accepts;  // 1 where the proposal was taken
  std::vector<double> sigma_diag_draws;     // retained() x dim, row-major
  std::vector<Matrix> sigma_draws;          // empty unless retain_sigma_draws
  std::size_t accept_count = 0;
  std::size_t quad_fallbacks = 0;

  std::size_t retained() const { return beta_draws.size(); }
  double acceptance_rate() const {
    return retained() == 0
               ? 0.0
               : static_cast<double>(accept_count) /
                     static_cast<double>(retained());
  }
};

struct BetaStepResult {
  double beta;
  bool accepted;
  bool quad_fallback;  // proposal variance fell back to 1.0
};

struct GammaMoments {
  double mean;
  double variance;
};

namespace detail {

// Mean and variance of exp(log_target) on the gamma line by trapezoidal
// quadrature: a 64-point scan of [-30, 30] locates the mode region, then
// quad_points points cover [argmax - halfwidth, argmax + halfwidth].
// Returns nullopt when the target carries no usable mass: no finite value
// on the scan grid, or a non-finite or non-positive variance.
template <class F>
std::optional<GammaMoments> gamma_moments_by_quadrature(F &&log_target,
                                                        std::size_t quad_points,
                                                        double halfwidth) {
  constexpr int kScanPoints = 64;
  constexpr double kScanLo = -30.0, kScanHi = 30.0;
  double best_x = 0.0;
  double best_val = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < kScanPoints; ++i) {
    const double x =
        kScanLo + (kScanHi - kScanLo) * i / static_cast<double>(kScanPoints - 1);
    const double v = log_target(x);
    if (std::isfinite(v) && v > best_val) {
      best_val = v;
      best_x = x;
    }
  }
  if (!std::isfinite(best_val)) return std::nullopt;

  const std::size_t m = quad_points;
  std::vector<double> xs(m), ws(m);
  const double lo = best_x - halfwidth;
  const double step = 2.0 * halfwidth / static_cast<double>(m - 1);
  double peak = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < m; ++i) {
    xs[i] = lo + step * static_cast<double>(i);
    ws[i] = log_target(xs[i]);
    if (std::isfinite(ws[i])) peak = std::max(peak, ws[i]);
  }
  if (!std::isfinite(peak)) return std::nullopt;

  double mass = 0.0, first = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    const double t = (i == 0 || i == m - 1) ? 0.5 : 1.0;
    ws[i] = std::isfinite(ws[i]) ? t * std::exp(ws[i] - peak) : 0.0;
    mass += ws[i];
    first += ws[i] * xs[i];
  }
  if (!(mass > 0.0) || !std::isfinite(mass)) return std::nullopt;
  const double mean = first / mass;
  double second = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    second += ws[i] * (xs[i] - mean) * (xs[i] - mean);
  }
  const double variance = second / mass;
  if (!(variance > 0.0) || !std::isfinite(variance)) return std::nullopt;
  return GammaMoments{mean, variance};
}

// Log acceptance ratio of the random walk on the gamma line.  The target
// is the beta conditional pushed through beta = lower + exp(gamma), whose
// Jacobian contributes the +gamma terms; equal endpoints give exactly 0.
double gamma_log_accept_ratio(const BetaConditional &target, double gamma_from,
                              double gamma_to);

}  // namespace detail

// Proposal variance for the beta step: the variance of the gamma-space
// conditional, integrated numerically.  Throws QuadratureDegenerate when
// the integral is unusable.
double estimate_gamma_variance(const BetaConditional &target,
                               const SamplerConfig &config);
double estimate_gamma_variance(const ModelSpec &spec, const ChainState &state,
                               const SamplerConfig &config);

// One random-walk Metropolis update of beta at fixed (Sigma, scale):
// gamma' ~ N(gamma, 2 * variance-estimate), accepted on the gamma-space
// target ratio.  A degenerate variance integral falls back to 1.0 and is
// flagged, never thrown, so a chain cannot die mid-run.
BetaStepResult metropolis_beta_step(const ModelSpec &spec,
                                    const ChainState &state,
                                    const SamplerConfig &config,
                                    RngStream &rng);

// Full Metropolis-within-Gibbs chain on the posterior of (Sigma, scale,
// beta) given the scatter matrix of n zero-mean observations.  Sweep
// order per iteration: Sigma draw, scale draw(s), beta step.
ChainTrace run_chain(const ModelSpec &spec, const Matrix &scatter,
                     std::size_t n, const SamplerConfig &config,
                     RngStream &rng);

}  // namespace hiwish

#endif  // HIWISH_GIBBS_HPP
