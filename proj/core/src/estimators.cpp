#include "hiwish/estimators.hpp"

#include <cmath>
#include <limits>

namespace hiwish {

const char *to_string(LossKind loss) {
  switch (loss) {
    case LossKind::Stein: return "stein";
    case LossKind::Frobenius: return "frobenius";
    case LossKind::EigenMinRel: return "eigen_min_rel";
    case LossKind::EigenMaxRel: return "eigen_max_rel";
  }
  return "?";
}

const char *to_string(EstimatorKind estimator) {
  switch (estimator) {
    case EstimatorKind::Model1L1: return "model1_l1";
    case EstimatorKind::Model1L2: return "model1_l2";
    case EstimatorKind::Model2L1: return "model2_l1";
    case EstimatorKind::Model2L2: return "model2_l2";
    case EstimatorKind::DkL1: return "dk_l1";
    case EstimatorKind::DkL2: return "dk_l2";
    case EstimatorKind::Mle: return "mle";
  }
  return "?";
}

SpdMatrix bayes_estimate_l2(const ChainTrace &trace) {
  if (trace.retained() == 0) {
    throw InvalidParameter("bayes_estimate_l2: empty trace");
  }
  return SpdMatrix(trace.sigma_mean);
}

SpdMatrix bayes_estimate_l1(const ChainTrace &trace) {
  if (trace.retained() == 0) {
    throw InvalidParameter("bayes_estimate_l1: empty trace");
  }
  return spd_inverse(SpdMatrix(trace.sigma_inv_mean));
}

Matrix mle_estimate(const Matrix &scatter, std::size_t n) {
  if (n == 0) throw InvalidParameter("mle_estimate: n must be >= 1");
  Matrix m = scatter;
  m *= 1.0 / static_cast<double>(n);
  return m;
}

double loss_frobenius(const Matrix &est, const Matrix &truth) {
  if (est.rows() != truth.rows() || est.cols() != truth.cols()) {
    throw DimensionMismatch("loss_frobenius: dimension mismatch");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < est.rows(); ++i) {
    for (std::size_t j = 0; j < est.cols(); ++j) {
      const double d = est(i, j) - truth(i, j);
      s += d * d;
    }
  }
  return s;
}

double loss_stein(const Matrix &est, const SpdMatrix &truth) {
  const std::size_t p = truth.dim();
  if (est.rows() != p || est.cols() != p) {
    throw DimensionMismatch("loss_stein: dimension mismatch");
  }
  const auto est_chol = try_cholesky(est);
  if (!est_chol) return std::numeric_limits<double>::infinity();

  // M = L^-1 est L^-T with L the truth's factor; M is similar to
  // est * truth^-1, so trace and determinant carry over.
  const Matrix l = cholesky(truth);
  const Matrix y = solve_lower(l, est);
  const Matrix m = solve_lower(l, y.transpose());
  double logdet_est = 0.0;
  for (std::size_t i = 0; i < p; ++i) logdet_est += std::log((*est_chol)(i, i));
  logdet_est *= 2.0;
  return m.trace() - (logdet_est - log_det(truth)) - static_cast<double>(p);
}

double loss_eigen_rel(double truth_eig, double est_eig) {
  if (!(truth_eig > 0.0)) {
    throw InvalidParameter("loss_eigen_rel: truth eigenvalue must be positive");
  }
  return std::abs(truth_eig - est_eig) / truth_eig;
}

std::vector<double> shrunk_eigenvalues(double beta, double d, std::size_t n,
                                       std::span<const double> mle_eigs) {
  const double p = static_cast<double>(mle_eigs.size());
  if (!(beta > p + 1.0)) {
    throw InvalidParameter("shrunk_eigenvalues: beta must exceed p + 1");
  }
  const double denom = beta + static_cast<double>(n) - p - 1.0;
  std::vector<double> g(mle_eigs.size());
  for (std::size_t i = 0; i < mle_eigs.size(); ++i) {
    g[i] = ((beta - p - 1.0) * d + static_cast<double>(n) * mle_eigs[i]) / denom;
  }
  return g;
}

}  // namespace hiwish
