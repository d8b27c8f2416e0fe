#ifndef HIWISH_ESTIMATORS_HPP
#define HIWISH_ESTIMATORS_HPP

#include <span>
#include <vector>

#include "hiwish/gibbs.hpp"
#include "hiwish/matrix.hpp"

namespace hiwish {

enum class LossKind { Stein, Frobenius, EigenMinRel, EigenMaxRel };

enum class EstimatorKind {
  Model1L1,
  Model1L2,
  Model2L1,
  Model2L2,
  DkL1,
  DkL2,
  Mle,
};

inline constexpr LossKind kAllLosses[] = {
    LossKind::Stein, LossKind::Frobenius, LossKind::EigenMinRel,
    LossKind::EigenMaxRel};
inline constexpr EstimatorKind kAllEstimators[] = {
    EstimatorKind::Model1L1, EstimatorKind::Model1L2, EstimatorKind::Model2L1,
    EstimatorKind::Model2L2, EstimatorKind::DkL1,     EstimatorKind::DkL2,
    EstimatorKind::Mle};

const char *to_string(LossKind loss);
const char *to_string(EstimatorKind estimator);

// Posterior-mean estimator, optimal under the squared Frobenius loss:
// the trace's running mean of Sigma.  SPD validation is a real check
// here; a failure means the chain was too short to average into the cone
// and is surfaced, never repaired.
SpdMatrix bayes_estimate_l2(const ChainTrace &trace);

// Inverse of the posterior mean of Sigma^-1, optimal under Stein's loss.
SpdMatrix bayes_estimate_l1(const ChainTrace &trace);

// S/n.  Deliberately returned as a plain matrix: for n < p it is
// singular, and that misbehavior is part of what the study measures.
Matrix mle_estimate(const Matrix &scatter, std::size_t n);

// Sum of squared entrywise differences.
double loss_frobenius(const Matrix &est, const Matrix &truth);

// tr(est * truth^-1) - log det(est * truth^-1) - p, computed through the
// Cholesky factor of the truth so the truth is never explicitly inverted.
// Estimates outside the SPD cone score +inf.
double loss_stein(const Matrix &est, const SpdMatrix &truth);

// |truth_eig - est_eig| / truth_eig.
double loss_eigen_rel(double truth_eig, double est_eig);

// Eigenvalues of the posterior mean when the prior scale is d*I and thus
// commutes with S: each MLE eigenvalue l_i maps to
//   g_i = ((beta - p - 1) d + n l_i) / (beta + n - p - 1),
// an affine contraction toward d.
std::vector<double> shrunk_eigenvalues(double beta, double d, std::size_t n,
                                       std::span<const double> mle_eigs);

}  // namespace hiwish

#endif  // HIWISH_ESTIMATORS_HPP
