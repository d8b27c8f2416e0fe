#ifndef HIWISH_STUDY_HPP
#define HIWISH_STUDY_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>
#include <vector>

#include "hiwish/estimators.hpp"
#include "hiwish/gibbs.hpp"

namespace hiwish {

// The seven p=5 truths of the risk study.  A, B, C are diagonal; B1/C1
// are B/C conjugated by the Givens product with every angle pi/4; B2/C2
// use ten angles evenly spaced over [-pi/4, pi/4], endpoints included.
enum class TrueMatrixId { A, B, C, B1, B2, C1, C2 };

inline constexpr TrueMatrixId kAllTrueMatrices[] = {
    TrueMatrixId::A,  TrueMatrixId::B,  TrueMatrixId::C, TrueMatrixId::B1,
    TrueMatrixId::B2, TrueMatrixId::C1, TrueMatrixId::C2};

const char *to_string(TrueMatrixId id);
std::optional<TrueMatrixId> parse_true_matrix_id(std::string_view name);

SpdMatrix build_true_matrix(TrueMatrixId id);

// Eigenvalues of the truth, descending.  Exact powers of 0.75 shared by a
// prototype and its rotations, so eigenvalue losses compare B/B1/B2 (and
// C/C1/C2) against identical targets.
std::vector<double> true_matrix_eigenvalues(TrueMatrixId id);

struct StudyConfig {
  std::vector<TrueMatrixId> matrices{kAllTrueMatrices,
                                     kAllTrueMatrices + 7};
  std::vector<std::size_t> n_values{5, 100};
  std::size_t replications = 100;
  SamplerConfig sampler;
  int delta = 2;
  double dk_bound = 1e6;
  std::uint64_t master_seed = 1;
  // 0 sizes the worker pool by hardware concurrency.
  unsigned threads = 0;
  bool keep_replication_losses = false;

  void validate() const;
};

// Losses of one replication, indexed by the positions of kAllEstimators
// and kAllLosses.
struct ReplicationLosses {
  double loss[7][4];
  double &at(EstimatorKind e, LossKind l);
  double at(EstimatorKind e, LossKind l) const;
};

// One dataset, three chains (Model1, Model2, ModelDK), seven estimates,
// all four losses against the truth.  The stream is taken by value: a
// replication consumes draws in a fixed order (data, then the chains in
// model order) and nothing else may interleave.
ReplicationLosses run_replication(TrueMatrixId id, std::size_t n,
                                  const StudyConfig &config, RngStream stream);

struct RiskRow {
  TrueMatrixId matrix;
  std::size_t n;
  EstimatorKind estimator;
  LossKind loss;
  double mean;
  double std_error;
  std::size_t excluded;
};

struct ReplicationRecord {
  TrueMatrixId matrix;
  std::size_t n;
  std::size_t replication;
  ReplicationLosses losses;
};

struct RiskReport {
  std::vector<RiskRow> rows;
  std::vector<ReplicationRecord> replication_losses;  // kept on request

  const RiskRow &at(TrueMatrixId matrix, std::size_t n, EstimatorKind estimator,
                    LossKind loss) const;
};

// The full factorial: every (matrix, n, replication) cell runs on its own
// substream derived as seed_fold(master_seed, {matrix_tag + 1, n, rep}),
// so any subset re-run in isolation reproduces the full run's numbers.
// Cells are distributed over a worker pool; aggregation folds them in
// deterministic cell order, so the thread count never changes the output.
// Infinite Stein losses are excluded from their cell's average and
// counted in the excluded column.
RiskReport run_study(const StudyConfig &config);

void write_risk_csv(std::ostream &out, const RiskReport &report);
void write_replication_csv(std::ostream &out, const RiskReport &report);

}  // namespace hiwish

#endif  // HIWISH_STUDY_HPP
