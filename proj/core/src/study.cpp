#include "hiwish/study.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>
#include <thread>

#include "hiwish/csv.hpp"
#include "hiwish/distributions.hpp"

namespace hiwish {

namespace {

constexpr std::size_t kStudyDim = 5;
constexpr double kQuarterPi = 0.78539816339744830961566084581988;

std::size_t estimator_index(EstimatorKind e) {
  return static_cast<std::size_t>(e);
}
std::size_t loss_index(LossKind l) { return static_cast<std::size_t>(l); }

// Diagonal prototype behind each truth: A for A, B for B/B1/B2, C for the
// C family.  Entries are the eigenvalues, descending.
std::vector<double> prototype_eigenvalues(TrueMatrixId id) {
  switch (id) {
    case TrueMatrixId::A:
      return std::vector<double>(kStudyDim, 1.0);
    case TrueMatrixId::B:
    case TrueMatrixId::B1:
    case TrueMatrixId::B2: {
      std::vector<double> v(kStudyDim);
      double x = 1.0;
      for (auto &e : v) {
        e = x;
        x *= 0.75;
      }
      return v;
    }
    case TrueMatrixId::C:
    case TrueMatrixId::C1:
    case TrueMatrixId::C2:
      return {1.0, 0.75, 0.75 * 0.75, std::pow(0.75, 10), std::pow(0.75, 20)};
  }
  throw InvalidParameter("prototype_eigenvalues: bad id");
}

}  // namespace

const char *to_string(TrueMatrixId id) {
  switch (id) {
    case TrueMatrixId::A: return "A";
    case TrueMatrixId::B: return "B";
    case TrueMatrixId::C: return "C";
    case TrueMatrixId::B1: return "B1";
    case TrueMatrixId::B2: return "B2";
    case TrueMatrixId::C1: return "C1";
    case TrueMatrixId::C2: return "C2";
  }
  return "?";
}

std::optional<TrueMatrixId> parse_true_matrix_id(std::string_view name) {
  for (TrueMatrixId id : kAllTrueMatrices) {
    if (name == to_string(id)) return id;
  }
  return std::nullopt;
}

std::vector<double> true_matrix_eigenvalues(TrueMatrixId id) {
  return prototype_eigenvalues(id);
}

SpdMatrix build_true_matrix(TrueMatrixId id) {
  const std::vector<double> eig = prototype_eigenvalues(id);
  Matrix d(kStudyDim, kStudyDim);
  for (std::size_t i = 0; i < kStudyDim; ++i) d(i, i) = eig[i];

  const std::size_t n_angles = kStudyDim * (kStudyDim - 1) / 2;
  std::vector<double> angles;
  switch (id) {
    case TrueMatrixId::A:
    case TrueMatrixId::B:
    case TrueMatrixId::C:
      return SpdMatrix(d);
    case TrueMatrixId::B1:
    case TrueMatrixId::C1:
      angles.assign(n_angles, kQuarterPi);
      break;
    case TrueMatrixId::B2:
    case TrueMatrixId::C2:
      angles.resize(n_angles);
      for (std::size_t k = 0; k < n_angles; ++k) {
        angles[k] = -kQuarterPi + 2.0 * kQuarterPi * static_cast<double>(k) /
                                      static_cast<double>(n_angles - 1);
      }
      break;
  }
  const Matrix q = givens_rotation_product(kStudyDim, angles);
  return SpdMatrix(q.transpose() * d * q);
}

void StudyConfig::validate() const {
  if (replications < 2) {
    throw InvalidParameter(
        "StudyConfig: replications must be >= 2 for a standard error");
  }
  if (matrices.empty()) {
    throw InvalidParameter("StudyConfig: matrices must be non-empty");
  }
  if (n_values.empty()) {
    throw InvalidParameter("StudyConfig: n_values must be non-empty");
  }
  for (std::size_t n : n_values) {
    if (n == 0) throw InvalidParameter("StudyConfig: n values must be >= 1");
  }
  sampler.validate();
  ModelSpec::model1(delta).validate(kStudyDim);
  ModelSpec::model_dk(dk_bound).validate(kStudyDim);
}

double &ReplicationLosses::at(EstimatorKind e, LossKind l) {
  return loss[estimator_index(e)][loss_index(l)];
}
double ReplicationLosses::at(EstimatorKind e, LossKind l) const {
  return loss[estimator_index(e)][loss_index(l)];
}

ReplicationLosses run_replication(TrueMatrixId id, std::size_t n,
                                  const StudyConfig &config,
                                  RngStream stream) {
  const SpdMatrix truth = build_true_matrix(id);
  const std::vector<double> truth_eigs = true_matrix_eigenvalues(id);

  const Matrix data = sample_mvn_zero(stream, truth, n);
  const Matrix scatter = scatter_matrix(data);

  const ModelSpec specs[3] = {ModelSpec::model1(config.delta),
                              ModelSpec::model2(config.delta),
                              ModelSpec::model_dk(config.dk_bound)};

  Matrix estimates[7];
  for (int m = 0; m < 3; ++m) {
    const ChainTrace trace =
        run_chain(specs[m], scatter, n, config.sampler, stream);
    estimates[2 * m] = bayes_estimate_l1(trace).mat();
    estimates[2 * m + 1] = bayes_estimate_l2(trace).mat();
  }
  estimates[estimator_index(EstimatorKind::Mle)] = mle_estimate(scatter, n);

  ReplicationLosses out{};
  for (EstimatorKind e : kAllEstimators) {
    const Matrix &est = estimates[estimator_index(e)];
    out.at(e, LossKind::Frobenius) = loss_frobenius(est, truth.mat());
    out.at(e, LossKind::Stein) = loss_stein(est, truth);
    const EigenDecomp eig = symmetric_eigen(est);
    out.at(e, LossKind::EigenMaxRel) =
        loss_eigen_rel(truth_eigs.front(), eig.values.front());
    out.at(e, LossKind::EigenMinRel) =
        loss_eigen_rel(truth_eigs.back(), eig.values.back());
  }
  return out;
}

namespace {

struct Cell {
  TrueMatrixId matrix;
  std::size_t n;
  std::size_t replication;
};

}  // namespace

RiskReport run_study(const StudyConfig &config) {
  config.validate();

  std::vector<Cell> cells;
  cells.reserve(config.matrices.size() * config.n_values.size() *
                config.replications);
  for (TrueMatrixId id : config.matrices) {
    for (std::size_t n : config.n_values) {
      for (std::size_t rep = 0; rep < config.replications; ++rep) {
        cells.push_back({id, n, rep});
      }
    }
  }

  std::vector<ReplicationLosses> results(cells.size());
  std::vector<std::string> failures(cells.size());

  const auto run_cell = [&](std::size_t i) {
    const Cell &cell = cells[i];
    const std::uint64_t parts[3] = {
        static_cast<std::uint64_t>(cell.matrix) + 1,
        static_cast<std::uint64_t>(cell.n),
        static_cast<std::uint64_t>(cell.replication)};
    RngStream stream(seed_fold(config.master_seed, parts));
    try {
      results[i] = run_replication(cell.matrix, cell.n, config, stream);
    } catch (const Error &err) {
      failures[i] = std::string(err.what()) + " [matrix " +
                    to_string(cell.matrix) + ", n " + std::to_string(cell.n) +
                    ", replication " + std::to_string(cell.replication) + "]";
    }
  };

  unsigned workers = config.threads;
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(
      std::min<std::size_t>(workers, cells.size()));

  if (workers <= 1) {
    for (std::size_t i = 0; i < cells.size(); ++i) run_cell(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (;;) {
          const std::size_t i = next.fetch_add(1);
          if (i >= cells.size()) return;
          run_cell(i);
        }
      });
    }
    for (auto &t : pool) t.join();
  }

  // Replication errors surface after the pool drains, in cell order, so
  // the first reported failure is deterministic.
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (!failures[i].empty()) throw ChainDiverged("run_study: " + failures[i]);
  }

  RiskReport report;
  report.rows.reserve(config.matrices.size() * config.n_values.size() * 7 * 4);
  std::size_t base = 0;
  for (TrueMatrixId id : config.matrices) {
    for (std::size_t n : config.n_values) {
      for (EstimatorKind e : kAllEstimators) {
        for (LossKind l : kAllLosses) {
          double sum = 0.0;
          std::size_t included = 0;
          for (std::size_t rep = 0; rep < config.replications; ++rep) {
            const double v = results[base + rep].at(e, l);
            if (std::isinf(v)) continue;
            sum += v;
            ++included;
          }
          RiskRow row{id, n, e, l, 0.0, 0.0,
                      config.replications - included};
          if (included == 0) {
            row.mean = std::numeric_limits<double>::infinity();
          } else {
            row.mean = sum / static_cast<double>(included);
            double ss = 0.0;
            for (std::size_t rep = 0; rep < config.replications; ++rep) {
              const double v = results[base + rep].at(e, l);
              if (std::isinf(v)) continue;
              ss += (v - row.mean) * (v - row.mean);
            }
            if (included >= 2) {
              row.std_error = std::sqrt(
                  ss / static_cast<double>(included - 1) /
                  static_cast<double>(included));
            }
          }
          report.rows.push_back(row);
        }
      }
      if (config.keep_replication_losses) {
        for (std::size_t rep = 0; rep < config.replications; ++rep) {
          report.replication_losses.push_back(
              {id, n, rep, results[base + rep]});
        }
      }
      base += config.replications;
    }
  }
  return report;
}

const RiskRow &RiskReport::at(TrueMatrixId matrix, std::size_t n,
                              EstimatorKind estimator, LossKind loss) const {
  for (const RiskRow &row : rows) {
    if (row.matrix == matrix && row.n == n && row.estimator == estimator &&
        row.loss == loss) {
      return row;
    }
  }
  throw InvalidParameter("RiskReport::at: no such row");
}

void write_risk_csv(std::ostream &out, const RiskReport &report) {
  out << "matrix,n,estimator,loss,mean,stderr,excluded\n";
  for (const RiskRow &row : report.rows) {
    out << to_string(row.matrix) << ',' << row.n << ','
        << to_string(row.estimator) << ',' << to_string(row.loss) << ','
        << csv::format_double(row.mean) << ','
        << csv::format_double(row.std_error) << ',' << row.excluded << '\n';
  }
}

void write_replication_csv(std::ostream &out, const RiskReport &report) {
  out << "matrix,n,replication,estimator,loss,value\n";
  for (const ReplicationRecord &rec : report.replication_losses) {
    for (EstimatorKind e : kAllEstimators) {
      for (LossKind l : kAllLosses) {
        out << to_string(rec.matrix) << ',' << rec.n << ',' << rec.replication
            << ',' << to_string(e) << ',' << to_string(l) << ','
            << csv::format_double(rec.losses.at(e, l)) << '\n';
      }
    }
  }
}

}  // namespace hiwish
