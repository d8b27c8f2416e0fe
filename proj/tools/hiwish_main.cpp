// Command-line front end: the replicated risk study, one-shot estimation
// from a data file, and chain-trace dumps for offline diagnostics.
//
// Exit codes: 0 success, 2 configuration or input-format error, 3 I/O
// error, 4 chain failure.  stderr carries human-readable progress and
// error text; stdout and the output files carry machine output only.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "hiwish/csv.hpp"
#include "hiwish/distributions.hpp"
#include "hiwish/estimators.hpp"
#include "hiwish/gibbs.hpp"
#include "hiwish/models.hpp"
#include "hiwish/study.hpp"

using nlohmann::json;

namespace {

// Everything the frozen configuration keys can carry, pre-loaded with the
// full-scale defaults.  Flag values override file values override these.
struct Settings {
  std::size_t iterations = 20000;
  std::size_t burn_in = 5000;
  std::uint64_t seed = 1;
  std::size_t replications = 100;
  int delta = 2;
  double dk_bound = 1e6;
  std::vector<std::string> matrices;   // resolved to all seven when empty
  std::vector<std::size_t> n_values;   // resolved to {5, 100} when empty
  std::string model = "model1";
  std::string loss = "l2";
  std::string output;                  // resolved per command when empty
};

constexpr const char *kConfigKeys[] = {
    "iterations", "burn_in", "seed",     "replications", "delta", "dk_bound",
    "matrices",   "n_values", "model",   "loss",         "output"};

template <typename T>
void read_key(const json &doc, const char *key, T &into) {
  if (!doc.contains(key)) return;
  try {
    into = doc.at(key).get<T>();
  } catch (const json::exception &) {
    throw hiwish::ParseError(std::string("config key '") + key +
                             "' has the wrong type");
  }
}

Settings load_config_file(const std::string &path, Settings base) {
  std::ifstream in(path);
  if (!in) throw hiwish::IoError("cannot open " + path + " for reading");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception &e) {
    throw hiwish::ParseError("config file " + path + ": " + e.what());
  }
  if (!doc.is_object()) {
    throw hiwish::ParseError("config file " + path +
                             ": expected a JSON object");
  }
  for (const auto &item : doc.items()) {
    const bool known =
        std::find_if(std::begin(kConfigKeys), std::end(kConfigKeys),
                     [&](const char *k) { return item.key() == k; }) !=
        std::end(kConfigKeys);
    if (!known) {
      throw hiwish::ParseError("unknown configuration key '" + item.key() +
                               "'");
    }
  }
  read_key(doc, "iterations", base.iterations);
  read_key(doc, "burn_in", base.burn_in);
  read_key(doc, "seed", base.seed);
  read_key(doc, "replications", base.replications);
  read_key(doc, "delta", base.delta);
  read_key(doc, "dk_bound", base.dk_bound);
  read_key(doc, "matrices", base.matrices);
  read_key(doc, "n_values", base.n_values);
  read_key(doc, "model", base.model);
  read_key(doc, "loss", base.loss);
  read_key(doc, "output", base.output);
  return base;
}

// Fill the blanks so the echoed configuration is complete and a rerun
// from it needs no defaults.
void resolve_defaults(Settings &s, const char *default_output) {
  if (s.matrices.empty()) {
    for (hiwish::TrueMatrixId id : hiwish::kAllTrueMatrices) {
      s.matrices.emplace_back(hiwish::to_string(id));
    }
  }
  if (s.n_values.empty()) s.n_values = {5, 100};
  if (s.output.empty()) s.output = default_output;
}

hiwish::ModelSpec parse_model(const Settings &s) {
  if (s.model == "model1") return hiwish::ModelSpec::model1(s.delta);
  if (s.model == "model2") return hiwish::ModelSpec::model2(s.delta);
  if (s.model == "dk") return hiwish::ModelSpec::model_dk(s.dk_bound);
  throw hiwish::InvalidParameter(
      "model: expected one of model1, model2, dk; got '" + s.model + "'");
}

void check_loss_name(const Settings &s) {
  if (s.loss != "l1" && s.loss != "l2") {
    throw hiwish::InvalidParameter("loss: expected l1 or l2, got '" + s.loss +
                                   "'");
  }
}

hiwish::SamplerConfig sampler_from(const Settings &s) {
  hiwish::SamplerConfig sampler;
  sampler.iterations = s.iterations;
  sampler.burn_in = s.burn_in;
  sampler.seed = s.seed;
  return sampler;
}

json effective_config_json(const Settings &s) {
  json j;
  j["iterations"] = s.iterations;
  j["burn_in"] = s.burn_in;
  j["seed"] = s.seed;
  j["replications"] = s.replications;
  j["delta"] = s.delta;
  j["dk_bound"] = s.dk_bound;
  j["matrices"] = s.matrices;
  j["n_values"] = s.n_values;
  j["model"] = s.model;
  j["loss"] = s.loss;
  j["output"] = s.output;
  return j;
}

void write_meta(const std::string &command, const Settings &s,
                double wall_seconds, const json *diagnostics) {
  json meta;
  meta["command"] = command;
  meta["seed"] = s.seed;
  meta["wall_seconds"] = wall_seconds;
  meta["effective_config"] = effective_config_json(s);
  if (diagnostics) meta["diagnostics"] = *diagnostics;
  const std::string path = s.output + ".meta.json";
  std::ofstream out(path);
  if (!out) throw hiwish::IoError("cannot open " + path + " for writing");
  out << meta.dump(2) << '\n';
  out.flush();
  if (!out) throw hiwish::IoError("write failure on " + path);
}

double quantile_sorted(const std::vector<double> &sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= sorted.size()) return sorted.back();
  return sorted[lo] + (pos - static_cast<double>(lo)) *
                          (sorted[lo + 1] - sorted[lo]);
}

// Posterior summaries of the degrees-of-freedom draws.  The mean appears
// only when the hyperprior exponent is at least 3: below that the first
// moment of the conditional does not exist, so a sample-path average is
// noise and is deliberately withheld.
json beta_diagnostics(const hiwish::ModelSpec &spec,
                      const hiwish::ChainTrace &trace) {
  std::vector<double> sorted = trace.beta_draws;
  std::sort(sorted.begin(), sorted.end());

  json beta;
  beta["median"] = quantile_sorted(sorted, 0.5);
  beta["q25"] = quantile_sorted(sorted, 0.25);
  beta["q75"] = quantile_sorted(sorted, 0.75);
  if (spec.delta_exponent() >= 3.0) {
    double sum = 0.0;
    for (double v : sorted) sum += v;
    beta["mean"] = sum / static_cast<double>(sorted.size());
  }

  constexpr std::size_t kBins = 20;
  double lo = sorted.front();
  double hi = sorted.back();
  if (!(hi > lo)) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double width = (hi - lo) / static_cast<double>(kBins);
  std::vector<std::size_t> counts(kBins, 0);
  for (double v : sorted) {
    const auto bin = std::min(
        kBins - 1, static_cast<std::size_t>((v - lo) / width));
    ++counts[bin];
  }
  std::vector<double> edges(kBins + 1);
  for (std::size_t i = 0; i <= kBins; ++i) {
    edges[i] = lo + width * static_cast<double>(i);
  }
  edges.back() = hi;
  beta["histogram"] = json{{"edges", edges}, {"counts", counts}};

  json d;
  d["acceptance_rate"] = trace.acceptance_rate();
  d["quad_fallbacks"] = trace.quad_fallbacks;
  d["beta"] = beta;
  return d;
}

struct Timer {
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  }
};

int cmd_study(const Settings &s, unsigned threads,
              const std::string &dump_losses) {
  Timer timer;
  hiwish::StudyConfig config;
  config.matrices.clear();
  for (const std::string &name : s.matrices) {
    const auto id = hiwish::parse_true_matrix_id(name);
    if (!id) {
      throw hiwish::InvalidParameter("matrices: unknown matrix '" + name +
                                     "'");
    }
    config.matrices.push_back(*id);
  }
  config.n_values = s.n_values;
  config.replications = s.replications;
  config.sampler = sampler_from(s);
  config.delta = s.delta;
  config.dk_bound = s.dk_bound;
  config.master_seed = s.seed;
  config.threads = threads;
  config.keep_replication_losses = !dump_losses.empty();
  config.validate();

  const hiwish::RiskReport report = hiwish::run_study(config);

  std::ofstream out(s.output);
  if (!out) throw hiwish::IoError("cannot open " + s.output + " for writing");
  hiwish::write_risk_csv(out, report);
  out.flush();
  if (!out) throw hiwish::IoError("write failure on " + s.output);

  if (!dump_losses.empty()) {
    std::ofstream losses(dump_losses);
    if (!losses) {
      throw hiwish::IoError("cannot open " + dump_losses + " for writing");
    }
    hiwish::write_replication_csv(losses, report);
    losses.flush();
    if (!losses) throw hiwish::IoError("write failure on " + dump_losses);
  }

  write_meta("study", s, timer.seconds(), nullptr);
  std::cerr << "study: " << report.rows.size() << " risk rows -> " << s.output
            << " (" << timer.seconds() << " s)\n";
  return 0;
}

int cmd_estimate(const Settings &s, const std::string &data_path) {
  Timer timer;
  check_loss_name(s);
  const hiwish::ModelSpec spec = parse_model(s);

  const hiwish::Matrix data = hiwish::csv::read_data_file(data_path);
  const hiwish::Matrix scatter = hiwish::scatter_matrix(data);

  hiwish::RngStream rng(s.seed);
  const hiwish::ChainTrace trace =
      hiwish::run_chain(spec, scatter, data.rows(), sampler_from(s), rng);
  const hiwish::SpdMatrix estimate = s.loss == "l1"
                                         ? hiwish::bayes_estimate_l1(trace)
                                         : hiwish::bayes_estimate_l2(trace);

  hiwish::csv::write_matrix_file(s.output, estimate.mat());
  const json diagnostics = beta_diagnostics(spec, trace);
  write_meta("estimate", s, timer.seconds(), &diagnostics);
  std::cerr << "estimate: " << data.rows() << " observations, " << data.cols()
            << " variables -> " << s.output << " (" << timer.seconds()
            << " s)\n";
  return 0;
}

int cmd_chain(const Settings &s, const std::string &data_path) {
  Timer timer;
  const hiwish::ModelSpec spec = parse_model(s);

  const hiwish::Matrix data = hiwish::csv::read_data_file(data_path);
  const hiwish::Matrix scatter = hiwish::scatter_matrix(data);
  const std::size_t p = scatter.rows();

  hiwish::RngStream rng(s.seed);
  const hiwish::ChainTrace trace =
      hiwish::run_chain(spec, scatter, data.rows(), sampler_from(s), rng);

  std::ofstream out(s.output);
  if (!out) throw hiwish::IoError("cannot open " + s.output + " for writing");
  out << "iter,beta,accept";
  for (std::size_t j = 1; j <= p; ++j) out << ",sigma_diag_" << j;
  out << '\n';
  for (std::size_t i = 0; i < trace.retained(); ++i) {
    // iter is the absolute 1-based iteration index within the full run.
    out << (trace.burn_in + i + 1) << ','
        << hiwish::csv::format_double(trace.beta_draws[i]) << ','
        << static_cast<int>(trace.beta_accepts[i]);
    for (std::size_t j = 0; j < p; ++j) {
      out << ',' << hiwish::csv::format_double(trace.sigma_diag_draws[i * p + j]);
    }
    out << '\n';
  }
  out.flush();
  if (!out) throw hiwish::IoError("write failure on " + s.output);

  const json diagnostics = beta_diagnostics(spec, trace);
  write_meta("chain", s, timer.seconds(), &diagnostics);
  std::cerr << "chain: " << trace.retained() << " retained iterations -> "
            << s.output << " (" << timer.seconds() << " s)\n";
  return 0;
}

// Raw flag storage; only values the user actually passed are applied.
struct Flags {
  std::string config_path;
  std::uint64_t seed = 0;
  std::size_t iterations = 0;
  std::size_t burn_in = 0;
  std::size_t replications = 0;
  int delta = 0;
  double dk_bound = 0.0;
  std::vector<std::string> matrices;
  std::vector<std::size_t> n_values;
  std::string model;
  std::string loss;
  std::string output;
  unsigned threads = 0;
  std::string data_path;
  std::string dump_losses;
};

bool passed(const CLI::App *cmd, const std::string &name) {
  const CLI::Option *opt = cmd->get_option_no_throw(name);
  return opt != nullptr && opt->count() > 0;
}

Settings resolve_settings(const CLI::App *cmd, const Flags &f,
                          const char *default_output) {
  Settings s;
  if (passed(cmd, "--config")) s = load_config_file(f.config_path, s);
  if (passed(cmd, "--seed")) s.seed = f.seed;
  if (passed(cmd, "--iterations")) s.iterations = f.iterations;
  if (passed(cmd, "--burn-in")) s.burn_in = f.burn_in;
  if (passed(cmd, "--replications")) s.replications = f.replications;
  if (passed(cmd, "--delta")) s.delta = f.delta;
  if (passed(cmd, "--dk-bound")) s.dk_bound = f.dk_bound;
  if (passed(cmd, "--matrices")) s.matrices = f.matrices;
  if (passed(cmd, "--n")) s.n_values = f.n_values;
  if (passed(cmd, "--model")) s.model = f.model;
  if (passed(cmd, "--loss")) s.loss = f.loss;
  if (passed(cmd, "--output")) s.output = f.output;
  resolve_defaults(s, default_output);
  return s;
}

void add_common_options(CLI::App *cmd, Flags &f) {
  cmd->add_option("--config", f.config_path, "JSON configuration file");
  cmd->add_option("--seed", f.seed, "master RNG seed");
  cmd->add_option("--iterations", f.iterations, "total chain iterations");
  cmd->add_option("--burn-in", f.burn_in, "iterations discarded as burn-in");
  cmd->add_option("--delta", f.delta,
                  "hyperprior exponent on the degrees of freedom (>= 2)");
  cmd->add_option("--dk-bound", f.dk_bound,
                  "upper support bound used by the dk model");
  cmd->add_option("--output", f.output, "output CSV path");
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{
      "Covariance estimation under hierarchical inverse-Wishart shrinkage "
      "priors.\nData files are headerless CSV, one observation per row, "
      "assumed zero-mean."};
  app.require_subcommand(1);
  Flags f;

  CLI::App *study =
      app.add_subcommand("study", "run the replicated frequentist-risk study");
  add_common_options(study, f);
  study->add_option("--replications", f.replications,
                    "replications per (matrix, n) cell");
  study->add_option("--matrices", f.matrices,
                    "true matrices to include (A B C B1 B2 C1 C2)");
  study->add_option("--n", f.n_values, "sample sizes");
  study->add_option("--threads", f.threads,
                    "worker threads (0 = number of processors)");
  study->add_option("--dump-losses", f.dump_losses,
                    "also write per-replication losses to this CSV");

  CLI::App *estimate = app.add_subcommand(
      "estimate", "estimate a covariance matrix from a data file");
  add_common_options(estimate, f);
  estimate->add_option("--data", f.data_path, "input data CSV")->required();
  estimate->add_option("--model", f.model, "model1, model2, or dk");
  estimate->add_option("--loss", f.loss,
                       "estimator to report: l1 (Stein) or l2 (Frobenius)");

  CLI::App *chain = app.add_subcommand(
      "chain", "dump the posterior chain trace for a data file");
  add_common_options(chain, f);
  chain->add_option("--data", f.data_path, "input data CSV")->required();
  chain->add_option("--model", f.model, "model1, model2, or dk");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  try {
    if (study->parsed()) {
      return cmd_study(resolve_settings(study, f, "risks.csv"), f.threads,
                       f.dump_losses);
    }
    if (estimate->parsed()) {
      return cmd_estimate(resolve_settings(estimate, f, "estimate.csv"),
                          f.data_path);
    }
    return cmd_chain(resolve_settings(chain, f, "trace.csv"), f.data_path);
  } catch (const hiwish::ParseError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const hiwish::InvalidParameter &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const hiwish::IoError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const hiwish::Error &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 4;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
