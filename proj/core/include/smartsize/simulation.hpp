#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "smartsize/bayesian.hpp"
#include "smartsize/frequentist.hpp"
#include "smartsize/scenario.hpp"

namespace smartsize {

// Sources of misspecification. Setting 1: none; 2: response rates vary
// with sd sigma_m; 3: minimal detectable difference overstated by 25%;
// 4: both.
struct MisspecSetting {
  int id;
  double response_sd;
  double mdd_bias;

  static MisspecSetting builtin(int id, double sigma_m);
};

enum class Theta0Policy { Zero, Pilot };

const char* to_string(Theta0Policy policy);
Theta0Policy theta0_policy_from_string(const std::string& s);

// NIX hyperparameters for simulation studies: near-zero pseudo-counts, so
// the pilot alone determines the posterior of tau2. The NixHyper defaults
// encode a prior guess tau2 = 0.1 worth five observations, which only makes
// sense on the scale of an outcome like the one it was chosen for.
inline constexpr NixHyper kSimulationNixHyper{0.0, 0.01, 0.1, 0.01};

struct StudyConfig {
  int scenario_id = 1;
  int setting_id = 1;
  Theta0Policy theta0_policy = Theta0Policy::Zero;
  double sigma0 = 100.0;
  double sigma_d = 0.0;
  double eps = 0.05;
  double target_power = 0.9;
  NixHyper hyper = kSimulationNixHyper;
  long reps = 1000;
  std::uint64_t seed = 1;
  unsigned threads = 1;

  // Pilot trial: at least pilot_min_cell subjects per sequence with
  // probability pilot_confidence (see pilot_n; pilot_sizing_reps only matters
  // for Multinomial). pilot_n_override > 0 fixes the pilot size instead.
  long pilot_min_cell = 6;
  double pilot_confidence = 0.9;
  PilotAllocation pilot_allocation = PilotAllocation::Balanced;
  long pilot_sizing_reps = 200'000;
  long pilot_n_override = 0;

  long n_max = 1'000'000;
  double rel_tol = 1e-8;

  // Type I error studies only: the sizing effect and whether the pilot, as
  // well as the full-scale trial, is drawn under the null.
  std::optional<double> theta_d_nominal;
  bool pilot_under_null = true;
};

struct SimulationReport {
  int scenario = 0;
  int setting = 0;
  std::string theta0_policy;
  double sigma0 = 0.0;
  double sigma_d = 0.0;
  std::optional<double> power;
  double mean_n = 0.0;
  double q1_n = 0.0;
  double q3_n = 0.0;
  std::optional<double> type1;
  long reps = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const SimulationReport&, const SimulationReport&) = default;
};

// Per-replication outcome, exposed for diagnostics and tests.
struct ReplicationOutcome {
  long pilot_n;
  double theta_hat_pilot;
  double tau2_hat_pilot;
  long n;
  bool significant;
};

// Pilot size for a scenario under `config`'s pilot-sizing rule.
long study_pilot_n(const Scenario& scenario, const StudyConfig& config);

// One replication of the pilot -> posterior -> sizing -> trial -> test
// pipeline. `null_trial` draws the full-scale trial from null_transform().
ReplicationOutcome run_replication(const Scenario& scenario, const StudyConfig& config, long pilot_n,
                                   long replication, bool null_trial);

SimulationReport run_power_study(const StudyConfig& config);

// theta_d_nominal defaults to the oracle contrast of the scenario.
SimulationReport run_type1_study(const StudyConfig& config);

struct FrequentistCell {
  double delta_bias;
  double response_sd;
  long n;
  double power;
};

struct FrequentistStudyConfig {
  int scenario_id = 1;
  std::vector<double> delta_bias_grid{0.0};
  std::vector<double> response_sd_grid{0.0};
  double alpha = 0.05;
  double beta = 0.1;
  long reps = 1000;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

std::vector<FrequentistCell> run_frequentist_study(const FrequentistStudyConfig& config);

// Runs body(i) for i in [0, count) on up to `threads` threads. Each index
// is processed exactly once; results must be written to per-index slots.
void parallel_for(long count, unsigned threads, const std::function<void(long)>& body);

// Sample quantile with linear interpolation between order statistics
// (Hyndman-Fan type 7).
double quantile_type7(std::vector<double> values, double prob);

}  // namespace smartsize
