#include "smartsize/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

#include "smartsize/errors.hpp"
#include "smartsize/frequentist.hpp"

namespace smartsize {

namespace {

// Stream reserved for pilot sizing; replication r uses stream r.
constexpr std::uint64_t kPilotSizingStream = 0xFFFF'FFFF'FFFF'0001ULL;

}  // namespace

MisspecSetting MisspecSetting::builtin(int id, double sigma_m) {
  switch (id) {
    case 1: return {1, 0.0, 0.0};
    case 2: return {2, sigma_m, 0.0};
    case 3: return {3, 0.0, 0.25};
    case 4: return {4, sigma_m, 0.25};
    default: throw DomainError("unknown setting id " + std::to_string(id) + " (expected 1-4)");
  }
}

const char* to_string(Theta0Policy policy) { return policy == Theta0Policy::Zero ? "zero" : "pilot"; }

Theta0Policy theta0_policy_from_string(const std::string& s) {
  if (s == "zero") return Theta0Policy::Zero;
  if (s == "pilot") return Theta0Policy::Pilot;
  throw DomainError("theta0 policy must be 'zero' or 'pilot', got '" + s + "'");
}

void parallel_for(long count, unsigned threads, const std::function<void(long)>& body) {
  if (count <= 0) return;
  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::min<long>(count, 1024))));
  if (workers == 1) {
    for (long i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<long> next{0};
  std::exception_ptr failure;
  long failed_index = count;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (long i = next++; i < count; i = next++) {
        try {
          body(i);
        } catch (...) {
          // Keep the lowest failing index so the reported error does not
          // depend on scheduling.
          std::lock_guard lock(failure_mutex);
          if (i < failed_index) {
            failed_index = i;
            failure = std::current_exception();
          }
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

double quantile_type7(std::vector<double> values, double prob) {
  if (values.empty()) throw DomainError("quantile of an empty sample");
  if (!(prob >= 0.0 && prob <= 1.0)) throw DomainError("quantile probability must lie in [0,1]");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * prob;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

long study_pilot_n(const Scenario& scenario, const StudyConfig& config) {
  if (config.pilot_n_override > 0) return config.pilot_n_override;
  RandomStream rng(config.seed, kPilotSizingStream);
  return pilot_n(scenario.p_a(), scenario.p_b(), config.pilot_min_cell, config.pilot_confidence,
                 config.pilot_sizing_reps, rng, config.pilot_allocation)
      .n;
}

ReplicationOutcome run_replication(const Scenario& scenario, const StudyConfig& config, long pilot_n,
                                   long replication, bool null_trial) {
  const auto setting = MisspecSetting::builtin(config.setting_id, scenario.sigma_m());
  const Scenario null_scenario = null_trial ? null_transform(scenario) : scenario;
  const Scenario& pilot_scenario = null_trial && config.pilot_under_null ? null_scenario : scenario;
  const Scenario& trial_scenario = null_trial ? null_scenario : scenario;
  const auto s1 = first_compared_strategy();
  const auto s2 = second_compared_strategy();

  RandomStream rng(config.seed, static_cast<std::uint64_t>(replication));

  const auto pilot = gen_trial(pilot_scenario, pilot_n, 0.0, rng);
  const auto pilot_est = contrast_estimate(pilot, s1, s2);
  const auto post = nix_posterior(config.hyper, pilot_est.theta_hat, pilot_est.tau2_hat, pilot_n);

  const double mdd = config.theta_d_nominal.value_or(scenario_oracles(scenario).theta);
  const DesignPrior design{mdd * (1.0 + setting.mdd_bias), config.sigma_d};
  const AnalysisPrior analysis{config.theta0_policy == Theta0Policy::Zero ? 0.0 : pilot_est.theta_hat, config.sigma0};

  const PowerFunction power(analysis, design, config.eps, post, Direction::Greater, config.rel_tol);
  const long n = bayes_sample_size(config.target_power, power, config.n_max).n;

  const auto trial = gen_trial(trial_scenario, n, setting.response_sd, rng);
  const auto est = contrast_estimate(trial, s1, s2);
  if (!(est.tau2_hat > 0.0)) throw EstimationError("degenerate variance estimate in full-scale trial");
  const auto test = bayes_significant(est.theta_hat, n, est.tau2_hat, analysis, config.eps);

  return {pilot_n, pilot_est.theta_hat, pilot_est.tau2_hat, n, test.significant};
}

namespace {

SimulationReport run_study(const StudyConfig& config, bool null_trial) {
  if (config.reps < 1) throw DomainError("reps must be at least 1");
  const Scenario scenario = builtin_scenario(config.scenario_id);
  MisspecSetting::builtin(config.setting_id, scenario.sigma_m());
  const long pilot = study_pilot_n(scenario, config);

  std::vector<ReplicationOutcome> outcomes(static_cast<std::size_t>(config.reps));
  parallel_for(config.reps, config.threads, [&](long r) {
    try {
      outcomes[static_cast<std::size_t>(r)] = run_replication(scenario, config, pilot, r, null_trial);
    } catch (const ReplicationError&) {
      throw;
    } catch (const std::exception& e) {
      throw ReplicationError(r, config.seed, e.what());
    }
  });

  std::vector<double> sizes;
  sizes.reserve(outcomes.size());
  long hits = 0;
  for (const auto& o : outcomes) {
    sizes.push_back(static_cast<double>(o.n));
    hits += o.significant ? 1 : 0;
  }

  SimulationReport report;
  report.scenario = config.scenario_id;
  report.setting = config.setting_id;
  report.theta0_policy = to_string(config.theta0_policy);
  report.sigma0 = config.sigma0;
  report.sigma_d = config.sigma_d;
  const double rate = static_cast<double>(hits) / static_cast<double>(config.reps);
  if (null_trial) {
    report.type1 = rate;
  } else {
    report.power = rate;
  }
  report.mean_n = std::accumulate(sizes.begin(), sizes.end(), 0.0) / static_cast<double>(sizes.size());
  report.q1_n = quantile_type7(sizes, 0.25);
  report.q3_n = quantile_type7(sizes, 0.75);
  report.reps = config.reps;
  report.seed = config.seed;
  return report;
}

}  // namespace

SimulationReport run_power_study(const StudyConfig& config) {
  StudyConfig c = config;
  c.theta_d_nominal.reset();
  return run_study(c, false);
}

SimulationReport run_type1_study(const StudyConfig& config) { return run_study(config, true); }

std::vector<FrequentistCell> run_frequentist_study(const FrequentistStudyConfig& config) {
  if (config.reps < 1) throw DomainError("reps must be at least 1");
  if (config.delta_bias_grid.empty() || config.response_sd_grid.empty()) {
    throw DomainError("frequentist study grids must be nonempty");
  }
  const Scenario scenario = builtin_scenario(config.scenario_id);
  const auto oracles = scenario_oracles(scenario);
  const auto s1 = first_compared_strategy();
  const auto s2 = second_compared_strategy();

  std::vector<FrequentistCell> cells;
  for (double bias : config.delta_bias_grid) {
    if (!(bias >= 0.0)) throw DomainError("delta bias must be nonnegative");
    const FreqSizingInput in{oracles.delta * (1.0 + bias), scenario.p_a(), config.alpha, config.beta};
    const long n = frequentist_n(in);
    for (double sd : config.response_sd_grid) {
      if (!(sd >= 0.0)) throw DomainError("response sd must be nonnegative");
      std::vector<char> rejected(static_cast<std::size_t>(config.reps), 0);
      parallel_for(config.reps, config.threads, [&](long r) {
        try {
          RandomStream rng(config.seed, static_cast<std::uint64_t>(r));
          const auto trial = gen_trial(scenario, n, sd, rng);
          const auto test = wald_test(contrast_estimate(trial, s1, s2), config.alpha);
          rejected[static_cast<std::size_t>(r)] = test.significant ? 1 : 0;
        } catch (const std::exception& e) {
          throw ReplicationError(r, config.seed, e.what());
        }
      });
      const long hits = std::accumulate(rejected.begin(), rejected.end(), 0L);
      cells.push_back({bias, sd, n, static_cast<double>(hits) / static_cast<double>(config.reps)});
    }
  }
  return cells;
}

}  // namespace smartsize
