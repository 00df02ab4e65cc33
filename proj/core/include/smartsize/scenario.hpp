#pragma once

#include <array>
#include <variant>

#include "smartsize/design.hpp"
#include "smartsize/numerics.hpp"

namespace smartsize {

// Continuous outcome: Y | (A1, R, A2) ~ N(m, zeta_cell^2) with
//   m = phi1 + phi2 [A1=a] + phi3 (1-R) + phi4 [A1=a](1-R)
//       + phi5 [A2 in {c,e}](1-R) + phi6 [A1=a, A2=c](1-R) + a_offset [A1=a].
// a_offset is zero for the built-in scenarios; null_transform() uses it.
struct ContinuousScenario {
  double p_a;
  double p_b;
  std::array<double, 6> phi;
  std::array<double, 6> zeta;  // indexed by Cell
  double sigma_m;
  double a_offset = 0.0;

  double conditional_mean(Cell cell) const;
};

// Binary outcome: stage-1 responders are successes; a non-responder
// rescued with arm x succeeds with probability p_{a1,x}.
struct BinaryScenario {
  double p_a;
  double p_ac;
  double p_ad;
  double p_b;
  double p_be;
  double p_bf;
  double sigma_m;
};

using ScenarioModel = std::variant<ContinuousScenario, BinaryScenario>;

struct Scenario {
  int id;  // 1-4 for the built-ins, 0 for user-defined
  ScenarioModel model;

  bool continuous() const { return std::holds_alternative<ContinuousScenario>(model); }
  double p_a() const;
  double p_b() const;
  double sigma_m() const;
};

// Scenarios 1-4. Throws DomainError for any other id.
Scenario builtin_scenario(int id);

// The two strategies compared throughout: (A, C) against (B, E).
Strategy first_compared_strategy();
Strategy second_compared_strategy();

struct StrategyOracle {
  double mu;
  double sigma2;           // marginal variance of Y under the strategy
  double tau2;             // variance of sqrt(n) * mu_hat
  double resp_mse;         // E[(Y - mu)^2 | R = 1]
  double nonresp_mse;      // E[(Y - mu)^2 | R = 0]
  double variance_bound;   // 2 sigma2 (2 - p), the bound used by the closed-form sizing
  double inflation;        // tau2 / variance_bound
  bool conditional_bound;  // both conditional mean squares <= sigma2
  bool assumption1_holds;  // inflation <= kAssumptionTolerance
};

// Inflation of tau2 over its closed-form bound above which the bound is
// treated as violated.
inline constexpr double kAssumptionTolerance = 1.10;

struct ScenarioOracles {
  StrategyOracle first;
  StrategyOracle second;
  double theta;  // mu_1 - mu_2
  double delta;  // theta / sqrt((sigma2_1 + sigma2_2) / 2)
  double tau2;   // tau2_1 + tau2_2
};

// Exact moments by enumeration over the six cells, at the nominal response
// rates.
StrategyOracle strategy_oracle(const Scenario& s, const Strategy& strategy, const SmartDesign& d = {});
ScenarioOracles scenario_oracles(const Scenario& s, const SmartDesign& d = {});

// Simulates one trial. Response rates (and, for binary outcomes, rescue
// success probabilities) are drawn once per trial from normals truncated to
// (0, 1) with sd = response_sd. Randomization is 1/2 at both stages.
TrialDataset gen_trial(const Scenario& s, long n, double response_sd, RandomStream& rng);

// Same scenario with the compared contrast removed: the A branch is shifted
// by -theta (continuous) or p_ac and p_ad are set to equalize the two
// strategies' success rates (binary).
Scenario null_transform(const Scenario& s);

}  // namespace smartsize
