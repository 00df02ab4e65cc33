#include "smartsize/scenario.hpp"

#include <cmath>
#include <string>

#include "smartsize/errors.hpp"

namespace smartsize {

namespace {

constexpr std::size_t idx(Cell c) { return static_cast<std::size_t>(c); }

Cell responder_cell(Arm a1) { return a1 == Arm::A ? Cell::AResponder : Cell::BResponder; }

Cell rescue_cell(Arm rescue) {
  switch (rescue) {
    case Arm::C: return Cell::AC;
    case Arm::D: return Cell::AD;
    case Arm::E: return Cell::BE;
    case Arm::F: return Cell::BF;
    default: throw DomainError("not a rescue arm");
  }
}

struct CellMoments {
  double mean;
  double var;
};

CellMoments cell_moments(const Scenario& s, Cell c) {
  if (const auto* cs = std::get_if<ContinuousScenario>(&s.model)) {
    const double z = cs->zeta[idx(c)];
    return {cs->conditional_mean(c), z * z};
  }
  const auto& bs = std::get<BinaryScenario>(s.model);
  double q = 1.0;
  switch (c) {
    case Cell::AC: q = bs.p_ac; break;
    case Cell::AD: q = bs.p_ad; break;
    case Cell::BE: q = bs.p_be; break;
    case Cell::BF: q = bs.p_bf; break;
    default: break;
  }
  return {q, q * (1.0 - q)};
}

}  // namespace

double ContinuousScenario::conditional_mean(Cell cell) const {
  const bool arm_a = cell == Cell::AResponder || cell == Cell::AC || cell == Cell::AD;
  const bool nonresp = cell != Cell::AResponder && cell != Cell::BResponder;
  const bool first_rescue = cell == Cell::AC || cell == Cell::BE;
  double m = phi[0] + (arm_a ? phi[1] + a_offset : 0.0);
  if (nonresp) {
    m += phi[2];
    if (arm_a) m += phi[3];
    if (first_rescue) m += phi[4];
    if (cell == Cell::AC) m += phi[5];
  }
  return m;
}

double Scenario::p_a() const {
  return std::visit([](const auto& m) { return m.p_a; }, model);
}

double Scenario::p_b() const {
  return std::visit([](const auto& m) { return m.p_b; }, model);
}

double Scenario::sigma_m() const {
  return std::visit([](const auto& m) { return m.sigma_m; }, model);
}

Scenario builtin_scenario(int id) {
  switch (id) {
    case 1:
      return {1, ContinuousScenario{0.5, 0.5, {10, 5, -15, -3, 10, -3}, {2, 2, 2, 2, 3, 3}, 0.05}};
    case 2:
      return {2, ContinuousScenario{0.7, 0.7, {22, 5, -15, -7, 8, -3}, {6, 6, 6, 2, 3, 3}, 0.04}};
    case 3:
      return {3, BinaryScenario{0.3, 0.4, 0.4, 0.3, 0.2, 0.2, 0.04}};
    case 4:
      return {4, BinaryScenario{0.5, 0.65, 0.65, 0.5, 0.5, 0.5, 0.02}};
    default:
      throw DomainError("unknown scenario id " + std::to_string(id) + " (expected 1-4)");
  }
}

Strategy first_compared_strategy() { return Strategy(Arm::A, Arm::C); }
Strategy second_compared_strategy() { return Strategy(Arm::B, Arm::E); }

StrategyOracle strategy_oracle(const Scenario& s, const Strategy& strategy, const SmartDesign& d) {
  const Arm a1 = strategy.initial();
  const double p = a1 == Arm::A ? s.p_a() : s.p_b();
  const auto resp = cell_moments(s, responder_cell(a1));
  const auto nonresp = cell_moments(s, rescue_cell(strategy.rescue()));

  const double mu = p * resp.mean + (1.0 - p) * nonresp.mean;
  const double resp_mse = resp.var + (resp.mean - mu) * (resp.mean - mu);
  const double nonresp_mse = nonresp.var + (nonresp.mean - mu) * (nonresp.mean - mu);
  const double sigma2 = p * resp_mse + (1.0 - p) * nonresp_mse;

  // Squared weights times path probabilities: p / pi1 and (1-p) / (pi1 pi2).
  const double pi1 = a1 == Arm::A ? d.stage1_prob : 1.0 - d.stage1_prob;
  const bool first_rescue = strategy.rescue() == Arm::C || strategy.rescue() == Arm::E;
  const double pi2 = first_rescue ? d.stage2_prob : 1.0 - d.stage2_prob;
  const double tau2 = p * resp_mse / pi1 + (1.0 - p) * nonresp_mse / (pi1 * pi2);

  StrategyOracle o{};
  o.mu = mu;
  o.sigma2 = sigma2;
  o.tau2 = tau2;
  o.resp_mse = resp_mse;
  o.nonresp_mse = nonresp_mse;
  o.variance_bound = 2.0 * sigma2 * (2.0 - p);
  o.inflation = tau2 / o.variance_bound;
  o.conditional_bound = resp_mse <= sigma2 * (1.0 + 1e-12) && nonresp_mse <= sigma2 * (1.0 + 1e-12);
  o.assumption1_holds = o.inflation <= kAssumptionTolerance;
  return o;
}

ScenarioOracles scenario_oracles(const Scenario& s, const SmartDesign& d) {
  ScenarioOracles out{};
  out.first = strategy_oracle(s, first_compared_strategy(), d);
  out.second = strategy_oracle(s, second_compared_strategy(), d);
  out.theta = out.first.mu - out.second.mu;
  out.delta = out.theta / std::sqrt(0.5 * (out.first.sigma2 + out.second.sigma2));
  out.tau2 = out.first.tau2 + out.second.tau2;
  return out;
}

TrialDataset gen_trial(const Scenario& s, long n, double response_sd, RandomStream& rng) {
  if (n < 1) throw DomainError("gen_trial: n must be positive");
  if (!(response_sd >= 0.0)) throw DomainError("gen_trial: response_sd must be nonnegative");

  const double p_a = sample_truncated_normal(s.p_a(), response_sd, 0.0, 1.0, rng);
  const double p_b = sample_truncated_normal(s.p_b(), response_sd, 0.0, 1.0, rng);

  TrialDataset data;
  data.trajectories.reserve(static_cast<std::size_t>(n));

  if (const auto* cs = std::get_if<ContinuousScenario>(&s.model)) {
    data.outcome_kind = OutcomeKind::Continuous;
    for (long i = 0; i < n; ++i) {
      const double u_arm = rng.uniform();
      const double u_resp = rng.uniform();
      const double u_rescue = rng.uniform();
      const double u_y = rng.uniform();
      Trajectory t{};
      t.a1 = u_arm < 0.5 ? Arm::A : Arm::B;
      t.responder = u_resp < (t.a1 == Arm::A ? p_a : p_b);
      if (t.responder) {
        t.a2 = t.a1;
      } else if (t.a1 == Arm::A) {
        t.a2 = u_rescue < 0.5 ? Arm::C : Arm::D;
      } else {
        t.a2 = u_rescue < 0.5 ? Arm::E : Arm::F;
      }
      const Cell c = t.cell();
      t.y = cs->conditional_mean(c) + cs->zeta[idx(c)] * std_normal_quantile(u_y);
      data.trajectories.push_back(t);
    }
    return data;
  }

  const auto& bs = std::get<BinaryScenario>(s.model);
  const double p_ac = sample_truncated_normal(bs.p_ac, response_sd, 0.0, 1.0, rng);
  const double p_ad = sample_truncated_normal(bs.p_ad, response_sd, 0.0, 1.0, rng);
  const double p_be = sample_truncated_normal(bs.p_be, response_sd, 0.0, 1.0, rng);
  const double p_bf = sample_truncated_normal(bs.p_bf, response_sd, 0.0, 1.0, rng);
  data.outcome_kind = OutcomeKind::Binary;
  for (long i = 0; i < n; ++i) {
    const double u_arm = rng.uniform();
    const double u_resp = rng.uniform();
    const double u_rescue = rng.uniform();
    const double u_y = rng.uniform();
    Trajectory t{};
    t.a1 = u_arm < 0.5 ? Arm::A : Arm::B;
    t.responder = u_resp < (t.a1 == Arm::A ? p_a : p_b);
    double success = 1.0;
    if (t.responder) {
      t.a2 = t.a1;
    } else if (t.a1 == Arm::A) {
      t.a2 = u_rescue < 0.5 ? Arm::C : Arm::D;
      success = t.a2 == Arm::C ? p_ac : p_ad;
    } else {
      t.a2 = u_rescue < 0.5 ? Arm::E : Arm::F;
      success = t.a2 == Arm::E ? p_be : p_bf;
    }
    t.y = u_y < success ? 1.0 : 0.0;
    data.trajectories.push_back(t);
  }
  return data;
}

Scenario null_transform(const Scenario& s) {
  const auto oracles = scenario_oracles(s);
  Scenario out = s;
  if (auto* cs = std::get_if<ContinuousScenario>(&out.model)) {
    cs->a_offset -= oracles.theta;
    return out;
  }
  auto& bs = std::get<BinaryScenario>(out.model);
  // p_a + (1 - p_a) p_ac' = mu_2
  const double p_ac = (oracles.second.mu - bs.p_a) / (1.0 - bs.p_a);
  if (!is_open_unit(p_ac)) throw DomainError("null_transform: no rescue success rate equalizes the strategies");
  bs.p_ac = p_ac;
  bs.p_ad = p_ac;
  return out;
}

}  // namespace smartsize
