#include "smartsize/estimators.hpp"

#include <cmath>

#include "smartsize/errors.hpp"
#include "smartsize/numerics.hpp"

namespace smartsize {

double strategy_mean(const TrialDataset& data, const Strategy& s, const SmartDesign& d) {
  double num = 0.0;
  double den = 0.0;
  for (const auto& t : data.trajectories) {
    const double w = strategy_weight(t, s, d);
    num += w * t.y;
    den += w;
  }
  if (!(den > 0.0)) throw EstimationError("strategy unobserved: " + s.code());
  // The common 1/n factors of numerator and denominator cancel.
  return num / den;
}

double strategy_tau2(const TrialDataset& data, const Strategy& s, const SmartDesign& d, double mu) {
  if (data.empty()) throw EstimationError("strategy unobserved: " + s.code());
  double sum = 0.0;
  bool observed = false;
  for (const auto& t : data.trajectories) {
    const double w = strategy_weight(t, s, d);
    if (w == 0.0) continue;
    observed = true;
    const double u = w * (t.y - mu);
    sum += u * u;
  }
  if (!observed) throw EstimationError("strategy unobserved: " + s.code());
  return sum / static_cast<double>(data.size());
}

StrategyEstimate estimate_strategy(const TrialDataset& data, const Strategy& s, const SmartDesign& d) {
  const double mu = strategy_mean(data, s, d);
  return {mu, strategy_tau2(data, s, d, mu), data.size()};
}

ContrastEstimate contrast_estimate(const TrialDataset& data, const Strategy& s1, const Strategy& s2,
                                   const SmartDesign& d) {
  if (s1.initial() == s2.initial()) {
    throw DomainError("contrast requires strategies with different initial treatments");
  }
  const auto e1 = estimate_strategy(data, s1, d);
  const auto e2 = estimate_strategy(data, s2, d);
  return {e1.mu_hat - e2.mu_hat, e1.tau2_hat + e2.tau2_hat, data.size()};
}

WaldResult wald_test(const ContrastEstimate& ce, double alpha, Direction direction) {
  if (!is_open_unit(alpha)) throw DomainError("wald_test: alpha must lie in (0,1)");
  if (!(ce.tau2_hat > 0.0)) throw EstimationError("degenerate variance estimate");
  const double z = std::sqrt(static_cast<double>(ce.n)) * ce.theta_hat / std::sqrt(ce.tau2_hat);
  const bool significant =
      direction == Direction::Greater ? z > std_normal_quantile(1.0 - alpha) : z < std_normal_quantile(alpha);
  return {z, significant};
}

}  // namespace smartsize
