#pragma once

#include "smartsize/design.hpp"

namespace smartsize {

// Sense of the alternative hypothesis on theta = mu_1 - mu_2.
enum class Direction { Greater, Less };

struct StrategyEstimate {
  double mu_hat;
  double tau2_hat;  // estimated variance of sqrt(n) * mu_hat
  std::size_t n;
};

struct ContrastEstimate {
  double theta_hat;  // mu_hat_1 - mu_hat_2
  double tau2_hat;   // tau2_hat_1 + tau2_hat_2
  std::size_t n;
};

struct WaldResult {
  double z;
  bool significant;
};

// Weighted ratio estimator P_n[w Y] / P_n[w]. Throws EstimationError
// ("strategy unobserved") when no subject is consistent with `s`.
double strategy_mean(const TrialDataset& data, const Strategy& s, const SmartDesign& d = {});

// P_n[U^2] with U = w (Y - mu), averaged over all n subjects; inconsistent
// subjects contribute zero.
double strategy_tau2(const TrialDataset& data, const Strategy& s, const SmartDesign& d, double mu);

StrategyEstimate estimate_strategy(const TrialDataset& data, const Strategy& s, const SmartDesign& d = {});

// Contrast of two strategies with different initial treatments.
ContrastEstimate contrast_estimate(const TrialDataset& data, const Strategy& s1, const Strategy& s2,
                                   const SmartDesign& d = {});

// One-sided Wald test z = sqrt(n) theta_hat / sqrt(tau2_hat). Throws
// EstimationError for a zero variance estimate.
WaldResult wald_test(const ContrastEstimate& ce, double alpha, Direction direction = Direction::Greater);

}  // namespace smartsize
