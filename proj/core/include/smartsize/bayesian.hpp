#pragma once

#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <variant>
#include <vector>

#include "smartsize/estimators.hpp"
#include "smartsize/quadrature.hpp"

namespace smartsize {

// Normal analysis prior on theta, used to form the posterior at analysis.
struct AnalysisPrior {
  double theta0 = 0.0;
  double sigma0 = 100.0;  // large finite value stands in for a flat prior
};

// Normal design prior on theta; sigma_d == 0 is a point mass at theta_d.
struct DesignPrior {
  double theta_d = 0.0;
  double sigma_d = 0.0;
};

// Normal-inverse-chi-squared hyperparameters for (theta, tau2).
struct NixHyper {
  double theta_p = 0.0;
  double kappa_p = 1.0;
  double sigma2_p = 0.1;
  double nu_p = 5.0;
};

// Posterior of tau2 given pilot data: scaled inverse chi-squared(nu_n, sigma2_n).
struct NixPosterior {
  double nu_n;
  double sigma2_n;

  ScaledInvChiSq distribution() const { return {nu_n, sigma2_n}; }
};

struct NormalPosterior {
  double mean;
  double var;
};

struct BayesTest {
  double post_prob;  // posterior probability of the alternative region
  bool significant;
};

NormalPosterior posterior_theta(double y_n, long n, double tau2, const AnalysisPrior& prior);

// Significant when the posterior probability of theta > 0 (theta < 0 for
// Direction::Less) is at least 1 - eps.
BayesTest bayes_significant(double y_n, long n, double tau2, const AnalysisPrior& prior, double eps,
                            Direction dir = Direction::Greater);

// Smallest y_n that is significant for Direction::Greater.
double significance_threshold(long n, double tau2, const AnalysisPrior& prior, double eps);

// Probability of a significant result when Y_n is drawn from the design
// prior's marginal N(theta_d, tau2 / n + sigma_d^2), in closed form.
double bayes_power(long n, double tau2, const AnalysisPrior& a, const DesignPrior& d, double eps,
                   Direction dir = Direction::Greater);

// Supremum of bayes_power over n: Phi(theta_d / sigma_d) for sigma_d > 0.
double power_ceiling(const DesignPrior& d, double eps, Direction dir = Direction::Greater);

NixPosterior nix_posterior(const NixHyper& h, double theta_hat_p, double tau2_hat_p, long n_pilot);

// bayes_power averaged over the scaled inverse chi-squared posterior of tau2.
double marginal_power(long n, const AnalysisPrior& a, const DesignPrior& d, double eps, const NixPosterior& post,
                      double rel_tol = 1e-8, Direction dir = Direction::Greater);

struct FixedTau2 {
  double tau2;
};
using Tau2Source = std::variant<FixedTau2, NixPosterior>;

// Power as a function of n for one configuration. For a marginal source the
// quadrature nodes are built once and reused across n. Not thread-safe; use
// one instance per thread.
class PowerFunction {
 public:
  PowerFunction(AnalysisPrior a, DesignPrior d, double eps, Tau2Source source, Direction dir = Direction::Greater,
                double rel_tol = 1e-8);

  double operator()(long n) const;
  double ceiling() const { return power_ceiling(design_, eps_, dir_); }

 private:
  AnalysisPrior analysis_;
  DesignPrior design_;
  double eps_;
  Tau2Source source_;
  Direction dir_;
  std::unique_ptr<ScaledInvChiSqQuadrature> quadrature_;
};

struct SizingResult {
  long n;
  double achieved_power;
  std::vector<std::pair<long, double>> curve;  // every (n, power) evaluated during the search
};

// Smallest n <= n_max with power(n) >= target: exponential bracketing,
// bisection, then a downward scan of width 5 below the candidate. Throws
// InfeasibleError when the target is at or above the power ceiling or is
// not reached by n_max.
SizingResult bayes_sample_size(double target, const AnalysisPrior& a, const DesignPrior& d, double eps,
                               const Tau2Source& source, long n_max = 1'000'000, Direction dir = Direction::Greater);

SizingResult bayes_sample_size(double target, const PowerFunction& power, long n_max = 1'000'000);

std::vector<std::pair<long, double>> power_curve(std::span<const long> n_grid, const AnalysisPrior& a,
                                                 const DesignPrior& d, double eps, const Tau2Source& source,
                                                 Direction dir = Direction::Greater);

}  // namespace smartsize
