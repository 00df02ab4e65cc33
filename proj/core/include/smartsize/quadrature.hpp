#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "smartsize/numerics.hpp"

namespace smartsize {

// Gauss-Legendre nodes and weights mapped to the unit interval (0, 1).
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Rule of the given order. Rules are computed once and shared.
std::shared_ptr<const GaussLegendreRule> gauss_legendre(int order);

struct QuadratureOptions {
  double rel_tol = 1e-8;
  // Differences below abs_tol also count as converged, so integrands whose
  // expectation is essentially zero terminate.
  double abs_tol = 1e-13;
  int initial_order = 16;
  int max_order = 4096;
};

// Expectations over a scaled inverse chi-squared law, evaluated on the
// probability scale: tau2 = Q(u) and u runs over (0, 1). The u axis is
// graded toward both ends by the substitution u = B(t), with B the
// regularized incomplete beta I_t(4, 4), so the quantile's endpoint
// singularities are damped by (t(1-t))^3 before Gauss-Legendre is applied
// in t. Orders are doubled until two successive estimates agree to rel_tol
// (or abs_tol).
//
// Quantile nodes are cached per order, so repeated expectations over the
// same distribution (a sample-size search) only pay for the integrand.
class ScaledInvChiSqQuadrature {
 public:
  explicit ScaledInvChiSqQuadrature(ScaledInvChiSq dist, QuadratureOptions options = {});

  const ScaledInvChiSq& distribution() const noexcept { return dist_; }

  // Throws NumericalError when max_order is reached without convergence.
  double expect(const std::function<double(double)>& f) const;

  // Estimate at a single fixed order; no convergence check.
  double expect_at_order(const std::function<double(double)>& f, int order) const;

 private:
  struct Level {
    int order;
    std::vector<double> tau2;
    std::vector<double> weights;
  };

  const Level& level(int order) const;

  ScaledInvChiSq dist_;
  QuadratureOptions options_;
  mutable std::vector<std::unique_ptr<Level>> levels_;
};

// Convenience wrapper: one-shot expectation of f(tau2) under `dist`.
double expect_over_scaled_inv_chisq(const std::function<double(double)>& f, const ScaledInvChiSq& dist,
                                    double rel_tol = 1e-8);

}  // namespace smartsize
