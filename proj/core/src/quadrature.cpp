#include "smartsize/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

#include "smartsize/errors.hpp"

namespace smartsize {

namespace {

GaussLegendreRule compute_rule(int order) {
  GaussLegendreRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (order == 1) p0 = 1.0;
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node for the weight.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= order; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = order * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    // Map [-1, 1] to [0, 1]; nodes in ascending order.
    rule.nodes[i] = 0.5 * (1.0 - x);
    rule.nodes[order - 1 - i] = 0.5 * (1.0 + x);
    rule.weights[i] = 0.5 * w;
    rule.weights[order - 1 - i] = 0.5 * w;
  }
  return rule;
}

// u = I_t(4,4) and du/dt.
double grade(double t) { return t * t * t * t * (35.0 + t * (-84.0 + t * (70.0 - 20.0 * t))); }
double grade_jacobian(double t) {
  const double s = t * (1.0 - t);
  return 140.0 * s * s * s;
}

}  // namespace

std::shared_ptr<const GaussLegendreRule> gauss_legendre(int order) {
  if (order < 1) throw DomainError("gauss_legendre: order must be positive");
  static std::mutex mutex;
  static std::map<int, std::shared_ptr<const GaussLegendreRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[order];
  if (!slot) slot = std::make_shared<const GaussLegendreRule>(compute_rule(order));
  return slot;
}

ScaledInvChiSqQuadrature::ScaledInvChiSqQuadrature(ScaledInvChiSq dist, QuadratureOptions options)
    : dist_(dist), options_(options) {
  if (!(options_.rel_tol > 0.0)) throw DomainError("quadrature: rel_tol must be positive");
  if (!(options_.abs_tol >= 0.0)) throw DomainError("quadrature: abs_tol must be nonnegative");
  if (options_.initial_order < 1 || options_.max_order < options_.initial_order) {
    throw DomainError("quadrature: invalid order bounds");
  }
}

const ScaledInvChiSqQuadrature::Level& ScaledInvChiSqQuadrature::level(int order) const {
  for (const auto& lv : levels_) {
    if (lv->order == order) return *lv;
  }
  const auto rule = gauss_legendre(order);
  auto lv = std::make_unique<Level>();
  lv->order = order;
  lv->tau2.reserve(order);
  lv->weights.reserve(order);
  for (int i = 0; i < order; ++i) {
    const double t = rule->nodes[i];
    // Only the smaller tail is accurate as a polynomial; the other side is
    // its complement.
    const double small = grade(t < 0.5 ? t : 1.0 - t);
    const double u = t < 0.5 ? small : 1.0 - small;
    const double uc = t < 0.5 ? 1.0 - small : small;
    const double w = rule->weights[i] * grade_jacobian(t);
    // Extreme nodes can underflow to u == 0 at very high orders; their
    // weight is negligible there.
    if (!is_open_unit(u) || !is_open_unit(uc)) continue;
    lv->tau2.push_back(dist_.quantile(u, uc));
    lv->weights.push_back(w);
  }
  levels_.push_back(std::move(lv));
  return *levels_.back();
}

double ScaledInvChiSqQuadrature::expect_at_order(const std::function<double(double)>& f, int order) const {
  const Level& lv = level(order);
  double sum = 0.0;
  for (std::size_t i = 0; i < lv.tau2.size(); ++i) sum += lv.weights[i] * f(lv.tau2[i]);
  return sum;
}

double ScaledInvChiSqQuadrature::expect(const std::function<double(double)>& f) const {
  int order = options_.initial_order;
  double previous = expect_at_order(f, order);
  while (order < options_.max_order) {
    order = std::min(2 * order, options_.max_order);
    const double current = expect_at_order(f, order);
    const double diff = std::abs(current - previous);
    if (diff <= options_.rel_tol * std::abs(current) || diff <= options_.abs_tol) return current;
    previous = current;
  }
  std::ostringstream msg;
  msg << "quadrature did not converge: nu=" << dist_.nu << " s2=" << dist_.s2 << " order=" << order
      << " last estimate=" << previous << " rel_tol=" << options_.rel_tol << " abs_tol=" << options_.abs_tol;
  throw NumericalError(msg.str());
}

double expect_over_scaled_inv_chisq(const std::function<double(double)>& f, const ScaledInvChiSq& dist,
                                    double rel_tol) {
  QuadratureOptions options;
  options.rel_tol = rel_tol;
  return ScaledInvChiSqQuadrature(dist, options).expect(f);
}

}  // namespace smartsize
