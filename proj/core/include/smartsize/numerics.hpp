#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <random>

namespace smartsize {

// A real number in [0, 1]. Construction validates the range.
class Probability {
 public:
  explicit Probability(double value);

  constexpr double value() const noexcept { return value_; }
  constexpr operator double() const noexcept { return value_; }

 private:
  double value_;
};

// Returns true when 0 < p < 1.
constexpr bool is_open_unit(double p) noexcept { return p > 0.0 && p < 1.0; }

// Standard normal distribution function. Throws DomainError on non-finite
// input.
double std_normal_cdf(double x);

// Upper tail 1 - Phi(x), accurate for large positive x.
double std_normal_sf(double x);

// Inverse of the standard normal distribution function, z_p = Phi^{-1}(p).
// Valid for 0 < p < 1; relative accuracy about 1e-16 (Wichura, AS 241).
double std_normal_quantile(double p);

// Lower-tail chi-squared quantile: the x with P(X <= x) = p, X ~ chi2(nu).
double chi_sq_quantile(double p, double nu);

// Upper-tail chi-squared quantile: the x with P(X > x) = q. Accurate when q
// is tiny, where 1 - q would lose digits.
double chi_sq_upper_quantile(double q, double nu);

// Pseudo-random stream with portable output. mt19937_64 and seed_seq are
// fully specified by the standard and every variate is produced by
// inversion, so a stream's output does not depend on the standard library
// implementation.
class RandomStream {
 public:
  // Stream number `stream` of the family rooted at `seed`. Distinct
  // (seed, stream) pairs give statistically independent streams.
  explicit RandomStream(std::uint64_t seed, std::uint64_t stream = 0);

  // Uniform on the open interval (0, 1).
  double uniform();

  // Standard normal draw, by inversion of one uniform.
  double normal();

  // Bernoulli(p) coded as bool.
  bool bernoulli(double p) { return uniform() < p; }

 private:
  std::mt19937_64 engine_;
};

// Draw from N(mean, sd^2) truncated to (lo, hi) by inverse CDF: exactly one
// uniform is consumed per call, including when sd == 0.
double sample_truncated_normal(double mean, double sd, double lo, double hi, RandomStream& rng);

// Scaled inverse chi-squared distribution: tau2 = nu * s2 / X, X ~ chi2(nu).
struct ScaledInvChiSq {
  double nu;
  double s2;

  ScaledInvChiSq(double nu, double s2);

  // Quantile at u, given both u and 1 - u so that neither tail loses
  // precision. Pass complement = 1 - u computed without cancellation.
  double quantile(double u, double complement) const;
  double quantile(double u) const { return quantile(u, 1.0 - u); }

  // Mean (finite only when nu > 2).
  double mean() const;
};

}  // namespace smartsize
