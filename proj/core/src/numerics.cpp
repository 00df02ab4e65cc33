#include "smartsize/numerics.hpp"

#include <array>
#include <cmath>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

#include "smartsize/errors.hpp"

namespace smartsize {

Probability::Probability(double value) : value_(value) {
  if (!(value >= 0.0 && value <= 1.0)) {
    throw DomainError("probability out of [0,1]: " + std::to_string(value));
  }
}

double std_normal_cdf(double x) {
  if (!std::isfinite(x)) throw DomainError("std_normal_cdf: non-finite argument");
  return 0.5 * std::erfc(-x * M_SQRT1_2);
}

double std_normal_sf(double x) {
  if (!std::isfinite(x)) throw DomainError("std_normal_sf: non-finite argument");
  return 0.5 * std::erfc(x * M_SQRT1_2);
}

namespace {

double polyval(const std::array<double, 8>& c, double x) {
  double r = c[7];
  for (int i = 6; i >= 0; --i) r = r * x + c[i];
  return r;
}

}  // namespace

// Wichura (1988), Algorithm AS 241, PPND16.
double std_normal_quantile(double p) {
  if (!is_open_unit(p)) throw DomainError("std_normal_quantile: p must lie in (0,1)");

  static constexpr std::array<double, 8> a = {
      3.3871328727963666080e0, 1.3314166789178437745e2, 1.9715909503065514427e3,
      1.3731693765509461125e4, 4.5921953931549871457e4, 6.7265770927008700853e4,
      3.3430575583588128105e4, 2.5090809287301226727e3};
  static constexpr std::array<double, 8> b = {
      1.0,                     4.2313330701600911252e1, 6.8718700749205790830e2,
      5.3941960214247511077e3, 2.1213794301586595867e4, 3.9307895800092710610e4,
      2.8729085735721942674e4, 5.2264952788528545610e3};
  static constexpr std::array<double, 8> c = {
      1.42343711074968357734e0, 4.63033784615654529590e0, 5.76949722146069140550e0,
      3.64784832476320460504e0, 1.27045825245236838258e0, 2.41780725177450611770e-1,
      2.27238449892691845833e-2, 7.74545014278341407640e-4};
  static constexpr std::array<double, 8> d = {
      1.0,                      2.05319162663775882187e0, 1.67638483018380384940e0,
      6.89767334985100004550e-1, 1.48103976427480074590e-1, 1.51986665636164571966e-2,
      5.47593808499534494600e-4, 1.05075007164441684324e-9};
  static constexpr std::array<double, 8> e = {
      6.65790464350110377720e0, 5.46378491116411436990e0, 1.78482653991729133580e0,
      2.96560571828504891230e-1, 2.65321895265761230930e-2, 1.24266094738807843860e-3,
      2.71155556874348757815e-5, 2.01033439929228813265e-7};
  static constexpr std::array<double, 8> f = {
      1.0,                      5.99832206555887937690e-1, 1.36929880922735805310e-1,
      1.48753612908506148525e-2, 7.86869131145613259100e-4, 1.84631831751005468180e-5,
      1.42151175831644588870e-7, 2.04426310338993978564e-15};

  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q * polyval(a, r) / polyval(b, r);
  }
  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double x;
  if (r <= 5.0) {
    r -= 1.6;
    x = polyval(c, r) / polyval(d, r);
  } else {
    r -= 5.0;
    x = polyval(e, r) / polyval(f, r);
  }
  return q < 0.0 ? -x : x;
}

double chi_sq_quantile(double p, double nu) {
  if (!(nu > 0.0) || !std::isfinite(nu)) throw DomainError("chi_sq_quantile: nu must be positive");
  if (!(p >= 0.0 && p < 1.0)) throw DomainError("chi_sq_quantile: p must lie in [0,1)");
  if (p == 0.0) return 0.0;
  return 2.0 * boost::math::gamma_p_inv(0.5 * nu, p);
}

double chi_sq_upper_quantile(double q, double nu) {
  if (!(nu > 0.0) || !std::isfinite(nu)) throw DomainError("chi_sq_upper_quantile: nu must be positive");
  if (!(q > 0.0 && q <= 1.0)) throw DomainError("chi_sq_upper_quantile: q must lie in (0,1]");
  if (q == 1.0) return 0.0;
  return 2.0 * boost::math::gamma_q_inv(0.5 * nu, q);
}

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                    0x5354u};
  engine_.seed(seq);
}

double RandomStream::uniform() {
  // 53 random bits, offset by half an ulp so 0 and 1 are unreachable.
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::normal() { return std_normal_quantile(uniform()); }

double sample_truncated_normal(double mean, double sd, double lo, double hi, RandomStream& rng) {
  if (!(lo < hi)) throw DomainError("sample_truncated_normal: requires lo < hi");
  if (!(sd >= 0.0) || !std::isfinite(mean)) throw DomainError("sample_truncated_normal: invalid mean or sd");
  const double u = rng.uniform();
  if (sd == 0.0) {
    if (!(lo < mean && mean < hi)) throw DomainError("sample_truncated_normal: degenerate mean outside (lo,hi)");
    return mean;
  }

  // Work in the lower tail: reflect when the window sits above the mean so
  // that the CDF differences do not cancel.
  double a = (lo - mean) / sd;
  double b = (hi - mean) / sd;
  const bool reflect = a > 0.0;
  if (reflect) {
    const double t = a;
    a = -b;
    b = -t;
  }
  const double fa = std::isfinite(a) ? std_normal_cdf(a) : 0.0;
  const double fb = std::isfinite(b) ? std_normal_cdf(b) : 1.0;
  double p = fa + u * (fb - fa);
  double z;
  if (p <= 0.0 || p >= 1.0) {
    z = p <= 0.0 ? a : b;
  } else {
    z = std_normal_quantile(p);
  }
  if (reflect) z = -z;
  double x = mean + sd * z;
  if (x <= lo) x = std::nextafter(lo, hi);
  if (x >= hi) x = std::nextafter(hi, lo);
  return x;
}

ScaledInvChiSq::ScaledInvChiSq(double nu_, double s2_) : nu(nu_), s2(s2_) {
  if (!(nu > 0.0) || !(s2 > 0.0) || !std::isfinite(nu) || !std::isfinite(s2)) {
    throw DomainError("ScaledInvChiSq: nu and s2 must be positive and finite");
  }
}

double ScaledInvChiSq::quantile(double u, double complement) const {
  if (!is_open_unit(u) || !is_open_unit(complement)) throw DomainError("ScaledInvChiSq::quantile: u must lie in (0,1)");
  // tau2 <= t  <=>  X >= nu s2 / t, so the tau2 quantile at u maps to the
  // chi-squared quantile at 1 - u.
  const double x = u < 0.5 ? chi_sq_upper_quantile(u, nu) : chi_sq_quantile(complement, nu);
  return nu * s2 / x;
}

double ScaledInvChiSq::mean() const {
  if (!(nu > 2.0)) return std::numeric_limits<double>::infinity();
  return nu * s2 / (nu - 2.0);
}

}  // namespace smartsize
