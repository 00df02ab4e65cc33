#include "smartsize/bayesian.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "smartsize/errors.hpp"

namespace smartsize {

namespace {

void check_common(long n, double tau2, const AnalysisPrior& a) {
  if (n < 1) throw DomainError("n must be positive");
  if (!(tau2 > 0.0) || !std::isfinite(tau2)) throw DomainError("tau2 must be positive and finite");
  if (!(a.sigma0 > 0.0)) throw DomainError("analysis prior sigma0 must be positive");
}

void check_eps(double eps) {
  if (!(eps > 0.0 && eps < 0.5)) throw DomainError("eps must lie in (0,0.5)");
}

AnalysisPrior oriented(const AnalysisPrior& a, Direction dir) {
  return dir == Direction::Greater ? a : AnalysisPrior{-a.theta0, a.sigma0};
}

DesignPrior oriented(const DesignPrior& d, Direction dir) {
  return dir == Direction::Greater ? d : DesignPrior{-d.theta_d, d.sigma_d};
}

}  // namespace

NormalPosterior posterior_theta(double y_n, long n, double tau2, const AnalysisPrior& prior) {
  check_common(n, tau2, prior);
  const double nn = static_cast<double>(n);
  const double s02 = prior.sigma0 * prior.sigma0;
  // Written in precision form so sigma0 -> infinity stays finite.
  const double prior_prec = 1.0 / s02;
  const double data_prec = nn / tau2;
  const double var = 1.0 / (prior_prec + data_prec);
  const double mean = var * (prior_prec * prior.theta0 + data_prec * y_n);
  return {mean, var};
}

BayesTest bayes_significant(double y_n, long n, double tau2, const AnalysisPrior& prior, double eps, Direction dir) {
  check_eps(eps);
  const auto post = posterior_theta(dir == Direction::Greater ? y_n : -y_n, n, tau2, oriented(prior, dir));
  const double prob = std_normal_cdf(post.mean / std::sqrt(post.var));
  return {prob, prob >= 1.0 - eps};
}

double significance_threshold(long n, double tau2, const AnalysisPrior& prior, double eps) {
  check_common(n, tau2, prior);
  check_eps(eps);
  const double nn = static_cast<double>(n);
  const double ratio = tau2 / (nn * prior.sigma0 * prior.sigma0);
  const double z_eps = std_normal_quantile(eps);
  return -z_eps * std::sqrt(tau2 / nn) * std::sqrt(1.0 + ratio) - prior.theta0 * ratio;
}

double bayes_power(long n, double tau2, const AnalysisPrior& a_in, const DesignPrior& d_in, double eps,
                   Direction dir) {
  check_common(n, tau2, a_in);
  check_eps(eps);
  if (!(d_in.sigma_d >= 0.0)) throw DomainError("design prior sigma_d must be nonnegative");
  const auto a = oriented(a_in, dir);
  const auto d = oriented(d_in, dir);
  const double nn = static_cast<double>(n);
  const double ratio = tau2 / (nn * a.sigma0 * a.sigma0);
  // theta0 tau2/(n s0^2) + theta_d + z_eps sqrt(tau2) sqrt(tau2 + n s0^2)/(n s0)
  const double numer = a.theta0 * ratio + d.theta_d + std_normal_quantile(eps) * std::sqrt(tau2 / nn) * std::sqrt(1.0 + ratio);
  const double denom = std::sqrt(tau2 / nn + d.sigma_d * d.sigma_d);
  return std_normal_cdf(numer / denom);
}

double power_ceiling(const DesignPrior& d_in, double eps, Direction dir) {
  const auto d = oriented(d_in, dir);
  if (d.sigma_d > 0.0) return std_normal_cdf(d.theta_d / d.sigma_d);
  if (d.theta_d > 0.0) return 1.0;
  return d.theta_d == 0.0 ? eps : 0.0;
}

NixPosterior nix_posterior(const NixHyper& h, double theta_hat_p, double tau2_hat_p, long n_pilot) {
  if (!(h.kappa_p > 0.0 && h.sigma2_p > 0.0 && h.nu_p > 0.0)) {
    throw DomainError("NIX hyperparameters kappa_p, sigma2_p, nu_p must be positive");
  }
  if (n_pilot < 0) throw DomainError("pilot size must be nonnegative");
  if (n_pilot > 0 && !(tau2_hat_p > 0.0)) throw DomainError("pilot tau2 estimate must be positive");
  const double n = static_cast<double>(n_pilot);
  const double nu_n = h.nu_p + n;
  const double gap = h.theta_p - theta_hat_p;
  const double shrink = n * h.kappa_p / (h.kappa_p + n);
  const double sigma2_n = (h.sigma2_p * h.nu_p + n * tau2_hat_p + shrink * gap * gap) / nu_n;
  return {nu_n, sigma2_n};
}

double marginal_power(long n, const AnalysisPrior& a, const DesignPrior& d, double eps, const NixPosterior& post,
                      double rel_tol, Direction dir) {
  return PowerFunction(a, d, eps, post, dir, rel_tol)(n);
}

PowerFunction::PowerFunction(AnalysisPrior a, DesignPrior d, double eps, Tau2Source source, Direction dir,
                             double rel_tol)
    : analysis_(a), design_(d), eps_(eps), source_(source), dir_(dir) {
  check_eps(eps);
  if (!(a.sigma0 > 0.0)) throw DomainError("analysis prior sigma0 must be positive");
  if (!(d.sigma_d >= 0.0)) throw DomainError("design prior sigma_d must be nonnegative");
  if (const auto* post = std::get_if<NixPosterior>(&source_)) {
    QuadratureOptions options;
    options.rel_tol = rel_tol;
    quadrature_ = std::make_unique<ScaledInvChiSqQuadrature>(post->distribution(), options);
  } else if (!(std::get<FixedTau2>(source_).tau2 > 0.0)) {
    throw DomainError("tau2 must be positive");
  }
}

double PowerFunction::operator()(long n) const {
  if (!quadrature_) return bayes_power(n, std::get<FixedTau2>(source_).tau2, analysis_, design_, eps_, dir_);
  const double value =
      quadrature_->expect([&](double tau2) { return bayes_power(n, tau2, analysis_, design_, eps_, dir_); });
  return std::clamp(value, 0.0, 1.0);
}

SizingResult bayes_sample_size(double target, const PowerFunction& power, long n_max) {
  if (!is_open_unit(target)) throw DomainError("target power must lie in (0,1)");
  if (n_max < 1) throw DomainError("n_max must be positive");
  const double ceiling = power.ceiling();
  if (target >= ceiling) {
    std::ostringstream msg;
    msg << "target power " << target << " unattainable: power ceiling is " << ceiling;
    throw InfeasibleError(msg.str(), ceiling);
  }

  SizingResult result{0, 0.0, {}};
  auto eval = [&](long n) {
    const double p = power(n);
    result.curve.emplace_back(n, p);
    return p;
  };

  long lo = 0;  // largest n known to fail (0 = none evaluated)
  long hi = 1;
  double p_hi = eval(hi);
  while (p_hi < target) {
    if (hi >= n_max) {
      std::ostringstream msg;
      msg << "target power " << target << " not reached by n_max=" << n_max << " (power " << p_hi
          << ", ceiling " << ceiling << ")";
      throw InfeasibleError(msg.str(), ceiling);
    }
    lo = hi;
    hi = std::min(2 * hi, n_max);
    p_hi = eval(hi);
  }
  while (hi - lo > 1) {
    const long mid = lo + (hi - lo) / 2;
    const double p = eval(mid);
    if (p >= target) {
      hi = mid;
      p_hi = p;
    } else {
      lo = mid;
    }
  }
  // Confirm no n in the window just below the candidate also qualifies.
  for (long k = hi - 1, stop = hi - 5; k >= 1 && k >= stop; --k) {
    const double p = eval(k);
    if (p >= target) {
      hi = k;
      p_hi = p;
      stop = k - 5;
    }
  }
  std::sort(result.curve.begin(), result.curve.end());
  result.curve.erase(std::unique(result.curve.begin(), result.curve.end()), result.curve.end());
  result.n = hi;
  result.achieved_power = p_hi;
  return result;
}

SizingResult bayes_sample_size(double target, const AnalysisPrior& a, const DesignPrior& d, double eps,
                               const Tau2Source& source, long n_max, Direction dir) {
  return bayes_sample_size(target, PowerFunction(a, d, eps, source, dir), n_max);
}

std::vector<std::pair<long, double>> power_curve(std::span<const long> n_grid, const AnalysisPrior& a,
                                                 const DesignPrior& d, double eps, const Tau2Source& source,
                                                 Direction dir) {
  if (n_grid.empty()) throw DomainError("power_curve: empty grid");
  const PowerFunction power(a, d, eps, source, dir);
  std::vector<std::pair<long, double>> out;
  out.reserve(n_grid.size());
  for (long n : n_grid) out.emplace_back(n, power(n));
  return out;
}

}  // namespace smartsize
