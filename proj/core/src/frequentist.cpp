#include "smartsize/frequentist.hpp"

#include <algorithm>
#include <cmath>

#include "smartsize/design.hpp"
#include "smartsize/errors.hpp"

namespace smartsize {

void FreqSizingInput::validate() const {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw DomainError("delta must be positive");
  if (!is_open_unit(p)) throw DomainError("response rate p must lie in (0,1)");
  if (!(alpha > 0.0 && alpha < 0.5)) throw DomainError("alpha must lie in (0,0.5)");
  if (!(beta > 0.0 && beta < 0.5)) throw DomainError("beta must lie in (0,0.5)");
}

double frequentist_n_raw(const FreqSizingInput& in) {
  in.validate();
  const double z = std_normal_quantile(1.0 - in.beta) + std_normal_quantile(1.0 - in.alpha);
  return z * z / (in.delta * in.delta) * 4.0 * (2.0 * (1.0 - in.p) + in.p);
}

long frequentist_n(const FreqSizingInput& in) {
  const double raw = frequentist_n_raw(in);
  return 2 * static_cast<long>(std::ceil(raw / 2.0));
}

double frequentist_power(long n, const FreqSizingInput& in) {
  in.validate();
  if (n < 2) throw DomainError("frequentist_power: n must be at least 2");
  const double shift = std::sqrt(static_cast<double>(n)) * in.delta / (2.0 * std::sqrt(2.0 - in.p));
  return std_normal_cdf(shift - std_normal_quantile(1.0 - in.alpha));
}

namespace {

void check_cells(const std::array<double, 6>& cells) {
  double total = 0.0;
  for (double c : cells) {
    if (!(c >= 0.0)) throw DomainError("cell probabilities must be nonnegative");
    total += c;
  }
  if (std::abs(total - 1.0) > 1e-9) throw DomainError("cell probabilities must sum to 1");
}

std::array<double, 6> cumulative(const std::array<double, 6>& cells) {
  std::array<double, 6> cum{};
  double acc = 0.0;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    acc += cells[i];
    cum[i] = acc;
  }
  cum.back() = 1.0;
  return cum;
}

std::size_t draw_cell(const std::array<double, 6>& cum, RandomStream& rng) {
  const double u = rng.uniform();
  std::size_t k = 0;
  while (k + 1 < cum.size() && u >= cum[k]) ++k;
  return k;
}

}  // namespace

double min_cell_coverage(long n, const std::array<double, 6>& cells, long m, long reps, RandomStream& rng) {
  check_cells(cells);
  if (n < 0 || m < 0 || reps < 1) throw DomainError("min_cell_coverage: invalid n, m or reps");
  if (m == 0) return 1.0;
  if (n < 6 * m) return 0.0;
  const auto cum = cumulative(cells);
  long hits = 0;
  for (long r = 0; r < reps; ++r) {
    std::array<long, 6> counts{};
    for (long i = 0; i < n; ++i) ++counts[draw_cell(cum, rng)];
    if (std::all_of(counts.begin(), counts.end(), [m](long c) { return c >= m; })) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(reps);
}

std::vector<long> coverage_stopping_times(const std::array<double, 6>& cells, long m, long reps,
                                          RandomStream& rng) {
  check_cells(cells);
  if (m < 0 || reps < 1) throw DomainError("coverage_stopping_times: invalid m or reps");
  for (double c : cells) {
    if (m > 0 && !(c > 0.0)) throw DomainError("coverage_stopping_times: every cell needs positive probability");
  }
  const auto cum = cumulative(cells);
  constexpr long kCap = 100'000'000;
  std::vector<long> times(reps);
  for (long r = 0; r < reps; ++r) {
    std::array<long, 6> counts{};
    int short_cells = m > 0 ? 6 : 0;
    long n = 0;
    while (short_cells > 0) {
      if (++n > kCap) throw NumericalError("coverage_stopping_times: recruitment cap exceeded");
      const auto k = draw_cell(cum, rng);
      if (++counts[k] == m) --short_cells;
    }
    times[r] = n;
  }
  return times;
}

namespace {

// P(responders >= m and both halves of the non-responders >= m) on one arm
// of k subjects with response rate p.
double balanced_arm_coverage(long k, double p, long m) {
  if (k < 3 * m) return 0.0;
  const double log_p = std::log(p);
  const double log_q = std::log1p(-p);
  const double lk = std::lgamma(static_cast<double>(k) + 1.0);
  double total = 0.0;
  // N non-responders: need N / 2 >= m (smaller half) and k - N >= m.
  for (long nr = 2 * m; nr <= k - m; ++nr) {
    const double r = static_cast<double>(k - nr);
    const double logpmf = lk - std::lgamma(static_cast<double>(nr) + 1.0) - std::lgamma(r + 1.0) +
                          static_cast<double>(nr) * log_q + r * log_p;
    total += std::exp(logpmf);
  }
  return std::min(total, 1.0);
}

}  // namespace

double balanced_pilot_coverage(long n, double p_a, double p_b, long m) {
  if (!is_open_unit(p_a) || !is_open_unit(p_b)) throw DomainError("response rates must lie in (0,1)");
  if (n < 0 || m < 0) throw DomainError("balanced_pilot_coverage: invalid n or m");
  if (m == 0) return 1.0;
  const long k_a = n - n / 2;
  const long k_b = n / 2;
  return balanced_arm_coverage(k_a, p_a, m) * balanced_arm_coverage(k_b, p_b, m);
}

PilotSizing pilot_n(double p_a, double p_b, long m, double confidence, long reps, RandomStream& rng,
                    PilotAllocation allocation) {
  if (!is_open_unit(confidence)) throw DomainError("pilot_n: confidence must lie in (0,1)");
  if (m < 1) throw DomainError("pilot_n: min cell count must be positive");
  if (allocation == PilotAllocation::Balanced) {
    // Equal initial arms, so only even n qualify.
    for (long n = 6 * m;; n += 2) {
      const double c = balanced_pilot_coverage(n, p_a, p_b, m);
      if (c >= confidence) return {n, c};
      if (n > 100'000'000) throw NumericalError("pilot_n: coverage target not reached");
    }
  }
  auto times = coverage_stopping_times(cell_probabilities(p_a, p_b), m, reps, rng);
  std::sort(times.begin(), times.end());
  // Smallest n with #{T <= n} >= confidence * reps.
  const auto needed = static_cast<long>(std::ceil(confidence * static_cast<double>(reps) - 1e-9));
  const long n = std::max(6 * m, times[static_cast<std::size_t>(std::max(needed, 1L) - 1)]);
  const auto covered = std::upper_bound(times.begin(), times.end(), n) - times.begin();
  return {n, static_cast<double>(covered) / static_cast<double>(reps)};
}

}  // namespace smartsize
