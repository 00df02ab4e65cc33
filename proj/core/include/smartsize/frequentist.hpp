#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "smartsize/numerics.hpp"

namespace smartsize {

struct FreqSizingInput {
  double delta;  // standardized effect size
  double p;      // common response rate to the initial treatments
  double alpha;
  double beta;

  // Throws DomainError unless delta > 0, 0 < p < 1 and 0 < alpha, beta < 0.5.
  void validate() const;
};

// Unrounded sample size (z_{1-beta} + z_{1-alpha})^2 / delta^2 * 4 [2(1-p) + p].
double frequentist_n_raw(const FreqSizingInput& in);

// frequentist_n_raw rounded up to the next even integer.
long frequentist_n(const FreqSizingInput& in);

// Phi(sqrt(n) delta / (2 sqrt(2 - p)) - z_{1-alpha}).
double frequentist_power(long n, const FreqSizingInput& in);

// Monte Carlo estimate of P(every cell count >= m) for a multinomial with n
// trials over `cells`.
double min_cell_coverage(long n, const std::array<double, 6>& cells, long m, long reps, RandomStream& rng);

// Per-replication first n at which every cell holds at least m subjects,
// obtained by recruiting subjects one at a time. The empirical CDF of these
// stopping times is the coverage curve over n with common random numbers,
// so it is nondecreasing in n by construction.
std::vector<long> coverage_stopping_times(const std::array<double, 6>& cells, long m, long reps,
                                          RandomStream& rng);

// How a pilot's subjects fall into the six sequences.
//   Balanced: each initial arm receives half of the subjects (the extra one
//     goes to A when n is odd) and non-responders are split as evenly as
//     possible between the two rescue arms, as with block randomization.
//     Only the response counts are random; coverage is computed exactly.
//   Multinomial: independent coin flips at both stages; coverage is
//     estimated by Monte Carlo.
enum class PilotAllocation { Balanced, Multinomial };

// Exact P(every sequence holds >= m subjects) under balanced allocation.
double balanced_pilot_coverage(long n, double p_a, double p_b, long m);

struct PilotSizing {
  long n;
  double coverage;  // P(all cells >= m) at n; a Monte Carlo estimate for Multinomial
};

// Smallest n >= 6m whose coverage reaches `confidence`; n is even under
// Balanced allocation. `reps` and `rng` are used only for Multinomial.
PilotSizing pilot_n(double p_a, double p_b, long m, double confidence, long reps, RandomStream& rng,
                    PilotAllocation allocation = PilotAllocation::Balanced);

}  // namespace smartsize
