#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "smartsize/bayesian.hpp"
#include "smartsize/errors.hpp"
#include "smartsize/simulation.hpp"

using namespace smartsize;

TEST_CASE("posterior_theta examples") {
  const auto p = posterior_theta(1.0, 4, 4.0, {0.0, 1.0});
  CHECK(p.mean == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(p.var == doctest::Approx(0.5).epsilon(1e-15));

  const auto flat = posterior_theta(1.7, 50, 9.0, {3.0, 1e8});
  CHECK(flat.mean == doctest::Approx(1.7).epsilon(1e-6));
  CHECK(flat.var == doctest::Approx(9.0 / 50).epsilon(1e-6));

  for (long n : {1L, 10L, 1000L}) {
    CHECK(posterior_theta(-2.5, n, 3.0, {-2.5, 0.7}).mean == doctest::Approx(-2.5).epsilon(1e-14));
  }
  CHECK_THROWS_AS(posterior_theta(0.0, 10, 0.0, {}), DomainError);
}

TEST_CASE("posterior variance is below both prior variance and tau2/n") {
  for (double s0 : {0.1, 1.0, 30.0}) {
    for (long n : {1L, 7L, 400L}) {
      for (double tau2 : {0.01, 4.0, 500.0}) {
        const auto p = posterior_theta(0.3, n, tau2, {0.0, s0});
        CHECK(p.var < s0 * s0);
        CHECK(p.var < tau2 / static_cast<double>(n));
      }
    }
  }
}

TEST_CASE("bayes_significant examples") {
  const auto t = bayes_significant(1.0, 4, 4.0, {0.0, 1.0}, 0.05);
  CHECK(t.post_prob == doctest::Approx(oracle::normal_cdf(0.5 / std::sqrt(0.5))).epsilon(1e-12));
  CHECK(t.post_prob == doctest::Approx(0.7602).epsilon(1e-4));
  CHECK_FALSE(t.significant);

  for (double y : {-3.0, -0.4, 0.0, 0.4, 0.8, 3.0}) {
    for (double th0 : {-1.0, 0.0, 2.0}) {
      const AnalysisPrior a{th0, 0.8};
      const AnalysisPrior neg{-th0, 0.8};
      CHECK(bayes_significant(y, 20, 5.0, a, 0.05).significant ==
            bayes_significant(-y, 20, 5.0, neg, 0.05, Direction::Less).significant);
      CHECK(bayes_significant(y, 20, 5.0, a, 0.05).post_prob ==
            doctest::Approx(bayes_significant(-y, 20, 5.0, neg, 0.05, Direction::Less).post_prob));
    }
  }
}

TEST_CASE("significance threshold") {
  const double flat = significance_threshold(100, 16.0, {5.0, 1e8}, 0.05);
  CHECK(flat == doctest::Approx(oracle::normal_quantile(0.95) * std::sqrt(16.0 / 100)).epsilon(1e-6));
  // The threshold is exactly where the posterior probability crosses 1 - eps.
  for (double th0 : {-2.0, 0.0, 1.5}) {
    for (double s0 : {0.3, 1.0, 10.0}) {
      const AnalysisPrior a{th0, s0};
      const double c = significance_threshold(30, 7.0, a, 0.05);
      CHECK(bayes_significant(c + 1e-9, 30, 7.0, a, 0.05).significant);
      CHECK_FALSE(bayes_significant(c - 1e-9, 30, 7.0, a, 0.05).significant);
    }
  }
}

TEST_CASE("bayes_significant is monotone in y") {
  const AnalysisPrior a{0.5, 2.0};
  bool seen = false;
  for (double y = -5.0; y <= 5.0; y += 0.01) {
    const bool sig = bayes_significant(y, 25, 10.0, a, 0.05).significant;
    if (seen) CHECK(sig);
    seen = seen || sig;
  }
  CHECK(seen);
}

TEST_CASE("bayes_power examples") {
  const AnalysisPrior a{0.0, 100.0};
  const DesignPrior d{2.0, 0.0};
  CHECK(std::abs(bayes_power(308, 143.5, a, d, 0.05) - 0.900) < 0.002);

  double worst = 0.0;
  const double z95 = oracle::normal_quantile(0.95);
  for (long n = 10; n <= 2000; ++n) {
    const double b = bayes_power(n, 143.5, {0.0, 1e8}, d, 0.05);
    worst = std::max(worst, std::abs(b - oracle::frequentist_one_sided_power(n, 2.0, 143.5, z95)));
  }
  CHECK(worst < 1e-4);

  const DesignPrior vague{2.0, 1.5};
  CHECK(bayes_power(1'000'000'000'000, 143.5, a, vague, 0.05) ==
        doctest::Approx(oracle::normal_cdf(2.0 / 1.5)).epsilon(1e-4));

  // Direction::Less mirrors Direction::Greater.
  CHECK(bayes_power(200, 50.0, {-1.0, 3.0}, {-1.5, 0.4}, 0.05, Direction::Less) ==
        doctest::Approx(bayes_power(200, 50.0, {1.0, 3.0}, {1.5, 0.4}, 0.05)).epsilon(1e-14));
}

TEST_CASE("power ceiling") {
  CHECK(power_ceiling({2.0, 1.0}, 0.05) == doctest::Approx(oracle::normal_cdf(2.0)).epsilon(1e-14));
  CHECK(power_ceiling({2.0, 0.0}, 0.05) == 1.0);
  CHECK(power_ceiling({-2.0, 1.0}, 0.05, Direction::Less) == doctest::Approx(oracle::normal_cdf(2.0)));
  for (double sd : {0.2, 0.5, 1.0, 3.0}) {
    const DesignPrior d{1.0, sd};
    const double ceil = power_ceiling(d, 0.05);
    for (long n : {10L, 100L, 10'000L, 1'000'000L}) CHECK(bayes_power(n, 20.0, {}, d, 0.05) <= ceil + 1e-12);
  }
}

TEST_CASE("nix_posterior examples") {
  const NixHyper h{0.0, 1.0, 0.1, 5.0};
  const auto p = nix_posterior(h, 2.0, 143.5, 66);
  CHECK(p.nu_n == 71.0);
  CHECK(p.sigma2_n == doctest::Approx((0.5 + 9471.0 + 66.0 / 67.0 * 4.0) / 71.0).epsilon(1e-14));
  CHECK(p.sigma2_n == doctest::Approx(133.457).epsilon(1e-5));

  const auto prior = nix_posterior(h, 2.0, 143.5, 0);
  CHECK(prior.nu_n == 5.0);
  CHECK(prior.sigma2_n == doctest::Approx(0.1).epsilon(1e-15));

  const NixHyper centred{2.0, 1.0, 0.1, 5.0};
  CHECK(nix_posterior(centred, 2.0, 143.5, 66).sigma2_n == (0.5 + 9471.0) / 71.0);
  CHECK_THROWS_AS(nix_posterior({0.0, 0.0, 0.1, 5.0}, 2.0, 1.0, 10), DomainError);

  // The simulation default leaves the pilot in charge.
  const auto vague = nix_posterior(kSimulationNixHyper, 2.0, 143.5, 66);
  CHECK(vague.nu_n == doctest::Approx(66.01));
  CHECK(vague.sigma2_n == doctest::Approx((0.001 + 9471.0 + 4.0 * 0.66 / 66.01) / 66.01));
  CHECK(std::abs(vague.sigma2_n - 143.5) < 0.05);
}

TEST_CASE("marginal_power concentrates and is bracketed") {
  const AnalysisPrior a{0.0, 100.0};
  const DesignPrior d{2.0, 0.0};
  const NixPosterior tight{1e6, 133.457};
  CHECK(std::abs(marginal_power(308, a, d, 0.05, tight) - bayes_power(308, 133.457, a, d, 0.05)) < 1e-3);

  for (const NixPosterior post : {NixPosterior{10, 140.0}, NixPosterior{71, 133.457}, NixPosterior{500, 90.0}}) {
    const auto dist = post.distribution();
    const double t_lo = dist.quantile(0.001);
    const double t_hi = dist.quantile(0.999);
    for (long n : {20L, 150L, 308L, 900L}) {
      const double m = marginal_power(n, a, d, 0.05, post);
      CHECK(m >= 0.0);
      CHECK(m <= 1.0);
      // Power falls with tau2 here, so the extremes bracket the average.
      CHECK(bayes_power(n, t_hi, a, d, 0.05) <= bayes_power(n, t_lo, a, d, 0.05));
      CHECK(m <= bayes_power(n, t_lo, a, d, 0.05));
      CHECK(m >= bayes_power(n, t_hi, a, d, 0.05));
    }
  }
}

TEST_CASE("bayes_sample_size examples") {
  const AnalysisPrior a{0.0, 100.0};
  const DesignPrior d{2.0, 0.0};
  const auto r = bayes_sample_size(0.9, a, d, 0.05, FixedTau2{143.5});
  CHECK(r.n == 308);
  CHECK(r.achieved_power >= 0.9);
  CHECK(bayes_power(r.n - 1, 143.5, a, d, 0.05) < 0.9);
  CHECK_FALSE(r.curve.empty());

  try {
    bayes_sample_size(0.9, a, {2.0, 2.0}, 0.05, FixedTau2{143.5});
    FAIL("expected InfeasibleError");
  } catch (const InfeasibleError& e) {
    CHECK(e.ceiling() == doctest::Approx(oracle::normal_cdf(1.0)).epsilon(1e-12));
    CHECK(std::string(e.what()).find("ceiling") != std::string::npos);
  }
  CHECK_THROWS_AS(bayes_sample_size(0.9, a, d, 0.05, FixedTau2{143.5}, 100), InfeasibleError);

  const auto m = bayes_sample_size(0.9, a, d, 0.05, NixPosterior{71, 133.457});
  const PowerFunction pf(a, d, 0.05, NixPosterior{71, 133.457});
  CHECK(pf(m.n) >= 0.9);
  CHECK(pf(m.n - 1) < 0.9);
}

TEST_CASE("bayes_sample_size monotonicity") {
  const AnalysisPrior a{0.0, 100.0};
  long prev = 0;
  for (double sd = 0.0; sd <= 1.2; sd += 0.05) {
    const long n = bayes_sample_size(0.8, a, {2.0, sd}, 0.05, FixedTau2{143.5}).n;
    CHECK(n >= prev);
    prev = n;
  }
  prev = 0;
  for (double target = 0.5; target < 0.99; target += 0.02) {
    const long n = bayes_sample_size(target, a, {2.0, 0.0}, 0.05, FixedTau2{143.5}).n;
    CHECK(n >= prev);
    prev = n;
  }
  prev = 0;
  for (double tau2 = 10.0; tau2 < 400.0; tau2 += 15.0) {
    const long n = bayes_sample_size(0.9, a, {2.0, 0.0}, 0.05, FixedTau2{tau2}).n;
    CHECK(n >= prev);
    prev = n;
  }
  prev = 1'000'000;
  for (double th = 0.5; th < 4.0; th += 0.1) {
    const long n = bayes_sample_size(0.9, a, {th, 0.0}, 0.05, FixedTau2{143.5}).n;
    CHECK(n <= prev);
    prev = n;
  }
  prev = 0;
  for (double sd = 0.0; sd <= 0.8; sd += 0.1) {
    const long n = bayes_sample_size(0.85, a, {2.0, sd}, 0.05, NixPosterior{71, 133.457}).n;
    CHECK(n >= prev);
    prev = n;
  }
}

TEST_CASE("power_curve") {
  const AnalysisPrior a{0.0, 100.0};
  const DesignPrior d{2.0, 0.0};
  const std::vector<long> one{308};
  const auto single = power_curve(one, a, d, 0.05, FixedTau2{143.5});
  REQUIRE(single.size() == 1);
  CHECK(single[0].second == bayes_power(308, 143.5, a, d, 0.05));
  const auto msingle = power_curve(one, a, d, 0.05, NixPosterior{71, 133.457});
  CHECK(msingle[0].second == doctest::Approx(marginal_power(308, a, d, 0.05, {71, 133.457})).epsilon(1e-12));

  std::vector<long> grid;
  for (long n = 2; n <= 5000; n += 7) grid.push_back(n);
  const auto curve = power_curve(grid, a, d, 0.05, NixPosterior{71, 133.457});
  for (std::size_t i = 1; i < curve.size(); ++i) CHECK(curve[i].second >= curve[i - 1].second - 1e-12);

  const DesignPrior vague{2.0, 1.0};
  const auto capped = power_curve(grid, a, vague, 0.05, FixedTau2{143.5});
  for (const auto& [n, p] : capped) CHECK(p < oracle::normal_cdf(2.0));
  CHECK_THROWS_AS(power_curve(std::span<const long>{}, a, d, 0.05, FixedTau2{1.0}), DomainError);
}
