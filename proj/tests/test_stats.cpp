#include <doctest.h>

#include <cmath>
#include <random>

#include "lucasmon/errors.hpp"
#include "lucasmon/stats.hpp"

using namespace lucasmon;

namespace {

const GeneratorSet& fib() {
  static const GeneratorSet set = GeneratorSet::build(LucasParams::fibonacci());
  return set;
}

LimitLawSample small_sample(std::uint64_t seed, int n = 20'000) {
  LimitLawConfig cfg;
  cfg.n_samples = n;
  cfg.rng_seed = seed;
  return sample_limit_law(fib(), cfg);
}

}  // namespace

TEST_CASE("ks statistic") {
  CHECK(ks_statistic({0.0}, standard_normal_cdf) == doctest::Approx(0.5));
  std::vector<double> a = {0.3, -1.0, 2.0, 2.0, 5.0};
  CHECK(ks_statistic(a, a) == 0.0);
  CHECK(ks_statistic({1.0, 2.0}, {3.0, 4.0}) == 1.0);
  // Ties across samples are handled at each distinct value.
  CHECK(ks_statistic({1.0, 1.0, 2.0}, {1.0, 2.0, 2.0}) == doctest::Approx(1.0 / 3));
  CHECK_THROWS_AS(ks_statistic(std::vector<double>{}, standard_normal_cdf), DomainError);
  CHECK_THROWS_AS(ks_statistic(std::vector<double>{}, a), DomainError);

  std::mt19937_64 rng(7);
  std::normal_distribution<double> normal;
  std::vector<double> z(20'000);
  for (auto& v : z) v = normal(rng);
  const double d = ks_statistic(z, standard_normal_cdf);
  CHECK(d >= 0);
  CHECK(d < 1.63 / std::sqrt(20'000.0));  // 1% critical value
  for (auto& v : z) v += 1;
  CHECK(ks_statistic(z, standard_normal_cdf) > 0.3);
}

TEST_CASE("limit-law sampler") {
  const auto s = small_sample(1);
  CHECK(s.config.truncation_M == default_truncation(fib()));
  CHECK(s.tail_variance < 1e-4);
  CHECK(limit_law_tail_variance(fib(), s.config.truncation_M - 1) >= 1e-4);
  double var_oracle = 0;
  for (double lm : fib().log_generators(static_cast<std::size_t>(s.config.truncation_M))) {
    var_oracle += 1 / (lm * lm);
  }
  CHECK(s.variance == doctest::Approx(var_oracle).epsilon(1e-12));
  double mean = 0;
  for (double d : s.draws) mean += d;
  mean /= s.draws.size();
  double var = 0;
  for (double d : s.draws) var += (d - mean) * (d - mean);
  var /= s.draws.size() - 1;
  CHECK(std::abs(mean) < 3 * std::sqrt(var / s.draws.size()));
  CHECK(var == doctest::Approx(s.variance).epsilon(0.05));

  // Deterministic, independent of threads, and sensitive to the seed.
  LimitLawConfig cfg;
  cfg.n_samples = 10'000;
  cfg.rng_seed = 1;
  cfg.threads = 3;
  const auto threaded = sample_limit_law(fib(), cfg);
  CHECK(std::equal(threaded.draws.begin(), threaded.draws.end(), s.draws.begin()));
  CHECK(small_sample(1, 10'000).draws == threaded.draws);
  CHECK(small_sample(2, 10'000).draws != threaded.draws);

  const auto other = small_sample(99);
  CHECK(ks_statistic(s.draws, other.draws) < 0.02);

  LimitLawConfig bad;
  bad.truncation_M = 100;
  CHECK_THROWS_AS(sample_limit_law(fib(), bad), ConfigError);
  bad.truncation_M = 0;
  bad.n_samples = 0;
  CHECK_THROWS_AS(sample_limit_law(fib(), bad), ConfigError);
}

TEST_CASE("all-exact sampling agrees with the mixed sampler") {
  LimitLawConfig exact;
  exact.n_samples = 4'000;
  exact.exact_terms = 1 << 30;
  exact.rng_seed = 5;
  const auto a = sample_limit_law(fib(), exact);
  const auto b = small_sample(6, 20'000);
  CHECK(ks_statistic(a.draws, b.draws) < 0.035);
}

TEST_CASE("omega summary") {
  const auto one = omega_summary(fib(), 1);
  CHECK(one.n_elements == 1);
  CHECK(one.raw_variance == 0);
  CHECK(std::isnan(one.mean));

  const std::uint64_t x = 10'000'000'000ULL;
  const auto s = omega_summary(fib(), x);
  CHECK(s.n_elements == count_upto(fib(), x));
  CHECK(s.variance >= 0);
  const ConstantsBundle c = constants_bundle(fib());
  const double lead = c.a1 * std::sqrt(std::log(1e10));
  CHECK(lead == doctest::Approx(5.393).epsilon(1e-3));
  CHECK(std::abs(s.raw_mean - lead) < 0.25 * lead);
  CHECK(s.norm.center == doctest::Approx(lead));
  CHECK(s.ks_distance_to_reference > 0);
  CHECK(s.ks_distance_to_reference < 1);

  const auto hist = histogram(fib(), x, Statistic::omega);
  double mean = 0;
  for (const auto& [k, n] : hist.counts) mean += static_cast<double>(k) * n;
  CHECK(s.raw_mean == doctest::Approx(mean / hist.total()).epsilon(1e-12));
}

TEST_CASE("Omega summary") {
  const auto at16 = Omega_summary(fib(), 16, small_sample(1).draws);
  CHECK(std::isfinite(at16.norm.center));
  CHECK(std::isfinite(at16.norm.scale));
  CHECK(std::isnan(Omega_summary(fib(), 15, {0.0}).mean));

  const auto lim = small_sample(3);
  for (std::uint64_t x : {1000ULL, 1'000'000ULL, 10'000'000'000ULL}) {
    const auto w = omega_summary(fib(), x);
    const auto W = Omega_summary(fib(), x, lim.draws);
    CHECK(W.raw_mean >= w.raw_mean);
    CHECK(W.n_elements == w.n_elements);
  }
  const auto w = omega_summary(fib(), 10'000'000'000ULL);
  const auto W = Omega_summary(fib(), 10'000'000'000ULL, lim.draws);
  CHECK(W.skewness > 0);
  CHECK(W.skewness > std::abs(w.skewness));
}

TEST_CASE("normalized values") {
  const auto z = normalized_values(fib(), 1000, Statistic::omega);
  CHECK(z.size() == count_upto(fib(), 1000));
  const auto n = normalization(constants_bundle(fib()), 1000, Statistic::omega);
  CHECK(n.scale > 0);
  CHECK_THROWS_AS(normalized_values(fib(), 2, Statistic::omega), DomainError);
  CHECK_THROWS_AS(normalized_values(fib(), 15, Statistic::Omega), DomainError);
}

TEST_CASE("moment generating function check") {
  const std::uint64_t x = 10'000'000'000ULL;
  const auto rows = mgf_check(fib(), x, {-0.5, 0.0, 0.5});
  CHECK(rows[1].empirical == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(rows[1].reference == 1.0);
  CHECK(rows[0].reference == rows[2].reference);
  // The normalized mean sits near -1 at desk scale, so the +-t values are not
  // within 2x of each other; their ratio tracks exp(-2 t mean) instead.
  const auto s = omega_summary(fib(), x);
  CHECK(rows[0].empirical / rows[2].empirical ==
        doctest::Approx(std::exp(-2 * 0.5 * s.mean)).epsilon(0.1));
  CHECK_THROWS_AS(mgf_check(fib(), x, {3.0}), DomainError);
  const auto big = mgf_check(fib(), x, {0.05, 0.0}, Statistic::Omega);
  CHECK(big[1].empirical == doctest::Approx(1.0));
  CHECK(big[0].reference > 1);
  CHECK_THROWS_AS(mgf_check(fib(), x, {0.5}, Statistic::Omega), DomainError);
}
