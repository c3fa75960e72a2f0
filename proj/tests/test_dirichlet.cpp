#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "lucasmon/dirichlet.hpp"
#include "lucasmon/errors.hpp"
#include "lucasmon/monoid.hpp"

using namespace lucasmon;

namespace {

const GeneratorSet& fib() {
  static const GeneratorSet set = GeneratorSet::build(LucasParams::fibonacci());
  return set;
}
const GeneratorSet& mer() {
  static const GeneratorSet set = GeneratorSet::build(LucasParams::mersenne());
  return set;
}

}  // namespace

TEST_CASE("log d at z = 2, u = 1 against the direct sum over 100 generators") {
  long double direct = 0;
  for (double lm : fib().log_generators(100)) direct -= std::log1p(-std::exp(-2.0L * lm));
  const auto got = log_d(fib(), 2.0, 1.0);
  CHECK(got.log_value.real() == doctest::Approx(static_cast<double>(direct)).epsilon(1e-14));
  CHECK(std::abs(got.log_value.imag()) < 1e-300);
  CHECK(got.tail_bound < 1e-15);
}

TEST_CASE("trivial values and the domination bound") {
  CHECK(std::abs(log_d(fib(), cplx(0.7, 3.0), 0.0).log_value) < 1e-15);
  CHECK(std::abs(log_D(fib(), cplx(0.7, 3.0), 0.0).log_value) < 1e-15);
  const double at_r = log_d(fib(), 0.3, 1.0).log_value.real();
  for (double t : {0.5, 1.0, 2.0, 13.0, 40.0}) {
    CHECK(log_d(fib(), cplx(0.3, t), 1.0).log_value.real() <= at_r);
    CHECK(log_d(fib(), cplx(0.3, t), 0.7).log_value.real() <=
          log_d(fib(), 0.3, 0.7).log_value.real());
  }
}

TEST_CASE("conjugate symmetry") {
  for (cplx z : {cplx(0.4, 2.5), cplx(1.5, -7.0)}) {
    const cplx a = log_d(fib(), z, 1.2).log_value;
    const cplx b = log_d(fib(), std::conj(z), 1.2).log_value;
    CHECK(std::abs(a - std::conj(b)) < 1e-13 * std::abs(a));
  }
}

TEST_CASE("d and D agree at u = 1") {
  for (cplx z : {cplx(2, 0), cplx(1, 1)}) {
    for (const GeneratorSet* g : {&fib(), &mer()}) {
      const cplx a = log_d(*g, z, 1.0).log_value;
      const cplx b = log_D(*g, z, 1.0).log_value;
      CHECK(std::abs(a - b) < 1e-14);
    }
  }
}

TEST_CASE("D(2, 1.1) against the enumerated series") {
  // Members are sparse (5532 below 10^6), so the tail past 10^6 is tiny.
  long double sum = 0;
  for_each_element(fib(), 1'000'000, [&](const ElementView& e) {
    sum += std::pow(1.1L, e.Omega) / (static_cast<long double>(e.value) * e.value);
  });
  const double got = std::exp(log_D(fib(), 2.0, 1.1).log_value.real());
  CHECK(got == doctest::Approx(static_cast<double>(sum)).epsilon(1e-8));
  CHECK(got > static_cast<double>(sum));
}

TEST_CASE("domain and configuration errors") {
  CHECK_THROWS_AS(log_d(fib(), cplx(0, 1), 1.0), DomainError);
  CHECK_THROWS_AS(log_d(fib(), cplx(-0.5, 1), 1.0), DomainError);
  CHECK_THROWS_AS(log_d(fib(), 1.0, 2.5), DomainError);
  // The smallest Fibonacci generator is 1 (n = 1), so any u >= 1 diverges.
  CHECK_THROWS_AS(log_D(mer(), 0.1, 5.0), DomainError);
  EvalConfig tight;
  tight.product_truncation = 20;
  CHECK_THROWS_AS(log_d(fib(), 0.05, 1.0, tight), ConfigError);
  CHECK_NOTHROW(log_d(fib(), 2.0, 1.0, tight));
}

TEST_CASE("saddle point") {
  CHECK(saddle_r(LucasParams::fibonacci(), 1e4, 1.0) == doctest::Approx(0.6092).epsilon(1e-4));
  const double a1 = a_of_u(LucasParams::fibonacci(), 1.0);
  CHECK(saddle_r(LucasParams::fibonacci(), std::exp(a1), 1.0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(saddle_r(LucasParams::fibonacci(), 1e6, 1.0) < saddle_r(LucasParams::fibonacci(), 1e4, 1.0));
  CHECK_THROWS_AS(saddle_r(LucasParams::fibonacci(), 1.0, 1.0), DomainError);
  const auto s = saddle_data(fib(), 1e4, 1.2);
  CHECK(s.r > 0);
  CHECK(s.c_u == doctest::Approx(c_of_u(fib(), 1.2)));
}

TEST_CASE("Mellin-Perron integral against the enumerated smoothed sum") {
  const auto small = mellin_perron_integral(fib(), 10, 1.0, saddle_r(fib().params(), 10, 1.0));
  CHECK(small.integral == doctest::Approx(4.2).epsilon(1e-3));
  for (double x : {1e2, 1e3}) {
    for (double u : {0.8, 1.0, 1.2}) {
      CAPTURE(x);
      CAPTURE(u);
      const auto got = mellin_perron_integral(fib(), x, u, saddle_r(fib().params(), x, u));
      const double want =
          weighted_sum(fib(), static_cast<std::uint64_t>(x), u, Statistic::omega, Weight::smoothed);
      CHECK(std::abs(got.integral - want) <= 1e-3 * want);
      CHECK(std::abs(got.imag_part) <= 1e-10 * std::abs(got.integral));
      CHECK(got.refinement_change <= 1e-6);
    }
  }
}

TEST_CASE("Mellin-Perron integral does not depend on the line") {
  const double want = weighted_sum(fib(), 500, 1.0, Statistic::omega, Weight::smoothed);
  for (double r : {0.4, 0.8, 1.6}) {
    CHECK(mellin_perron_integral(fib(), 500, 1.0, r).integral == doctest::Approx(want).epsilon(1e-3));
  }
  CHECK_THROWS_AS(mellin_perron_integral(fib(), 500, 1.0, -0.1), DomainError);
  EvalConfig short_line;
  short_line.integral_height = 2;
  CHECK_THROWS_AS(mellin_perron_integral(fib(), 500, 1.0, 0.5, short_line), ConfigError);
}

TEST_CASE("central expansion residuals shrink with r") {
  // The next Taylor term of a(u)/z is i a(u) t^3 / r^4 = i a(u) r^{1/5} at the
  // edge, so the fitted constant should sit near a(u).
  for (double u : {1.0, 1.2}) {
    double prev = 1e300;
    double c_min = 1e300, c_max = 0;
    for (double r : {0.2, 0.1, 0.05}) {
      const double t = std::pow(r, 1.4);
      const auto res = central_expansion_check(fib(), r, u, {0.0, t});
      CHECK(std::abs(res[0].residual) < 1e-12);
      const double mag = std::abs(res[1].residual);
      CHECK(mag < prev);
      prev = mag;
      c_min = std::min(c_min, mag / std::pow(r, 0.2));
      c_max = std::max(c_max, mag / std::pow(r, 0.2));
    }
    CHECK(c_max < 1.2 * c_min);
    CHECK(c_max < 2 * a_of_u(fib().params(), u));
  }
  CHECK(central_expansion_check(fib(), 0.1, 1.0).size() == 9);
}

TEST_CASE("decay profile") {
  const double lphi = fib().params().log_phi();
  std::vector<double> grid;
  for (int k = 0; k <= 400; ++k) grid.push_back(0.1 * k);
  for (const auto& [params, gens] : {std::pair{0, &fib()}, std::pair{1, &mer()}}) {
    const auto prof = decay_profile(*gens, 0.05, 1.0, grid);
    CHECK(std::abs(prof.front().value) < 1e-12);
    for (const auto& p : prof) CHECK(p.value >= -1e-9);
    CHECK(fitted_decay_constant(prof, 0.05, gens->params().log_phi()) > 0);
  }
  const auto two = decay_profile(fib(), 0.05, 1.0, {1.0, 2 * kPi / lphi});
  CHECK(two[0].value > 0);
  CHECK(two[1].value > 0);
}

TEST_CASE("decay profile dips sit within r^{3/4} of 2 pi k / log phi") {
  const double r = 0.05;
  const double window = std::pow(r, 0.75);
  for (const GeneratorSet* g : {&fib(), &mer()}) {
    const double period = 2 * kPi / g->params().log_phi();
    std::vector<double> grid;
    for (double t = 1; t <= 2.5 * period; t += 0.005) grid.push_back(t);
    const auto prof = decay_profile(*g, r, 1.0, grid);
    std::vector<double> values;
    for (const auto& p : prof) values.push_back(p.value);
    std::vector<double> sorted = values;
    std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
    const double median = sorted[sorted.size() / 2];
    for (int k = 1; k <= 2; ++k) {
      CAPTURE(k);
      double near = 1e300;
      for (const auto& p : prof) {
        if (std::abs(p.t - k * period) < window) near = std::min(near, p.value);
      }
      // A local minimum well below the typical level inside the window.
      CHECK(near < median - 5);
    }
  }
  // For Fibonacci the phase exp(i t log sqrt 5) rotates the aligned tail, so
  // the point t = 2 pi / log phi itself is a peak and the dip is offset by O(r).
  const double period = 2 * kPi / fib().params().log_phi();
  const auto pts = decay_profile(fib(), r, 1.0, {1.0, period});
  CHECK(pts[1].value > pts[0].value);
  const auto mpts = decay_profile(mer(), r, 1.0, {1.0, 2 * kPi / mer().params().log_phi()});
  CHECK(mpts[1].value < mpts[0].value);
}

TEST_CASE("numerical c(u) approaches the analytic value") {
  for (const GeneratorSet* g : {&fib(), &mer()}) {
    for (double u : {1.0, 0.8, 1.2}) {
      CAPTURE(u);
      const auto ex = c_of_u_numeric(*g, u, {0.2, 0.1, 0.05, 0.025});
      const double c = c_of_u(*g, u);
      for (std::size_t i = 1; i < ex.sequence.size(); ++i) {
        CHECK(std::abs(ex.sequence[i] - c) < std::abs(ex.sequence[i - 1] - c));
      }
      // O(r) error: halving r roughly halves the gap.
      const double ratio = (ex.sequence[3] - c) / (ex.sequence[2] - c);
      CHECK(ratio == doctest::Approx(0.5).epsilon(0.1));
      CHECK(std::abs(ex.extrapolated - c) < 0.1 * std::abs(ex.sequence[3] - c));
    }
  }
  const auto a = c_of_u_numeric(fib(), 1, {0.2, 0.1});
  const auto b = c_of_u_numeric(fib(), 1.0, {0.2, 0.1});
  CHECK(a.sequence == b.sequence);
  CHECK_THROWS_AS(c_of_u_numeric(fib(), 1, {0.1, 0.2}), DomainError);
  CHECK_THROWS_AS(c_of_u_numeric(fib(), 1, {0.1, 0.01}), DomainError);
}

TEST_CASE("D central check") {
  const auto at1 = D_central_check(fib(), 0.1, 1.0);
  const auto cn = c_of_u_numeric(fib(), 1.0, {0.2, 0.1});
  CHECK(at1.residual == doctest::Approx(cn.sequence[1] - c_of_u(fib(), 1.0)).epsilon(1e-9));
  for (const GeneratorSet* g : {&fib(), &mer()}) {
    const double v = 0.2;
    const auto r1 = D_central_check(*g, 0.1, std::exp(v * 0.1));
    const auto r2 = D_central_check(*g, 0.05, std::exp(v * 0.05));
    CHECK(r1.v == doctest::Approx(v));
    CHECK(std::abs(r2.residual) < std::abs(r1.residual));
    CHECK(r2.residual / r1.residual == doctest::Approx(0.5).epsilon(0.15));
  }
  CHECK_THROWS_AS(D_central_check(fib(), 0.1, std::exp(10.0)), DomainError);
}
