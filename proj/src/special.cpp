#include "lucasmon/special.hpp"

#include <array>
#include <cmath>
#include <string>

#include "lucasmon/errors.hpp"

namespace lucasmon {
namespace {

// B_{2j} / (2j)! for j = 1..12.
constexpr std::array<double, 12> kBernoulliOverFactorial = {
    8.3333333333333333333e-2,  -1.3888888888888888889e-3, 3.3068783068783068783e-5,
    -8.2671957671957671958e-7, 2.0876756987868098979e-8,  -5.2841901386874931849e-10,
    1.3382536530684678833e-11, -3.3896802963225828668e-13, 8.5860620562778445641e-15,
    -2.1748686985580618730e-16, 5.5090028283602295152e-18, -1.3954464685812523341e-19,
};

// B_{2k} for the Stirling series.
constexpr std::array<double, 10> kBernoulli = {
    1.0 / 6.0,          -1.0 / 30.0,         1.0 / 42.0,          -1.0 / 30.0,
    5.0 / 66.0,         -691.0 / 2730.0,     7.0 / 6.0,           -3617.0 / 510.0,
    43867.0 / 798.0,    -174611.0 / 330.0,
};

bool is_nonpositive_integer(cplx z) {
  return z.imag() == 0 && z.real() <= 0 && std::floor(z.real()) == z.real();
}

}  // namespace

cplx clog1p(cplx z) {
  if (std::abs(z) < 1e-3) {
    // Alternating series; seven terms leave an error below 1e-24.
    cplx term = z;
    cplx sum = 0;
    for (int k = 1; k <= 7; ++k) {
      sum += (k % 2 == 1 ? 1.0 : -1.0) * term / static_cast<double>(k);
      term *= z;
    }
    return sum;
  }
  return std::log(1.0 + z);
}

cplx cexpm1(cplx z) {
  const double x = z.real();
  const double y = z.imag();
  const double s = std::sin(y / 2);
  return {std::expm1(x) * std::cos(y) - 2 * s * s, std::exp(x) * std::sin(y)};
}

cplx hurwitz_zeta(cplx s, cplx alpha, const Precision& prec) {
  if (s == cplx(1, 0)) throw PoleError("hurwitz_zeta: pole at s = 1");
  if (is_nonpositive_integer(alpha)) throw DomainError("hurwitz_zeta: alpha is a nonpositive integer");
  const int order = std::min<int>(prec.em_order, static_cast<int>(kBernoulliOverFactorial.size()));

  // Shift so that |alpha + N| dominates |s| and the Bernoulli tail is tiny.
  double shift = 20 + 2 * std::abs(s) - alpha.real();
  int n_shift = static_cast<int>(std::ceil(std::max(shift, 0.0)));
  for (int attempt = 0; attempt < 8; ++attempt) {
    if (n_shift > prec.max_series_terms) {
      throw ConfigError("hurwitz_zeta: shift exceeds max_series_terms");
    }
    // Roundoff is set by the largest summand, so convergence is judged
    // against that rather than against a possibly tiny result.
    cplx sum = 0;
    double magnitude = 0;
    for (int k = 0; k < n_shift; ++k) {
      const cplx term = std::exp(-s * std::log(alpha + static_cast<double>(k)));
      magnitude = std::max(magnitude, std::abs(term));
      sum += term;
    }
    const cplx a = alpha + static_cast<double>(n_shift);
    const cplx log_a = std::log(a);
    const cplx a_pow = std::exp(-s * log_a);  // a^{-s}
    const cplx integral = a * a_pow / (s - 1.0);
    magnitude = std::max(magnitude, std::abs(integral));
    sum += integral + 0.5 * a_pow;
    // Correction j: B_{2j}/(2j)! * s(s+1)...(s+2j-2) * a^{-s-2j+1}.
    cplx rising = s;
    cplx power = a_pow / a;
    const cplx inv_a2 = 1.0 / (a * a);
    cplx last = 0;
    for (int j = 0; j < order; ++j) {
      last = kBernoulliOverFactorial[static_cast<std::size_t>(j)] * rising * power;
      sum += last;
      rising *= (s + static_cast<double>(2 * j + 1)) * (s + static_cast<double>(2 * j + 2));
      power *= inv_a2;
    }
    if (std::abs(last) <= prec.target_rel_err * std::max(std::abs(sum), magnitude)) return sum;
    n_shift = 2 * n_shift + 10;
  }
  throw ConfigError("hurwitz_zeta: Euler-Maclaurin corrections did not converge");
}

cplx riemann_zeta(cplx s, const Precision& prec) { return hurwitz_zeta(s, 1.0, prec); }

cplx log_gamma(cplx z) {
  if (is_nonpositive_integer(z)) throw PoleError("log_gamma: pole at a nonpositive integer");
  // The libm routine avoids the cancellation near the zeros at 1 and 2.
  if (z.imag() == 0 && z.real() > 0) return std::lgamma(z.real());
  // log Gamma(z) = log Gamma(z + n) - sum_k log(z + k). The sum is taken as
  // the log of a running product, with the imaginary part fixed up from the
  // summed arguments so the branch matches the sum of principal logs.
  double log_abs = 0;
  double arg_sum = 0;
  cplx product = 1;
  auto fold = [&] {
    log_abs += std::log(std::abs(product));
    product /= std::abs(product);
  };
  while (z.real() < 15) {
    product *= z;
    arg_sum += std::arg(z);
    if (std::abs(product) > 1e100) fold();
    z += 1.0;
  }
  fold();
  const double turns = std::round((arg_sum - std::arg(product)) / (2 * kPi));
  const cplx shift_log(log_abs, std::arg(product) + 2 * kPi * turns);
  const cplx inv = 1.0 / z;
  const cplx inv2 = inv * inv;
  cplx series = 0;
  cplx power = inv;
  for (std::size_t k = 0; k < kBernoulli.size(); ++k) {
    const double two_k = 2.0 * static_cast<double>(k + 1);
    series += kBernoulli[k] / (two_k * (two_k - 1)) * power;
    power *= inv2;
  }
  return (z - 0.5) * std::log(z) - z + 0.5 * kLog2Pi + series - shift_log;
}

double digamma(double x) {
  if (x <= 0 && std::floor(x) == x) throw PoleError("digamma: pole at a nonpositive integer");
  if (x < 0) return digamma(1 - x) - kPi / std::tan(kPi * x);
  double acc = 0;
  while (x < 12) {
    acc -= 1 / x;
    x += 1;
  }
  const double inv2 = 1 / (x * x);
  // psi(x) ~ log x - 1/(2x) - sum B_{2k} / (2k x^{2k})
  double series = 0;
  double power = inv2;
  for (std::size_t k = 0; k < 8; ++k) {
    series += kBernoulli[k] / (2.0 * static_cast<double>(k + 1)) * power;
    power *= inv2;
  }
  return acc + std::log(x) - 0.5 / x - series;
}

cplx polylog(cplx order, cplx w, const Precision& prec) {
  const double r = std::abs(w);
  if (r >= 1) throw DomainError("polylog: requires |w| < 1");
  if (r == 0) return 0;
  cplx sum = 0;
  cplx power = 1;
  for (int j = 1; j <= prec.max_series_terms; ++j) {
    power *= w;
    const cplx term = power * std::exp(-order * std::log(static_cast<double>(j)));
    sum += term;
    // Remaining terms are bounded by a geometric series once j^-Re(order) stops growing.
    const double bound = std::abs(term) * r / (1 - r);
    if (j > 2 * std::abs(order) + 2 && bound <= prec.target_rel_err * std::abs(sum)) return sum;
  }
  throw ConfigError("polylog: series did not converge within max_series_terms (|w| too close to 1)");
}

}  // namespace lucasmon
