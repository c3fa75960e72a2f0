#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "lucasmon/analytic.hpp"
#include "lucasmon/monoid.hpp"

namespace lucasmon {

// Normalizing centre and scale for a statistic at x. For omega:
// a1 sqrt(L) and sqrt(a2) L^{1/4}; for Omega: (a1/2) sqrt(L) log L + b1 sqrt(L)
// and b2 sqrt(L), with L = log x.
struct Normalization {
  double center = 0;
  double scale = 1;
};

Normalization normalization(const ConstantsBundle& c, double x, Statistic kind);

struct EmpiricalSummary {
  Statistic kind = Statistic::omega;
  std::uint64_t x = 1;
  std::uint64_t n_elements = 0;
  double raw_mean = 0;
  double raw_variance = 0;
  Normalization norm;
  // Moments of the normalized statistic. NaN below x = 3 (omega) or 16 (Omega),
  // where the normalization is undefined.
  double mean = 0;
  double variance = 0;
  double skewness = 0;
  double ks_distance_to_reference = 0;
};

// Normalized statistic over all members n <= x, in enumeration order.
std::vector<double> normalized_values(const GeneratorSet& gens, std::uint64_t x, Statistic kind,
                                      const EnumConfig& cfg = {});

// Reference is the standard normal distribution.
EmpiricalSummary omega_summary(const GeneratorSet& gens, std::uint64_t x, const EnumConfig& cfg = {});

// Reference is the empirical distribution of `limit_sample`; empty means a
// default sample_limit_law draw.
EmpiricalSummary Omega_summary(const GeneratorSet& gens, std::uint64_t x,
                               const std::vector<double>& limit_sample = {},
                               const EnumConfig& cfg = {});

struct LimitLawConfig {
  // Generators in the sum; 0 picks the smallest M with tail variance < 1e-4.
  int truncation_M = 0;
  // Generators sampled term by term. The rest of the first M enter as a
  // normal variable with the same variance (their skewness is below 1e-5).
  // Set >= M to sample everything exactly.
  int exact_terms = 2000;
  int n_samples = 100'000;
  std::uint64_t rng_seed = 20240601;
  unsigned threads = 1;
};

struct LimitLawSample {
  std::vector<double> draws;
  LimitLawConfig config;  // with truncation_M resolved
  double variance = 0;     // sum over the first M generators of 1 / log^2 m
  double tail_variance = 0;  // bound on the same sum past M
};

// Upper bound on sum_{l > M} 1 / log^2 m_l.
double limit_law_tail_variance(const GeneratorSet& gens, int M);

// Smallest M with limit_law_tail_variance below 1e-4.
int default_truncation(const GeneratorSet& gens);

// Draws of sum_{l <= M} (X_l - 1/log m_l), X_l ~ Exp(rate log m_l). Draws are
// produced in blocks with their own seeded stream, so the output does not
// depend on the thread count.
LimitLawSample sample_limit_law(const GeneratorSet& gens, const LimitLawConfig& cfg = {});

double standard_normal_cdf(double z);

double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf);
double ks_statistic(std::vector<double> a, std::vector<double> b);

struct MgfPoint {
  double t = 0;
  double empirical = 0;  // mean of exp(t Z) over members
  double reference = 0;  // exp(t^2/2), or the limit-law mgf for Omega
};

// Omega mode needs |t| <= v0 sqrt(A) / (2 sqrt(log x)); omega mode |t| <= 2.
std::vector<MgfPoint> mgf_check(const GeneratorSet& gens, std::uint64_t x,
                                const std::vector<double>& t_grid,
                                Statistic kind = Statistic::omega, const EnumConfig& cfg = {});

}  // namespace lucasmon
