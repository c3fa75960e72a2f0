#include "lucasmon/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <thread>

#include "lucasmon/errors.hpp"

namespace lucasmon {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr int kBlock = 4096;

struct Moments {
  double mean = 0;
  double variance = 0;
  double skewness = 0;
};

Moments moments(const std::vector<double>& v) {
  Moments m;
  if (v.empty()) return m;
  long double s = 0;
  for (double x : v) s += x;
  const long double mean = s / v.size();
  long double m2 = 0, m3 = 0;
  for (double x : v) {
    const long double d = x - mean;
    m2 += d * d;
    m3 += d * d * d;
  }
  m2 /= v.size();
  m3 /= v.size();
  m.mean = static_cast<double>(mean);
  m.variance = static_cast<double>(m2);
  m.skewness = m2 > 0 ? static_cast<double>(m3 / std::pow(m2, 1.5L)) : 0.0;
  return m;
}

bool normalizable(std::uint64_t x, Statistic kind) { return x >= (kind == Statistic::omega ? 3u : 16u); }

std::vector<int> raw_values(const GeneratorSet& gens, std::uint64_t x, Statistic kind,
                            const EnumConfig& cfg) {
  std::vector<int> out;
  for_each_element(
      gens, x,
      [&](const ElementView& e) { out.push_back(kind == Statistic::omega ? e.omega : e.Omega); },
      cfg);
  return out;
}

EmpiricalSummary summarize(const GeneratorSet& gens, std::uint64_t x, Statistic kind,
                           const EnumConfig& cfg, std::vector<double>* normalized) {
  if (x < 1) throw DomainError("summary needs x >= 1");
  const std::vector<int> raw = raw_values(gens, x, kind, cfg);
  EmpiricalSummary s;
  s.kind = kind;
  s.x = x;
  s.n_elements = raw.size();
  const Moments rm = moments(std::vector<double>(raw.begin(), raw.end()));
  s.raw_mean = rm.mean;
  s.raw_variance = rm.variance;
  if (!normalizable(x, kind)) {
    s.norm = {kNaN, kNaN};
    s.mean = s.variance = s.skewness = s.ks_distance_to_reference = kNaN;
    return s;
  }
  s.norm = normalization(constants_bundle(gens), static_cast<double>(x), kind);
  normalized->reserve(raw.size());
  for (int k : raw) normalized->push_back((k - s.norm.center) / s.norm.scale);
  const Moments nm = moments(*normalized);
  s.mean = nm.mean;
  s.variance = nm.variance;
  s.skewness = nm.skewness;
  return s;
}

}  // namespace

Normalization normalization(const ConstantsBundle& c, double x, Statistic kind) {
  const double L = std::log(x);
  if (kind == Statistic::omega) {
    if (!(L > 0)) throw DomainError("omega normalization needs x > 1");
    return {c.a1 * std::sqrt(L), std::sqrt(c.a2) * std::pow(L, 0.25)};
  }
  if (!(std::log(L) > 0)) throw DomainError("Omega normalization needs log log x > 0");
  return {c.a1 / 2 * std::sqrt(L) * std::log(L) + c.b1_proof * std::sqrt(L), c.b2 * std::sqrt(L)};
}

std::vector<double> normalized_values(const GeneratorSet& gens, std::uint64_t x, Statistic kind,
                                      const EnumConfig& cfg) {
  if (!normalizable(x, kind)) throw DomainError("normalization undefined at this x");
  std::vector<double> out;
  summarize(gens, x, kind, cfg, &out);
  return out;
}

EmpiricalSummary omega_summary(const GeneratorSet& gens, std::uint64_t x, const EnumConfig& cfg) {
  std::vector<double> z;
  EmpiricalSummary s = summarize(gens, x, Statistic::omega, cfg, &z);
  if (!z.empty()) s.ks_distance_to_reference = ks_statistic(std::move(z), standard_normal_cdf);
  return s;
}

EmpiricalSummary Omega_summary(const GeneratorSet& gens, std::uint64_t x,
                               const std::vector<double>& limit_sample, const EnumConfig& cfg) {
  std::vector<double> z;
  EmpiricalSummary s = summarize(gens, x, Statistic::Omega, cfg, &z);
  if (z.empty()) return s;
  if (limit_sample.empty()) {
    LimitLawConfig lc;
    lc.threads = cfg.threads;
    s.ks_distance_to_reference = ks_statistic(std::move(z), sample_limit_law(gens, lc).draws);
  } else {
    s.ks_distance_to_reference = ks_statistic(std::move(z), limit_sample);
  }
  return s;
}

double limit_law_tail_variance(const GeneratorSet& gens, int M) {
  if (M < gens.f0_size()) throw ConfigError("truncation_M must cover the finite generator set");
  const auto& p = gens.params();
  const double lphi = p.log_phi();
  const int J = gens.index_at(static_cast<std::size_t>(M));  // first omitted index
  // log m_j >= j log phi - c for j >= J.
  const double c = p.log_delta() - std::log1p(-std::pow(std::abs(p.root_ratio()), J));
  const double denom = (J - 1) * lphi - c;
  if (!(denom > 0)) return std::numeric_limits<double>::infinity();
  return 1 / (lphi * denom);
}

int default_truncation(const GeneratorSet& gens) {
  int M = std::max(gens.f0_size(), 1);
  while (limit_law_tail_variance(gens, M) >= 1e-4) M *= 2;
  int lo = M / 2, hi = M;
  while (hi - lo > 1) {
    const int mid = lo + (hi - lo) / 2;
    (mid >= gens.f0_size() && limit_law_tail_variance(gens, mid) < 1e-4 ? hi : lo) = mid;
  }
  return hi;
}

LimitLawSample sample_limit_law(const GeneratorSet& gens, const LimitLawConfig& cfg) {
  if (cfg.n_samples <= 0) throw ConfigError("n_samples must be positive");
  if (cfg.exact_terms < 0) throw ConfigError("exact_terms must be nonnegative");
  LimitLawSample out;
  out.config = cfg;
  const int M = cfg.truncation_M > 0 ? cfg.truncation_M : default_truncation(gens);
  out.tail_variance = limit_law_tail_variance(gens, M);
  if (!(out.tail_variance < 1e-4)) {
    throw ConfigError("truncation_M leaves a tail variance of " + std::to_string(out.tail_variance));
  }
  out.config.truncation_M = M;

  const std::vector<double> logs = gens.log_generators(static_cast<std::size_t>(M));
  const int exact = std::min(cfg.exact_terms, M);
  std::vector<double> inv(static_cast<std::size_t>(exact));
  for (int l = 0; l < exact; ++l) inv[l] = 1 / logs[l];
  long double rest = 0;
  long double total = 0;
  for (int l = 0; l < M; ++l) {
    const long double v = 1 / (static_cast<long double>(logs[l]) * logs[l]);
    total += v;
    if (l >= exact) rest += v;
  }
  out.variance = static_cast<double>(total);
  const double rest_sd = std::sqrt(static_cast<double>(rest));

  out.draws.assign(static_cast<std::size_t>(cfg.n_samples), 0.0);
  const int blocks = (cfg.n_samples + kBlock - 1) / kBlock;
  auto run_block = [&](int b) {
    std::seed_seq seq{static_cast<std::uint32_t>(cfg.rng_seed), static_cast<std::uint32_t>(cfg.rng_seed >> 32),
                      static_cast<std::uint32_t>(b)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal(0.0, 1.0);
    const int end = std::min(cfg.n_samples, (b + 1) * kBlock);
    for (int i = b * kBlock; i < end; ++i) {
      double sum = 0;
      for (int l = 0; l < exact; ++l) {
        // U in (0, 1), never 0.
        const double u = (static_cast<double>(rng() >> 11) + 0.5) * 0x1p-53;
        sum += (-std::log(u) - 1) * inv[l];
      }
      if (rest_sd > 0) sum += rest_sd * normal(rng);
      out.draws[static_cast<std::size_t>(i)] = sum;
    }
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(cfg.threads, static_cast<unsigned>(blocks)));
  if (threads == 1) {
    for (int b = 0; b < blocks; ++b) run_block(b);
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        for (int b = static_cast<int>(t); b < blocks; b += static_cast<int>(threads)) run_block(b);
      });
    }
    for (auto& th : pool) th.join();
  }
  return out;
}

double standard_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf) {
  if (sample.empty()) throw DomainError("ks_statistic: empty sample");
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max({d, f - i / n, (i + 1) / n - f});
  }
  return std::min(d, 1.0);
}

double ks_statistic(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw DomainError("ks_statistic: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0;
  while (i < a.size() || j < b.size()) {
    const double v = j == b.size() || (i < a.size() && a[i] <= b[j]) ? a[i] : b[j];
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  return d;
}

std::vector<MgfPoint> mgf_check(const GeneratorSet& gens, std::uint64_t x,
                                const std::vector<double>& t_grid, Statistic kind,
                                const EnumConfig& cfg) {
  const ConstantsBundle c = constants_bundle(gens);
  const double window = kind == Statistic::omega
                            ? 2.0
                            : c.v0 * std::sqrt(c.A) / (2 * std::sqrt(std::log(static_cast<double>(x))));
  for (double t : t_grid) {
    if (!(std::abs(t) <= window)) throw DomainError("mgf_check: t outside the admissible window");
  }
  const std::vector<double> z = normalized_values(gens, x, kind, cfg);
  std::vector<double> logs;
  if (kind == Statistic::Omega) {
    logs = gens.log_generators(static_cast<std::size_t>(default_truncation(gens)));
  }
  std::vector<MgfPoint> out;
  for (double t : t_grid) {
    long double acc = 0;
    for (double v : z) acc += std::exp(static_cast<long double>(t) * v);
    MgfPoint p;
    p.t = t;
    p.empirical = static_cast<double>(acc / z.size());
    if (kind == Statistic::omega) {
      p.reference = std::exp(t * t / 2);
    } else {
      // E exp(t (X - 1/lambda)) = exp(-t/lambda) / (1 - t/lambda).
      long double lg = 0;
      for (double lam : logs) lg += -t / lam - std::log1p(-t / lam);
      p.reference = static_cast<double>(std::exp(lg));
    }
    out.push_back(p);
  }
  return out;
}

}  // namespace lucasmon
