#include "lucasmon/lucas.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <string>

#include "lucasmon/errors.hpp"

namespace lucasmon {

LucasParams LucasParams::make(std::int64_t p_sum, std::int64_t q_prod) {
  if (p_sum <= 0) throw DomainError("P must be positive, got " + std::to_string(p_sum));
  if (q_prod == 0) throw DomainError("Q must be nonzero");
  if (std::gcd(p_sum, q_prod) != 1) {
    throw DomainError("P and Q must be coprime, got gcd " + std::to_string(std::gcd(p_sum, q_prod)));
  }
  const __int128 disc = static_cast<__int128>(p_sum) * p_sum - static_cast<__int128>(4) * q_prod;
  if (disc <= 0) throw DomainError("P^2 - 4Q must be positive");

  LucasParams out;
  out.p_ = p_sum;
  out.q_ = q_prod;
  const long double sqrt_disc = std::sqrt(static_cast<long double>(disc));
  const long double phi = (static_cast<long double>(p_sum) + sqrt_disc) / 2;
  // phibar from the product, not the difference: P - sqrt(D) cancels badly.
  const long double phibar = static_cast<long double>(q_prod) / phi;
  out.phi_ = static_cast<double>(phi);
  out.phibar_ = static_cast<double>(phibar);
  out.log_phi_ = static_cast<double>(std::log(phi));
  out.log_delta_ = static_cast<double>(std::log(static_cast<long double>(disc)) / 2);

  if (!(out.phi_ > std::abs(out.phibar_) && out.phibar_ != 0)) {
    throw NumericalError("root extraction violated phi > |phibar| > 0");
  }
  const double scale = std::max(1.0, std::abs(static_cast<double>(q_prod)));
  if (std::abs(static_cast<double>(phi + phibar) - static_cast<double>(p_sum)) > 1e-12 * out.phi_ ||
      std::abs(static_cast<double>(phi * phibar) - static_cast<double>(q_prod)) > 1e-12 * scale) {
    throw NumericalError("root extraction does not reproduce (P, Q)");
  }
  return out;
}

std::vector<BigInt> lucas_values(const LucasParams& params, int n_max) {
  std::vector<BigInt> v(static_cast<std::size_t>(std::max(n_max, 1)) + 1);
  v[0] = 0;
  v[1] = 1;
  const BigInt p = static_cast<long>(params.p_sum());
  const BigInt q = static_cast<long>(params.q_prod());
  for (int k = 2; k <= n_max; ++k) v[k] = p * v[k - 1] - q * v[k - 2];
  v.resize(static_cast<std::size_t>(std::max(n_max, 0)) + 1);
  return v;
}

double closed_form_log(const LucasParams& params, int n) {
  if (n < 1) throw DomainError("closed_form_log: n must be >= 1");
  const double correction = std::log1p(-std::pow(params.root_ratio(), n));
  return n * params.log_phi() - params.log_delta() + correction;
}

double log_bigint(const BigInt& n) {
  if (n <= 0) throw DomainError("log_bigint: argument must be positive");
  long exp = 0;
  const double mant = mpz_get_d_2exp(&exp, n.get_mpz_t());
  return std::log(mant) + static_cast<double>(exp) * std::log(2.0);
}

LucasTerm lucas_term(const LucasParams& params, int n) {
  if (n < 1) throw DomainError("lucas_term: n must be >= 1, got " + std::to_string(n));
  LucasTerm term;
  term.index = n;
  term.value = std::move(lucas_values(params, n)[n]);
  term.log_value = closed_form_log(params, n);
  const double exact = log_bigint(term.value);
  if (std::abs(exact - term.log_value) > 1e-9 * std::max(1.0, exact)) {
    throw NumericalError("closed form disagrees with recurrence at n = " + std::to_string(n));
  }
  return term;
}

BigInt primitive_part(std::span<const BigInt> values, int n) {
  if (n < 1 || static_cast<std::size_t>(n) >= values.size()) {
    throw DomainError("primitive_part: index out of range");
  }
  BigInt w = values[n];
  BigInt g;
  for (int j = 1; j < n && w > 1; ++j) {
    for (;;) {
      mpz_gcd(g.get_mpz_t(), w.get_mpz_t(), values[j].get_mpz_t());
      if (g == 1) break;
      mpz_divexact(w.get_mpz_t(), w.get_mpz_t(), g.get_mpz_t());
    }
  }
  return w;
}

BigInt primitive_part(const LucasParams& params, int n) {
  if (n < 1) throw DomainError("primitive_part: n must be >= 1");
  const auto values = lucas_values(params, n);
  return primitive_part(values, n);
}

bool has_primitive_divisor(const LucasParams& params, int n) {
  return primitive_part(params, n) > 1;
}

bool is_primitive_divisor(const LucasParams& params, const BigInt& p, int n) {
  if (n < 1) throw DomainError("is_primitive_divisor: n must be >= 1");
  if (!is_prime(p)) return false;
  BigInt pp = static_cast<long>(params.p_sum());
  BigInt qq = static_cast<long>(params.q_prod());
  pp %= p;
  qq %= p;
  BigInt prev = 0;
  BigInt cur = 1;  // v_1
  for (int j = 1; j < n; ++j) {
    if (cur == 0) return false;
    BigInt next = pp * cur - qq * prev;
    mpz_mod(next.get_mpz_t(), next.get_mpz_t(), p.get_mpz_t());
    prev = std::move(cur);
    cur = std::move(next);
  }
  return cur == 0;
}

std::optional<BigInt> primitive_divisor(const LucasParams& params, int n, const FactorBudget& budget) {
  const BigInt w = primitive_part(params, n);
  if (w == 1) return std::nullopt;
  return smallest_prime_factor(w, budget);
}

struct GeneratorSet::TailCache {
  std::mutex mutex;
  std::vector<BigInt> values;
  std::map<int, BigInt> witnesses;
};

GeneratorSet::GeneratorSet(LucasParams params, FactorBudget budget)
    : params_(params), budget_(budget), cache_(std::make_shared<TailCache>()) {}

GeneratorSet GeneratorSet::build(const LucasParams& params, const FactorBudget& budget) {
  GeneratorSet set(params, budget);
  set.ensure_values(64);
  const auto& values = set.cache_->values;
  double v0 = kFirstTailIndex * params.log_phi() - params.log_delta();
  for (int n = 1; n < kFirstTailIndex; ++n) {
    const BigInt w = primitive_part(std::span<const BigInt>(values), n);
    if (w == 1) continue;
    Generator g;
    g.term = lucas_term(params, n);
    g.primitive_prime = smallest_prime_factor(w, budget);
    v0 = std::min(v0, log_bigint(g.term.value));
    set.f0_.push_back(std::move(g));
  }
  set.v0_ = v0;
  return set;
}

void GeneratorSet::ensure_values(int n_max) const {
  std::lock_guard lock(cache_->mutex);
  if (static_cast<int>(cache_->values.size()) > n_max) return;
  int target = std::max(n_max, 2 * static_cast<int>(cache_->values.size()));
  cache_->values = lucas_values(params_, target);
}

bool GeneratorSet::is_generator_index(int n) const {
  if (n >= kFirstTailIndex) return true;
  return std::any_of(f0_.begin(), f0_.end(), [n](const Generator& g) { return g.term.index == n; });
}

BigInt GeneratorSet::value(int n) const {
  if (n < 1) throw DomainError("value: index must be >= 1");
  ensure_values(n);
  std::lock_guard lock(cache_->mutex);
  return cache_->values[n];
}

double GeneratorSet::log_value(int n) const {
  if (!is_generator_index(n)) throw DomainError("index " + std::to_string(n) + " is not a generator");
  return closed_form_log(params_, n);
}

Generator GeneratorSet::generator(int n) const {
  if (!is_generator_index(n)) throw DomainError("index " + std::to_string(n) + " is not a generator");
  for (const auto& g : f0_) {
    if (g.term.index == n) return g;
  }
  {
    std::lock_guard lock(cache_->mutex);
    auto it = cache_->witnesses.find(n);
    if (it != cache_->witnesses.end()) {
      Generator g;
      g.term.index = n;
      g.term.value = cache_->values[n];
      g.term.log_value = closed_form_log(params_, n);
      g.primitive_prime = it->second;
      return g;
    }
  }
  ensure_values(n);
  BigInt w;
  {
    std::lock_guard lock(cache_->mutex);
    w = primitive_part(std::span<const BigInt>(cache_->values).first(static_cast<std::size_t>(n) + 1), n);
  }
  if (w == 1) {
    throw NumericalError("tail term " + std::to_string(n) + " has no primitive divisor");
  }
  // Factoring runs unlocked; two racing threads compute the same witness.
  BigInt witness = smallest_prime_factor(w, budget_);
  Generator g;
  g.term = lucas_term(params_, n);
  g.primitive_prime = witness;
  std::lock_guard lock(cache_->mutex);
  cache_->witnesses.emplace(n, std::move(witness));
  return g;
}

int GeneratorSet::index_at(std::size_t k) const {
  if (k < f0_.size()) return f0_[k].term.index;
  return kFirstTailIndex + static_cast<int>(k - f0_.size());
}

std::vector<double> GeneratorSet::log_generators(std::size_t count) const {
  std::vector<double> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) out.push_back(closed_form_log(params_, index_at(k)));
  return out;
}

std::vector<std::pair<int, std::uint64_t>> GeneratorSet::generators_upto(std::uint64_t x) const {
  std::vector<std::pair<int, std::uint64_t>> out;
  const BigInt bound = x;
  for (std::size_t k = 0;; ++k) {
    const int n = index_at(k);
    const BigInt v = value(n);
    if (v > bound) break;
    out.emplace_back(n, v.get_ui());
  }
  return out;
}

}  // namespace lucasmon
