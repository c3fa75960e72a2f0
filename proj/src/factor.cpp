#include "lucasmon/factor.hpp"

#include <algorithm>
#include <array>
#include <memory>
#include <mutex>
#include <numeric>
#include <string>
#include <vector>

#include "lucasmon/errors.hpp"

namespace lucasmon {
namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mul_mod(u64 a, u64 b, u64 m) {
  return static_cast<u64>(static_cast<u128>(a) * b % m);
}

u64 pow_mod(u64 base, u64 exp, u64 m) {
  u64 result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mul_mod(result, base, m);
    base = mul_mod(base, base, m);
    exp >>= 1;
  }
  return result;
}

bool fits_u64(const BigInt& n) {
  return mpz_sizeinbase(n.get_mpz_t(), 2) <= 64;
}

u64 to_u64(const BigInt& n) {
  u64 value = 0;
  mpz_export(&value, nullptr, -1, sizeof(value), 0, 0, n.get_mpz_t());
  return value;
}

BigInt from_u64(u64 value) {
  BigInt out;
  mpz_import(out.get_mpz_t(), 1, -1, sizeof(value), 0, 0, &value);
  return out;
}

std::vector<std::uint32_t> sieve_primes(u64 bound) {
  std::vector<bool> composite(bound + 1, false);
  std::vector<std::uint32_t> primes;
  for (u64 i = 2; i <= bound; ++i) {
    if (composite[i]) continue;
    primes.push_back(static_cast<std::uint32_t>(i));
    for (u64 j = i * i; j <= bound; j += i) composite[j] = true;
  }
  return primes;
}

// Sieves are shared across calls and threads; each bound is built once.
const std::vector<std::uint32_t>& primes_upto(u64 bound) {
  static std::mutex mutex;
  static std::map<u64, std::shared_ptr<const std::vector<std::uint32_t>>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[bound];
  if (!slot) {
    slot = std::make_shared<const std::vector<std::uint32_t>>(sieve_primes(bound));
  }
  return *slot;
}

u64 pollard_brent_u64(u64 n, u64 max_iterations) {
  if (n % 2 == 0) return 2;
  constexpr u64 kBatch = 128;
  u64 spent = 0;
  for (u64 c = 1; spent < max_iterations; ++c) {
    auto step = [&](u64 v) {
      return static_cast<u64>((static_cast<u128>(mul_mod(v, v, n)) + c) % n);
    };
    u64 y = 2 + c;
    u64 x = y;
    u64 ys = y;
    u64 g = 1;
    u64 q = 1;
    for (u64 r = 1; g == 1 && spent < max_iterations; r <<= 1) {
      x = y;
      for (u64 i = 0; i < r; ++i) y = step(y);
      for (u64 k = 0; k < r && g == 1; k += kBatch) {
        ys = y;
        const u64 limit = std::min(kBatch, r - k);
        for (u64 i = 0; i < limit; ++i) {
          y = step(y);
          q = mul_mod(q, x > y ? x - y : y - x, n);
        }
        spent += limit;
        g = std::gcd(q, n);
      }
    }
    if (g == n) {
      // Batch overshot; replay one step at a time from the saved point.
      do {
        ys = step(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != 1 && g != n) return g;
  }
  return 0;
}

BigInt pollard_brent_big(const BigInt& n, u64 max_iterations) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  constexpr u64 kBatch = 128;
  u64 spent = 0;
  BigInt x, y, ys, q, g, diff;
  for (unsigned long c = 1; spent < max_iterations; ++c) {
    auto step = [&](BigInt& v) {
      v = v * v + c;
      mpz_mod(v.get_mpz_t(), v.get_mpz_t(), n.get_mpz_t());
    };
    y = 2 + c;
    g = 1;
    q = 1;
    for (u64 r = 1; g == 1 && spent < max_iterations; r <<= 1) {
      x = y;
      for (u64 i = 0; i < r; ++i) step(y);
      for (u64 k = 0; k < r && g == 1; k += kBatch) {
        ys = y;
        const u64 limit = std::min(kBatch, r - k);
        for (u64 i = 0; i < limit; ++i) {
          step(y);
          diff = x - y;
          q *= diff;
          mpz_mod(q.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
        }
        spent += limit;
        mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
      }
    }
    if (g == n) {
      do {
        step(ys);
        diff = x - ys;
        mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
      } while (g == 1);
    }
    if (g != 1 && g != n) return g;
  }
  return 0;
}

void split(const BigInt& n, const FactorBudget& budget, PrimeFactorization& out) {
  if (n == 1) return;
  if (is_prime(n, budget.probable_prime_reps)) {
    out.factors[n] += 1;
    return;
  }
  // Perfect powers defeat rho; peel them off first.
  const bool power = mpz_perfect_power_p(n.get_mpz_t()) != 0;
  for (unsigned long k = 2; power && k <= mpz_sizeinbase(n.get_mpz_t(), 2); ++k) {
    BigInt root;
    if (mpz_root(root.get_mpz_t(), n.get_mpz_t(), k) != 0) {
      PrimeFactorization inner;
      split(root, budget, inner);
      for (const auto& [p, e] : inner.factors) out.factors[p] += e * static_cast<unsigned>(k);
      return;
    }
  }
  const BigInt divisor = pollard_brent(n, budget.rho_iterations);
  if (divisor == 0) {
    throw FactorizationError("rho budget exhausted on a " +
                             std::to_string(mpz_sizeinbase(n.get_mpz_t(), 10)) +
                             "-digit composite");
  }
  split(divisor, budget, out);
  split(BigInt(n / divisor), budget, out);
}

}  // namespace

BigInt PrimeFactorization::product() const {
  BigInt result = 1;
  for (const auto& [p, e] : factors) {
    BigInt power;
    mpz_pow_ui(power.get_mpz_t(), p.get_mpz_t(), e);
    result *= power;
  }
  return result;
}

const BigInt& PrimeFactorization::smallest_prime() const {
  if (factors.empty()) throw DomainError("empty factorization has no smallest prime");
  return factors.begin()->first;
}

bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ULL, 3ULL, 5ULL, 7ULL, 11ULL, 13ULL, 17ULL, 19ULL, 23ULL, 29ULL, 31ULL, 37ULL}) {
    if (n % p == 0) return n == p;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // Jaeschke/Sinclair bases: deterministic for all n < 2^64.
  for (u64 a : {2ULL, 325ULL, 9375ULL, 28178ULL, 450775ULL, 9780504ULL, 1795265022ULL}) {
    a %= n;
    if (a == 0) continue;
    u64 x = pow_mod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < s; ++i) {
      x = mul_mod(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

bool is_prime(const BigInt& n, int reps) {
  if (n < 2) return false;
  if (fits_u64(n)) return is_prime_u64(to_u64(n));
  return mpz_probab_prime_p(n.get_mpz_t(), reps) > 0;
}

BigInt pollard_brent(const BigInt& n, std::uint64_t max_iterations) {
  if (fits_u64(n)) return from_u64(pollard_brent_u64(to_u64(n), max_iterations));
  return pollard_brent_big(n, max_iterations);
}

PrimeFactorization factorize(const BigInt& n, const FactorBudget& budget) {
  if (n < 1) throw DomainError("factorize: input must be >= 1");
  PrimeFactorization out;
  BigInt rest = n;
  const auto& primes = primes_upto(budget.trial_bound);
  for (std::uint32_t p : primes) {
    if (rest == 1) break;
    if (BigInt(p) * p > rest) break;
    if (mpz_divisible_ui_p(rest.get_mpz_t(), p) == 0) continue;
    unsigned e = 0;
    do {
      mpz_divexact_ui(rest.get_mpz_t(), rest.get_mpz_t(), p);
      ++e;
    } while (mpz_divisible_ui_p(rest.get_mpz_t(), p) != 0);
    out.factors[BigInt(p)] += e;
  }
  if (rest == 1) return out;
  const BigInt bound = budget.trial_bound;
  if (rest <= bound * bound) {
    out.factors[rest] += 1;
    return out;
  }
  split(rest, budget, out);
  return out;
}

BigInt smallest_prime_factor(const BigInt& n, const FactorBudget& budget) {
  if (n < 2) throw DomainError("smallest_prime_factor: input must be >= 2");
  for (std::uint32_t p : primes_upto(budget.trial_bound)) {
    if (BigInt(p) * p > n) return n;
    if (mpz_divisible_ui_p(n.get_mpz_t(), p) != 0) return BigInt(p);
  }
  return factorize(n, budget).smallest_prime();
}

}  // namespace lucasmon
