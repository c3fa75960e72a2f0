#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <map>

namespace lucasmon {

using BigInt = mpz_class;

// Limits on the work spent factoring one integer. Exhausting the rho budget
// raises FactorizationError instead of returning a partial answer.
struct FactorBudget {
  std::uint64_t trial_bound = 1'000'000;
  std::uint64_t rho_iterations = 4'000'000;
  int probable_prime_reps = 30;
};

struct PrimeFactorization {
  std::map<BigInt, unsigned> factors;

  [[nodiscard]] BigInt product() const;
  [[nodiscard]] bool empty() const { return factors.empty(); }
  [[nodiscard]] const BigInt& smallest_prime() const;
};

// Deterministic Miller-Rabin for 64-bit inputs.
bool is_prime_u64(std::uint64_t n);

// Deterministic below 2^64, BPSW plus `reps` Miller-Rabin rounds above.
bool is_prime(const BigInt& n, int reps = 30);

// Complete factorization of n >= 1. Every returned prime passes is_prime.
PrimeFactorization factorize(const BigInt& n, const FactorBudget& budget = {});

// Smallest prime factor of n >= 2. Returns as soon as trial division finds a
// prime, so only inputs without small factors pay for a full factorization.
BigInt smallest_prime_factor(const BigInt& n, const FactorBudget& budget = {});

// One nontrivial factor of an odd composite n, or 0 if the rho budget runs
// out. Exposed for testing.
BigInt pollard_brent(const BigInt& n, std::uint64_t max_iterations);

}  // namespace lucasmon
