#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "lucasmon/factor.hpp"

namespace lucasmon {

// The integer pair (P, Q) = (phi + phibar, phi * phibar) together with the
// real roots of x^2 - P x + Q. Construction enforces P >= 1, Q != 0,
// gcd(P, Q) = 1 and P^2 - 4Q > 0.
class LucasParams {
 public:
  static LucasParams make(std::int64_t p_sum, std::int64_t q_prod);

  static LucasParams fibonacci() { return make(1, -1); }
  static LucasParams pell() { return make(2, -1); }
  static LucasParams mersenne() { return make(3, 2); }

  [[nodiscard]] std::int64_t p_sum() const { return p_; }
  [[nodiscard]] std::int64_t q_prod() const { return q_; }
  [[nodiscard]] double phi() const { return phi_; }
  [[nodiscard]] double phibar() const { return phibar_; }
  [[nodiscard]] double log_phi() const { return log_phi_; }
  // log(phi - phibar), i.e. half the log of the discriminant.
  [[nodiscard]] double log_delta() const { return log_delta_; }
  // phibar / phi, signed; |root_ratio| < 1.
  [[nodiscard]] double root_ratio() const { return phibar_ / phi_; }

  friend bool operator==(const LucasParams& a, const LucasParams& b) {
    return a.p_ == b.p_ && a.q_ == b.q_;
  }

 private:
  LucasParams() = default;

  std::int64_t p_ = 0;
  std::int64_t q_ = 0;
  double phi_ = 0;
  double phibar_ = 0;
  double log_phi_ = 0;
  double log_delta_ = 0;
};

struct LucasTerm {
  int index = 0;
  BigInt value;
  double log_value = 0;  // from the closed form
};

// v_1 .. v_n_max via v_k = P v_{k-1} - Q v_{k-2}; element 0 holds v_0 = 0.
std::vector<BigInt> lucas_values(const LucasParams& params, int n_max);

// log v_n from the closed form n log phi - log(phi - phibar) + log(1 - (phibar/phi)^n).
double closed_form_log(const LucasParams& params, int n);

LucasTerm lucas_term(const LucasParams& params, int n);

// v_n with every prime that also divides some v_j, j < n, removed. All prime
// factors of the result are primitive divisors of v_n, and every primitive
// divisor of v_n divides it.
BigInt primitive_part(std::span<const BigInt> values, int n);
BigInt primitive_part(const LucasParams& params, int n);

// Exact existence test for a primitive divisor (no factoring involved).
bool has_primitive_divisor(const LucasParams& params, int n);

// Checks p | v_n and p does not divide v_1 .. v_{n-1} by running the
// recurrence modulo p.
bool is_primitive_divisor(const LucasParams& params, const BigInt& p, int n);

// Smallest primitive prime divisor of v_n, or nullopt if there is none.
// Throws FactorizationError when the primitive part cannot be factored within
// the budget; that case is never reported as "absent".
std::optional<BigInt> primitive_divisor(const LucasParams& params, int n,
                                        const FactorBudget& budget = {});

struct Generator {
  LucasTerm term;
  BigInt primitive_prime;
};

// F0 (indices <= 12 that have a primitive divisor) plus the tail v_n, n >= 13.
// Immutable after construction apart from an internally synchronized cache of
// tail witnesses and values; copies share that cache.
class GeneratorSet {
 public:
  static constexpr int kFirstTailIndex = 13;

  static GeneratorSet build(const LucasParams& params, const FactorBudget& budget = {});

  [[nodiscard]] const LucasParams& params() const { return params_; }
  [[nodiscard]] std::span<const Generator> f0() const { return f0_; }
  [[nodiscard]] int f0_size() const { return static_cast<int>(f0_.size()); }
  [[nodiscard]] double v0() const { return v0_; }

  // Generator with sequence index n (n in F0 or n >= 13); the witness of a
  // tail generator is computed on first use.
  [[nodiscard]] Generator generator(int n) const;
  [[nodiscard]] bool is_generator_index(int n) const;

  [[nodiscard]] BigInt value(int n) const;
  // log v_n for a generator index.
  [[nodiscard]] double log_value(int n) const;

  // Sequence index of the k-th smallest generator (k = 0, 1, ...).
  [[nodiscard]] int index_at(std::size_t k) const;
  // Logs of the `count` smallest generators, ascending.
  [[nodiscard]] std::vector<double> log_generators(std::size_t count) const;

  // (index, value) of every generator <= x, ascending.
  [[nodiscard]] std::vector<std::pair<int, std::uint64_t>> generators_upto(std::uint64_t x) const;

  [[nodiscard]] const FactorBudget& budget() const { return budget_; }

 private:
  struct TailCache;

  GeneratorSet(LucasParams params, FactorBudget budget);
  void ensure_values(int n_max) const;

  LucasParams params_;
  FactorBudget budget_;
  std::vector<Generator> f0_;
  double v0_ = 0;
  std::shared_ptr<TailCache> cache_;
};

// log of a positive big integer.
double log_bigint(const BigInt& n);

}  // namespace lucasmon
