#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "lucasmon/lucas.hpp"

namespace lucasmon {

// Largest bound accepted by the enumerator; products stay inside uint64.
inline constexpr std::uint64_t kMaxBound = std::uint64_t{1} << 63;

// Multiset of generator indices, ascending, with multiplicities.
struct Factorization {
  std::vector<std::pair<int, unsigned>> parts;

  [[nodiscard]] int omega() const { return static_cast<int>(parts.size()); }
  [[nodiscard]] int Omega() const;
  // Indices repeated by multiplicity, e.g. {3,3,3,3} for 16 in the Fibonacci monoid.
  [[nodiscard]] std::vector<int> indices() const;

  friend bool operator==(const Factorization&, const Factorization&) = default;
};

struct MonoidElement {
  std::uint64_t value = 1;
  Factorization factorization;
};

enum class Statistic { omega, Omega };
enum class Weight { sharp, smoothed };

struct EnumConfig {
  std::uint64_t max_elements = 100'000'000;
  unsigned threads = 1;
};

// Callback view used by the streaming enumerator. `parts` is only valid
// during the call.
struct ElementView {
  std::uint64_t value;
  int omega;
  int Omega;
  const std::vector<std::pair<int, unsigned>>& parts;
};

// Depth-first walk over every element <= x in no particular order. Throws
// ResourceError once more than cfg.max_elements elements have been visited.
void for_each_element(const GeneratorSet& gens, std::uint64_t x,
                      const std::function<void(const ElementView&)>& visit,
                      const EnumConfig& cfg = {});

// Every element <= x, ascending by value.
std::vector<MonoidElement> enumerate_upto(const GeneratorSet& gens, std::uint64_t x,
                                          const EnumConfig& cfg = {});

std::uint64_t count_upto(const GeneratorSet& gens, std::uint64_t x, const EnumConfig& cfg = {});

bool contains(const GeneratorSet& gens, std::uint64_t n);

// The unique factorization of a member; MembershipError otherwise.
Factorization factorize_element(const GeneratorSet& gens, std::uint64_t n);

// Exhaustive search over all multisets of generators with product n. For a
// free monoid this has at most one entry; used to check that claim.
std::vector<Factorization> all_factorizations(const GeneratorSet& gens, std::uint64_t n);

// Sum over members n <= x of u^stat(n) * w(n), with w = 1 or 1 - n/x.
double weighted_sum(const GeneratorSet& gens, std::uint64_t x, double u, Statistic stat,
                    Weight weight, const EnumConfig& cfg = {});

struct Histogram {
  Statistic kind = Statistic::omega;
  std::uint64_t x = 1;
  std::map<int, std::uint64_t> counts;

  [[nodiscard]] std::uint64_t total() const;
};

Histogram histogram(const GeneratorSet& gens, std::uint64_t x, Statistic kind,
                    const EnumConfig& cfg = {});

}  // namespace lucasmon
