#include "lucasmon/monoid.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <string>
#include <thread>
#include <unordered_map>

#include "lucasmon/errors.hpp"

namespace lucasmon {
namespace {

using GenList = std::vector<std::pair<int, std::uint64_t>>;

void check_bound(std::uint64_t x) {
  if (x < 1) throw DomainError("bound must be >= 1");
  if (x > kMaxBound) throw DomainError("bound exceeds 2^63");
}

class CapCounter {
 public:
  explicit CapCounter(std::uint64_t cap) : cap_(cap) {}

  void add(std::uint64_t n) {
    if (shared_.fetch_add(n, std::memory_order_relaxed) + n > cap_) {
      throw ResourceError("enumeration exceeds the cap of " + std::to_string(cap_) + " elements");
    }
  }

 private:
  std::uint64_t cap_;
  std::atomic<std::uint64_t> shared_{0};
};

// DFS over generators in nondecreasing index order. Each product is reached
// along exactly one path because the exponents are chosen generator by
// generator.
template <class Visit>
class Walker {
 public:
  Walker(const GenList& gens, std::uint64_t x, Visit& visit, CapCounter& cap)
      : gens_(gens), x_(x), visit_(visit), cap_(cap) {}

  void root() { emit(1, 0, 0); }

  void branch(std::size_t i, std::uint64_t prod, int omega, int big_omega) {
    const std::uint64_t g = gens_[i].second;
    std::uint64_t p = prod * g;
    stack_.emplace_back(gens_[i].first, 0);
    for (unsigned e = 1;; ++e) {
      stack_.back().second = e;
      emit(p, omega + 1, big_omega + static_cast<int>(e));
      descend(i + 1, p, omega + 1, big_omega + static_cast<int>(e));
      if (p > x_ / g) break;
      p *= g;
    }
    stack_.pop_back();
  }

  void descend(std::size_t start, std::uint64_t prod, int omega, int big_omega) {
    for (std::size_t i = start; i < gens_.size(); ++i) {
      if (prod > x_ / gens_[i].second) break;
      branch(i, prod, omega, big_omega);
    }
  }

  void flush() {
    cap_.add(pending_);
    pending_ = 0;
  }

 private:
  static constexpr std::uint64_t kFlushEvery = 1 << 14;

  void emit(std::uint64_t value, int omega, int big_omega) {
    visit_(ElementView{value, omega, big_omega, stack_});
    if (++pending_ == kFlushEvery) flush();
  }

  const GenList& gens_;
  std::uint64_t x_;
  Visit& visit_;
  CapCounter& cap_;
  std::vector<std::pair<int, unsigned>> stack_;
  std::uint64_t pending_ = 0;
};

// Runs the walk with subtrees keyed by their first generator handed out to
// worker threads. Each worker owns a State; states are returned for merging.
template <class State, class Visit>
std::vector<State> parallel_walk(const GeneratorSet& gens, std::uint64_t x, const EnumConfig& cfg,
                                 Visit visit) {
  check_bound(x);
  const GenList list = gens.generators_upto(x);
  CapCounter cap(cfg.max_elements);
  const unsigned workers = std::max(1u, std::min<unsigned>(cfg.threads, std::max<std::size_t>(list.size(), 1)));
  std::vector<State> states(workers);
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(workers);

  auto work = [&](unsigned w) {
    try {
      auto bound_visit = [&](const ElementView& e) { visit(states[w], e); };
      Walker<decltype(bound_visit)> walker(list, x, bound_visit, cap);
      if (w == 0) walker.root();
      for (std::size_t i = next++; i < list.size(); i = next++) walker.branch(i, 1, 0, 0);
      walker.flush();
    } catch (...) {
      errors[w] = std::current_exception();
      next = list.size();
    }
  };

  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return states;
}

// Shortest-first membership search. memo maps n to the position of the
// smallest generator m with m | n and n/m a member, or -1 for non-members.
class MembershipSearch {
 public:
  MembershipSearch(const GeneratorSet& gens, std::uint64_t n) : list_(gens.generators_upto(n)) {}

  long first_factor(std::uint64_t n) {
    if (n == 1) return static_cast<long>(list_.size());
    if (auto it = memo_.find(n); it != memo_.end()) return it->second;
    long found = -1;
    for (std::size_t i = 0; i < list_.size() && list_[i].second <= n; ++i) {
      if (n % list_[i].second == 0 && first_factor(n / list_[i].second) >= 0) {
        found = static_cast<long>(i);
        break;
      }
    }
    memo_.emplace(n, found);
    return found;
  }

  const GenList& list() const { return list_; }

 private:
  GenList list_;
  std::unordered_map<std::uint64_t, long> memo_;
};

}  // namespace

int Factorization::Omega() const {
  int total = 0;
  for (const auto& [index, mult] : parts) total += static_cast<int>(mult);
  return total;
}

std::vector<int> Factorization::indices() const {
  std::vector<int> out;
  for (const auto& [index, mult] : parts) out.insert(out.end(), mult, index);
  return out;
}

std::uint64_t Histogram::total() const {
  std::uint64_t sum = 0;
  for (const auto& [k, c] : counts) sum += c;
  return sum;
}

void for_each_element(const GeneratorSet& gens, std::uint64_t x,
                      const std::function<void(const ElementView&)>& visit, const EnumConfig& cfg) {
  EnumConfig serial = cfg;
  serial.threads = 1;
  struct None {};
  parallel_walk<None>(gens, x, serial, [&](None&, const ElementView& e) { visit(e); });
}

std::vector<MonoidElement> enumerate_upto(const GeneratorSet& gens, std::uint64_t x,
                                          const EnumConfig& cfg) {
  std::vector<MonoidElement> out;
  for_each_element(
      gens, x,
      [&](const ElementView& e) {
        out.push_back(MonoidElement{e.value, Factorization{e.parts}});
      },
      cfg);
  std::sort(out.begin(), out.end(),
            [](const MonoidElement& a, const MonoidElement& b) { return a.value < b.value; });
  return out;
}

std::uint64_t count_upto(const GeneratorSet& gens, std::uint64_t x, const EnumConfig& cfg) {
  auto states = parallel_walk<std::uint64_t>(gens, x, cfg,
                                             [](std::uint64_t& n, const ElementView&) { ++n; });
  std::uint64_t total = 0;
  for (auto n : states) total += n;
  return total;
}

bool contains(const GeneratorSet& gens, std::uint64_t n) {
  if (n < 1) throw DomainError("contains: n must be >= 1");
  MembershipSearch search(gens, n);
  return search.first_factor(n) >= 0;
}

Factorization factorize_element(const GeneratorSet& gens, std::uint64_t n) {
  if (n < 1) throw DomainError("factorize_element: n must be >= 1");
  MembershipSearch search(gens, n);
  Factorization out;
  while (n > 1) {
    const long pos = search.first_factor(n);
    if (pos < 0) throw MembershipError(std::to_string(n) + " is not in the monoid");
    const auto& [index, value] = search.list()[static_cast<std::size_t>(pos)];
    if (!out.parts.empty() && out.parts.back().first == index) {
      ++out.parts.back().second;
    } else {
      out.parts.emplace_back(index, 1);
    }
    n /= value;
  }
  return out;
}

std::vector<Factorization> all_factorizations(const GeneratorSet& gens, std::uint64_t n) {
  if (n < 1) throw DomainError("all_factorizations: n must be >= 1");
  const GenList list = gens.generators_upto(n);
  std::vector<Factorization> found;
  std::vector<int> chosen;
  std::function<void(std::uint64_t, std::size_t)> search = [&](std::uint64_t rest, std::size_t start) {
    if (rest == 1) {
      Factorization f;
      for (int index : chosen) {
        if (!f.parts.empty() && f.parts.back().first == index) {
          ++f.parts.back().second;
        } else {
          f.parts.emplace_back(index, 1);
        }
      }
      found.push_back(std::move(f));
      return;
    }
    for (std::size_t i = start; i < list.size() && list[i].second <= rest; ++i) {
      if (rest % list[i].second != 0) continue;
      chosen.push_back(list[i].first);
      search(rest / list[i].second, i);
      chosen.pop_back();
    }
  };
  search(n, 0);
  return found;
}

double weighted_sum(const GeneratorSet& gens, std::uint64_t x, double u, Statistic stat,
                    Weight weight, const EnumConfig& cfg) {
  if (!(u > 0)) throw DomainError("weighted_sum: u must be positive");
  std::vector<long double> powers(1, 1.0L);
  struct Acc {
    long double sum = 0;
  };
  const long double xd = static_cast<long double>(x);
  // Powers of u are precomputed up to Omega <= 64.
  for (int k = 1; k <= 64; ++k) powers.push_back(powers.back() * u);
  auto states = parallel_walk<Acc>(gens, x, cfg, [&](Acc& acc, const ElementView& e) {
    const int k = stat == Statistic::omega ? e.omega : e.Omega;
    const long double w =
        weight == Weight::sharp ? 1.0L : static_cast<long double>(x - e.value) / xd;
    acc.sum += powers[static_cast<std::size_t>(k)] * w;
  });
  long double total = 0;
  for (const auto& s : states) total += s.sum;
  return static_cast<double>(total);
}

Histogram histogram(const GeneratorSet& gens, std::uint64_t x, Statistic kind, const EnumConfig& cfg) {
  auto states = parallel_walk<std::map<int, std::uint64_t>>(
      gens, x, cfg, [kind](std::map<int, std::uint64_t>& counts, const ElementView& e) {
        ++counts[kind == Statistic::omega ? e.omega : e.Omega];
      });
  Histogram out;
  out.kind = kind;
  out.x = x;
  for (const auto& state : states) {
    for (const auto& [k, c] : state) out.counts[k] += c;
  }
  return out;
}

}  // namespace lucasmon
