#include "lucasmon/dirichlet.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lucasmon/errors.hpp"

namespace lucasmon {
namespace {

enum class Kind { d, D };

// Truncated log-product over generators for a fixed abscissa Re z. Holds the
// generator logs so repeated evaluation along a vertical line reuses them.
class LogProduct {
 public:
  LogProduct(const GeneratorSet& gens, double re_z, Kind kind, const EvalConfig& cfg)
      : gens_(gens), kind_(kind), cfg_(cfg) {
    if (!(re_z > 0)) throw DomainError("Dirichlet product needs Re z > 0");
    const double lphi = gens.params().log_phi();
    auto_ = cfg.product_truncation <= 0;
    const int guess = auto_ ? static_cast<int>(std::ceil(40 / (re_z * lphi))) : cfg.product_truncation;
    resize(std::max(guess, gens.f0_size() + 1));
  }

  ProductValue operator()(cplx z, double u) {
    for (;;) {
      ProductValue out = evaluate(z, u);
      if (out.tail_bound <= cfg_.precision.target_rel_err * std::max(1.0, std::abs(out.log_value))) {
        return out;
      }
      if (!auto_) {
        throw ConfigError("product truncation L = " + std::to_string(logs_.size()) +
                          " leaves a tail bound of " + std::to_string(out.tail_bound));
      }
      if (logs_.size() > 10'000'000) throw ConfigError("product truncation grew past 10^7 terms");
      resize(static_cast<int>(2 * logs_.size()));
    }
  }

 private:
  void resize(int count) {
    logs_ = gens_.log_generators(static_cast<std::size_t>(count));
    next_index_ = gens_.index_at(static_cast<std::size_t>(count));
  }

  ProductValue evaluate(cplx z, double u) const {
    if (kind_ == Kind::d && !(std::abs(1 - u) <= 1)) throw DomainError("d(z, u) requires |1 - u| <= 1");
    if (kind_ == Kind::D && !(std::abs(u) * std::exp(-z.real() * logs_.front()) < 1)) {
      throw DomainError("D(z, u) diverges: |u m^{-z}| >= 1 for the smallest generator");
    }
    cplx sum = 0;
    for (double lm : logs_) {
      const cplx w = std::exp(-z * lm);
      if (kind_ == Kind::d) {
        sum += clog1p(-(1 - u) * w) - clog1p(-w);
      } else {
        sum -= clog1p(-u * w);
      }
    }
    // Both summands are u m^{-z} + O(m^{-2z}). For the omitted tail
    // m^{-z} = delta^z phi^{-jz} (1 - rho^j)^{-z}, so the first-order part is a
    // geometric series in phi^{-z}.
    const auto& p = gens_.params();
    const int j = next_index_;
    const cplx q = std::exp(-z * p.log_phi());
    const cplx lead = std::exp(z * p.log_delta() - static_cast<double>(j) * z * p.log_phi());
    sum += u * lead / (1.0 - q);
    const double qa = std::abs(q);
    const double wa = std::abs(lead);
    const double rho_j = std::pow(std::abs(p.root_ratio()), j);
    ProductValue out;
    out.log_value = sum;
    out.terms = static_cast<int>(logs_.size());
    out.tail_bound = 4 * (1 + std::abs(u)) * wa * (wa + std::abs(z) * rho_j) / (1 - qa);
    return out;
  }

  const GeneratorSet& gens_;
  Kind kind_;
  EvalConfig cfg_;
  bool auto_ = true;
  std::vector<double> logs_;
  int next_index_ = 0;
};

}  // namespace

ProductValue log_d(const GeneratorSet& gens, cplx z, double u, const EvalConfig& cfg) {
  LogProduct product(gens, z.real(), Kind::d, cfg);
  return product(z, u);
}

ProductValue log_D(const GeneratorSet& gens, cplx z, double u, const EvalConfig& cfg) {
  LogProduct product(gens, z.real(), Kind::D, cfg);
  return product(z, u);
}

double saddle_r(const LucasParams& params, double x, double u) {
  if (!(x > 1)) throw DomainError("saddle_r: x must exceed 1");
  const double a = a_of_u(params, u);
  if (!(a > 0)) throw DomainError("saddle_r: a(u) must be positive");
  return std::sqrt(a / std::log(x));
}

SaddleData saddle_data(const GeneratorSet& gens, double x, double u) {
  SaddleData out;
  out.x = x;
  out.u = u;
  out.r = saddle_r(gens.params(), x, u);
  out.a_u = a_of_u(gens.params(), u);
  out.b = b_const(gens);
  out.c_u = c_of_u(gens, u);
  return out;
}

MellinResult mellin_perron_integral(const GeneratorSet& gens, double x, double u, double r,
                                    const EvalConfig& cfg) {
  if (!(x > 1)) throw DomainError("mellin_perron_integral: x must exceed 1");
  if (!(r > 0)) throw DomainError("mellin_perron_integral: r must be positive");
  const double lx = std::log(x);
  LogProduct product(gens, r, Kind::d, cfg);
  const bool auto_height = cfg.integral_height <= 0;
  double height = auto_height ? std::max(50.0, 20 / r) : cfg.integral_height;
  const double tail_tol = 1e-4;

  auto integrand = [&](double t) {
    const cplx z(r, t);
    return std::exp(product(z, u).log_value + z * lx) / (z * (z + 1.0)) / (2 * kPi);
  };

  for (;;) {
    double h = cfg.quadrature_step > 0 ? cfg.quadrature_step : kPi / (2 * lx);
    // Trapezoid on k h, |k| <= n, split into |t| <= T/2 and the rest so the
    // truncation effect can be read off.
    auto trapezoid = [&](double step, double* inner, double* abs_sum) {
      const int n = static_cast<int>(std::ceil(height / step));
      const int n_half = n / 2;
      cplx total = integrand(0.0);
      cplx half = total;
      double mag = std::abs(total);
      for (int k = 1; k <= n; ++k) {
        const double w = k == n ? 0.5 : 1.0;
        const cplx pair = integrand(k * step) + integrand(-k * step);
        mag += w * std::abs(pair);
        total += w * pair;
        if (k < n_half) half += pair;
        if (k == n_half) half += 0.5 * pair;
      }
      *inner = (half * step).real();
      *abs_sum = mag * step;
      return total * step;
    };
    double inner = 0;
    double mag = 0;
    cplx prev = trapezoid(h, &inner, &mag);
    cplx cur = prev;
    double change = 0;
    for (int level = 0; level < 12; ++level) {
      h /= 2;
      cur = trapezoid(h, &inner, &mag);
      change = std::abs(cur.real() - prev.real()) / std::max(std::abs(cur.real()), 1e-300);
      if (change <= cfg.quadrature_tol) break;
      prev = cur;
    }
    if (change > cfg.quadrature_tol) throw ConfigError("trapezoid refinement did not converge");

    MellinResult out;
    out.x = x;
    out.u = u;
    out.r = r;
    out.integral = cur.real();
    out.imag_part = cur.imag();
    out.height = height;
    out.step = h;
    out.nodes = 2 * static_cast<int>(std::ceil(height / h)) + 1;
    out.refinement_change = change;
    out.tail_estimate = std::abs(cur.real() - inner);
    out.tail_bound_crude =
        std::exp(product(cplx(r, 0), u).log_value.real() + r * lx) / (kPi * height);

    if (std::abs(out.imag_part) > 1e-10 * std::abs(out.integral) + 1e-14 * mag) {
      throw NumericalError("Mellin-Perron integral has a non-vanishing imaginary part");
    }
    if (out.tail_estimate <= tail_tol * std::abs(out.integral)) return out;
    if (!auto_height || height > 1e5) {
      throw ConfigError("integral height T = " + std::to_string(height) +
                        " leaves an estimated tail of " + std::to_string(out.tail_estimate));
    }
    height *= 2;
  }
}

std::vector<CentralResidual> central_expansion_check(const GeneratorSet& gens, double r, double u,
                                                     std::vector<double> t_grid,
                                                     const EvalConfig& cfg) {
  if (!(r > 0)) throw DomainError("central_expansion_check: r must be positive");
  const double t_max = std::pow(r, 1.4);
  if (t_grid.empty()) {
    for (int k = -4; k <= 4; ++k) t_grid.push_back(t_max * k / 4);
  }
  const double a = a_of_u(gens.params(), u);
  LogProduct product(gens, r, Kind::d, cfg);
  const cplx at_r = product(cplx(r, 0), u).log_value;
  std::vector<CentralResidual> out;
  for (double t : t_grid) {
    const cplx model = at_r - cplx(0, a * t / (r * r)) - a * t * t / (r * r * r);
    out.push_back({t, product(cplx(r, t), u).log_value - model});
  }
  return out;
}

std::vector<DecayPoint> decay_profile(const GeneratorSet& gens, double r, double u,
                                      const std::vector<double>& t_grid, const EvalConfig& cfg) {
  LogProduct product(gens, r, Kind::d, cfg);
  const double at_r = product(cplx(r, 0), u).log_value.real();
  std::vector<DecayPoint> out;
  out.reserve(t_grid.size());
  for (double t : t_grid) out.push_back({t, at_r - product(cplx(r, t), u).log_value.real()});
  return out;
}

double fitted_decay_constant(const std::vector<DecayPoint>& profile, double r, double log_phi) {
  const double period = 2 * kPi / log_phi;
  const double window = std::pow(r, 0.75);
  const double t_min = std::pow(r, 1.4);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& p : profile) {
    const double at = std::abs(p.t);
    if (at < t_min) continue;
    const double k = std::round(at / period);
    if (k >= 1 && std::abs(at - k * period) < window) continue;
    best = std::min(best, p.value * std::pow(r, 0.2));
  }
  return best;
}

Extrapolation c_of_u_numeric(const GeneratorSet& gens, double u, const std::vector<double>& r_grid,
                             const EvalConfig& cfg) {
  if (r_grid.size() < 2) throw DomainError("c_of_u_numeric: need at least two radii");
  for (std::size_t i = 0; i < r_grid.size(); ++i) {
    if (r_grid[i] < 0.02) throw DomainError("c_of_u_numeric: radii must be >= 0.02");
    if (i > 0 && !(r_grid[i] < r_grid[i - 1])) throw DomainError("c_of_u_numeric: radii must decrease");
  }
  const double a = a_of_u(gens.params(), u);
  const double b = b_const(gens);
  Extrapolation out;
  out.r_grid = r_grid;
  for (double r : r_grid) {
    const double ld = log_d(gens, cplx(r, 0), u, cfg).log_value.real();
    out.sequence.push_back(ld - a / r - b * std::log(r));
  }
  const std::size_t n = r_grid.size();
  const double r1 = r_grid[n - 2], r2 = r_grid[n - 1];
  const double s1 = out.sequence[n - 2], s2 = out.sequence[n - 1];
  out.extrapolated = (r1 * s2 - r2 * s1) / (r1 - r2);
  return out;
}

DResidual D_central_check(const GeneratorSet& gens, double r, double u, const EvalConfig& cfg) {
  if (!(r > 0) || !(u > 0)) throw DomainError("D_central_check: r and u must be positive");
  const double v = std::log(u) / r;
  if (!(std::abs(v) < gens.v0() / 2)) {
    throw DomainError("u lies outside (exp(-v0 r/2), exp(v0 r/2))");
  }
  const double a = kPi * kPi / (6 * gens.params().log_phi());
  const double ld = log_D(gens, cplx(r, 0), u, cfg).log_value.real();
  DResidual out;
  out.r = r;
  out.u = u;
  out.v = v;
  out.residual = ld - (a / r + big_B(gens, v) * std::log(r) + big_C(gens, v));
  return out;
}

}  // namespace lucasmon
