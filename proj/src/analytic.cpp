#include "lucasmon/analytic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "lucasmon/errors.hpp"

namespace lucasmon {
namespace {

constexpr int kTail = GeneratorSet::kFirstTailIndex;
constexpr int kMaxTailTerms = 100'000;

void check_v(const GeneratorSet& gens, cplx v) {
  if (!(std::abs(v) < gens.v0())) {
    throw DomainError("|v| = " + std::to_string(std::abs(v)) + " must be below v0 = " +
                      std::to_string(gens.v0()));
  }
}

// log(1 - rho^j), the gap between log v_j and j log phi - log(phi - phibar).
double log_correction(const LucasParams& params, int j) {
  return std::log1p(-std::pow(params.root_ratio(), j));
}

double linear_log(const LucasParams& params, double j) {
  return j * params.log_phi() - params.log_delta();
}

// Sums term(j) for j >= first until the geometric remainder bound drops below
// tol * scale. The terms carry a factor rho^j, so the remainder after term j
// is at most about |term_j| |rho| / (1 - |rho|); a factor of two absorbs the
// slowly varying part.
template <class Term>
cplx geometric_tail(const LucasParams& params, int first, Term term, double tol, double scale,
                    int* used, double* bound) {
  const double rho = std::abs(params.root_ratio());
  cplx sum = 0;
  for (int j = first; j < first + kMaxTailTerms; ++j) {
    const cplx t = term(j);
    sum += t;
    const double rest = 2 * std::abs(t) * rho / (1 - rho);
    if (rest <= tol * std::max(scale, std::abs(sum))) {
      if (used) *used = j - first + 1;
      if (bound) *bound = rest;
      return sum;
    }
  }
  throw ConfigError("tail sum did not converge (|phibar/phi| too close to 1)");
}

}  // namespace

cplx hurwitz_zeta_sderiv_at0(cplx alpha) {
  if (!(alpha.real() > 0)) throw DomainError("hurwitz_zeta_sderiv_at0: Re alpha must be positive");
  return log_gamma(alpha) - 0.5 * kLog2Pi;
}

cplx f_star(cplx s, double u, const Precision& prec) {
  if (!(std::abs(1 - u) < 1)) throw DomainError("f_star: requires |1 - u| < 1");
  const cplx gamma = std::exp(log_gamma(s));
  return (riemann_zeta(s + 1.0, prec) - polylog(s + 1.0, 1 - u, prec)) * gamma;
}

cplx alpha_of_v(const GeneratorSet& gens, cplx v) {
  check_v(gens, v);
  const auto& p = gens.params();
  const cplx alpha = static_cast<double>(kTail) - (p.log_delta() + v) / p.log_phi();
  if (!(alpha.real() > 0)) throw NumericalError("alpha(v) has nonpositive real part");
  return alpha;
}

LambdaDecomposition lambda(const GeneratorSet& gens, cplx s, cplx v, const Precision& prec) {
  if (s == cplx(1, 0)) throw PoleError("Lambda(s, v) has a pole at s = 1");
  const cplx alpha = alpha_of_v(gens, v);
  const auto& params = gens.params();
  LambdaDecomposition out;
  for (const auto& g : gens.f0()) out.lambda0 += std::exp(-s * std::log(g.term.log_value - v));
  out.hurwitz = hurwitz_zeta(s, alpha, prec) * std::exp(-s * std::log(params.log_phi()));
  const double scale = std::abs(out.lambda0) + std::abs(out.hurwitz);
  out.lambda1 = geometric_tail(
      params, kTail,
      [&](int j) {
        const cplx y = linear_log(params, j) - v;
        const double eps = log_correction(params, j);
        // (y + eps)^{-s} - y^{-s} without cancellation.
        return std::exp(-s * std::log(y)) * cexpm1(-s * clog1p(eps / y));
      },
      prec.target_rel_err, scale, &out.tail_terms, &out.tail_bound);
  return out;
}

cplx lambda_at0(const GeneratorSet& gens, cplx v) {
  check_v(gens, v);
  const auto& p = gens.params();
  return static_cast<double>(gens.f0_size()) - 12.5 + (p.log_delta() + v) / p.log_phi();
}

cplx dlambda_ds_at0(const GeneratorSet& gens, cplx v, const Precision& prec) {
  const cplx alpha = alpha_of_v(gens, v);
  const auto& params = gens.params();
  cplx finite = 0;
  for (const auto& g : gens.f0()) finite -= std::log(g.term.log_value - v);
  // d/ds [zeta(s, alpha) (log phi)^{-s}] at 0.
  const cplx hurwitz =
      hurwitz_zeta_sderiv_at0(alpha) - std::log(params.log_phi()) * (0.5 - alpha);
  const double scale = std::abs(finite) + std::abs(hurwitz);
  const cplx tail = geometric_tail(
      params, kTail,
      [&](int j) {
        const cplx y = linear_log(params, j) - v;
        return -clog1p(log_correction(params, j) / y);
      },
      prec.target_rel_err, scale, nullptr, nullptr);
  return finite + hurwitz + tail;
}

double lambda_residue(const GeneratorSet& gens, double v, const Precision& prec) {
  // g(h) = h Lambda(1 + h, v) is analytic at h = 0 with g(0) = 1 / log phi.
  constexpr int kLevels = 7;
  std::array<std::array<double, kLevels>, kLevels> table{};
  for (int i = 0; i < kLevels; ++i) {
    const double h = std::ldexp(1.0, -(i + 3));
    table[i][0] = h * lambda(gens, 1.0 + h, v, prec).total().real();
    for (int k = 1; k <= i; ++k) {
      const double factor = std::ldexp(1.0, k);
      table[i][k] = (factor * table[i][k - 1] - table[i - 1][k - 1]) / (factor - 1);
    }
  }
  return table[kLevels - 1][kLevels - 1];
}

TailSum kappa1_tail_direct(const GeneratorSet& gens, int k_max) {
  if (k_max < 10) throw DomainError("kappa1_tail_direct: k_max must be >= 10");
  const auto& params = gens.params();
  const double lphi = params.log_phi();
  long double sum = 0;
  for (int k = 1; k <= k_max; ++k) {
    sum += 1.0L / closed_form_log(params, k + kTail) - 1.0L / (static_cast<long double>(k) * lphi);
  }
  // For k > K the summand is (1/(k + a) - 1/k) / log phi up to a term of
  // order rho^k, with a = alpha(0). Euler-Maclaurin from K:
  //   sum_{k > K} f(k) = int_K^inf f - f(K)/2 - f'(K)/12 + f'''(K)/720 - ...
  const double a = static_cast<double>(kTail) - params.log_delta() / lphi;
  const double kk = k_max;
  const double integral = -std::log1p(a / kk) / lphi;
  const double f = (1 / (kk + a) - 1 / kk) / lphi;
  const double f1 = (-1 / std::pow(kk + a, 2) + 1 / std::pow(kk, 2)) / lphi;
  const double f3 = (-6 / std::pow(kk + a, 4) + 6 / std::pow(kk, 4)) / lphi;
  const double f5 = (-120 / std::pow(kk + a, 6) + 120 / std::pow(kk, 6)) / lphi;
  const double tail = integral - f / 2 - f1 / 12 + f3 / 720;
  const double rho = std::abs(params.root_ratio());
  TailSum out;
  out.tail_added = tail;
  out.value = static_cast<double>(sum) + tail;
  out.terms = k_max;
  // Next Euler-Maclaurin term plus the neglected rho^k part of the tail.
  out.tail_bound = std::abs(f5) / 30240 +
                   2 * std::pow(rho, k_max + kTail) / ((1 - rho) * std::pow(lphi * kk, 2));
  return out;
}

TailSum kappa1_tail_digamma(const GeneratorSet& gens) {
  const auto& params = gens.params();
  const double lphi = params.log_phi();
  const double a = static_cast<double>(kTail) - params.log_delta() / lphi;
  // sum_k (1/(lphi (k + a)) - 1/(k lphi)) = -(psi(1 + a) + gamma) / lphi.
  const double smooth = -(digamma(1 + a) + kEulerGamma) / lphi;
  int used = 0;
  double bound = 0;
  const cplx rest = geometric_tail(
      params, kTail + 1,
      [&](int j) {
        // j = k + 13; log v_j = L + eps with L = lphi (k + a).
        const double l = linear_log(params, j);
        const double eps = log_correction(params, j);
        return cplx(-eps / (l * (l + eps)), 0);
      },
      1e-17, std::abs(smooth), &used, &bound);
  TailSum out;
  out.value = smooth + rest.real();
  out.terms = used;
  out.tail_bound = bound;
  return out;
}

namespace {

// (gamma - log log phi)/log phi + sum_{F0} 1/log m + 1/log v_13.
double kappa1_head(const GeneratorSet& gens) {
  const auto& params = gens.params();
  double head = (kEulerGamma - std::log(params.log_phi())) / params.log_phi();
  for (const auto& g : gens.f0()) head += 1 / g.term.log_value;
  return head + 1 / closed_form_log(params, kTail);
}

}  // namespace

double kappa1(const GeneratorSet& gens) { return kappa1_head(gens) + kappa1_tail_digamma(gens).value; }

double kappa1_direct(const GeneratorSet& gens, int k_max) {
  return kappa1_head(gens) + kappa1_tail_direct(gens, k_max).value;
}

double kappa2(const GeneratorSet& gens, const Precision& prec) {
  return dlambda_ds_at0(gens, 0.0, prec).real();
}

double a_of_u(const LucasParams& params, double u, const Precision& prec) {
  if (!(std::abs(1 - u) < 1)) throw DomainError("a(u) requires |1 - u| < 1");
  const double li2 = u == 1 ? 0.0 : polylog(2.0, 1 - u, prec).real();
  return (kPi * kPi / 6 - li2) / params.log_phi();
}

double b_const(const GeneratorSet& gens) { return -lambda_at0(gens, 0.0).real(); }

double c_of_u(const GeneratorSet& gens, double u, const Precision& prec) {
  if (!(std::abs(1 - u) < 1)) throw DomainError("c(u) requires |1 - u| < 1");
  return lambda_at0(gens, 0.0).real() * std::log(u) + dlambda_ds_at0(gens, 0.0, prec).real();
}

double big_B(const GeneratorSet& gens, double v) { return -lambda_at0(gens, v).real(); }

double big_C(const GeneratorSet& gens, double v, const Precision& prec) {
  return dlambda_ds_at0(gens, v, prec).real();
}

double ConstantsBundle::k1_identity_residual() const { return std::abs(k1 + (2 * b + 1) / 4); }

ConstantsBundle constants_bundle(const GeneratorSet& gens, const Precision& prec) {
  const auto& params = gens.params();
  const double lphi = params.log_phi();
  ConstantsBundle out;
  out.p = params.p_sum();
  out.q = params.q_prod();
  out.f0_size = gens.f0_size();
  out.log_phi = lphi;
  out.v0 = gens.v0();
  out.A = kPi * kPi / (6 * lphi);
  out.b = b_const(gens);
  out.k1 = (gens.f0_size() - 13) / 2.0 + params.log_delta() / (2 * lphi);
  out.a1 = std::sqrt(6 / lphi) / kPi;
  out.a2 = (kPi * kPi - 6) / (2 * kPi * kPi * kPi) * std::sqrt(6 / lphi);
  out.b2 = std::sqrt(6 * lphi) / kPi;

  const TailSum digamma_route = kappa1_tail_digamma(gens);
  const TailSum direct_route = kappa1_tail_direct(gens);
  const double head = kappa1_head(gens);
  out.kappa1 = head + digamma_route.value;
  out.kappa1_direct = head + direct_route.value;
  out.truncation_L = direct_route.terms;
  out.kappa2 = kappa2(gens, prec);
  out.c1 = out.kappa2;

  // Proof route: A^{-1/2} (kappa1 - log A / (2 log phi)).
  out.b1_proof = (out.kappa1 - std::log(out.A) / (2 * lphi)) / std::sqrt(out.A);
  // Statement route, with its own constant term and the direct tail sum.
  double bracket = (2 * kEulerGamma - std::log(kPi * kPi * lphi / 6)) / (2 * lphi);
  for (const auto& g : gens.f0()) bracket += 1 / g.term.log_value;
  bracket += 1 / closed_form_log(params, kTail) + direct_route.value;
  out.b1_statement = std::sqrt(6 * lphi) / kPi * bracket;

  out.achieved_precision =
      std::max({std::abs(out.b1_route_difference()), direct_route.tail_bound,
                digamma_route.tail_bound, 64 * std::numeric_limits<double>::epsilon()});
  return out;
}

}  // namespace lucasmon
