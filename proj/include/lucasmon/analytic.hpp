#pragma once

#include "lucasmon/lucas.hpp"
#include "lucasmon/special.hpp"

namespace lucasmon {

// d/ds zeta(s, alpha) at s = 0, i.e. log Gamma(alpha) - log(2 pi) / 2.
cplx hurwitz_zeta_sderiv_at0(cplx alpha);

// (zeta(s+1) - Li_{s+1}(1-u)) Gamma(s), the Mellin transform of the
// one-generator log-factor.
cplx f_star(cplx s, double u, const Precision& prec = {});

// alpha(v) = 13 - (log(phi - phibar) + v) / log phi; requires |v| < v0.
cplx alpha_of_v(const GeneratorSet& gens, cplx v);

// Lambda(s, v) = sum over generators m of (log m - v)^{-s}, split into the
// finite F0 sum, the Hurwitz zeta part, and the geometrically convergent
// correction between log v_j and its linear approximation.
struct LambdaDecomposition {
  cplx lambda0;
  cplx hurwitz;
  cplx lambda1;
  int tail_terms = 0;
  double tail_bound = 0;

  [[nodiscard]] cplx total() const { return lambda0 + hurwitz + lambda1; }
};

LambdaDecomposition lambda(const GeneratorSet& gens, cplx s, cplx v, const Precision& prec = {});

// Closed form |F0| - 25/2 + (log(phi - phibar) + v) / log phi.
cplx lambda_at0(const GeneratorSet& gens, cplx v);

// d/ds Lambda(s, v) at s = 0 from the same three-part decomposition.
cplx dlambda_ds_at0(const GeneratorSet& gens, cplx v, const Precision& prec = {});

// lim_{s -> 1} (s - 1) Lambda(s, v) by Richardson extrapolation over
// s = 1 + 2^-k. The exact value is 1 / log phi.
double lambda_residue(const GeneratorSet& gens, double v, const Precision& prec = {});

struct TailSum {
  double value = 0;
  int terms = 0;
  double tail_added = 0;   // analytic estimate of the omitted tail, included in value
  double tail_bound = 0;   // bound on what remains after that estimate
};

// sum_{k >= 1} (1 / log v_{k+13} - 1 / (k log phi)), summed directly up to K
// with an Euler-Maclaurin estimate for k > K.
TailSum kappa1_tail_direct(const GeneratorSet& gens, int k_max = 10'000);

// The same sum through the digamma function: the 1/k part is exact and only a
// geometrically convergent remainder is summed.
TailSum kappa1_tail_digamma(const GeneratorSet& gens);

// Linear coefficient of dLambda/ds(0, v) in v (digamma route).
double kappa1(const GeneratorSet& gens);
double kappa1_direct(const GeneratorSet& gens, int k_max = 10'000);

// Constant term of dLambda/ds(0, v); exposed only as this computed value.
double kappa2(const GeneratorSet& gens, const Precision& prec = {});

double a_of_u(const LucasParams& params, double u, const Precision& prec = {});
double b_const(const GeneratorSet& gens);
double c_of_u(const GeneratorSet& gens, double u, const Precision& prec = {});
double big_B(const GeneratorSet& gens, double v);
double big_C(const GeneratorSet& gens, double v, const Precision& prec = {});

struct ConstantsBundle {
  std::int64_t p = 0;
  std::int64_t q = 0;
  int f0_size = 0;
  double log_phi = 0;
  double A = 0;
  double b = 0;
  double k1 = 0;
  double kappa1 = 0;
  double kappa1_direct = 0;
  double kappa2 = 0;
  double a1 = 0;
  double a2 = 0;
  double b1_statement = 0;
  double b1_proof = 0;
  double b2 = 0;
  double c1 = 0;  // c(1) = dLambda/ds(0, 0)
  double v0 = 0;
  int precision_bits = 53;
  int truncation_L = 0;  // direct-route cutoff of the kappa1 tail sum
  double achieved_precision = 0;

  // |k1 + (2b + 1)/4|, zero in exact arithmetic.
  [[nodiscard]] double k1_identity_residual() const;
  [[nodiscard]] double b1_route_difference() const { return b1_statement - b1_proof; }
};

ConstantsBundle constants_bundle(const GeneratorSet& gens, const Precision& prec = {});

}  // namespace lucasmon
