#pragma once

#include <complex>

namespace lucasmon {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288419716939937510;
inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243104215933593992;
inline constexpr double kLog2Pi = 1.83787706640934548356065947281123527972279494727556;

// Accuracy controls shared by the series evaluators.
struct Precision {
  double target_rel_err = 1e-15;
  int max_series_terms = 200'000;
  int em_order = 8;  // number of Bernoulli corrections in Euler-Maclaurin
};

// Hurwitz zeta, analytically continued in s, by Euler-Maclaurin summation.
// PoleError at s = 1; DomainError for alpha in {0, -1, -2, ...}.
cplx hurwitz_zeta(cplx s, cplx alpha, const Precision& prec = {});

cplx riemann_zeta(cplx s, const Precision& prec = {});

// Principal-branch-continuous log Gamma (the branch with log Gamma(z) real
// for z > 0, continued off the real axis). PoleError at z = 0, -1, ...
cplx log_gamma(cplx z);

// Real digamma; PoleError at nonpositive integers.
double digamma(double x);

// Li_order(w) = sum_{j >= 1} w^j / j^order for |w| < 1.
cplx polylog(cplx order, cplx w, const Precision& prec = {});

// log(1 + z) and exp(z) - 1 without cancellation for small |z|.
cplx clog1p(cplx z);
cplx cexpm1(cplx z);

}  // namespace lucasmon
