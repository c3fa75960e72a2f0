#pragma once

#include <vector>

#include "lucasmon/analytic.hpp"

namespace lucasmon {

struct EvalConfig {
  // Generators kept in the truncated products; 0 picks ceil(40 / (Re z log phi))
  // and grows it until the geometric tail bound is met.
  int product_truncation = 0;
  // Half-width T of the t-range; 0 picks max(50, 20 / r).
  double integral_height = 0;
  // Initial trapezoid step; 0 picks pi / (2 log x). Halved until converged.
  double quadrature_step = 0;
  // Relative tolerance for quadrature refinement and the tail estimate.
  double quadrature_tol = 1e-6;
  Precision precision;
};

struct ProductValue {
  cplx log_value;
  int terms = 0;          // generators summed explicitly
  double tail_bound = 0;  // bound on the error after the geometric tail estimate
};

// log d(z, u), d(z, u) = prod_m (1 + u m^{-z} / (1 - m^{-z})). Requires
// Re z > 0 and |1 - u| <= 1 (u = 0 gives d = 1).
ProductValue log_d(const GeneratorSet& gens, cplx z, double u, const EvalConfig& cfg = {});

// log D(z, u), D(z, u) = prod_m 1 / (1 - u m^{-z}). Requires |u m^{-z}| < 1
// for every generator.
ProductValue log_D(const GeneratorSet& gens, cplx z, double u, const EvalConfig& cfg = {});

// r = sqrt(a(u) / log x).
double saddle_r(const LucasParams& params, double x, double u);

struct SaddleData {
  double x = 0;
  double u = 0;
  double r = 0;
  double a_u = 0;
  double b = 0;
  double c_u = 0;
};

SaddleData saddle_data(const GeneratorSet& gens, double x, double u);

struct MellinResult {
  double x = 0;
  double u = 0;
  double r = 0;
  double integral = 0;
  double imag_part = 0;      // must vanish by conjugate symmetry
  double height = 0;
  double step = 0;
  int nodes = 0;
  double refinement_change = 0;  // relative change at the last step halving
  double tail_estimate = 0;      // |I(T) - I(T/2)|, empirical
  double tail_bound_crude = 0;   // d(r,u) x^r / (pi T), rigorous but loose
};

// (1/2 pi) int_{-T}^{T} d(r+it, u) x^{r+it} / ((r+it)(r+it+1)) dt by the
// trapezoid rule, i.e. the smoothed sum over members n <= x of
// u^omega(n) (1 - n/x).
MellinResult mellin_perron_integral(const GeneratorSet& gens, double x, double u, double r,
                                    const EvalConfig& cfg = {});

struct CentralResidual {
  double t = 0;
  cplx residual;
};

// log d(r+it, u) - [log d(r, u) - i a(u) t / r^2 - a(u) t^2 / r^3] over
// |t| <= r^{7/5}. An empty grid selects nine equispaced points.
std::vector<CentralResidual> central_expansion_check(const GeneratorSet& gens, double r, double u,
                                                     std::vector<double> t_grid = {},
                                                     const EvalConfig& cfg = {});

struct DecayPoint {
  double t = 0;
  double value = 0;  // log d(r, u) - Re log d(r + it, u) >= 0
};

std::vector<DecayPoint> decay_profile(const GeneratorSet& gens, double r, double u,
                                      const std::vector<double>& t_grid,
                                      const EvalConfig& cfg = {});

// Smallest value * r^{1/5} over points with |t| >= r^{7/5}, skipping points
// within r^{3/4} of 2 pi k / log phi. The empirical stand-in for the
// unquantified decay constant.
double fitted_decay_constant(const std::vector<DecayPoint>& profile, double r, double log_phi);

struct Extrapolation {
  std::vector<double> r_grid;
  std::vector<double> sequence;  // log d(r, u) - a(u)/r - b log r
  double extrapolated = 0;       // linear-in-r extrapolation of the last two
};

// Numerical c(u); r_grid must be decreasing with smallest entry >= 0.02.
Extrapolation c_of_u_numeric(const GeneratorSet& gens, double u, const std::vector<double>& r_grid,
                             const EvalConfig& cfg = {});

struct DResidual {
  double r = 0;
  double u = 0;
  double v = 0;  // log(u) / r
  double residual = 0;
};

// log D(r, u) - [A / r + B(v) log r + C(v)] with v = log(u) / r. Requires
// u in (exp(-v0 r / 2), exp(v0 r / 2)).
DResidual D_central_check(const GeneratorSet& gens, double r, double u, const EvalConfig& cfg = {});

}  // namespace lucasmon
