#pragma once

#include "fracgreen/grid.hpp"
#include "fracgreen/wiener_hopf.hpp"

namespace fracgreen {

// Closed-form smooth profile with analytic derivatives; traces at the
// boundary never rely on numerical differentiation of singular fields.
struct SmoothFn {
  std::function<double(double)> f;
  std::function<double(double)> df;
  std::function<double(double)> d2f;
};

// C^infty bump supported on [center - halfwidth, center + halfwidth]:
// amp * exp(-1 / (1 - t^2)) * e, t = (x - center) / halfwidth.
SmoothFn bump_profile(double center, double halfwidth, double amp = 1.0);
// amp * e^{-rate x} (used for Poisson-kernel-shaped factors).
SmoothFn exp_profile(double rate, double amp = 1.0);
SmoothFn constant_profile(double amp);
// x * w(x): shifts a weight-mu function into the weight-(mu - 1) container.
SmoothFn multiply_by_x(const SmoothFn& w);
SmoothFn scale_profile(const SmoothFn& w, double s);

struct BumpSpec {
  double center = 0.6;
  double halfwidth = 1.0;
  double amp = 1.0;
  // dim 2 tangential factor:
  double t_center = 0.0;
  double t_halfwidth = 2.0;
};

// u = e^+ x_n^mu w(x), w smooth with compact support (windowed). The
// realized grid field vanishes identically for x_n < 0.
struct MuFunction {
  double mu = 0.0;        // weight exponent; mu > -1
  GridPtr grid;
  SmoothFn normal_factor;      // w as a function of x_n
  SmoothFn tangential_factor;  // dim 2 only; constant 1 for dim 1
  Field realized;

  // Pointwise analytic evaluation of the smooth factor and its x_n
  // derivatives at a grid column.
  double w(int j_t, double x_n) const;
  double dw(int j_t, double x_n) const;
  // Analytic normal derivative as a weight-(mu - 1) structure:
  // d_n u = x^{mu-1} (mu w + x w'), valid on x_n > 0.
  MuFunction analytic_normal_derivative() const;
};

// Throws std::invalid_argument if the bump support exceeds the box or mu <= -1.
MuFunction make_mu_function(double mu, const BumpSpec& bump, const GridPtr& grid);
MuFunction make_mu_function(double mu, SmoothFn normal_factor,
                            SmoothFn tangential_factor, const GridPtr& grid);

// DFT of the analytic rebuild of u on `fine` (same box as u's grid), with
// the x_n^{mu+k} endpoint behavior (k = 0..2) carried by exact continuum
// transforms of model profiles; only the x^{mu+3}-smooth remainder is
// sampled. Trapezoid sampling of a bare x^mu weight leaves an O(h^{1+mu})
// point-mass error at the boundary that singular-kernel multipliers spread
// over the whole halfspace; the compensation removes it at the source.
std::vector<cplx> compensated_spectrum(const MuFunction& u, const GridPtr& fine);

// Applies a frequency multiplier to the compensated spectrum of u on an
// `oversample`-times finer grid over the same box, then samples the
// upper-halfspace result back onto u's grid. Band-limiting smears the
// below-boundary singular layer of minus-type operators over a fixed
// number of *fine* cells, so the contamination retreats into the first
// coarse cells; the boundary node is filled by quadratic extrapolation.
Field apply_multiplier_oversampled(const SymbolFn& m, const MuFunction& u,
                                   double filter_order, int oversample = 16);

// Weighted traces of u carrying exponent mu - 1 (pass the MuFunction whose
// stored exponent is mu - 1): gamma_k^{mu-1} u = Gamma(mu + k) gamma_k(w),
// k in {0, 1}. k >= 2 -> std::invalid_argument.
BoundaryData weighted_trace(const MuFunction& u, int k);

// gamma_0 Xi_+^{mu-1} u computed spectrally with boundary extrapolation;
// independent route for weighted_trace(u, 0).
BoundaryData trace_via_order_reduction(const MuFunction& u);

struct ExpansionCoeffs {
  BoundaryData u0, u1;      // gamma_0^{mu-1}, gamma_1^{mu-1}
  BoundaryData phi0, phi1;  // phi0 = u0, phi1 = u1 + mu <D'> u0
  int k_max = 1;
};

struct ExpansionResult {
  ExpansionCoeffs coeffs;
  Field U0;  // K0^{mu-1} u0
  Field U1;  // F^{-1}[phi1^(xi') (sigma + i xi_n)^{-mu-1}]
};

// Two-term boundary expansion of u with exponent mu - 1; k_max <= 1.
ExpansionResult expansion_terms(const MuFunction& u, int k_max);

struct LargeSplit {
  MuFunction U;   // exponent mu: x^mu w / mu
  MuFunction u1;  // exponent mu: -x^mu w' / mu
};

// u = d_n U + u1 with U, u1 of weight exponent mu (u has exponent mu - 1);
// requires mu > 0.
LargeSplit split_large(const MuFunction& u);

}  // namespace fracgreen
