#pragma once

#include <span>

#include "fracgreen/grid.hpp"
#include "fracgreen/symbol.hpp"

namespace fracgreen {

// Additive split q = s0 + f_plus + f_minus per tangential frequency line.
// f_plus(xi',.) has inverse transform supported in x_n >= 0, f_minus in
// x_n <= 0 (the x_n = 0 sample is assigned to the plus part).
struct SymbolDecomposition {
  GridPtr grid;
  double s0 = 1.0;
  std::vector<cplx> f_plus;   // over (xi' index, xi_n index), grid->size()
  std::vector<cplx> f_minus;  // same shape
  double residual_recon = 0.0;  // max |q - s0 - f_plus - f_minus|
};

// Samples q on the grid frequency axes, verifies both xi_n tails approach
// s0 (throws std::runtime_error "insufficient frequency extent" otherwise),
// and splits in the dual variable.
SymbolDecomposition wh_decompose(const SymbolFn& q, const TransmissionData& td,
                                 const GridPtr& grid, double tail_tol = 0.1);

// Line accessors (length n, indexed by xi_n DFT index).
std::vector<cplx> decomposition_line(const SymbolDecomposition& dec,
                                     bool plus_part, int tang_index);

struct PlusIntegralResult {
  cplx value;        // route (ii): one-sided boundary value at x_n -> 0+
  cplx value_quad;   // route (i): direct quadrature with tail handling
  double route_gap;  // |value - value_quad| / max(|value|, floor)
};

// (1/2pi) Int^+ f dxi_n for a plus function sampled on the xi_n axis of the
// grid; sigma = <xi'> of the line. Two independent routes; callers compare
// route_gap against their tolerance.
PlusIntegralResult plus_integral(std::span<const cplx> f, const Grid& grid,
                                 double sigma);

struct BoundarySymbol {
  GridPtr grid;
  std::vector<cplx> b_vals;        // jump symbol b(xi') = frak_b - conj(frak_b')
  std::vector<cplx> frak_b;        // (1/2pi) Int^+ f_plus
  std::vector<cplx> frak_b_prime;  // (1/2pi) Int^+ conj(f_minus)
  std::vector<cplx> b_jump_route;  // direct two-sided jump of (q - s0)^vee
  double max_route_gap = 0.0;      // b vs jump route, relative
};

BoundarySymbol boundary_jump_symbol(const SymbolDecomposition& dec);

// Apply OP(b) on boundary data.
BoundaryData apply_boundary_symbol(const BoundarySymbol& bs, const BoundaryData& p);

// Apply OP(f) for one additive part (f_plus or f_minus) as a multiplier in
// (xi', xi_n); input treated as e^+ of its stored values.
Field apply_decomposition_part(const SymbolDecomposition& dec, bool plus_part,
                               const Field& f);

// Poisson operator K0: p(x') -> e^+ F^{-1}_{xi'->x'}[p^(xi') e^{-<xi'> x_n}].
// gamma_0 K0 p = p; (1 - Lap) K0 p = 0 on the open upper halfspace.
Field poisson_K0(const BoundaryData& p, const GridPtr& grid);

struct PoissonMuResult {
  Field field;                  // x_n^{mu-1} e^+ K0 p / Gamma(mu)  (exact route)
  Field field_order_reduced;    // Xi_+^{1-mu} e^+ K0 p             (spectral route)
  double cross_route_residual;  // relative, on x_n >= 4 h
};

// K0^{mu-1}: right-inverse of the weighted trace gamma_0^{mu-1}; mu > 0.
PoissonMuResult poisson_K0_mu(const BoundaryData& p, double mu, const GridPtr& grid);

// 6th-order finite-difference residual of (1 - Lap) applied to a field built
// from per-line exponentials; max relative residual on x_n >= 1, inside the
// window region. Used to validate poisson_K0.
double one_minus_laplacian_residual(const Field& f, const GridPtr& grid);

}  // namespace fracgreen
