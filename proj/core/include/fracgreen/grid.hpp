#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "fracgreen/fft.hpp"

namespace fracgreen {

// Halfspace-aware box grid on [-L, L)^dim. The last axis is the normal
// direction x_n; for dim == 2 the first axis is tangential (x').
// Sample points x_j = -L + j*h, so x_n = 0 lies exactly on the grid
// (index n/2). Frequencies follow the e^{-i x.xi} transform convention.
class Grid {
 public:
  Grid(int dim, int points_per_axis, std::array<double, 2> halfwidth);

  int dim() const { return dim_; }
  int n() const { return n_; }
  double halfwidth(int axis) const { return halfwidth_[axis]; }
  double spacing(int axis) const { return 2.0 * halfwidth_[axis] / n_; }
  double coord(int axis, int j) const {
    return -halfwidth_[axis] + j * spacing(axis);
  }
  // Signed frequency for DFT index k on the given axis.
  double freq(int axis, int k) const {
    int s = (k < n_ / 2) ? k : k - n_;
    return s * kPi / halfwidth_[axis];
  }
  double freq_spacing(int axis) const { return kPi / halfwidth_[axis]; }
  double freq_max(int axis) const { return (n_ / 2) * freq_spacing(axis); }

  int boundary_index() const { return n_ / 2; }  // x_n = 0
  std::size_t size() const { return dim_ == 1 ? n_ : std::size_t(n_) * n_; }
  std::size_t boundary_size() const { return dim_ == 1 ? 1 : n_; }

  // Flat index: dim 1 -> j_n; dim 2 -> j_t * n + j_n.
  std::size_t index(int j_t, int j_n) const {
    return dim_ == 1 ? std::size_t(j_n) : std::size_t(j_t) * n_ + j_n;
  }

  bool operator==(const Grid& o) const {
    return dim_ == o.dim_ && n_ == o.n_ && halfwidth_ == o.halfwidth_;
  }

 private:
  static constexpr double kPi = 3.141592653589793238462643383279502884;
  int dim_;
  int n_;
  std::array<double, 2> halfwidth_;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr make_grid(int dim, int points_per_axis, double halfwidth);
GridPtr make_grid(int dim, int points_per_axis, std::array<double, 2> halfwidth);

enum class Support {
  whole_space,
  supported_upper,   // supp in x_n >= 0 (stored values on the whole grid)
  restricted_upper,  // meaningful only on x_n >= 0; zeros stored below
};

// Complex scalar field sampled on a Grid. For fields with a jump across
// x_n = 0 the sample on the boundary plane stores the limit from above
// (full-value convention); multiplier application internally uses the
// trapezoid (half-value) treatment of the jump.
struct Field {
  GridPtr grid;
  Support tag = Support::whole_space;
  std::vector<cplx> v;
  double leak = 0.0;  // measured lower-half relative mass (supported_upper)

  Field() = default;
  Field(GridPtr g, Support t) : grid(std::move(g)), tag(t), v(grid->size()) {}

  cplx& at(int j_t, int j_n) { return v[grid->index(j_t, j_n)]; }
  cplx at(int j_t, int j_n) const { return v[grid->index(j_t, j_n)]; }
};

// Data on the boundary R^{n-1} (single value when dim == 1).
struct BoundaryData {
  GridPtr grid;
  std::vector<cplx> v;

  BoundaryData() = default;
  explicit BoundaryData(GridPtr g) : grid(std::move(g)), v(grid->boundary_size()) {}
};

// Evaluable symbol: (xi_tangential, xi_normal) -> value. For dim 1 the
// tangential argument is always passed as 0.
using SymbolFn = std::function<cplx(double, double)>;

// <xi'> = (1 + |xi'|^2)^{1/2}; equals 1 for dim 1 (empty xi').
inline double bracket(double xi_t) { return std::sqrt(1.0 + xi_t * xi_t); }

// Smooth spectral roll-off near the Nyquist frequency, raised to
// max(order, 0). Keeps the composition rule exact in multiplier form:
// filter(s) * filter(t) == filter(s + t) for s, t >= 0.
double nyquist_filter(const Grid& g, double xi_t, double xi_n, double order);

// Pu = F^{-1}(m(xi) Fu). filter_order > 0 applies the Nyquist roll-off for
// multipliers that grow at high frequency. Output is tagged whole_space.
Field fft_apply(const SymbolFn& m, const Field& f, double filter_order = 0.0);

// Order-reducing operators.
// xi_plus: OP((<xi'> + i xi_n)^t); preserves (approximately, on the grid)
// support in the closed upper halfspace.
Field xi_plus(const Field& f, double t);
// r^+ Xi_-^t e^+: OP((<xi'> - i xi_n)^t) between restricted fields.
Field xi_minus_restricted(const Field& f, double t);

// Spectral derivative i xi_n; whole_space fields only (weighted fields carry
// analytic derivatives, see muspace).
Field normal_derivative_spectral(const Field& f);

// Boundary multiplier <xi'>^t (identity for dim 1).
BoundaryData tangential_bessel(const BoundaryData& p, double t);

// Trapezoid-corrected Riemann sum of f * conj(g) over x_n > 0
// (half weight on the x_n = 0 plane).
cplx halfspace_inner(const Field& f, const Field& g);

// L2(R^{n-1}) product (plain complex product for dim 1).
cplx boundary_inner(const BoundaryData& p, const BoundaryData& q);

// Integral over the upper halfspace of a field behaving like
// x_n^beta * (smooth) near the boundary, beta > -2. Per-cell product rule
// with the weight integrated exactly and the smooth factor piecewise linear;
// over [0, first_cell*h] the smooth factor is extrapolated from the first
// usable samples and the weight integral continued analytically, realizing
// the finite-part pairing when beta <= -1.
cplx weighted_upper_integral(const Field& f, double beta, int first_cell = 1);

// Plain upper-halfspace integral (beta = 0 specialization; half-weight at 0).
cplx upper_integral(const Field& f);

// One-sided boundary value from above: quadratic extrapolation through the
// samples at x_n = h, 2h, 3h.
BoundaryData boundary_value_extrapolated(const Field& f);
// Boundary plane samples read directly (full-value convention).
BoundaryData boundary_value_samples(const Field& f);

// C^2 window, == 1 on |x| <= inner * L, == 0 for |x| >= outer * L per axis.
double window_value(const Grid& g, int j_t, int j_n, double inner = 0.7,
                    double outer = 0.95);

// Relative mass of a field on the open lower halfspace x_n < 0.
double lower_half_relative_mass(const Field& f);
// Max |value| on the outermost boundary cells of the box.
double box_edge_max(const Field& f);

// Element-wise helpers.
Field field_add(const Field& a, const Field& b);
Field field_sub(const Field& a, const Field& b);
Field field_scale(const Field& a, cplx s);

// CSV export (x coords, Re, Im); spectra via export_spectrum_csv.
void export_field_csv(const Field& f, const std::string& path);
void export_spectrum_csv(const Field& f, const std::string& path);

}  // namespace fracgreen
