#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fracgreen/grid.hpp"

namespace fracgreen {

enum class Preset { frac_laplacian, frac_laplacian_drift, odd_mix_1d, custom };

std::string preset_name(Preset p);
Preset preset_from_name(const std::string& s);

// Translation-invariant symbol L(xi) = A(xi) + i B(xi), homogeneous of
// degree 2a in (0, 2), with A even and B odd (real convolution kernel).
// Immutable after construction; evaluation is pure.
class HomogeneousSymbol {
 public:
  // L(xi) = |xi|^{2a}
  static HomogeneousSymbol frac_laplacian(int dim, double a);
  // L(xi) = |xi| + i b.xi (order 1, critical drift); b has `dim` entries.
  static HomogeneousSymbol frac_laplacian_drift(int dim, std::vector<double> b);
  // L(xi) = |xi|^{2a} (1 + i c sign(xi)); dim 1 only.
  static HomogeneousSymbol odd_mix_1d(double a, double c);
  // dim 1: L = |xi|^{2a}(A0 + i B0 sign xi).
  static HomogeneousSymbol custom_1d(double a, double even_value, double odd_value);
  // dim 2: even table A and odd table B sampled at uniform angles on the unit
  // circle, periodic-cubic-spline interpolated. Tables cover [0, 2 pi).
  static HomogeneousSymbol custom_2d(double a, std::vector<double> even_table,
                                     std::vector<double> odd_table);

  int dim() const { return dim_; }
  double order() const { return two_a_; }  // 2a
  Preset preset() const { return preset_; }
  const std::vector<double>& params() const { return params_; }

  // L(xi); throws std::domain_error for xi = 0.
  cplx eval(double xi_t, double xi_n) const;

  // Structural checks, sampled on the unit sphere / random dyadic scalings.
  double homogeneity_residual(int samples, unsigned seed) const;
  double parity_residual(int samples, unsigned seed) const;
  double ellipticity_min(int samples, unsigned seed) const;  // min Re L on sphere

 private:
  HomogeneousSymbol() = default;
  int dim_ = 1;
  double two_a_ = 1.0;
  Preset preset_ = Preset::custom;
  std::vector<double> params_;
  std::function<cplx(double, double)> fn_;
};

// a, delta, mu = a + delta, mu* = a - delta, s0 = |L(0,1)|.
struct TransmissionData {
  double a = 0;
  double delta = 0;
  double mu = 0;
  double mu_star = 0;
  double s0 = 1;
};

// Throws std::runtime_error if Re L(0,1) <= 0 (ellipticity violation).
TransmissionData compute_transmission(const HomogeneousSymbol& sym);

// |L(0,-1) - e^{i pi (2a - 2 mu)} L(0,1)|; ~0 iff mu fits the boundary
// phase relation mod 1.
double check_mu_transmission(const HomogeneousSymbol& sym, double mu);

// L_phi = (1 - phi) L with phi a C^2 bump, == 1 for |xi| <= radius/2 and
// == 0 for |xi| >= radius. Smooth at the origin, equals L outside.
SymbolFn regularize_symbol(const HomogeneousSymbol& sym, double cutoff_radius = 1.0);

// q(xi) = (<xi'> - i xi_n)^{-mu*} L(xi) (<xi'> + i xi_n)^{-mu}.
// Bounded, with q -> s0 as |xi_n| -> infinity for fixed xi'.
SymbolFn reduced_symbol(const SymbolFn& sym, const TransmissionData& td);

// Symbol of the special operator Xi_-^{mu*} Xi_+^{mu} (times s0); its
// reduced symbol is the constant s0.
SymbolFn special_symbol(const TransmissionData& td);

}  // namespace fracgreen
