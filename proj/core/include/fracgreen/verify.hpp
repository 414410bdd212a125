#pragma once

#include <optional>

#include "fracgreen/muspace.hpp"
#include "fracgreen/symbol.hpp"
#include "fracgreen/wiener_hopf.hpp"

namespace fracgreen {

enum class IdentityId {
  lemma41,
  ibp_special,
  ibp_general,
  zero_identity,
  halfways_green,
  full_green,
};

std::string identity_name(IdentityId id);
IdentityId identity_from_name(const std::string& s);

struct IdentityReport {
  IdentityId identity_id = IdentityId::ibp_general;
  cplx lhs{};
  cplx rhs{};
  double abs_residual = 0.0;
  double rel_residual = 0.0;  // |lhs-rhs| / max(|lhs|, |rhs|, 1e-14)
  // grid / symbol context for serialization
  int dim = 1;
  int n = 0;
  double box = 0.0;
  Preset preset = Preset::custom;
  double a = 0.0, delta = 0.0, mu = 0.0;
  std::optional<double> convergence_order;
};

IdentityReport make_report(IdentityId id, cplx lhs, cplx rhs, const Grid& grid,
                           Preset preset, const TransmissionData& td);

enum class ApplyRoute { fft, factored };

struct ApplyResult {
  Field out;                 // restricted to the upper halfspace
  double route_gap = -1.0;   // relative gap between routes when both computed
};

// Op(L_phi) on a supported-upper field. The fft route multiplies by the
// regularized symbol directly; the factored route goes through
// Xi_+^mu, Op(q) split into s0 + F_+ + F_-, then r^+ Xi_-^{mu*} with the
// minus part restricted after extension by zero.
ApplyResult apply_L(const HomogeneousSymbol& sym, const Field& f, ApplyRoute route,
                    const TransmissionData& td, double cutoff_radius = 1.0);
// Adjoint L* = Op(conj L) via the same machinery.
ApplyResult apply_L_star(const HomogeneousSymbol& sym, const Field& f,
                         ApplyRoute route, const TransmissionData& td,
                         double cutoff_radius = 1.0);

// Principal-value singular-integral application, dim 1 only. The kernel is
// the windowed inverse transform of the regularized symbol at 4x
// oversampling; +-y nodes are paired symmetrically. Returns values at the
// requested grid indices (caller keeps them away from the boundary for
// weighted inputs).
std::vector<cplx> oracle_apply(const HomogeneousSymbol& sym, const Field& f,
                               const std::vector<int>& eval_indices,
                               double cutoff_radius = 1.0);

struct VerifyOptions {
  double cutoff_radius = 1.0;
  // Weighted quadratures skip this many boundary cells (the leading piece is
  // recovered analytically); multiplier applications inside verifiers run on
  // an `oversample`-times finer auxiliary grid so that the smeared image of
  // the below-boundary singular layer stays inside the skipped cells.
  int quad_first_cell = 4;
  int oversample = 16;
};

// Integration-by-parts pairing of a restricted smooth field w against the
// normal derivative of a weight-mu function; for mu <= 0 the pairing is
// evaluated through the split alternative with order-a and order-delta legs.
IdentityReport verify_lemma41(const HomogeneousSymbol& sym, const MuFunction& w,
                              const MuFunction& uprime, const TransmissionData& td,
                              const VerifyOptions& opt = {});

// Special-operator identity: P = Xi_-^{mu*} Xi_+^{mu} tested against the
// weighted Dirichlet traces.
IdentityReport verify_ibp_special(const MuFunction& u, const MuFunction& uprime,
                                  const TransmissionData& td,
                                  const VerifyOptions& opt = {});

IdentityReport verify_ibp_general(const HomogeneousSymbol& sym, const MuFunction& u,
                                  const MuFunction& uprime,
                                  const TransmissionData& td,
                                  const VerifyOptions& opt = {});

// Int L w conj(w') - Int w conj(L* w') = 0 for weight exponents mu, mu*.
IdentityReport verify_zero_identity(const HomogeneousSymbol& sym,
                                    const MuFunction& w, const MuFunction& wprime,
                                    const TransmissionData& td,
                                    const VerifyOptions& opt = {});

// u of weight exponent mu-1 against v of exponent mu*; single boundary term
// with the s0 weight.
IdentityReport verify_halfways_green(const HomogeneousSymbol& sym,
                                     const MuFunction& u, const MuFunction& v,
                                     const TransmissionData& td,
                                     const VerifyOptions& opt = {});

// Both arguments large (exponents mu-1, mu*-1); boundary terms combine
// Dirichlet and Neumann weighted traces plus the first-order boundary
// operator built from the jump symbol.
IdentityReport verify_full_green(const HomogeneousSymbol& sym, const MuFunction& u,
                                 const MuFunction& v, const TransmissionData& td,
                                 const SymbolDecomposition& dec,
                                 const BoundarySymbol& bsym,
                                 const VerifyOptions& opt = {});

struct SweepResult {
  std::vector<IdentityReport> reports;  // one per grid, in input order
  double fitted_order = 0.0;            // log-residual vs log-N slope
  bool monotone = true;
  bool at_floor = false;  // all residuals below 1e-12: order meaningless
};

// Runs `runner` (grid -> report) over >= 3 geometrically refined grids.
SweepResult convergence_sweep(
    const std::vector<GridPtr>& grids,
    const std::function<IdentityReport(const GridPtr&)>& runner);

}  // namespace fracgreen
