#include <doctest.h>

#include <cmath>

#include "fracgreen/verify.hpp"

using namespace fracgreen;

namespace {

struct DriftCtx {
  HomogeneousSymbol sym = HomogeneousSymbol::frac_laplacian_drift(1, {0.5});
  TransmissionData td = compute_transmission(sym);
};

}  // namespace

TEST_CASE("identity names round-trip") {
  for (IdentityId id :
       {IdentityId::lemma41, IdentityId::ibp_special, IdentityId::ibp_general,
        IdentityId::zero_identity, IdentityId::halfways_green,
        IdentityId::full_green}) {
    CHECK(identity_from_name(identity_name(id)) == id);
  }
}

TEST_CASE("both application routes of Op(L) agree on a weighted field") {
  DriftCtx c;
  auto g = make_grid(1, 2048, 16.0);
  auto u = make_mu_function(c.td.mu, BumpSpec{0.3, 0.9}, g);
  auto fft = apply_L(c.sym, u.realized, ApplyRoute::fft, c.td);
  auto fac = apply_L(c.sym, u.realized, ApplyRoute::factored, c.td);
  double num = 0.0, den = 1e-300;
  int jb = g->boundary_index();
  for (int j = jb + 8; j < g->n() - 8; ++j) {
    num = std::max(num, std::abs(fft.out.v[j] - fac.out.v[j]));
    den = std::max(den, std::abs(fft.out.v[j]));
  }
  CHECK(num / den < 1e-3);
}

TEST_CASE("adjoint route: Op(conj L) is the pairing adjoint of Op(L)") {
  DriftCtx c;
  auto g = make_grid(1, 2048, 16.0);
  auto u = make_mu_function(c.td.mu, BumpSpec{0.3, 0.9}, g);
  auto v = make_mu_function(c.td.mu_star, BumpSpec{0.4, 1.0}, g);
  auto rep = verify_zero_identity(c.sym, u, v, c.td);
  CHECK(rep.identity_id == IdentityId::zero_identity);
  CHECK(rep.rel_residual < 1e-2);
}

TEST_CASE("singular-integral oracle matches the multiplier route") {
  DriftCtx c;
  auto g = make_grid(1, 2048, 16.0);
  auto u = make_mu_function(0.0, BumpSpec{0.8, 0.6}, g);
  auto fft = apply_L(c.sym, u.realized, ApplyRoute::fft, c.td);
  std::vector<int> idx = {g->boundary_index() + 48, g->boundary_index() + 96};
  auto pv = oracle_apply(c.sym, u.realized, idx);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    double den = std::abs(fft.out.at(0, idx[i]));
    CHECK(std::abs(pv[i] - fft.out.at(0, idx[i])) / den < 1e-3);
  }
}

TEST_CASE("oracle is translation-equivariant") {
  DriftCtx c;
  auto g = make_grid(1, 1024, 16.0);
  int shift = 32;  // one unit
  auto u0 = make_mu_function(0.0, BumpSpec{0.8, 0.6}, g);
  auto u1 = make_mu_function(0.0, BumpSpec{0.8 + shift * g->spacing(0), 0.6}, g);
  std::vector<int> idx0 = {g->boundary_index() + 64};
  std::vector<int> idx1 = {g->boundary_index() + 64 + shift};
  auto p0 = oracle_apply(c.sym, u0.realized, idx0);
  auto p1 = oracle_apply(c.sym, u1.realized, idx1);
  CHECK(std::abs(p0[0] - p1[0]) / std::abs(p0[0]) < 1e-8);
}

TEST_CASE("zero input produces zero residual reports") {
  DriftCtx c;
  auto g = make_grid(1, 512, 16.0);
  auto z = make_mu_function(c.td.mu, BumpSpec{0.3, 0.9, 0.0}, g);  // amp = 0
  auto v = make_mu_function(c.td.mu_star, BumpSpec{0.4, 1.0}, g);
  auto rep = verify_zero_identity(c.sym, z, v, c.td);
  CHECK(rep.abs_residual < 1e-14);
  CHECK(std::abs(rep.lhs) < 1e-14);
  CHECK(std::abs(rep.rhs) < 1e-14);
}

TEST_CASE("general identity residual decreases under refinement") {
  DriftCtx c;
  std::vector<GridPtr> grids = {make_grid(1, 512, 16.0), make_grid(1, 1024, 16.0),
                                make_grid(1, 2048, 16.0)};
  auto sweep = convergence_sweep(grids, [&](const GridPtr& g) {
    auto u = make_mu_function(c.td.mu, BumpSpec{0.3, 0.9}, g);
    auto up = make_mu_function(c.td.mu_star, BumpSpec{0.5, 1.2}, g);
    return verify_ibp_general(c.sym, u, up, c.td);
  });
  CHECK(sweep.reports.size() == 3);
  CHECK(sweep.monotone);
  CHECK(sweep.reports.back().rel_residual < 1e-2);
  CHECK(sweep.fitted_order > 0.5);
}

TEST_CASE("convergence sweep fits the decay order of synthetic residuals") {
  std::vector<GridPtr> grids = {make_grid(1, 128, 8.0), make_grid(1, 256, 8.0),
                                make_grid(1, 512, 8.0)};
  DriftCtx c;
  auto sweep = convergence_sweep(grids, [&](const GridPtr& g) {
    double h = g->spacing(0);
    return make_report(IdentityId::ibp_general, cplx(1.0 + h * h, 0.0),
                       cplx(1.0, 0.0), *g, Preset::custom, c.td);
  });
  CHECK(sweep.fitted_order == doctest::Approx(2.0).epsilon(0.05));
  CHECK(sweep.monotone);
  CHECK(!sweep.at_floor);
}

TEST_CASE("report bookkeeping carries grid and symbol context") {
  DriftCtx c;
  auto g = make_grid(2, 64, 4.0);
  auto rep = make_report(IdentityId::halfways_green, cplx(2.0, 0.0),
                         cplx(1.0, 0.0), *g, Preset::frac_laplacian_drift, c.td);
  CHECK(rep.dim == 2);
  CHECK(rep.n == 64);
  CHECK(rep.box == doctest::Approx(4.0));
  CHECK(rep.abs_residual == doctest::Approx(1.0));
  CHECK(rep.rel_residual == doctest::Approx(0.5));
  CHECK(rep.mu == doctest::Approx(c.td.mu));
}
