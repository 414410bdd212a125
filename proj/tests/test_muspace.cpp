#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "fracgreen/muspace.hpp"
#include "fracgreen/symbol.hpp"

using namespace fracgreen;

namespace {

constexpr double kMu = 0.64758361765043326;  // drift preset, b = 0.5

MuFunction drift_weight_function(int n, double mu_shift = 0.0) {
  auto g = make_grid(1, n, 16.0);
  return make_mu_function(kMu + mu_shift, BumpSpec{0.3, 0.9, 1.0, 0.0, 2.0}, g);
}

double bump_at(double x, double center, double hw) {
  double t = (x - center) / hw;
  return std::abs(t) < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - t * t)) : 0.0;
}

}  // namespace

TEST_CASE("construction guards") {
  auto g = make_grid(1, 256, 8.0);
  CHECK_THROWS_AS((void)make_mu_function(-1.5, BumpSpec{}, g), std::invalid_argument);
  CHECK_THROWS_AS((void)make_mu_function(0.5, BumpSpec{0.0, 100.0}, g),
                  std::invalid_argument);
}

TEST_CASE("realized field vanishes below the boundary") {
  auto u = drift_weight_function(512);
  for (int j = 0; j < u.grid->boundary_index(); ++j)
    CHECK(std::abs(u.realized.v[j]) == doctest::Approx(0.0));
}

TEST_CASE("weighted Dirichlet trace equals Gamma(mu) w(0)") {
  auto u = drift_weight_function(1024, -1.0);  // exponent mu - 1
  auto t0 = weighted_trace(u, 0);
  double want = std::tgamma(kMu) * bump_at(0.0, 0.3, 0.9);
  CHECK(want == doctest::Approx(1.226142193).epsilon(1e-8));
  CHECK(std::abs(t0.v[0] - want) < 1e-12);
  auto t1 = weighted_trace(u, 1);
  double want1 = std::tgamma(kMu + 1.0) *
                 (-0.3 / 0.9 / 0.9 * 2.0 / std::pow(1.0 - 1.0 / 9.0, 2)) *
                 bump_at(0.0, 0.3, 0.9) * -1.0;
  CHECK(std::abs(t1.v[0] - want1) < 1e-10);
  CHECK_THROWS_AS((void)weighted_trace(u, 2), std::invalid_argument);
}

TEST_CASE("trace dual route via order reduction, 1d") {
  auto u = drift_weight_function(2048, -1.0);
  auto direct = weighted_trace(u, 0);
  auto reduced = trace_via_order_reduction(u);
  double gap = std::abs(reduced.v[0] - direct.v[0]) / std::abs(direct.v[0]);
  CHECK(gap < 1e-4);
  // and the gap shrinks under refinement
  auto uc = drift_weight_function(512, -1.0);
  auto rc = trace_via_order_reduction(uc);
  double gap_c = std::abs(rc.v[0] - weighted_trace(uc, 0).v[0]) /
                 std::abs(direct.v[0]);
  CHECK(gap < gap_c);
}

TEST_CASE("trace dual route via order reduction, 2d") {
  auto gap_at = [](int n) {
    auto g = make_grid(2, n, 8.0);
    auto u = make_mu_function(kMu - 1.0, BumpSpec{0.3, 0.9, 1.0, 0.0, 2.0}, g);
    auto direct = weighted_trace(u, 0);
    auto reduced = trace_via_order_reduction(u);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < direct.v.size(); ++i) {
      num = std::max(num, std::abs(reduced.v[i] - direct.v[i]));
      den = std::max(den, std::abs(direct.v[i]));
    }
    return num / den;
  };
  double coarse = gap_at(64), fine = gap_at(128);
  CHECK(fine < 5e-3);
  CHECK(fine < coarse);
}

TEST_CASE("analytic normal derivative matches finite differences off the plane") {
  auto u = drift_weight_function(1024);
  auto du = u.analytic_normal_derivative();
  CHECK(du.mu == doctest::Approx(kMu - 1.0));
  auto g = u.grid;
  double h = g->spacing(0);
  int j = g->boundary_index() + 16;  // x_n = 0.5, inside the bump support
  cplx fd = (-u.realized.v[j + 2] + 8.0 * u.realized.v[j + 1] -
             8.0 * u.realized.v[j - 1] + u.realized.v[j - 2]) /
            (12.0 * h);
  CHECK(std::abs(du.realized.v[j] - fd) < 1e-4 * std::abs(fd));
}

TEST_CASE("boundary expansion: coefficient relation and remainder order") {
  auto u = drift_weight_function(1024, -1.0);
  auto ex = expansion_terms(u, 1);
  CHECK(std::abs(ex.coeffs.phi0.v[0] - ex.coeffs.u0.v[0]) == doctest::Approx(0.0));
  // dim 1: <D'> = 1, so phi1 = u1 + mu u0
  cplx want = ex.coeffs.u1.v[0] + kMu * ex.coeffs.u0.v[0];
  CHECK(std::abs(ex.coeffs.phi1.v[0] - want) < 1e-10);
  // u - U0 - U1 vanishes to a higher order at the boundary than u - U0
  auto g = u.grid;
  int jb = g->boundary_index();
  double h = g->spacing(0);
  auto rem_ratio = [&](int j) {
    double x = (j - jb) * h;
    cplx r1 = u.realized.v[j] - ex.U0.v[j];
    cplx r2 = r1 - ex.U1.v[j];
    return std::abs(r2) / std::max(std::abs(r1), 1e-300) * (x > 0 ? 1.0 : 0.0);
  };
  CHECK(rem_ratio(jb + 8) < 0.5);
}

TEST_CASE("large split rebuilds the field from its pieces") {
  auto u = drift_weight_function(1024, -1.0);  // exponent mu - 1 > -1
  auto sp = split_large(u);
  CHECK(sp.U.mu == doctest::Approx(kMu));
  auto dU = sp.U.analytic_normal_derivative();
  auto g = u.grid;
  double worst = 0.0, scale = 0.0;
  for (int j = g->boundary_index() + 4; j < g->n(); ++j) {
    worst = std::max(worst, std::abs(dU.realized.v[j] + sp.u1.realized.v[j] -
                                     u.realized.v[j]));
    scale = std::max(scale, std::abs(u.realized.v[j]));
  }
  CHECK(worst / scale < 1e-12);
}

TEST_CASE("compensated spectrum beats raw trapezoid sampling at the endpoint") {
  auto u = drift_weight_function(256);
  auto fine = make_grid(1, 4096, 16.0);
  auto comp = compensated_spectrum(u, fine);
  // reference: very fine raw trapezoid DFT of the analytic rebuild
  auto vref = make_mu_function(kMu, BumpSpec{0.3, 0.9, 1.0, 0.0, 2.0}, fine);
  double worst = 0.0;
  int n = fine->n();
  for (int k = 0; k < n; ++k) {
    if (std::abs(k < n / 2 ? k : k - n) > n / 64) continue;  // low band
    cplx raw = 0.0;
    double h = fine->spacing(0);
    for (int j = 0; j < n; ++j)
      raw += vref.realized.v[j] *
             std::exp(cplx(0.0, -fine->coord(0, j) * fine->freq(0, k)));
    raw *= h;
    double par = (k % 2 == 0) ? 1.0 : -1.0;
    worst = std::max(worst, std::abs(par * h * comp[k] - raw));
  }
  // raw trapezoid carries the O(h^{1+mu}) endpoint error; the compensated
  // transform agrees with it only to that accuracy...
  CHECK(worst < 5e-2);
  // ...but is resolution-independent itself: doubling the fine grid moves it
  // by machine-level amounts, so the endpoint error is gone at the source.
  auto finer = make_grid(1, 8192, 16.0);
  auto comp2 = compensated_spectrum(u, finer);
  double h1 = fine->spacing(0), h2 = finer->spacing(0);
  double self = 0.0;
  for (int s = -64; s <= 64; ++s) {
    int k1 = s >= 0 ? s : n + s;
    int k2 = s >= 0 ? s : finer->n() + s;
    double p1 = (k1 % 2 == 0) ? 1.0 : -1.0;
    double p2 = (k2 % 2 == 0) ? 1.0 : -1.0;
    self = std::max(self, std::abs(p1 * h1 * comp[k1] - p2 * h2 * comp2[k2]));
  }
  CHECK(self < 1e-10);
}
