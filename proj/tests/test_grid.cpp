#include <doctest.h>

#include <cmath>

#include "fracgreen/grid.hpp"

using namespace fracgreen;

namespace {

// Schwartz-class profile in x_n, compactly banded in practice.
Field gaussian_field(const GridPtr& g, double center, double width) {
  Field f(g, Support::whole_space);
  int n = g->n();
  for (int jt = 0; jt < (g->dim() == 1 ? 1 : n); ++jt)
    for (int jn = 0; jn < n; ++jn) {
      double xn = g->coord(g->dim() - 1, jn);
      double xt = g->dim() == 1 ? 0.0 : g->coord(0, jt);
      f.v[g->index(jt, jn)] =
          std::exp(-((xn - center) * (xn - center) + xt * xt) / (width * width));
    }
  return f;
}

}  // namespace

TEST_CASE("grid geometry: boundary node, coordinates, frequencies") {
  auto g = make_grid(1, 64, 8.0);
  CHECK(g->coord(0, g->boundary_index()) == doctest::Approx(0.0));
  CHECK(g->coord(0, 0) == doctest::Approx(-8.0));
  CHECK(g->spacing(0) == doctest::Approx(0.25));
  CHECK(g->freq(0, 1) == doctest::Approx(3.141592653589793 / 8.0));
  CHECK(g->freq(0, 63) == doctest::Approx(-3.141592653589793 / 8.0));
  CHECK(g->freq_max(0) == doctest::Approx(32 * g->freq_spacing(0)));
}

TEST_CASE("nyquist filter is multiplicative in the order") {
  auto g = make_grid(1, 128, 8.0);
  for (double xi : {0.1, 3.0, 11.0, g->freq_max(0) * 0.9}) {
    double fs = nyquist_filter(*g, 0.0, xi, 0.7);
    double ft = nyquist_filter(*g, 0.0, xi, 1.6);
    double fst = nyquist_filter(*g, 0.0, xi, 2.3);
    CHECK(fs * ft == doctest::Approx(fst).epsilon(1e-13));
  }
  CHECK(nyquist_filter(*g, 0.0, 1.0, 0.0) == doctest::Approx(1.0));
}

TEST_CASE("fft_apply with the unit symbol is the identity") {
  auto g = make_grid(1, 256, 8.0);
  auto f = gaussian_field(g, 0.7, 1.3);
  auto out = fft_apply([](double, double) { return cplx(1.0, 0.0); }, f);
  double worst = 0.0;
  for (std::size_t i = 0; i < f.v.size(); ++i)
    worst = std::max(worst, std::abs(out.v[i] - f.v[i]));
  CHECK(worst < 1e-13);
}

TEST_CASE("order-reducing factors compose additively on whole-space fields") {
  auto g = make_grid(1, 512, 8.0);
  auto f = gaussian_field(g, 0.0, 1.0);
  auto a = xi_plus(xi_plus(f, 0.4), 0.3);
  auto b = xi_plus(f, 0.7);
  double worst = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < f.v.size(); ++i) {
    worst = std::max(worst, std::abs(a.v[i] - b.v[i]));
    scale = std::max(scale, std::abs(b.v[i]));
  }
  CHECK(worst / scale < 1e-12);
}

TEST_CASE("weighted quadrature reproduces Gamma integrals") {
  // f = x^beta e^{-x} on x_n > 0; integral is Gamma(beta + 1).
  auto g = make_grid(1, 2048, 16.0);
  for (double beta : {0.5, -0.5, 0.25}) {
    Field f(g, Support::restricted_upper);
    int jb = g->boundary_index();
    for (int j = jb + 1; j < g->n(); ++j) {
      double x = g->coord(0, j);
      f.v[j] = std::pow(x, beta) * std::exp(-x);
    }
    cplx got = weighted_upper_integral(f, beta, 4);
    double want = std::tgamma(beta + 1.0);
    CHECK(std::abs(got - want) / want < 2e-5);
  }
}

TEST_CASE("plain upper integral of a decaying exponential") {
  auto g = make_grid(1, 2048, 16.0);
  Field f(g, Support::restricted_upper);
  for (int j = g->boundary_index(); j < g->n(); ++j)
    f.v[j] = std::exp(-g->coord(0, j));
  // trapezoid endpoint term h^2/12 f'(0) dominates
  CHECK(std::abs(upper_integral(f) - 1.0) < 5e-5);
}

TEST_CASE("boundary value extrapolation on a smooth field") {
  auto g = make_grid(1, 512, 8.0);
  Field f(g, Support::whole_space);
  for (int j = 0; j < g->n(); ++j) {
    double x = g->coord(0, j);
    f.v[j] = std::cos(0.9 * x) * std::exp(-0.2 * x * x);
  }
  auto bv = boundary_value_extrapolated(f);
  CHECK(std::abs(bv.v[0] - 1.0) < 1e-5);
  auto bs = boundary_value_samples(f);
  CHECK(std::abs(bs.v[0] - 1.0) < 1e-14);
}

TEST_CASE("halfspace inner product: trapezoid boundary weight") {
  auto g = make_grid(1, 1024, 16.0);
  Field f(g, Support::restricted_upper), one(g, Support::restricted_upper);
  for (int j = g->boundary_index(); j < g->n(); ++j) {
    f.v[j] = std::exp(-g->coord(0, j));
    one.v[j] = 1.0;
  }
  CHECK(std::abs(halfspace_inner(f, one) - 1.0) < 2e-4);
}

TEST_CASE("support diagnostics") {
  auto g = make_grid(1, 256, 8.0);
  Field f(g, Support::supported_upper);
  for (int j = g->boundary_index(); j < g->n(); ++j)
    f.v[j] = std::exp(-g->coord(0, j));
  CHECK(lower_half_relative_mass(f) == doctest::Approx(0.0));
  f.v[10] = 0.3;
  CHECK(lower_half_relative_mass(f) > 0.0);
  CHECK(box_edge_max(f) >= 0.0);
}

TEST_CASE("window is a flat-top partition") {
  auto g = make_grid(1, 256, 8.0);
  CHECK(window_value(*g, 0, g->boundary_index()) == doctest::Approx(1.0));
  CHECK(window_value(*g, 0, 0) == doctest::Approx(0.0));
  CHECK(window_value(*g, 0, g->n() - 1) == doctest::Approx(0.0));
}

TEST_CASE("field arithmetic helpers") {
  auto g = make_grid(1, 64, 4.0);
  auto f = gaussian_field(g, 0.0, 1.0);
  auto sum = field_add(f, field_scale(f, -1.0));
  for (auto& z : sum.v) CHECK(std::abs(z) == doctest::Approx(0.0));
  auto diff = field_sub(f, f);
  for (auto& z : diff.v) CHECK(std::abs(z) == doctest::Approx(0.0));
}
