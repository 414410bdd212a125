#include "fracgreen/symbol.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <random>

namespace fracgreen {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

std::string preset_name(Preset p) {
  switch (p) {
    case Preset::frac_laplacian: return "frac_laplacian";
    case Preset::frac_laplacian_drift: return "frac_laplacian_drift";
    case Preset::odd_mix_1d: return "odd_mix_1d";
    case Preset::custom: return "custom";
  }
  throw std::logic_error("bad preset");
}

Preset preset_from_name(const std::string& s) {
  if (s == "frac_laplacian") return Preset::frac_laplacian;
  if (s == "frac_laplacian_drift") return Preset::frac_laplacian_drift;
  if (s == "odd_mix_1d") return Preset::odd_mix_1d;
  if (s == "custom") return Preset::custom;
  throw std::invalid_argument("unknown preset: " + s);
}

namespace {

void check_order(double two_a) {
  if (two_a <= 0.0 || two_a >= 2.0)
    throw std::invalid_argument("symbol order 2a must lie in (0, 2)");
}

// Periodic cubic spline on uniform knots over [0, 2 pi); cyclic tridiagonal
// solve for the second derivatives.
class PeriodicSpline {
 public:
  explicit PeriodicSpline(std::vector<double> y) : y_(std::move(y)) {
    int m = int(y_.size());
    if (m < 3) throw std::invalid_argument("angle table needs >= 3 samples");
    h_ = 2.0 * kPi / m;
    // Solve M c = r with M cyclic tridiagonal (1, 4, 1) scaled by h/6 and
    // r the divided-difference right-hand side, via the Sherman-Morrison
    // correction on the two corner entries.
    std::vector<double> r(m);
    for (int i = 0; i < m; ++i) {
      double ym = y_[(i + m - 1) % m], y0 = y_[i], yp = y_[(i + 1) % m];
      r[i] = 6.0 * (yp - 2.0 * y0 + ym) / (h_ * h_);
    }
    c_ = solve_cyclic(4.0, 1.0, r);
  }

  double value(double theta) const {
    int m = int(y_.size());
    double t = std::fmod(theta, 2.0 * kPi);
    if (t < 0) t += 2.0 * kPi;
    int i = std::min(int(t / h_), m - 1);
    double x = t - i * h_;
    double y0 = y_[i], y1 = y_[(i + 1) % m];
    double c0 = c_[i], c1 = c_[(i + 1) % m];
    double A = (h_ - x) / h_, B = x / h_;
    return A * y0 + B * y1 +
           ((A * A * A - A) * c0 + (B * B * B - B) * c1) * h_ * h_ / 6.0;
  }

 private:
  static std::vector<double> solve_cyclic(double diag, double off,
                                          const std::vector<double>& r) {
    int m = int(r.size());
    auto tri = [&](std::vector<double> d, std::vector<double> rhs) {
      // plain Thomas algorithm with constant off-diagonals
      std::vector<double> c(m, off);
      for (int i = 1; i < m; ++i) {
        double w = off / d[i - 1];
        d[i] -= w * c[i - 1];
        rhs[i] -= w * rhs[i - 1];
      }
      std::vector<double> x(m);
      x[m - 1] = rhs[m - 1] / d[m - 1];
      for (int i = m - 2; i >= 0; --i) x[i] = (rhs[i] - off * x[i + 1]) / d[i];
      return x;
    };
    double gamma = -diag;
    std::vector<double> d(m, diag);
    d[0] -= gamma;
    d[m - 1] -= off * off / gamma;
    std::vector<double> u(m, 0.0);
    u[0] = gamma;
    u[m - 1] = off;
    auto y = tri(d, r);
    auto z = tri(d, u);
    double fact = (y[0] + off * y[m - 1] / gamma) /
                  (1.0 + z[0] + off * z[m - 1] / gamma);
    std::vector<double> x(m);
    for (int i = 0; i < m; ++i) x[i] = y[i] - fact * z[i];
    return x;
  }

  std::vector<double> y_;
  std::vector<double> c_;
  double h_ = 0.0;
};

}  // namespace

HomogeneousSymbol HomogeneousSymbol::frac_laplacian(int dim, double a) {
  check_order(2.0 * a);
  HomogeneousSymbol s;
  s.dim_ = dim;
  s.two_a_ = 2.0 * a;
  s.preset_ = Preset::frac_laplacian;
  s.params_ = {a};
  s.fn_ = [a](double xt, double xn) {
    double r2 = xt * xt + xn * xn;
    return cplx(std::pow(r2, a), 0.0);
  };
  return s;
}

HomogeneousSymbol HomogeneousSymbol::frac_laplacian_drift(int dim,
                                                          std::vector<double> b) {
  if (int(b.size()) != dim) throw std::invalid_argument("drift size != dim");
  HomogeneousSymbol s;
  s.dim_ = dim;
  s.two_a_ = 1.0;  // order 1: |xi| and b.xi scale alike
  s.preset_ = Preset::frac_laplacian_drift;
  s.params_ = b;
  s.fn_ = [b, dim](double xt, double xn) {
    double r = std::sqrt(xt * xt + xn * xn);
    double drift = dim == 1 ? b[0] * xn : b[0] * xt + b[1] * xn;
    return cplx(r, drift);
  };
  return s;
}

HomogeneousSymbol HomogeneousSymbol::odd_mix_1d(double a, double c) {
  check_order(2.0 * a);
  HomogeneousSymbol s;
  s.dim_ = 1;
  s.two_a_ = 2.0 * a;
  s.preset_ = Preset::odd_mix_1d;
  s.params_ = {a, c};
  s.fn_ = [a, c](double, double xn) {
    double sg = (xn > 0) - (xn < 0);
    return std::pow(std::abs(xn), 2.0 * a) * cplx(1.0, c * sg);
  };
  return s;
}

HomogeneousSymbol HomogeneousSymbol::custom_1d(double a, double even_value,
                                               double odd_value) {
  check_order(2.0 * a);
  HomogeneousSymbol s;
  s.dim_ = 1;
  s.two_a_ = 2.0 * a;
  s.preset_ = Preset::custom;
  s.params_ = {a, even_value, odd_value};
  s.fn_ = [a, even_value, odd_value](double, double xn) {
    double sg = (xn > 0) - (xn < 0);
    return std::pow(std::abs(xn), 2.0 * a) * cplx(even_value, odd_value * sg);
  };
  return s;
}

HomogeneousSymbol HomogeneousSymbol::custom_2d(double a,
                                               std::vector<double> even_table,
                                               std::vector<double> odd_table) {
  check_order(2.0 * a);
  if (even_table.size() != odd_table.size())
    throw std::invalid_argument("angle tables must have equal size");
  auto even = std::make_shared<PeriodicSpline>(std::move(even_table));
  auto odd = std::make_shared<PeriodicSpline>(std::move(odd_table));
  HomogeneousSymbol s;
  s.dim_ = 2;
  s.two_a_ = 2.0 * a;
  s.preset_ = Preset::custom;
  s.params_ = {a};
  s.fn_ = [a, even, odd](double xt, double xn) {
    double r = std::sqrt(xt * xt + xn * xn);
    double th = std::atan2(xn, xt);
    // symmetrize: A(theta) from the even part of the table, B from the odd
    double A = 0.5 * (even->value(th) + even->value(th + kPi));
    double B = 0.5 * (odd->value(th) - odd->value(th + kPi));
    return std::pow(r, 2.0 * a) * cplx(A, B);
  };
  return s;
}

cplx HomogeneousSymbol::eval(double xi_t, double xi_n) const {
  if (xi_t == 0.0 && xi_n == 0.0)
    throw std::domain_error("homogeneous symbol undefined at the origin");
  return fn_(xi_t, xi_n);
}

namespace {

std::vector<std::array<double, 2>> sphere_samples(int dim, int samples,
                                                  unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * kPi);
  std::vector<std::array<double, 2>> pts;
  pts.reserve(samples);
  for (int i = 0; i < samples; ++i) {
    if (dim == 1) {
      pts.push_back({0.0, (i % 2 == 0) ? 1.0 : -1.0});
    } else {
      double th = ang(rng);
      pts.push_back({std::cos(th), std::sin(th)});
    }
  }
  return pts;
}

}  // namespace

double HomogeneousSymbol::homogeneity_residual(int samples, unsigned seed) const {
  std::mt19937 rng(seed + 1);
  std::uniform_real_distribution<double> scale(0.5, 2.0);
  double worst = 0.0;
  for (auto [xt, xn] : sphere_samples(dim_, samples, seed)) {
    double t = scale(rng);
    cplx base = eval(xt, xn);
    cplx scaled = eval(t * xt, t * xn);
    worst = std::max(worst,
                     std::abs(scaled - std::pow(t, two_a_) * base) /
                         std::max(std::abs(base), 1e-14));
  }
  return worst;
}

double HomogeneousSymbol::parity_residual(int samples, unsigned seed) const {
  double worst = 0.0;
  for (auto [xt, xn] : sphere_samples(dim_, samples, seed)) {
    cplx fwd = eval(xt, xn);
    cplx rev = eval(-xt, -xn);
    // real kernel: L(-xi) = conj(L(xi))
    worst = std::max(worst, std::abs(rev - std::conj(fwd)) /
                                std::max(std::abs(fwd), 1e-14));
  }
  return worst;
}

double HomogeneousSymbol::ellipticity_min(int samples, unsigned seed) const {
  double worst = std::numeric_limits<double>::infinity();
  for (auto [xt, xn] : sphere_samples(dim_, samples, seed))
    worst = std::min(worst, eval(xt, xn).real());
  return worst;
}

TransmissionData compute_transmission(const HomogeneousSymbol& sym) {
  cplx L1 = sym.eval(0.0, 1.0);
  if (L1.real() <= 0.0)
    throw std::runtime_error("strong ellipticity fails at the inward normal");
  TransmissionData td;
  td.a = sym.order() / 2.0;
  td.delta = std::atan(L1.imag() / L1.real()) / kPi;
  td.mu = td.a + td.delta;
  td.mu_star = td.a - td.delta;
  td.s0 = std::abs(L1);
  return td;
}

double check_mu_transmission(const HomogeneousSymbol& sym, double mu) {
  cplx lhs = sym.eval(0.0, -1.0);
  cplx rhs = std::exp(cplx(0.0, kPi * (sym.order() - 2.0 * mu))) * sym.eval(0.0, 1.0);
  return std::abs(lhs - rhs);
}

SymbolFn regularize_symbol(const HomogeneousSymbol& sym, double cutoff_radius) {
  if (cutoff_radius <= 0) throw std::invalid_argument("cutoff radius must be positive");
  HomogeneousSymbol s = sym;  // closures are shared; the copy is cheap
  double r0 = cutoff_radius;
  return [s, r0](double xt, double xn) -> cplx {
    double r = std::sqrt(xt * xt + xn * xn);
    if (r <= 0.5 * r0) return cplx{};
    double cut = 1.0;
    if (r < r0) {
      double t = (r - 0.5 * r0) / (0.5 * r0);
      cut = t * t * t * (t * (6.0 * t - 15.0) + 10.0);
    }
    return cut * s.eval(xt, xn);
  };
}

SymbolFn reduced_symbol(const SymbolFn& sym, const TransmissionData& td) {
  double mu = td.mu, mu_star = td.mu_star;
  return [sym, mu, mu_star](double xt, double xn) {
    double br = bracket(xt);
    return std::pow(cplx(br, -xn), -mu_star) * sym(xt, xn) *
           std::pow(cplx(br, xn), -mu);
  };
}

SymbolFn special_symbol(const TransmissionData& td) {
  double mu = td.mu, mu_star = td.mu_star, s0 = td.s0;
  return [mu, mu_star, s0](double xt, double xn) {
    double br = bracket(xt);
    return s0 * std::pow(cplx(br, -xn), mu_star) * std::pow(cplx(br, xn), mu);
  };
}

}  // namespace fracgreen
