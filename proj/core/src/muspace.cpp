#include "fracgreen/muspace.hpp"

#include <array>
#include <cmath>

namespace fracgreen {

namespace {
const double kE = std::exp(1.0);
}

SmoothFn bump_profile(double center, double halfwidth, double amp) {
  if (halfwidth <= 0) throw std::invalid_argument("bump halfwidth must be positive");
  double A = amp * kE;  // peak value amp at the center
  auto phi = [](double t) { return std::exp(-1.0 / (1.0 - t * t)); };
  SmoothFn s;
  s.f = [=](double x) {
    double t = (x - center) / halfwidth;
    if (std::abs(t) >= 1.0) return 0.0;
    return A * phi(t);
  };
  s.df = [=](double x) {
    double t = (x - center) / halfwidth;
    if (std::abs(t) >= 1.0) return 0.0;
    double u = 1.0 - t * t;
    return A * phi(t) * (-2.0 * t / (u * u)) / halfwidth;
  };
  s.d2f = [=](double x) {
    double t = (x - center) / halfwidth;
    if (std::abs(t) >= 1.0) return 0.0;
    double u = 1.0 - t * t;
    double u2 = u * u;
    double g = -2.0 * t / u2;
    double gp = -2.0 / u2 - 8.0 * t * t / (u2 * u);
    return A * phi(t) * (g * g + gp) / (halfwidth * halfwidth);
  };
  return s;
}

SmoothFn exp_profile(double rate, double amp) {
  SmoothFn s;
  s.f = [=](double x) { return amp * std::exp(-rate * x); };
  s.df = [=](double x) { return -rate * amp * std::exp(-rate * x); };
  s.d2f = [=](double x) { return rate * rate * amp * std::exp(-rate * x); };
  return s;
}

SmoothFn constant_profile(double amp) {
  SmoothFn s;
  s.f = [=](double) { return amp; };
  s.df = [](double) { return 0.0; };
  s.d2f = [](double) { return 0.0; };
  return s;
}

SmoothFn multiply_by_x(const SmoothFn& w) {
  SmoothFn s;
  s.f = [w](double x) { return x * w.f(x); };
  s.df = [w](double x) { return w.f(x) + x * w.df(x); };
  s.d2f = [w](double x) { return 2.0 * w.df(x) + x * w.d2f(x); };
  return s;
}

SmoothFn scale_profile(const SmoothFn& w, double s) {
  SmoothFn out;
  out.f = [w, s](double x) { return s * w.f(x); };
  out.df = [w, s](double x) { return s * w.df(x); };
  out.d2f = [w, s](double x) { return s * w.d2f(x); };
  return out;
}

namespace {

// Smooth factor of the normal derivative: mu w + x w'. Its own second
// derivative would need w'''; a central difference of w'' stands in (only
// diagnostics read it).
SmoothFn derivative_factor(const SmoothFn& w, double mu) {
  SmoothFn s;
  s.f = [w, mu](double x) { return mu * w.f(x) + x * w.df(x); };
  s.df = [w, mu](double x) { return (mu + 1.0) * w.df(x) + x * w.d2f(x); };
  s.d2f = [w, mu](double x) {
    double eps = 1e-5;
    double w3 = (w.d2f(x + eps) - w.d2f(x - eps)) / (2.0 * eps);
    return (mu + 2.0) * w.d2f(x) + x * w3;
  };
  return s;
}

SmoothFn negated_derivative(const SmoothFn& w, double scale) {
  SmoothFn s;
  s.f = [w, scale](double x) { return scale * w.df(x); };
  s.df = [w, scale](double x) { return scale * w.d2f(x); };
  s.d2f = [w, scale](double x) {
    double eps = 1e-5;
    return scale * (w.d2f(x + eps) - w.d2f(x - eps)) / (2.0 * eps);
  };
  return s;
}

}  // namespace

double MuFunction::w(int j_t, double x_n) const {
  double v = normal_factor.f(x_n);
  if (grid->dim() == 2) v *= tangential_factor.f(grid->coord(0, j_t));
  return v;
}

double MuFunction::dw(int j_t, double x_n) const {
  double v = normal_factor.df(x_n);
  if (grid->dim() == 2) v *= tangential_factor.f(grid->coord(0, j_t));
  return v;
}

MuFunction MuFunction::analytic_normal_derivative() const {
  return make_mu_function(mu - 1.0, derivative_factor(normal_factor, mu),
                          tangential_factor, grid);
}

MuFunction make_mu_function(double mu, SmoothFn normal_factor,
                            SmoothFn tangential_factor, const GridPtr& grid) {
  if (mu <= -1.0) throw std::invalid_argument("weight exponent must exceed -1");
  MuFunction u;
  u.mu = mu;
  u.grid = grid;
  u.normal_factor = std::move(normal_factor);
  u.tangential_factor = std::move(tangential_factor);
  u.realized = Field(grid, Support::supported_upper);
  const Grid& g = *grid;
  int jb = g.boundary_index();
  for (int jt = 0; jt < int(g.boundary_size()); ++jt) {
    double tv = g.dim() == 2 ? u.tangential_factor.f(g.coord(0, jt)) : 1.0;
    for (int jn = jb; jn < g.n(); ++jn) {
      double xn = g.coord(g.dim() - 1, jn);
      double wgt;
      if (jn == jb) {
        // boundary sample: the continuous limit when it exists, else 0
        wgt = (mu == 0.0) ? 1.0 : 0.0;
      } else {
        wgt = std::pow(xn, mu);
      }
      u.realized.at(jt, jn) = wgt * tv * u.normal_factor.f(xn);
    }
  }
  return u;
}

MuFunction make_mu_function(double mu, const BumpSpec& bump, const GridPtr& grid) {
  const Grid& g = *grid;
  double Ln = g.halfwidth(g.dim() - 1);
  if (bump.center + bump.halfwidth >= Ln || bump.center - bump.halfwidth <= -Ln)
    throw std::invalid_argument("bump support exceeds the box");
  SmoothFn tang = constant_profile(1.0);
  if (g.dim() == 2) {
    double Lt = g.halfwidth(0);
    if (std::abs(bump.t_center) + bump.t_halfwidth >= Lt)
      throw std::invalid_argument("bump support exceeds the box");
    tang = bump_profile(bump.t_center, bump.t_halfwidth, 1.0);
  }
  return make_mu_function(mu, bump_profile(bump.center, bump.halfwidth, bump.amp),
                          std::move(tang), grid);
}

std::vector<cplx> compensated_spectrum(const MuFunction& u, const GridPtr& fine) {
  const Grid& g = *fine;
  const double lam = 2.0;  // model decay; e^{-lam L} must be negligible
  const SmoothFn& w = u.normal_factor;
  // Taylor coefficients of e^{lam x} w(x) at 0
  std::array<double, 3> c;
  c[0] = w.f(0.0);
  c[1] = w.df(0.0) + lam * c[0];
  c[2] = 0.5 * (w.d2f(0.0) + 2.0 * lam * w.df(0.0) + lam * lam * c[0]);
  auto model = [&](double x) {
    return std::exp(-lam * x) * (c[0] + x * (c[1] + x * c[2]));
  };
  int jb = g.boundary_index();
  std::vector<cplx> v(g.size(), cplx{});
  for (int jt = 0; jt < int(g.boundary_size()); ++jt) {
    double tv = g.dim() == 2 ? u.tangential_factor.f(g.coord(0, jt)) : 1.0;
    for (int jn = jb + 1; jn < g.n(); ++jn) {
      double xn = g.coord(g.dim() - 1, jn);
      v[g.index(jt, jn)] = tv * std::pow(xn, u.mu) * (w.f(xn) - model(xn));
    }
  }
  fft_forward(g.dim(), g.n(), v);
  std::vector<cplx> wt(g.dim() == 2 ? g.n() : 1, cplx{1.0});
  if (g.dim() == 2) {
    for (int jt = 0; jt < g.n(); ++jt)
      wt[jt] = u.tangential_factor.f(g.coord(0, jt));
    fft_forward(1, g.n(), wt);
  }
  // DFT_k of a sampled profile ~ (-1)^k FT(xi_k) / h (x_j = -L + j h), so the
  // exact model transforms Gamma(mu+k+1) (lam + i xi)^{-mu-k-1} enter with
  // that phase and normalization
  double hn = g.spacing(g.dim() - 1);
  int nt = g.dim() == 2 ? g.n() : 1;
  for (int kt = 0; kt < nt; ++kt) {
    for (int kn = 0; kn < g.n(); ++kn) {
      cplx den(lam, g.freq(g.dim() - 1, kn));
      cplx p = std::pow(den, -u.mu - 1.0);
      cplx ft{};
      for (int k = 0; k < 3; ++k) {
        ft += c[k] * std::tgamma(u.mu + k + 1.0) * p;
        p /= den;
      }
      double par = (kn % 2 == 0) ? 1.0 : -1.0;
      v[g.index(kt, kn)] += wt[kt] * par * ft / hn;
    }
  }
  return v;
}

Field apply_multiplier_oversampled(const SymbolFn& m, const MuFunction& u,
                                   double filter_order, int oversample) {
  const Grid& g = *u.grid;
  GridPtr gf = u.grid;
  int os = oversample;
  if (os > 1) {
    std::array<double, 2> hw{g.halfwidth(0), g.halfwidth(g.dim() - 1)};
    gf = make_grid(g.dim(), os * g.n(), hw);
  } else {
    os = 1;
  }
  const Grid& gg = *gf;
  std::vector<cplx> v = compensated_spectrum(u, gf);
  if (gg.dim() == 1) {
    for (int k = 0; k < gg.n(); ++k) {
      double xi = gg.freq(0, k);
      v[k] *= m(0.0, xi) * nyquist_filter(gg, 0.0, xi, filter_order);
    }
  } else {
    for (int kt = 0; kt < gg.n(); ++kt) {
      double xt = gg.freq(0, kt);
      for (int kn = 0; kn < gg.n(); ++kn) {
        double xn = gg.freq(1, kn);
        v[gg.index(kt, kn)] *= m(xt, xn) * nyquist_filter(gg, xt, xn, filter_order);
      }
    }
  }
  fft_backward(gg.dim(), gg.n(), v);
  Field fine(gf, Support::whole_space);
  fine.v = std::move(v);
  Field out(u.grid, Support::restricted_upper);
  int jb = g.boundary_index(), jbf = gf->boundary_index();
  for (int jt = 0; jt < int(g.boundary_size()); ++jt) {
    for (int jn = jb; jn < g.n(); ++jn)
      out.at(jt, jn) = fine.at(os * jt, jbf + os * (jn - jb));
    out.at(jt, jb) =
        3.0 * out.at(jt, jb + 1) - 3.0 * out.at(jt, jb + 2) + out.at(jt, jb + 3);
  }
  return out;
}

BoundaryData weighted_trace(const MuFunction& u, int k) {
  if (k != 0 && k != 1)
    throw std::invalid_argument("only Dirichlet and Neumann weighted traces exist");
  double mu = u.mu + 1.0;  // u carries exponent mu - 1
  if (mu <= 0) throw std::invalid_argument("weighted trace needs mu > 0");
  BoundaryData out(u.grid);
  double gm = std::tgamma(mu + k);
  for (int jt = 0; jt < int(u.grid->boundary_size()); ++jt)
    out.v[jt] = gm * (k == 0 ? u.w(jt, 0.0) : u.dw(jt, 0.0));
  return out;
}

BoundaryData trace_via_order_reduction(const MuFunction& u) {
  double mu = u.mu + 1.0;
  if (mu <= 0) throw std::invalid_argument("weighted trace needs mu > 0");
  const Grid& g = *u.grid;
  int n = g.n();
  // Order reduction by the plus factor of u's own (negative) exponent,
  // acting on the oversampled compensated spectrum. The reduced spectrum
  // decays only like 1/xi_n -- its inverse transform jumps at the boundary
  // -- so the one-sided boundary value comes from the tail-fitting
  // plus-integral extraction, not from extrapolating band-limited samples.
  int os = g.dim() == 1 ? 16 : 4;
  int nf = os * n;
  std::array<double, 2> hw{g.halfwidth(0), g.halfwidth(g.dim() - 1)};
  GridPtr gf = make_grid(g.dim(), nf, hw);
  std::vector<cplx> v = compensated_spectrum(u, gf);
  double hn = gf->spacing(g.dim() - 1);
  BoundaryData out(u.grid);
  if (g.dim() == 1) {
    // compensated_spectrum is in DFT convention ((-1)^k FT / h); the
    // plus-integral routes expect plain transform samples
    for (int k = 0; k < nf; ++k) {
      double xi = gf->freq(0, k);
      double par = (k % 2 == 0) ? 1.0 : -1.0;
      v[k] *= std::pow(cplx(1.0, xi), u.mu) * par * hn;
    }
    out.v[0] = plus_integral(v, *gf, bracket(0.0)).value;
    return out;
  }
  // dim 2: extract per tangential frequency on the coarse band, then
  // transform the boundary values back to positions
  std::vector<cplx> bh(n);
  std::vector<cplx> line(nf);
  for (int kt = 0; kt < n; ++kt) {
    int s = (kt < n / 2) ? kt : kt - n;
    int ktf = s >= 0 ? s : s + nf;
    double sigma = bracket(g.freq(0, kt));
    for (int kn = 0; kn < nf; ++kn) {
      double xi = gf->freq(1, kn);
      double par = (kn % 2 == 0) ? 1.0 : -1.0;
      line[kn] =
          v[gf->index(ktf, kn)] * std::pow(cplx(sigma, xi), u.mu) * par * hn;
    }
    // fine- and coarse-grid tangential DFTs differ by the sample spacing
    bh[kt] = plus_integral(line, *gf, sigma).value / double(os);
  }
  fft_backward(1, n, bh);
  out.v = std::move(bh);
  return out;
}

namespace {

// F^{-1}_{xi' -> x'}[phat(xi') x_n^{mu+k} e^{-<xi'> x_n}] / Gamma(mu+k+1),
// the k-th model term of the boundary expansion.
Field model_term(const BoundaryData& p, double mu, int k, const GridPtr& grid) {
  const Grid& g = *grid;
  double ex = mu + k;
  double gm = std::tgamma(ex + 1.0);
  Field out(grid, Support::supported_upper);
  int jb = g.boundary_index();
  if (g.dim() == 1) {
    for (int jn = jb; jn < g.n(); ++jn) {
      double xn = g.coord(0, jn);
      double wgt = jn == jb ? (ex == 0.0 ? 1.0 : 0.0) : std::pow(xn, ex);
      out.v[jn] = p.v[0] * wgt * std::exp(-xn) / gm;
    }
    return out;
  }
  std::vector<cplx> ph = p.v;
  fft_forward(1, g.n(), ph);
  for (int jn = jb; jn < g.n(); ++jn) {
    double xn = g.coord(1, jn);
    double wgt = jn == jb ? (ex == 0.0 ? 1.0 : 0.0) : std::pow(xn, ex);
    std::vector<cplx> plane(g.n());
    for (int kt = 0; kt < g.n(); ++kt)
      plane[kt] = ph[kt] * wgt * std::exp(-bracket(g.freq(0, kt)) * xn);
    fft_backward(1, g.n(), plane);
    for (int jt = 0; jt < g.n(); ++jt) out.at(jt, jn) = plane[jt] / gm;
  }
  return out;
}

}  // namespace

ExpansionResult expansion_terms(const MuFunction& u, int k_max) {
  if (k_max > 1) throw std::invalid_argument("expansion order beyond 1 unsupported");
  double mu = u.mu + 1.0;
  if (mu <= 0) throw std::invalid_argument("expansion needs mu > 0");
  ExpansionResult res;
  res.coeffs.k_max = k_max;
  res.coeffs.u0 = weighted_trace(u, 0);
  res.coeffs.phi0 = res.coeffs.u0;
  res.U0 = model_term(res.coeffs.u0, mu - 1.0, 0, u.grid);
  if (k_max >= 1) {
    res.coeffs.u1 = weighted_trace(u, 1);
    BoundaryData lifted = tangential_bessel(res.coeffs.u0, 1.0);
    res.coeffs.phi1 = BoundaryData(u.grid);
    for (std::size_t i = 0; i < lifted.v.size(); ++i)
      res.coeffs.phi1.v[i] = res.coeffs.u1.v[i] + mu * lifted.v[i];
    res.U1 = model_term(res.coeffs.phi1, mu - 1.0, 1, u.grid);
  } else {
    res.coeffs.u1 = BoundaryData(u.grid);
    res.coeffs.phi1 = BoundaryData(u.grid);
    res.U1 = Field(u.grid, Support::supported_upper);
  }
  return res;
}

LargeSplit split_large(const MuFunction& u) {
  double mu = u.mu + 1.0;
  if (mu <= 0) throw std::invalid_argument("splitting needs mu > 0");
  LargeSplit out;
  out.U = make_mu_function(mu, scale_profile(u.normal_factor, 1.0 / mu),
                           u.tangential_factor, u.grid);
  out.u1 = make_mu_function(mu, negated_derivative(u.normal_factor, -1.0 / mu),
                            u.tangential_factor, u.grid);
  return out;
}

}  // namespace fracgreen
