#include "fracgreen/grid.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace fracgreen {

Grid::Grid(int dim, int points_per_axis, std::array<double, 2> halfwidth)
    : dim_(dim), n_(points_per_axis), halfwidth_(halfwidth) {
  if (dim != 1 && dim != 2) throw std::invalid_argument("grid dim must be 1 or 2");
  if (n_ < 8 || (n_ & (n_ - 1)) != 0)
    throw std::invalid_argument("grid points per axis must be a power of two >= 8");
  for (int ax = 0; ax < dim_; ++ax)
    if (halfwidth_[ax] <= 0) throw std::invalid_argument("grid halfwidth must be positive");
}

GridPtr make_grid(int dim, int points_per_axis, double halfwidth) {
  return std::make_shared<const Grid>(dim, points_per_axis,
                                      std::array<double, 2>{halfwidth, halfwidth});
}

GridPtr make_grid(int dim, int points_per_axis, std::array<double, 2> halfwidth) {
  return std::make_shared<const Grid>(dim, points_per_axis, halfwidth);
}

double nyquist_filter(const Grid& g, double xi_t, double xi_n, double order) {
  if (order <= 0.0) return 1.0;
  double e = 0.0;
  if (g.dim() == 2) {
    double et = xi_t / g.freq_max(0);
    e += std::pow(et * et, 5);
  }
  double en = xi_n / g.freq_max(g.dim() - 1);
  e += std::pow(en * en, 5);
  return std::exp(-36.0 * e * order);
}

namespace {

// Forward transform with trapezoid treatment of the x_n = 0 jump plane for
// halfspace-supported inputs (stored full-value, transformed half-value).
std::vector<cplx> to_spectrum(const Field& f) {
  const Grid& g = *f.grid;
  std::vector<cplx> v = f.v;
  if (f.tag != Support::whole_space) {
    int jb = g.boundary_index();
    if (g.dim() == 1) {
      v[jb] *= 0.5;
    } else {
      for (int jt = 0; jt < g.n(); ++jt) v[g.index(jt, jb)] *= 0.5;
    }
  }
  fft_forward(g.dim(), g.n(), v);
  return v;
}

void quadratic_boundary_from_above(Field& f) {
  const Grid& g = *f.grid;
  int jb = g.boundary_index();
  if (g.dim() == 1) {
    f.v[jb] = 3.0 * f.v[jb + 1] - 3.0 * f.v[jb + 2] + f.v[jb + 3];
  } else {
    for (int jt = 0; jt < g.n(); ++jt)
      f.at(jt, jb) = 3.0 * f.at(jt, jb + 1) - 3.0 * f.at(jt, jb + 2) + f.at(jt, jb + 3);
  }
}

void zero_lower_half(Field& f) {
  const Grid& g = *f.grid;
  int jb = g.boundary_index();
  if (g.dim() == 1) {
    std::fill(f.v.begin(), f.v.begin() + jb, cplx{});
  } else {
    for (int jt = 0; jt < g.n(); ++jt)
      for (int jn = 0; jn < jb; ++jn) f.at(jt, jn) = cplx{};
  }
}

}  // namespace

Field fft_apply(const SymbolFn& m, const Field& f, double filter_order) {
  const Grid& g = *f.grid;
  std::vector<cplx> v = to_spectrum(f);
  if (g.dim() == 1) {
    for (int k = 0; k < g.n(); ++k) {
      double xi = g.freq(0, k);
      v[k] *= m(0.0, xi) * nyquist_filter(g, 0.0, xi, filter_order);
    }
  } else {
    for (int kt = 0; kt < g.n(); ++kt) {
      double xt = g.freq(0, kt);
      for (int kn = 0; kn < g.n(); ++kn) {
        double xn = g.freq(1, kn);
        v[g.index(kt, kn)] *= m(xt, xn) * nyquist_filter(g, xt, xn, filter_order);
      }
    }
  }
  fft_backward(g.dim(), g.n(), v);
  Field out(f.grid, Support::whole_space);
  out.v = std::move(v);
  return out;
}

Field xi_plus(const Field& f, double t) {
  if (t == 0.0) return f;
  const Grid& g = *f.grid;
  auto m = [](double xt, double xn, double t_) {
    return std::pow(cplx(bracket(xt), xn), t_);
  };
  Field out = fft_apply([&](double xt, double xn) { return m(xt, xn, t); }, f,
                        std::max(t, 0.0));
  if (f.tag == Support::supported_upper || f.tag == Support::restricted_upper) {
    out.tag = Support::supported_upper;
    out.leak = lower_half_relative_mass(out);
    zero_lower_half(out);
    // restore full-value storage at the jump plane (IDFT returns the
    // two-sided average, and the lower limit is 0)
    int jb = g.boundary_index();
    if (g.dim() == 1) {
      out.v[jb] *= 2.0;
    } else {
      for (int jt = 0; jt < g.n(); ++jt) out.at(jt, jb) *= 2.0;
    }
  }
  return out;
}

Field xi_minus_restricted(const Field& f, double t) {
  if (t == 0.0) return f;
  Field out = fft_apply(
      [t](double xt, double xn) { return std::pow(cplx(bracket(xt), -xn), t); },
      f, std::max(t, 0.0));
  out.tag = Support::restricted_upper;
  quadratic_boundary_from_above(out);
  zero_lower_half(out);
  return out;
}

Field normal_derivative_spectral(const Field& f) {
  return fft_apply([](double, double xn) { return cplx(0.0, xn); }, f, 1.0);
}

BoundaryData tangential_bessel(const BoundaryData& p, double t) {
  const Grid& g = *p.grid;
  BoundaryData out(p.grid);
  if (g.dim() == 1 || t == 0.0) {
    out.v = p.v;
    return out;
  }
  std::vector<cplx> v = p.v;
  fft_forward(1, g.n(), v);
  for (int k = 0; k < g.n(); ++k) v[k] *= std::pow(bracket(g.freq(0, k)), t);
  fft_backward(1, g.n(), v);
  out.v = std::move(v);
  return out;
}

cplx halfspace_inner(const Field& f, const Field& g) {
  const Grid& gr = *f.grid;
  if (!(gr == *g.grid)) throw std::invalid_argument("grid mismatch");
  int jb = gr.boundary_index();
  cplx acc{};
  if (gr.dim() == 1) {
    for (int jn = jb; jn < gr.n(); ++jn) {
      double w = (jn == jb) ? 0.5 : 1.0;
      acc += w * f.v[jn] * std::conj(g.v[jn]);
    }
    return acc * gr.spacing(0);
  }
  for (int jt = 0; jt < gr.n(); ++jt)
    for (int jn = jb; jn < gr.n(); ++jn) {
      double w = (jn == jb) ? 0.5 : 1.0;
      acc += w * f.at(jt, jn) * std::conj(g.at(jt, jn));
    }
  return acc * gr.spacing(0) * gr.spacing(1);
}

cplx boundary_inner(const BoundaryData& p, const BoundaryData& q) {
  const Grid& g = *p.grid;
  cplx acc{};
  for (std::size_t i = 0; i < p.v.size(); ++i) acc += p.v[i] * std::conj(q.v[i]);
  if (g.dim() == 2) acc *= g.spacing(0);
  return acc;
}

namespace {

// integral of x^p over [x1, x2], continued through p = -1
double ipow(double x1, double x2, double p) {
  if (std::abs(p + 1.0) < 1e-12) return std::log(x2 / x1);
  return (std::pow(x2, p + 1.0) - std::pow(x1, p + 1.0)) / (p + 1.0);
}

// Per-column integral over x_n > 0 of values ~ x^beta * smooth.  On each
// cell the smooth factor s = f / x^beta is linear and the weight integrated
// exactly; over [0, first_cell*h] the linear extension of s is used with the
// analytic continuation of the weight integral, which realizes the finite
// part when beta <= -1.
cplx weighted_column(const Grid& g, const Field& f, int jt, double beta, int c) {
  int jb = g.boundary_index();
  double h = g.spacing(g.dim() - 1);
  int m0 = jb + c;
  auto val = [&](int jn) { return g.dim() == 1 ? f.v[jn] : f.at(jt, jn); };
  cplx acc{};
  cplx s_prev = val(m0) / std::pow(c * h, beta);
  for (int jn = m0; jn < g.n() - 1; ++jn) {
    double x1 = (jn - jb) * h, x2 = x1 + h;
    cplx s_next = val(jn + 1) / std::pow(x2, beta);
    cplx slope = (s_next - s_prev) / h;
    acc += s_prev * ipow(x1, x2, beta) +
           slope * (ipow(x1, x2, beta + 1.0) - x1 * ipow(x1, x2, beta));
    if (jn == m0) {
      // leading piece [0, X]: s extended below its first sample by the
      // parabola through the samples at X, X + h, X + 2h
      double X = c * h;
      cplx s2 = jn + 2 < g.n() ? val(jn + 2) / std::pow(X + 2.0 * h, beta)
                               : cplx{};
      cplx curv = (s2 - 2.0 * s_next + s_prev) / (2.0 * h * h);
      cplx b1 = slope - curv * h;  // ds at X of the parabola
      cplx a1 = b1 - 2.0 * curv * X;
      cplx a0 = s_prev - b1 * X + curv * X * X;
      double i0 = std::abs(beta + 1.0) < 1e-12 ? std::log(X)
                                               : std::pow(X, beta + 1.0) / (beta + 1.0);
      acc += a0 * i0 + a1 * std::pow(X, beta + 2.0) / (beta + 2.0) +
             curv * std::pow(X, beta + 3.0) / (beta + 3.0);
    }
    s_prev = s_next;
  }
  return acc;
}

}  // namespace

cplx weighted_upper_integral(const Field& f, double beta, int first_cell) {
  if (beta <= -2.0) throw std::invalid_argument("weight exponent must exceed -2");
  const Grid& g = *f.grid;
  if (first_cell < 1) throw std::invalid_argument("first_cell must be >= 1");
  if (g.dim() == 1) return weighted_column(g, f, 0, beta, first_cell);
  cplx acc{};
  for (int jt = 0; jt < g.n(); ++jt)
    acc += weighted_column(g, f, jt, beta, first_cell);
  return acc * g.spacing(0);
}

cplx upper_integral(const Field& f) {
  const Grid& g = *f.grid;
  int jb = g.boundary_index();
  cplx acc{};
  if (g.dim() == 1) {
    for (int jn = jb; jn < g.n(); ++jn)
      acc += ((jn == jb) ? 0.5 : 1.0) * f.v[jn];
    return acc * g.spacing(0);
  }
  for (int jt = 0; jt < g.n(); ++jt)
    for (int jn = jb; jn < g.n(); ++jn)
      acc += ((jn == jb) ? 0.5 : 1.0) * f.at(jt, jn);
  return acc * g.spacing(0) * g.spacing(1);
}

BoundaryData boundary_value_extrapolated(const Field& f) {
  const Grid& g = *f.grid;
  BoundaryData out(f.grid);
  int jb = g.boundary_index();
  for (int jt = 0; jt < int(g.boundary_size()); ++jt)
    out.v[jt] = 3.0 * f.at(jt, jb + 1) - 3.0 * f.at(jt, jb + 2) + f.at(jt, jb + 3);
  return out;
}

BoundaryData boundary_value_samples(const Field& f) {
  const Grid& g = *f.grid;
  BoundaryData out(f.grid);
  int jb = g.boundary_index();
  for (int jt = 0; jt < int(g.boundary_size()); ++jt) out.v[jt] = f.at(jt, jb);
  return out;
}

namespace {

double window_axis(double x, double L, double inner, double outer) {
  double r = std::abs(x) / L;
  if (r <= inner) return 1.0;
  if (r >= outer) return 0.0;
  double t = (r - inner) / (outer - inner);
  double s = t * t * t * (t * (6.0 * t - 15.0) + 10.0);  // C^2 smoothstep
  return 1.0 - s;
}

}  // namespace

double window_value(const Grid& g, int j_t, int j_n, double inner, double outer) {
  double w = window_axis(g.coord(g.dim() - 1, j_n), g.halfwidth(g.dim() - 1),
                         inner, outer);
  if (g.dim() == 2)
    w *= window_axis(g.coord(0, j_t), g.halfwidth(0), inner, outer);
  return w;
}

double lower_half_relative_mass(const Field& f) {
  const Grid& g = *f.grid;
  int jb = g.boundary_index();
  double below = 0.0, total = 0.0;
  if (g.dim() == 1) {
    for (int jn = 0; jn < g.n(); ++jn) {
      double m = std::norm(f.v[jn]);
      total += m;
      if (jn < jb) below += m;
    }
  } else {
    for (int jt = 0; jt < g.n(); ++jt)
      for (int jn = 0; jn < g.n(); ++jn) {
        double m = std::norm(f.at(jt, jn));
        total += m;
        if (jn < jb) below += m;
      }
  }
  if (total == 0.0) return 0.0;
  return std::sqrt(below / total);
}

double box_edge_max(const Field& f) {
  const Grid& g = *f.grid;
  double m = 0.0;
  if (g.dim() == 1) {
    m = std::max(std::abs(f.v.front()), std::abs(f.v.back()));
  } else {
    for (int j = 0; j < g.n(); ++j) {
      m = std::max(m, std::abs(f.at(0, j)));
      m = std::max(m, std::abs(f.at(g.n() - 1, j)));
      m = std::max(m, std::abs(f.at(j, 0)));
      m = std::max(m, std::abs(f.at(j, g.n() - 1)));
    }
  }
  return m;
}

namespace {

Support combine(Support a, Support b) {
  if (a == b) return a;
  if (a == Support::whole_space || b == Support::whole_space)
    return Support::whole_space;
  return Support::restricted_upper;
}

}  // namespace

Field field_add(const Field& a, const Field& b) {
  if (!(*a.grid == *b.grid)) throw std::invalid_argument("grid mismatch");
  Field out(a.grid, combine(a.tag, b.tag));
  for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] = a.v[i] + b.v[i];
  return out;
}

Field field_sub(const Field& a, const Field& b) {
  if (!(*a.grid == *b.grid)) throw std::invalid_argument("grid mismatch");
  Field out(a.grid, combine(a.tag, b.tag));
  for (std::size_t i = 0; i < out.v.size(); ++i) out.v[i] = a.v[i] - b.v[i];
  return out;
}

Field field_scale(const Field& a, cplx s) {
  Field out = a;
  for (auto& z : out.v) z *= s;
  return out;
}

void export_field_csv(const Field& f, const std::string& path) {
  const Grid& g = *f.grid;
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path);
  if (g.dim() == 1) {
    os << "x,re,im\n";
    for (int j = 0; j < g.n(); ++j)
      os << g.coord(0, j) << ',' << f.v[j].real() << ',' << f.v[j].imag() << '\n';
  } else {
    os << "x_t,x_n,re,im\n";
    for (int jt = 0; jt < g.n(); ++jt)
      for (int jn = 0; jn < g.n(); ++jn)
        os << g.coord(0, jt) << ',' << g.coord(1, jn) << ','
           << f.at(jt, jn).real() << ',' << f.at(jt, jn).imag() << '\n';
  }
}

void export_spectrum_csv(const Field& f, const std::string& path) {
  const Grid& g = *f.grid;
  std::vector<cplx> v = f.v;
  fft_forward(g.dim(), g.n(), v);
  double scale = 1.0;
  for (int ax = 0; ax < g.dim(); ++ax) scale *= g.spacing(ax);
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open " + path);
  if (g.dim() == 1) {
    os << "xi,re,im\n";
    for (int k = 0; k < g.n(); ++k)
      os << g.freq(0, k) << ',' << scale * v[k].real() << ','
         << scale * v[k].imag() << '\n';
  } else {
    os << "xi_t,xi_n,re,im\n";
    for (int kt = 0; kt < g.n(); ++kt)
      for (int kn = 0; kn < g.n(); ++kn)
        os << g.freq(0, kt) << ',' << g.freq(1, kn) << ','
           << scale * v[g.index(kt, kn)].real() << ','
           << scale * v[g.index(kt, kn)].imag() << '\n';
  }
}

}  // namespace fracgreen
