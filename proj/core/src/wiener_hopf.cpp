#include "fracgreen/wiener_hopf.hpp"

#include <algorithm>
#include <cmath>

namespace fracgreen {

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;

// Inverse transform of one xi_n line onto the z-grid (z_j = -L + j h):
// g_check_j = (1/h) * IDFT[(-1)^k g_k]_j. The (-1)^k factors carry the
// e^{i L xi_k} phases of the shifted grid.
std::vector<cplx> line_to_z(std::vector<cplx> g, int n) {
  for (int k = 1; k < n; k += 2) g[k] = -g[k];
  fft_backward(1, n, g);
  return g;
}

std::vector<cplx> line_to_xi(std::vector<cplx> z, int n) {
  fft_forward(1, n, z);
  for (int k = 1; k < n; k += 2) z[k] = -z[k];
  return z;
}

// Normal-equation solve by Gaussian elimination with partial pivoting.
template <std::size_t M>
std::array<cplx, M> solve_normal(std::array<std::array<cplx, M>, M> G,
                                 std::array<cplx, M> r) {
  std::array<std::size_t, M> piv{};
  for (std::size_t i = 0; i < M; ++i) piv[i] = i;
  for (std::size_t col = 0; col < M; ++col) {
    std::size_t best = col;
    for (std::size_t row = col + 1; row < M; ++row)
      if (std::abs(G[piv[row]][col]) > std::abs(G[piv[best]][col])) best = row;
    std::swap(piv[col], piv[best]);
    for (std::size_t row = col + 1; row < M; ++row) {
      cplx fac = G[piv[row]][col] / G[piv[col]][col];
      for (std::size_t q = col; q < M; ++q) G[piv[row]][q] -= fac * G[piv[col]][q];
      r[piv[row]] -= fac * r[piv[col]];
    }
  }
  std::array<cplx, M> c{};
  for (std::size_t col = M; col-- > 0;) {
    cplx acc = r[piv[col]];
    for (std::size_t q = col + 1; q < M; ++q) acc -= G[piv[col]][q] * c[q];
    c[col] = acc / G[piv[col]][col];
  }
  return c;
}

}  // namespace

SymbolDecomposition wh_decompose(const SymbolFn& q, const TransmissionData& td,
                                 const GridPtr& grid, double tail_tol) {
  const Grid& g = *grid;
  int n = g.n();
  int nax = g.dim() - 1;
  double h = g.spacing(nax);
  int lines = g.dim() == 1 ? 1 : n;
  SymbolDecomposition dec;
  dec.grid = grid;
  dec.s0 = td.s0;
  dec.f_plus.assign(g.size(), cplx{});
  dec.f_minus.assign(g.size(), cplx{});

  // tail check on the central tangential line: the reduced symbol must be
  // close to its limit s0 at both ends of the resolved xi_n band
  {
    double lo = std::abs(q(0.0, g.freq(nax, n / 2)) - td.s0);
    double hi = std::abs(q(0.0, g.freq(nax, n / 2 - 1)) - td.s0);
    if (std::max(lo, hi) > tail_tol * td.s0)
      throw std::runtime_error("insufficient frequency extent");
  }

  double worst = 0.0;
  for (int kt = 0; kt < lines; ++kt) {
    double xt = g.dim() == 1 ? 0.0 : g.freq(0, kt);
    std::vector<cplx> gl(n);
    for (int k = 0; k < n; ++k) gl[k] = q(xt, g.freq(nax, k)) - td.s0;
    std::vector<cplx> zline = line_to_z(gl, n);
    for (auto& z : zline) z /= h;
    // split in z; the z = 0 sample (index n/2) lies on both closed
    // halflines and is shared evenly, which cancels the O(h) constant
    // offset a one-sided assignment would leave in each part
    std::vector<cplx> zp(n, cplx{}), zm(n, cplx{});
    for (int j = 0; j < n; ++j) (j > n / 2 ? zp[j] : zm[j]) = zline[j];
    zp[n / 2] = zm[n / 2] = 0.5 * zline[n / 2];
    std::vector<cplx> fp = line_to_xi(std::move(zp), n);
    std::vector<cplx> fm = line_to_xi(std::move(zm), n);
    for (int k = 0; k < n; ++k) {
      std::size_t i = g.dim() == 1 ? std::size_t(k) : g.index(kt, k);
      dec.f_plus[i] = fp[k] * h;
      dec.f_minus[i] = fm[k] * h;
      worst = std::max(worst,
                       std::abs(gl[k] - dec.f_plus[i] - dec.f_minus[i]));
    }
  }
  dec.residual_recon = worst;
  return dec;
}

std::vector<cplx> decomposition_line(const SymbolDecomposition& dec,
                                     bool plus_part, int tang_index) {
  const Grid& g = *dec.grid;
  const auto& src = plus_part ? dec.f_plus : dec.f_minus;
  std::vector<cplx> out(g.n());
  for (int k = 0; k < g.n(); ++k)
    out[k] = src[g.dim() == 1 ? std::size_t(k) : g.index(tang_index, k)];
  return out;
}

namespace {

// Least-squares tail decomposition of a plus line over |xi| >= xi_max/4.
// Four models, built in the same discrete convention as the input
// (spectrum = h * DFT of z-samples):
//   M1  exact samples e^{-sigma z_j} H(z_j > 0)     boundary value 1
//   M2  exact samples z_j e^{-sigma z_j} H(z_j > 0) boundary value 0
//   D   point mass at the z = 0 node                no 0+ content
//   Wa  the upper-half part of the band-truncation wiggle that a unit
//       z = 0 jump leaves on inverse-DFT samples ((-1)^j / j, independent
//       of N): z-samples of the continuum-sampled 1/(sigma + i xi) minus
//       e^{-sigma z}, kept for z > 0 only
//   Wb  the lower-half part of the same wiggle (continuum-sampled lines
//       carry both sides; z-split lines only the side they kept)
// Lines produced by z-splits inherit the wiggle of their *parent* jump
// (truncated to one side), so its amplitude must be fitted independently of
// the line's own tail coefficient; subtracting the fitted combination
// leaves z-samples clean for boundary extrapolation.
struct TailFit {
  std::array<cplx, 5> coeff;                // A, A2, B, W_above, W_below
  std::array<std::vector<cplx>, 5> models;
};

TailFit fit_tail_models(std::span<const cplx> f, const Grid& grid, double sigma) {
  int n = grid.n();
  int nax = grid.dim() - 1;
  double h = grid.spacing(nax);
  TailFit fit;
  for (auto& m : fit.models) m.assign(n, cplx{});
  std::vector<cplx> z1(n, cplx{}), z2(n, cplx{});
  for (int j = n / 2 + 1; j < n; ++j) {
    double zj = -grid.halfwidth(nax) + j * h;
    z1[j] = std::exp(-sigma * zj);
    z2[j] = zj * std::exp(-sigma * zj);
  }
  std::vector<cplx> m1c(n);
  for (int k = 0; k < n; ++k) m1c[k] = 1.0 / cplx(sigma, grid.freq(nax, k));
  std::vector<cplx> zc = line_to_z(std::move(m1c), n);
  std::vector<cplx> wa(n, cplx{}), wb(n, cplx{});
  for (int j = n / 2 + 1; j < n; ++j) wa[j] = zc[j] / h - z1[j];
  for (int j = 0; j < n / 2; ++j) wb[j] = zc[j] / h;
  z1 = line_to_xi(std::move(z1), n);
  z2 = line_to_xi(std::move(z2), n);
  wa = line_to_xi(std::move(wa), n);
  wb = line_to_xi(std::move(wb), n);
  for (int k = 0; k < n; ++k) {
    fit.models[0][k] = z1[k] * h;
    fit.models[1][k] = z2[k] * h;
    fit.models[2][k] = h;
    fit.models[3][k] = wa[k] * h;
    fit.models[4][k] = wb[k] * h;
  }
  double band = 0.25 * grid.freq_max(nax);
  constexpr int kM = 5;
  std::array<std::array<cplx, kM>, kM> G{};
  std::array<cplx, kM> r{};
  for (int k = 0; k < n; ++k) {
    if (std::abs(grid.freq(nax, k)) < band) continue;
    for (int p = 0; p < kM; ++p) {
      r[p] += std::conj(fit.models[p][k]) * f[k];
      for (int q = 0; q < kM; ++q)
        G[p][q] += std::conj(fit.models[p][k]) * fit.models[q][k];
    }
  }
  fit.coeff = solve_normal(G, r);
  return fit;
}

}  // namespace

PlusIntegralResult plus_integral(std::span<const cplx> f, const Grid& grid,
                                 double sigma) {
  int n = grid.n();
  int nax = grid.dim() - 1;
  double dxi = grid.freq_spacing(nax);
  double h = grid.spacing(nax);

  TailFit fit = fit_tail_models(f, grid, sigma);
  std::vector<cplx> rem(f.begin(), f.end());
  for (int p = 0; p < 5; ++p)
    for (int k = 0; k < n; ++k) rem[k] -= fit.coeff[p] * fit.models[p][k];

  // Subtracted boundary values: only M1 contributes (value 1).
  PlusIntegralResult res;
  cplx sum{};
  for (const auto& r : rem) sum += r;
  res.value_quad = fit.coeff[0] + sum * dxi / (2.0 * kPi);

  std::vector<cplx> z = line_to_z(rem, n);
  cplx z1 = z[n / 2 + 1] / h, z2 = z[n / 2 + 2] / h, z3 = z[n / 2 + 3] / h;
  res.value = fit.coeff[0] + (3.0 * z1 - 3.0 * z2 + z3);

  res.route_gap = std::abs(res.value - res.value_quad) /
                  std::max({std::abs(res.value), std::abs(res.value_quad), 1e-14});
  return res;
}

BoundarySymbol boundary_jump_symbol(const SymbolDecomposition& dec) {
  const Grid& g = *dec.grid;
  int n = g.n();
  int lines = g.dim() == 1 ? 1 : n;
  BoundarySymbol bs;
  bs.grid = dec.grid;
  bs.b_vals.resize(lines);
  bs.frak_b.resize(lines);
  bs.frak_b_prime.resize(lines);
  bs.b_jump_route.resize(lines);

  for (int kt = 0; kt < lines; ++kt) {
    double sigma = bracket(g.dim() == 1 ? 0.0 : g.freq(0, kt));
    auto fp = decomposition_line(dec, true, kt);
    auto fm = decomposition_line(dec, false, kt);
    bs.frak_b[kt] = plus_integral(fp, g, sigma).value;
    std::vector<cplx> fmc(n);
    for (int k = 0; k < n; ++k) fmc[k] = std::conj(fm[k]);
    bs.frak_b_prime[kt] = plus_integral(fmc, g, sigma).value;
    bs.b_vals[kt] = bs.frak_b[kt] - std::conj(bs.frak_b_prime[kt]);

    // direct route: the jump of the inverse transform of q - s0 at z = 0
    // equals the high-frequency limit of i xi_n (q - s0); fit
    // i xi (fp + fm) = b + c/(i xi) + c'/(i xi)^2 per side over the band
    // [xi_max/4, xi_max/2] and average the sides
    cplx bsum{};
    for (int side = 0; side < 2; ++side) {
      std::array<std::array<cplx, 3>, 3> G{};
      std::array<cplx, 3> r{};
      for (int k = 0; k < n; ++k) {
        double xi = g.freq(g.dim() - 1, k);
        if (side == 0 ? xi <= 0 : xi >= 0) continue;
        double axi = std::abs(xi);
        if (axi < 0.25 * g.freq_max(g.dim() - 1) ||
            axi > 0.5 * g.freq_max(g.dim() - 1))
          continue;
        cplx y = cplx(0.0, xi) * (fp[k] + fm[k]);
        std::array<cplx, 3> m{1.0, 1.0 / cplx(0.0, xi), 1.0 / cplx(-xi * xi, 0.0)};
        for (int p = 0; p < 3; ++p) {
          r[p] += std::conj(m[p]) * y;
          for (int q = 0; q < 3; ++q) G[p][q] += std::conj(m[p]) * m[q];
        }
      }
      // forward elimination / back substitution (well-conditioned 3x3)
      for (int col = 0; col < 3; ++col)
        for (int row = col + 1; row < 3; ++row) {
          cplx fac = G[row][col] / G[col][col];
          for (int q = col; q < 3; ++q) G[row][q] -= fac * G[col][q];
          r[row] -= fac * r[col];
        }
      std::array<cplx, 3> sol{};
      for (int col = 2; col >= 0; --col) {
        cplx acc = r[col];
        for (int q = col + 1; q < 3; ++q) acc -= G[col][q] * sol[q];
        sol[col] = acc / G[col][col];
      }
      bsum += sol[0];
    }
    bs.b_jump_route[kt] = 0.5 * bsum;
  }
  double bmax = 1e-14;
  for (const auto& b : bs.b_vals) bmax = std::max(bmax, std::abs(b));
  for (int kt = 0; kt < lines; ++kt)
    bs.max_route_gap = std::max(
        bs.max_route_gap, std::abs(bs.b_vals[kt] - bs.b_jump_route[kt]) / bmax);
  return bs;
}

BoundaryData apply_boundary_symbol(const BoundarySymbol& bs, const BoundaryData& p) {
  const Grid& g = *bs.grid;
  BoundaryData out(bs.grid);
  if (g.dim() == 1) {
    out.v[0] = bs.b_vals[0] * p.v[0];
    return out;
  }
  std::vector<cplx> v = p.v;
  fft_forward(1, g.n(), v);
  for (int k = 0; k < g.n(); ++k) v[k] *= bs.b_vals[k];
  fft_backward(1, g.n(), v);
  out.v = std::move(v);
  return out;
}

Field apply_decomposition_part(const SymbolDecomposition& dec, bool plus_part,
                               const Field& f) {
  const Grid& g = *f.grid;
  if (!(g == *dec.grid)) throw std::invalid_argument("grid mismatch");
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
  const auto& m = plus_part ? dec.f_plus : dec.f_minus;
  for (std::size_t i = 0; i < v.size(); ++i) v[i] *= m[i];
  fft_backward(g.dim(), g.n(), v);
  Field out(f.grid, Support::whole_space);
  out.v = std::move(v);
  if (plus_part && f.tag != Support::whole_space) {
    // F_+ maps e^+ data into the closed upper halfspace; the result is
    // continuous across the boundary (order-0 symbol with integrable kernel)
    out.tag = Support::supported_upper;
    out.leak = lower_half_relative_mass(out);
    int jb = g.boundary_index();
    if (g.dim() == 1) {
      std::fill(out.v.begin(), out.v.begin() + jb, cplx{});
    } else {
      for (int jt = 0; jt < g.n(); ++jt)
        for (int jn = 0; jn < jb; ++jn) out.at(jt, jn) = cplx{};
    }
  }
  return out;
}

Field poisson_K0(const BoundaryData& p, const GridPtr& grid) {
  const Grid& g = *grid;
  Field out(grid, Support::supported_upper);
  int jb = g.boundary_index();
  if (g.dim() == 1) {
    for (int jn = jb; jn < g.n(); ++jn)
      out.v[jn] = p.v[0] * std::exp(-g.coord(0, jn));
    return out;
  }
  std::vector<cplx> ph = p.v;
  fft_forward(1, g.n(), ph);
  for (int jn = jb; jn < g.n(); ++jn) {
    double xn = g.coord(1, jn);
    std::vector<cplx> plane(g.n());
    for (int k = 0; k < g.n(); ++k)
      plane[k] = ph[k] * std::exp(-bracket(g.freq(0, k)) * xn);
    fft_backward(1, g.n(), plane);
    for (int jt = 0; jt < g.n(); ++jt) out.at(jt, jn) = plane[jt];
  }
  return out;
}

PoissonMuResult poisson_K0_mu(const BoundaryData& p, double mu, const GridPtr& grid) {
  if (mu <= 0) throw std::invalid_argument("weighted Poisson needs mu > 0");
  const Grid& g = *grid;
  Field k0 = poisson_K0(p, grid);

  PoissonMuResult res;
  res.field = Field(grid, Support::supported_upper);
  int jb = g.boundary_index();
  double gamma_mu = std::tgamma(mu);
  for (int jt = 0; jt < int(g.boundary_size()); ++jt)
    for (int jn = jb; jn < g.n(); ++jn) {
      double xn = g.coord(g.dim() - 1, jn);
      double w = jn == jb ? (mu > 1 ? 0.0 : (mu == 1.0 ? 1.0 : 0.0))
                          : std::pow(xn, mu - 1.0);
      res.field.at(jt, jn) = w * k0.at(jt, jn) / gamma_mu;
    }
  if (mu == 1.0) {
    for (int jt = 0; jt < int(g.boundary_size()); ++jt)
      res.field.at(jt, jb) = k0.at(jt, jb);
  }

  // order reduction in mixed representation: along each tangential
  // frequency line the lifted field e+ K0 p has the exact normal-axis
  // transform phat(xi') / (sigma + i xi_n), so the reducing factor acts on
  // continuum samples and the band-limited (oversampled, rolled-off)
  // inverse transform realizes the result on the grid. Sampling the lifted
  // field itself would hand the growing factor the O(h) ringing of the
  // boundary jump, which contaminates the whole halfspace.
  res.field_order_reduced = Field(grid, Support::restricted_upper);
  {
    int n = g.n();
    int nax = g.dim() - 1;
    constexpr int os = 16;
    int nf = os * n;
    GridPtr gfine = make_grid(1, nf, g.halfwidth(nax));
    double hf = gfine->spacing(0);
    int jbf = gfine->boundary_index();
    std::vector<cplx> ph = p.v;
    if (g.dim() == 2) fft_forward(1, n, ph);
    int lines = g.dim() == 1 ? 1 : n;
    std::vector<std::vector<cplx>> xl(lines);
    for (int kt = 0; kt < lines; ++kt) {
      double sigma = bracket(g.dim() == 1 ? 0.0 : g.freq(0, kt));
      std::vector<cplx> vals(nf);
      for (int kn = 0; kn < nf; ++kn) {
        double xi = gfine->freq(0, kn);
        vals[kn] = ph[kt] * std::pow(cplx(sigma, xi), -mu) *
                   nyquist_filter(*gfine, 0.0, xi, 1.0 - mu);
      }
      std::vector<cplx> z = line_to_z(std::move(vals), nf);
      xl[kt].resize(n - jb);
      for (int jn = jb; jn < n; ++jn)
        xl[kt][jn - jb] = z[jbf + os * (jn - jb)] / hf;
    }
    if (g.dim() == 1) {
      for (int jn = jb; jn < n; ++jn)
        res.field_order_reduced.v[jn] = xl[0][jn - jb];
    } else {
      for (int jn = jb; jn < n; ++jn) {
        std::vector<cplx> plane(n);
        for (int kt = 0; kt < n; ++kt) plane[kt] = xl[kt][jn - jb];
        fft_backward(1, n, plane);
        for (int jt = 0; jt < n; ++jt)
          res.field_order_reduced.at(jt, jn) = plane[jt];
      }
    }
  }

  double num = 0.0, den = 1e-300;
  for (int jt = 0; jt < int(g.boundary_size()); ++jt)
    for (int jn = jb + 4; jn < g.n(); ++jn) {
      num = std::max(num, std::abs(res.field.at(jt, jn) -
                                   res.field_order_reduced.at(jt, jn)));
      den = std::max(den, std::abs(res.field.at(jt, jn)));
    }
  res.cross_route_residual = num / den;
  return res;
}

double one_minus_laplacian_residual(const Field& f, const GridPtr& grid) {
  const Grid& g = *grid;
  int n = g.n();
  int jb = g.boundary_index();
  double num = 0.0, den = 1e-300;
  auto second = [&](auto&& val, int j, double h) {
    return (2.0 * (val(j - 3) + val(j + 3)) - 27.0 * (val(j - 2) + val(j + 2)) +
            270.0 * (val(j - 1) + val(j + 1)) - 490.0 * val(j)) /
           (180.0 * h * h);
  };
  // standoff of one bracket length from the boundary: nearer the plane the
  // field's tangential smoothness scale drops below the grid spacing and
  // the finite differences would measure their own truncation error
  if (g.dim() == 1) {
    double h = g.spacing(0);
    for (int j = jb + 4; j < n - 4; ++j) {
      if (g.coord(0, j) < 1.0) continue;
      if (std::abs(g.coord(0, j)) > 0.7 * g.halfwidth(0)) continue;
      cplx lap = second([&](int i) { return f.v[i]; }, j, h);
      cplx r = f.v[j] - lap;
      num = std::max(num, std::abs(r));
      den = std::max(den, std::abs(f.v[j]));
    }
    return num / den;
  }
  double ht = g.spacing(0), hn = g.spacing(1);
  for (int jt = 3; jt < n - 3; ++jt) {
    if (std::abs(g.coord(0, jt)) > 0.7 * g.halfwidth(0)) continue;
    for (int jn = jb + 4; jn < n - 4; ++jn) {
      if (g.coord(1, jn) < 1.0) continue;
      if (std::abs(g.coord(1, jn)) > 0.7 * g.halfwidth(1)) continue;
      cplx lap = second([&](int i) { return f.at(i, jn); }, jt, ht) +
                 second([&](int i) { return f.at(jt, i); }, jn, hn);
      cplx r = f.at(jt, jn) - lap;
      num = std::max(num, std::abs(r));
      den = std::max(den, std::abs(f.at(jt, jn)));
    }
  }
  return num / den;
}

}  // namespace fracgreen
