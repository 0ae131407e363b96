#include "hmh/spectral_identities.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hmh/parallel.hpp"

namespace hmh {

namespace {

bool advance(std::vector<int>& idx, int N) {
  for (int j = static_cast<int>(idx.size()) - 1; j >= 0; --j) {
    if (++idx[j] < N) return true;
    idx[j] = 0;
  }
  return false;
}

int band_of(const BandLimitedFunction& f) {
  int b = 0;
  for (const auto& s : f.slices) b = std::max(b, s.max_weight());
  return b;
}

int degree_of(const BandLimitedFunction& f) {
  int b = 0;
  for (const auto& s : f.slices) b = std::max(b, s.max_degree());
  return b;
}

double sign_of_parity(int k) { return (k % 2 == 0) ? 1.0 : -1.0; }

// Sum over a K-trapezoid grid (normalized Haar) of |sum_m red_m e^{i m.(theta' + shift)}|^2.
double k_average_abs2(const std::vector<cplx>& red, const std::vector<std::vector<int>>& modes,
                      std::span<const cplx> shift, const QuadratureRule& trap) {
  const int d = modes.empty() ? 0 : static_cast<int>(modes[0].size());
  if (d == 0) return std::norm(red.empty() ? cplx(0.0) : red[0]);
  std::vector<cplx> shifted(red.size());
  for (std::size_t m = 0; m < red.size(); ++m) {
    cplx ph = 0.0;
    for (int j = 0; j < d; ++j) ph += double(modes[m][j]) * shift[j];
    shifted[m] = red[m] * std::exp(cplx(0.0, 1.0) * ph);
  }
  const int N = static_cast<int>(trap.size());
  std::vector<int> kidx(d, 0);
  double acc = 0.0;
  do {
    double kw = 1.0;
    cplx v = 0.0;
    for (int j = 0; j < d; ++j) kw *= trap.weights[kidx[j]] / (2.0 * kPi);
    for (std::size_t m = 0; m < red.size(); ++m) {
      double ph = 0.0;
      for (int j = 0; j < d; ++j) ph += modes[m][j] * trap.nodes[kidx[j]];
      v += shifted[m] * std::polar(1.0, ph);
    }
    acc += kw * std::norm(v);
  } while (advance(kidx, N));
  return acc;
}

}  // namespace

ComplexGroupPoint ComplexGroupPoint::identity(int n, int d) {
  ComplexGroupPoint p;
  p.z.assign(n, 0.0);
  p.w.assign(n, 0.0);
  p.k.theta.assign(d, 0.0);
  p.H.assign(d, 0.0);
  return p;
}

std::vector<cplx> ComplexGroupPoint::angles() const {
  std::vector<cplx> a(k.theta.size());
  for (std::size_t j = 0; j < a.size(); ++j) a[j] = cplx(k.theta[j], H.empty() ? 0.0 : H[j]);
  return a;
}

double FourierMatrix::hs_norm_squared() const {
  double s = 0.0;
  for (const auto& [key, v] : entries) s += std::norm(v);
  return s;
}

double gutzmer_rhs(const TwistedSlice& slice, std::span<const double> y,
                   std::span<const double> v) {
  if (slice.d() != 0) throw std::invalid_argument("gutzmer_rhs: slice must have d = 0");
  const int n = slice.n();
  if (static_cast<int>(y.size()) != n || static_cast<int>(v.size()) != n)
    throw std::invalid_argument("gutzmer_rhs: dimension mismatch");
  double acc = 0.0;
  for (const auto& [key, c] : slice.coefficients()) {
    // Each P_{ma} is a single phi_beta for the full torus; its continued diagonal factorizes.
    double cont = 1.0;
    for (int j = 0; j < n; ++j)
      cont *= laguerre_function_imag(key.beta[j], slice.lambda(), y.subspan(j, 1), v.subspan(j, 1));
    acc += std::norm(c) * cont;
  }
  return acc;
}

namespace {

double gutzmer_lhs_once(const TwistedSlice& slice, std::span<const double> y,
                        std::span<const double> v, const QuadratureRule& quadK,
                        const QuadratureRule& r) {
  const int n = slice.n();
  const double lam = slice.lambda().value();
  const int sg = slice.lambda().sign();
  const double sc = std::sqrt(2.0 / slice.lambda().abs());
  const int N = static_cast<int>(r.size()), NK = static_cast<int>(quadK.size());
  std::vector<int> ix(2 * n, 0);
  std::vector<cplx> z(n), w(n), zr(n), wr(n), ang(n), red;
  std::vector<double> logw(N);
  for (int i = 0; i < N; ++i) logw[i] = std::log(r.scaled_weights[i]);
  cplx lp;
  double acc = 0.0;
  do {
    double lw = 2.0 * n * std::log(sc), sympl = 0.0;
    for (int j = 0; j < n; ++j) {
      const double x = -sg * v[j] + sc * r.nodes[ix[j]];
      const double u = sg * y[j] + sc * r.nodes[ix[n + j]];
      lw += logw[ix[j]] + logw[ix[n + j]];
      sympl += u * y[j] - v[j] * x;
      z[j] = cplx(x, y[j]);
      w[j] = cplx(u, v[j]);
    }
    std::vector<int> kidx(n, 0);
    double kint = 0.0;
    do {
      double kw = 1.0;
      for (int j = 0; j < n; ++j) {
        ang[j] = quadK.nodes[kidx[j]];
        kw *= quadK.weights[kidx[j]] / (2.0 * kPi);
      }
      torus_act_complex(ang, z, w, zr, wr);
      slice.evaluate_reduced(zr, wr, lp, red);
      kint += kw * std::exp(2.0 * lp.real() + lam * sympl + lw) * std::norm(red[0]);
    } while (advance(kidx, NK));
    acc += kint;
  } while (advance(ix, N));
  return acc;
}

}  // namespace

double gutzmer_lhs(const TwistedSlice& slice, std::span<const double> y, std::span<const double> v,
                   const QuadratureRule& quadK, const QuadratureRule& quad2n) {
  if (slice.d() != 0) throw std::invalid_argument("gutzmer_lhs: slice must have d = 0");
  if (static_cast<int>(y.size()) != slice.n() || static_cast<int>(v.size()) != slice.n())
    throw std::invalid_argument("gutzmer_lhs: dimension mismatch");
  if (quadK.kind != QuadratureKind::PeriodicTrapezoid || quad2n.kind != QuadratureKind::GaussHermite)
    throw std::invalid_argument("gutzmer_lhs: expects trapezoid (K) and Gauss-Hermite rules");
  if (slice.empty()) return 0.0;
  const double coarse = gutzmer_lhs_once(slice, y, v, quadK, quad2n);
  const double fine = gutzmer_lhs_once(
      slice, y, v, quadK, cached_gauss_hermite(static_cast<int>(quad2n.size()) + 8));
  if (relative_error(coarse, fine) > 1e-6)
    throw QuadratureError("gutzmer_lhs: N vs N+8 rules disagree (rel " +
                          std::to_string(relative_error(coarse, fine)) + ")");
  return fine;
}

BandLimitedFunction poisson_apply(const BandLimitedFunction& f, double q) {
  if (q < 0.0) throw std::invalid_argument("poisson_apply: q must be >= 0");
  BandLimitedFunction out = f;
  for (auto& s : out.slices) {
    const double lam = s.lambda().value(), alam = s.lambda().abs();
    const int n = s.n();
    s = s.transformed([&](const SliceKey& k) {
      double m2 = 0.0;
      for (int m : k.mK) m2 += double(m) * m;
      return cplx(std::exp(-q * std::sqrt((2.0 * k.beta.degree() + n) * alam + lam * lam + m2)));
    });
  }
  return out;
}

namespace {

double poisson_lhs_once(const BandLimitedFunction& h, double r, std::span<const double> H, double s,
                        const QuadratureRule& rule, int circle_nodes, int k_nodes) {
  const int d = h.d;
  const auto circle = periodic_trapezoid_rule(circle_nodes);
  const auto trap = periodic_trapezoid_rule(k_nodes);
  const int N = static_cast<int>(rule.size());
  std::vector<double> logw(N);
  for (int i = 0; i < N; ++i) logw[i] = std::log(rule.scaled_weights[i]);
  std::vector<double> per_node(h.slices.size(), 0.0);
  parallel_for(h.slices.size(), [&](std::size_t i) {
    const auto& sl = h.slices[i];
    const double lam = sl.lambda().value();
    const int sg = sl.lambda().sign();
    const double sc = std::sqrt(2.0 / sl.lambda().abs());
    std::vector<cplx> z(1), w(1), red, shift(d);
    cplx lp;
    double sphere = 0.0;
    for (std::size_t c = 0; c < circle.size(); ++c) {
      const double y = r * std::cos(circle.nodes[c]), v = r * std::sin(circle.nodes[c]);
      double plane = 0.0;
      for (int a = 0; a < N; ++a) {
        for (int b = 0; b < N; ++b) {
          const double x = -sg * v + sc * rule.nodes[a];
          const double u = sg * y + sc * rule.nodes[b];
          z[0] = cplx(x, y);
          w[0] = cplx(u, v);
          sl.evaluate_reduced(z, w, lp, red);
          // g = k1 e^{iH} k2: the torus variable is theta1 + theta2 + iH; average over k1, k2
          double kk = 0.0;
          for (std::size_t k1 = 0; k1 < trap.size() || (d == 0 && k1 == 0); ++k1) {
            for (int j = 0; j < d; ++j) shift[j] = cplx(trap.nodes[k1], H[j]);
            kk += (d == 0 ? 1.0 : trap.weights[k1] / (2.0 * kPi)) *
                  k_average_abs2(red, sl.modes(), shift, trap);
            if (d == 0) break;
          }
          const double lg = 2.0 * lp.real() + lam * (y * u - v * x) + logw[a] + logw[b] +
                            2.0 * std::log(sc);
          plane += std::exp(lg) * kk;
        }
      }
      sphere += circle.weights[c] / (2.0 * kPi) * plane;
    }
    per_node[i] = h.grid.weights[i] * std::exp(2.0 * lam * s) * sphere;
  });
  double acc = 0.0;
  for (double v : per_node) acc += v;
  return kFourierTimeConstant * acc;
}

}  // namespace

VerificationReport poisson_identity_check(const BandLimitedFunction& f, double q, double r,
                                          std::span<const double> H, double s,
                                          const PoissonOptions& opts) {
  if (f.n != 1) throw std::invalid_argument("poisson_identity_check: requires n = 1");
  if (static_cast<int>(H.size()) != f.d)
    throw std::invalid_argument("poisson_identity_check: H must have length d");
  if (r < 0.0) throw std::invalid_argument("poisson_identity_check: r must be >= 0");
  const auto h = poisson_apply(f, q);
  const int M = degree_of(f), band = band_of(f);
  const int circle_nodes = opts.circle_nodes > 0 ? opts.circle_nodes : 4 * M + 8;
  const int k_nodes = opts.k_nodes > 0 ? opts.k_nodes : 2 * band + 3;

  const double lhs_coarse = poisson_lhs_once(h, r, H, s, cached_gauss_hermite(opts.nodes_2n),
                                             circle_nodes, k_nodes);
  const double lhs = poisson_lhs_once(h, r, H, s, cached_gauss_hermite(opts.nodes_2n + 8),
                                      circle_nodes, k_nodes);
  if (relative_error(lhs, lhs_coarse) > 1e-5)
    throw QuadratureError("poisson_identity_check: orbit quadrature lost consistency at r=" +
                          std::to_string(r));

  double rhs = 0.0;
  const int n = 1;
  for (std::size_t i = 0; i < h.slices.size(); ++i) {
    const auto& sl = h.slices[i];
    const double lam = sl.lambda().value();
    std::vector<double> ys{r}, vs{0.0};
    double node = 0.0;
    for (const auto& [key, c] : sl.coefficients()) {
      const int m = key.beta.degree();
      const double dimPm = double(binomial(m + n - 1, n - 1));
      double chi = 1.0;
      for (int j = 0; j < f.d; ++j) chi *= std::exp(-2.0 * key.mK[j] * H[j]);
      node += chi / dimPm * laguerre_function_imag(m, sl.lambda(), ys, vs) * std::norm(c);
    }
    rhs += h.grid.weights[i] * std::exp(2.0 * lam * s) * node;
  }
  rhs *= kFourierTimeConstant;
  return make_report("poisson_identity", lhs, rhs, opts.tolerance,
                     {{"q", q},
                      {"r", r},
                      {"s", s},
                      {"H", H.empty() ? 0.0 : H[0]},
                      {"dim_P_m", 1.0},
                      {"dim_P_ma", 1.0},
                      {"nodes_2n", std::int64_t(opts.nodes_2n)},
                      {"circle_nodes", std::int64_t(circle_nodes)},
                      {"k_nodes", std::int64_t(k_nodes)}});
}

std::vector<int> fourier_sigma_of(const SliceKey& key, TwistedParameter lambda) {
  std::vector<int> sigma(key.mK.size());
  for (std::size_t j = 0; j < sigma.size(); ++j) sigma[j] = -key.mK[j] - lambda.sign() * key.beta[j];
  return sigma;
}

namespace {

void add_entry(FourierMatrix& F, const SliceKey& key, cplx c, int n) {
  // (gamma, beta) = (beta0, alpha0); the R^{2n} integral pairs with conj(phi_{gamma beta})
  const double inv_c = 1.0 / special_hermite_normalization(F.lambda, n);
  F.entries[{key.beta, key.alpha}] +=
      inv_c * sign_of_parity(key.alpha.degree() + key.beta.degree()) * c;
}

}  // namespace

FourierMatrix fourier_transform_hm(const BandLimitedFunction& f, std::size_t node,
                                   const TorusIrrep& sigma) {
  if (node >= f.slices.size()) throw std::out_of_range("fourier_transform_hm: node out of range");
  const auto& sl = f.slices[node];
  if (static_cast<int>(sigma.weight().size()) != f.d)
    throw std::invalid_argument("fourier_transform_hm: sigma has wrong dimension");
  int band = 0;
  for (const auto& [key, c] : sl.coefficients())
    for (int v : fourier_sigma_of(key, sl.lambda())) band = std::max(band, std::abs(v));
  for (int v : sigma.weight())
    if (std::abs(v) > band + 0 && !sl.empty())
      throw std::domain_error("fourier_transform_hm: sigma outside the function's band");
  FourierMatrix F{sl.lambda(), sigma, {}};
  for (const auto& [key, c] : sl.coefficients())
    if (fourier_sigma_of(key, sl.lambda()) == sigma.weight()) add_entry(F, key, c, f.n);
  return F;
}

std::vector<FourierMatrix> fourier_transform_band(const BandLimitedFunction& f, std::size_t node) {
  if (node >= f.slices.size()) throw std::out_of_range("fourier_transform_band: node out of range");
  const auto& sl = f.slices[node];
  std::map<std::vector<int>, FourierMatrix> by_sigma;
  for (const auto& [key, c] : sl.coefficients()) {
    auto sigma = fourier_sigma_of(key, sl.lambda());
    auto it = by_sigma.find(sigma);
    if (it == by_sigma.end())
      it = by_sigma.emplace(sigma, FourierMatrix{sl.lambda(), TorusIrrep(sigma), {}}).first;
    add_entry(it->second, key, c, f.n);
  }
  std::vector<FourierMatrix> out;
  for (auto& [s, F] : by_sigma) out.push_back(std::move(F));
  return out;
}

VerificationReport plancherel_check(const BandLimitedFunction& f, double tolerance) {
  const double lhs = f.norm_squared();
  double rhs = 0.0;
  for (std::size_t i = 0; i < f.slices.size(); ++i) {
    const double measure = f.grid.weights[i] * std::pow(std::abs(f.grid.nodes[i]), f.n);
    double hs = 0.0;
    for (const auto& F : fourier_transform_band(f, i)) hs += F.hs_norm_squared();
    rhs += measure * hs;
  }
  const double pinned = plancherel_constant(f.n), printed = printed_plancherel_constant(f.n);
  return make_report("plancherel", lhs, pinned * rhs, tolerance,
                     {{"pinned_constant", pinned},
                      {"printed_constant", printed},
                      {"rhs_with_printed_constant", printed * rhs},
                      {"n", std::int64_t(f.n)},
                      {"d", std::int64_t(f.d)},
                      {"lambda_nodes", std::int64_t(f.slices.size())}});
}

VerificationReport plancherel_polarization(const BandLimitedFunction& f,
                                           const BandLimitedFunction& g, double tolerance) {
  if (f.grid.nodes != g.grid.nodes || f.n != g.n || f.d != g.d)
    throw std::invalid_argument("plancherel_polarization: incompatible functions");
  // Space side: 4<f,g> = sum_k i^k ||f + i^k g||^2 on the norm invariant.
  cplx lhs = 0.0, rhs = 0.0;
  const cplx ik[4] = {1.0, cplx(0, 1), -1.0, cplx(0, -1)};
  for (int k = 0; k < 4; ++k) {
    auto h = add(f, g.scaled(ik[k]));
    lhs += ik[k] * h.norm_squared();
    double r = 0.0;
    for (std::size_t i = 0; i < h.slices.size(); ++i) {
      double hs = 0.0;
      for (const auto& F : fourier_transform_band(h, i)) hs += F.hs_norm_squared();
      r += h.grid.weights[i] * std::pow(std::abs(h.grid.nodes[i]), h.n) * hs;
    }
    rhs += ik[k] * plancherel_constant(f.n) * r;
  }
  return make_report("plancherel_polarization", 0.25 * lhs, 0.25 * rhs, tolerance,
                     {{"n", std::int64_t(f.n)}, {"d", std::int64_t(f.d)}});
}

double rep_hs_norm_squared(const FourierMatrix& F, const ComplexGroupPoint& p,
                           const RepNormOptions& opts) {
  const int n = p.n();
  if (F.entries.empty()) return 0.0;
  const TwistedParameter lam = F.lambda;
  const auto angles = p.angles();
  double guard = lam.abs() * std::abs(p.tau.imag());
  for (std::size_t j = 0; j < p.H.size(); ++j) {
    int mmax = std::abs(F.sigma.weight()[j]);
    for (const auto& [key, v] : F.entries) mmax = std::max(mmax, key.second[j]);
    guard += 2.0 * mmax * std::abs(p.H[j]);
  }
  if (guard > 700.0) throw std::overflow_error("complexified_rep_norm: exponential factor overflows");

  int deg = 0;
  for (const auto& [key, v] : F.entries)
    for (int j = 0; j < n; ++j) deg = std::max({deg, key.first[j], key.second[j]});
  const cplx central = std::exp(cplx(0.0, lam.value()) * p.tau) * F.sigma.character(angles);
  const double log_c = std::log(special_hermite_normalization(lam, n));

  for (int margin = opts.beta_margin, attempt = 0; attempt < 4; ++attempt, margin += 20) {
    const int B = deg + margin;
    SpecialHermiteTable table(lam, p.z, p.w, B);
    const cplx pre = std::exp(table.log_prefactor() - log_c) * central;
    // Columns gamma; row index beta' over the box [0, B]^n.
    std::map<MultiIndex, std::vector<std::pair<MultiIndex, cplx>>> columns;
    for (const auto& [key, v] : F.entries)
      columns[key.first].push_back({key.second, v * metaplectic_phase(angles, key.second, lam)});
    double total = 0.0, tail = 0.0;
    std::vector<int> row(n, 0);
    do {
      const MultiIndex bp(row);
      const int top = *std::max_element(row.begin(), row.end());
      for (const auto& [gamma, col] : columns) {
        cplx acc = 0.0;
        for (const auto& [beta, val] : col) acc += table.reduced(beta, bp) * val;
        const double contrib = std::norm(pre * acc);
        total += contrib;
        if (top > B - 5) tail += contrib;
      }
    } while (advance(row, B + 1));
    if (tail <= opts.tail_tolerance * total) return total;
  }
  throw std::domain_error("complexified_rep_norm: row truncation did not converge");
}

double complexified_rep_norm(const BandLimitedFunction& f, const ComplexGroupPoint& p,
                             const RepNormOptions& opts) {
  if (p.n() != f.n || p.d() != f.d)
    throw std::invalid_argument("complexified_rep_norm: point has wrong dimensions");
  std::vector<double> per_node(f.slices.size(), 0.0);
  parallel_for(f.slices.size(), [&](std::size_t i) {
    double hs = 0.0;
    for (const auto& F : fourier_transform_band(f, i)) hs += rep_hs_norm_squared(F, p, opts);
    per_node[i] = f.grid.weights[i] * std::pow(std::abs(f.grid.nodes[i]), f.n) * hs;
  });
  double acc = 0.0;
  for (double v : per_node) acc += v;
  return plancherel_constant(f.n) * acc;
}

namespace {

double paley_wiener_lhs_once(const BandLimitedFunction& f, const ComplexGroupPoint& p,
                             const QuadratureRule& rule, int k_nodes) {
  const int n = f.n, d = f.d;
  const int N = static_cast<int>(rule.size());
  const auto trap = periodic_trapezoid_rule(k_nodes);
  std::vector<double> logw(N);
  for (int i = 0; i < N; ++i) logw[i] = std::log(rule.scaled_weights[i]);
  // g^{-1} acts through the complex angles -(theta + iH)
  auto ang = p.angles();
  std::vector<cplx> inv_angles(d), shift(d);
  for (int j = 0; j < d; ++j) {
    inv_angles[j] = -ang[j];
    shift[j] = -ang[j];
  }
  std::vector<double> x(n), u(n), y(n), v(n);
  for (int j = 0; j < n; ++j) {
    x[j] = p.z[j].real();
    y[j] = p.z[j].imag();
    u[j] = p.w[j].real();
    v[j] = p.w[j].imag();
  }
  const double s = p.tau.imag();
  std::vector<double> per_node(f.slices.size(), 0.0);
  parallel_for(f.slices.size(), [&](std::size_t i) {
    const auto& sl = f.slices[i];
    const double lam = sl.lambda().value();
    const int sg = sl.lambda().sign();
    const double sc = std::sqrt(2.0 / sl.lambda().abs());
    std::vector<int> ix(2 * n, 0);
    std::vector<cplx> Z(n), W(n), Zr(n), Wr(n), red;
    cplx lp;
    double plane = 0.0;
    do {
      double lw = 2.0 * n * std::log(sc), sympl = 0.0;
      for (int j = 0; j < n; ++j) {
        const double xx = -sg * v[j] + sc * rule.nodes[ix[j]];
        const double uu = sg * y[j] + sc * rule.nodes[ix[n + j]];
        lw += logw[ix[j]] + logw[ix[n + j]];
        sympl += y[j] * uu - v[j] * xx;
        Z[j] = cplx(xx, -y[j]);
        W[j] = cplx(uu, -v[j]);
      }
      torus_act_complex(inv_angles, Z, W, Zr, Wr);
      sl.evaluate_reduced(Zr, Wr, lp, red);
      const double kk = k_average_abs2(red, sl.modes(), shift, trap);
      plane += std::exp(2.0 * lp.real() + lam * sympl + lw) * kk;
    } while (advance(ix, N));
    double outer = 0.0;
    for (int j = 0; j < n; ++j) outer += y[j] * u[j] - v[j] * x[j];
    per_node[i] = f.grid.weights[i] * std::exp(-2.0 * lam * s + lam * outer) * plane;
  });
  double acc = 0.0;
  for (double val : per_node) acc += val;
  return kFourierTimeConstant * acc;
}

}  // namespace

double paley_wiener_lhs(const BandLimitedFunction& f, const ComplexGroupPoint& p,
                        const PaleyWienerOptions& opts) {
  if (p.n() != f.n || p.d() != f.d)
    throw std::invalid_argument("paley_wiener_lhs: point has wrong dimensions");
  const int k_nodes = opts.k_nodes > 0 ? opts.k_nodes : 2 * band_of(f) + 3;
  const double coarse = paley_wiener_lhs_once(f, p, cached_gauss_hermite(opts.nodes_2n), k_nodes);
  const double fine = paley_wiener_lhs_once(f, p, cached_gauss_hermite(opts.nodes_2n + 8), k_nodes);
  if (relative_error(coarse, fine) > 1e-6)
    throw QuadratureError("paley_wiener_lhs: N vs N+8 rules disagree (rel " +
                          std::to_string(relative_error(coarse, fine)) + ")");
  return fine;
}

VerificationReport paley_wiener_check(const BandLimitedFunction& f, const ComplexGroupPoint& p,
                                      const PaleyWienerOptions& opts) {
  const double lhs = paley_wiener_lhs(f, p, opts);
  const double rhs = complexified_rep_norm(f, p, opts.rep);
  double im2 = 0.0;
  for (int j = 0; j < p.n(); ++j) im2 += std::norm(p.z[j].imag()) + std::norm(p.w[j].imag());
  return make_report("paley_wiener", lhs, rhs, opts.tolerance,
                     {{"H", p.H.empty() ? 0.0 : p.H[0]},
                      {"s", p.tau.imag()},
                      {"im_norm", std::sqrt(im2)},
                      {"constant", plancherel_constant(f.n)},
                      {"printed_constant", std::pow(2.0 * kPi, -2.0 * f.n)},
                      {"nodes_2n", std::int64_t(opts.nodes_2n)}});
}

}  // namespace hmh

namespace hmh {

VerificationReport metaplectic_intertwining_check(TwistedParameter lambda, std::span<const double> x,
                                                  std::span<const double> u, const TorusElement& k,
                                                  int max_degree, double tolerance) {
  const int n = static_cast<int>(x.size());
  if (static_cast<int>(u.size()) != n || static_cast<int>(k.theta.size()) > n)
    throw std::invalid_argument("metaplectic_intertwining_check: dimension mismatch");
  std::vector<double> xr(n), ur(n);
  torus_act(k, x, u, xr, ur);
  const std::vector<cplx> z(x.begin(), x.end()), w(u.begin(), u.end());
  const std::vector<cplx> zr(xr.begin(), xr.end()), wr(ur.begin(), ur.end());
  SpecialHermiteTable base(lambda, z, w, max_degree), rotated(lambda, zr, wr, max_degree);
  const auto idx = enumerate_indices(n, max_degree);
  double worst = -1.0, scale = 0.0;
  cplx worst_lhs = 0.0, worst_rhs = 0.0;
  for (const auto& a : idx) {
    const cplx conj_a = std::conj(metaplectic_phase(k, a, lambda));
    for (const auto& b : idx) {
      const cplx lhs = rotated.value(a, b);
      const cplx rhs = conj_a * metaplectic_phase(k, b, lambda) * base.value(a, b);
      scale = std::max(scale, std::abs(rhs));
      if (std::abs(lhs - rhs) > worst) {
        worst = std::abs(lhs - rhs);
        worst_lhs = lhs;
        worst_rhs = rhs;
      }
    }
  }
  auto r = make_report("metaplectic_intertwining", worst_lhs, worst_rhs, tolerance,
                       {{"lambda", lambda.value()},
                        {"n", std::int64_t(n)},
                        {"max_degree", std::int64_t(max_degree)},
                        {"max_deviation", worst},
                        {"scale", scale}});
  r.passed = std::isfinite(worst) && worst <= tolerance * std::max(scale, kRelErrFloor);
  return r;
}

VerificationReport rep_unitarity_check(TwistedParameter lambda, const TorusIrrep& sigma,
                                       const ComplexGroupPoint& p, int max_degree, int row_margin,
                                       double tolerance) {
  const int n = p.n();
  for (double h : p.H)
    if (h != 0.0) throw std::invalid_argument("rep_unitarity_check: requires a real point");
  if (p.tau.imag() != 0.0) throw std::invalid_argument("rep_unitarity_check: requires real tau");
  const int B = max_degree + row_margin;
  SpecialHermiteTable table(lambda, p.z, p.w, B);
  const auto angles = p.angles();
  const cplx central = std::exp(cplx(0.0, lambda.value()) * p.tau) * sigma.character(angles);
  const cplx pre = std::exp(table.log_prefactor()) / special_hermite_normalization(lambda, n) *
                   central;

  std::vector<MultiIndex> cols;
  std::vector<int> c(n, 0);
  do cols.emplace_back(c);
  while (advance(c, max_degree + 1));
  std::vector<cplx> eta(cols.size());
  for (std::size_t i = 0; i < cols.size(); ++i) eta[i] = metaplectic_phase(angles, cols[i], lambda);

  const std::size_t N = cols.size();
  std::vector<cplx> gram(N * N, 0.0), column(N);
  std::vector<int> row(n, 0);
  do {
    const MultiIndex bp(row);
    for (std::size_t i = 0; i < N; ++i) column[i] = pre * table.reduced(cols[i], bp) * eta[i];
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) gram[i * N + j] += column[i] * std::conj(column[j]);
  } while (advance(row, B + 1));

  double worst = 0.0, frob = 0.0;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) {
      worst = std::max(worst, std::abs(gram[i * N + j] - (i == j ? 1.0 : 0.0)));
      frob += std::norm(gram[i * N + j]);
    }
  auto r = make_report("rep_unitarity", frob, double(N), tolerance,
                       {{"lambda", lambda.value()},
                        {"max_degree", std::int64_t(max_degree)},
                        {"row_bound", std::int64_t(B)},
                        {"max_deviation", worst}});
  r.passed = r.passed && worst <= tolerance;
  return r;
}

}  // namespace hmh
