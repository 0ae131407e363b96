#include "hmh/twisted_transforms.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "hmh/parallel.hpp"

namespace hmh {

namespace {

// Odometer over N^dims tensor indices.
bool advance(std::vector<int>& idx, int N) {
  for (int j = static_cast<int>(idx.size()) - 1; j >= 0; --j) {
    if (++idx[j] < N) return true;
    idx[j] = 0;
  }
  return false;
}

int weight_abs_sum(const std::vector<int>& m) {
  int s = 0;
  for (int v : m) s += std::abs(v);
  return s;
}

double weight_norm2(const std::vector<int>& m) {
  double s = 0.0;
  for (int v : m) s += double(v) * v;
  return s;
}

// |lambda| / sinh(|lambda| t) and |lambda| coth(|lambda| t), even in lambda.
double lambda_over_sinh(double lam, double t) {
  const double a = std::abs(lam);
  return a / std::sinh(a * t);
}
double lambda_coth(double lam, double t) {
  const double a = std::abs(lam);
  return a / std::tanh(a * t);
}

}  // namespace

TwistedSlice::TwistedSlice(TwistedParameter lambda, int n, int d, CoefficientMap coeffs)
    : lambda_(lambda), n_(n), d_(d), coeffs_(std::move(coeffs)) {
  if (n < 1) throw std::invalid_argument("TwistedSlice: n must be >= 1");
  if (d < 0 || d > n) throw std::invalid_argument("TwistedSlice: need 0 <= d <= n");
  std::map<std::vector<int>, int> mode_index;
  for (const auto& [key, c] : coeffs_) {
    if (key.alpha.size() != n || key.beta.size() != n || static_cast<int>(key.mK.size()) != d)
      throw std::invalid_argument("TwistedSlice: coefficient key has wrong dimensions");
    mode_index.emplace(key.mK, 0);
  }
  if (mode_index.empty()) mode_index.emplace(std::vector<int>(d, 0), 0);
  int i = 0;
  for (auto& [m, idx] : mode_index) {
    idx = i++;
    modes_.push_back(m);
  }
  for (const auto& [key, c] : coeffs_) {
    terms_.push_back({key.alpha, key.beta, mode_index.at(key.mK), c});
    for (int j = 0; j < n; ++j) max_degree_ = std::max({max_degree_, key.alpha[j], key.beta[j]});
  }
}

double TwistedSlice::norm_squared() const {
  double s = 0.0;
  for (const auto& [key, c] : coeffs_) s += std::norm(c);
  return s;
}

int TwistedSlice::max_total_degree() const {
  int m = 0;
  for (const auto& [key, c] : coeffs_) m = std::max({m, key.alpha.degree(), key.beta.degree()});
  return m;
}

int TwistedSlice::max_weight() const {
  int m = 0;
  for (const auto& mode : modes_)
    for (int v : mode) m = std::max(m, std::abs(v));
  return m;
}

TwistedSlice TwistedSlice::transformed(const std::function<cplx(const SliceKey&)>& fn) const {
  CoefficientMap out;
  for (const auto& [key, c] : coeffs_) out.emplace(key, c * fn(key));
  return TwistedSlice(lambda_, n_, d_, std::move(out));
}

TwistedSlice TwistedSlice::scaled(cplx c) const {
  return transformed([c](const SliceKey&) { return c; });
}

void TwistedSlice::evaluate_reduced(std::span<const cplx> z, std::span<const cplx> w,
                                    cplx& log_prefactor, std::vector<cplx>& reduced) const {
  if (static_cast<int>(z.size()) != n_ || static_cast<int>(w.size()) != n_)
    throw std::invalid_argument("TwistedSlice::evaluate: point has wrong dimension");
  reduced.assign(modes_.size(), 0.0);
  SpecialHermiteTable table(lambda_, z, w, max_degree_);
  log_prefactor = table.log_prefactor();
  for (const auto& term : terms_) reduced[term.mode] += term.c * table.reduced(term.alpha, term.beta);
}

std::vector<cplx> TwistedSlice::evaluate_modes(std::span<const cplx> z,
                                               std::span<const cplx> w) const {
  cplx lp;
  std::vector<cplx> red;
  evaluate_reduced(z, w, lp, red);
  const cplx f = std::exp(lp);
  for (auto& v : red) v *= f;
  return red;
}

cplx TwistedSlice::evaluate(std::span<const cplx> z, std::span<const cplx> w,
                            std::span<const cplx> angles) const {
  if (static_cast<int>(angles.size()) != d_ && !(angles.empty()))
    throw std::invalid_argument("TwistedSlice::evaluate: angles must have length d");
  auto vals = evaluate_modes(z, w);
  cplx s = 0.0;
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    cplx ph = 0.0;
    for (int j = 0; j < d_ && !angles.empty(); ++j) ph += double(modes_[i][j]) * angles[j];
    s += vals[i] * std::exp(cplx(0.0, 1.0) * ph);
  }
  return s;
}

LambdaGrid LambdaGrid::gauss_legendre(double a, double b, int nodes_per_side, bool symmetric) {
  if (!(a > 0.0) || !(a < b))
    throw std::invalid_argument("LambdaGrid: need 0 < a < b");
  auto rule = gauss_legendre_rule(nodes_per_side, a, b);
  LambdaGrid g;
  if (symmetric) {
    for (int i = nodes_per_side - 1; i >= 0; --i) {
      g.nodes.push_back(-rule.nodes[i]);
      g.weights.push_back(rule.weights[i]);
    }
  }
  g.nodes.insert(g.nodes.end(), rule.nodes.begin(), rule.nodes.end());
  g.weights.insert(g.weights.end(), rule.weights.begin(), rule.weights.end());
  return g;
}

LambdaGrid LambdaGrid::single(double lambda, double weight) {
  TwistedParameter check(lambda);
  return LambdaGrid{{lambda}, {weight}};
}

double BandLimitedFunction::norm_squared() const {
  double s = 0.0;
  for (std::size_t i = 0; i < slices.size(); ++i) s += grid.weights[i] * slices[i].norm_squared();
  return kFourierTimeConstant * s;
}

BandLimitedFunction BandLimitedFunction::scaled(cplx c) const {
  BandLimitedFunction out = *this;
  for (auto& s : out.slices) s = s.scaled(c);
  return out;
}

BandLimitedFunction add(const BandLimitedFunction& f, const BandLimitedFunction& g) {
  if (f.n != g.n || f.d != g.d || f.grid.nodes != g.grid.nodes)
    throw std::invalid_argument("add: functions live on different grids");
  BandLimitedFunction out = f;
  for (std::size_t i = 0; i < f.slices.size(); ++i) {
    CoefficientMap c = f.slices[i].coefficients();
    for (const auto& [key, v] : g.slices[i].coefficients()) c[key] += v;
    out.slices[i] = TwistedSlice(f.slices[i].lambda(), f.n, f.d, std::move(c));
  }
  return out;
}

double BergmanWeight::log_value(std::span<const cplx> z, std::span<const cplx> w) const {
  const int n = static_cast<int>(z.size());
  const double lam = lambda.value();
  double sympl = 0.0, r2 = 0.0;
  for (int j = 0; j < n; ++j) {
    sympl += w[j].real() * z[j].imag() - w[j].imag() * z[j].real();
    r2 += z[j].imag() * z[j].imag() + w[j].imag() * w[j].imag();
  }
  // 4^n p_{2t}(2y, 2v)
  return n * std::log(4.0) - n * std::log(4.0 * kPi) + n * std::log(lambda_over_sinh(lam, 2.0 * t)) -
         lambda_coth(lam, 2.0 * t) * r2 + lam * sympl;
}

double BergmanWeight::operator()(std::span<const cplx> z, std::span<const cplx> w) const {
  return std::exp(log_value(z, w));
}

cplx log_heat_kernel_twisted(double t, TwistedParameter lambda, std::span<const cplx> x,
                             std::span<const cplx> u) {
  if (!(t > 0.0)) throw std::invalid_argument("heat_kernel_twisted: t must be positive");
  if (lambda.abs() * t > 700.0)
    throw std::overflow_error("heat_kernel_twisted: |lambda| t exceeds 700");
  const int n = static_cast<int>(x.size());
  cplx q = 0.0;
  for (int j = 0; j < n; ++j) q += x[j] * x[j] + u[j] * u[j];
  return -n * std::log(4.0 * kPi) + n * std::log(lambda_over_sinh(lambda.value(), t)) -
         0.25 * lambda_coth(lambda.value(), t) * q;
}

cplx heat_kernel_twisted(double t, TwistedParameter lambda, std::span<const cplx> x,
                         std::span<const cplx> u) {
  return std::exp(log_heat_kernel_twisted(t, lambda, x, u));
}

namespace {

cplx twisted_convolution_once(const PlaneFunction& F, const PlaneFunction& G, double lam,
                              std::span<const double> x, std::span<const double> u,
                              const QuadratureRule& quad, const GaussianFrame& frame) {
  const int n = static_cast<int>(x.size());
  const int N = static_cast<int>(quad.size());
  std::vector<int> idx(2 * n, 0);
  std::vector<double> xp(n), up(n), xd(n), ud(n);
  cplx acc = 0.0;
  const double vol = std::pow(frame.scale, 2 * n);
  do {
    double wt = vol;
    for (int j = 0; j < n; ++j) {
      xp[j] = frame.center[j] + frame.scale * quad.nodes[idx[j]];
      up[j] = frame.center[n + j] + frame.scale * quad.nodes[idx[n + j]];
      wt *= quad.scaled_weights[idx[j]] * quad.scaled_weights[idx[n + j]];
      xd[j] = x[j] - xp[j];
      ud[j] = u[j] - up[j];
    }
    double phase = 0.0;
    for (int j = 0; j < n; ++j) phase += u[j] * xp[j] - x[j] * up[j];
    acc += wt * F(xp, up) * G(xd, ud) * std::polar(1.0, -0.5 * lam * phase);
  } while (advance(idx, N));
  return acc;
}

}  // namespace

cplx twisted_convolution(const PlaneFunction& F, const PlaneFunction& G, TwistedParameter lambda,
                         std::span<const double> x, std::span<const double> u,
                         const QuadratureRule& quad, std::optional<GaussianFrame> frame) {
  if (quad.kind != QuadratureKind::GaussHermite)
    throw std::invalid_argument("twisted_convolution: Gauss-Hermite rule required");
  if (x.size() != u.size()) throw std::invalid_argument("twisted_convolution: size mismatch");
  const int n = static_cast<int>(x.size());
  GaussianFrame fr;
  if (frame) {
    fr = *frame;
  } else {
    fr.center.resize(2 * n);
    for (int j = 0; j < n; ++j) {
      fr.center[j] = 0.5 * x[j];
      fr.center[n + j] = 0.5 * u[j];
    }
    fr.scale = std::sqrt(2.0 / lambda.abs());
  }
  if (static_cast<int>(fr.center.size()) != 2 * n)
    throw std::invalid_argument("twisted_convolution: frame center must have length 2n");
  cplx coarse = twisted_convolution_once(F, G, lambda.value(), x, u, quad, fr);
  cplx fine = twisted_convolution_once(F, G, lambda.value(), x, u,
                                       cached_gauss_hermite(static_cast<int>(quad.size()) + 8), fr);
  if (relative_error(coarse, fine) > 1e-8 && std::abs(coarse - fine) > 1e-14)
    throw QuadratureError("twisted_convolution: N vs N+8 rules disagree (rel " +
                          std::to_string(relative_error(coarse, fine)) + ")");
  return fine;
}

namespace {
int heat_degree(const SliceKey& k) {
  return (kHeatActsOnSecondIndex ? k.beta : k.alpha).degree();
}
}  // namespace

TwistedSlice heat_multiplier_apply(const TwistedSlice& slice, double t) {
  if (t < 0.0) throw std::invalid_argument("heat_multiplier_apply: t must be >= 0");
  const double lam = slice.lambda().abs();
  const int n = slice.n();
  return slice.transformed([&](const SliceKey& k) {
    return cplx(std::exp(-t * (2.0 * heat_degree(k) + n) * lam));
  });
}

BandLimitedFunction segal_bargmann(const BandLimitedFunction& f, double t) {
  if (t < 0.0) throw std::invalid_argument("segal_bargmann: t must be >= 0");
  BandLimitedFunction out = f;
  for (auto& s : out.slices) {
    const double lam = s.lambda().value();
    const double alam = s.lambda().abs();
    const int n = s.n();
    s = s.transformed([&](const SliceKey& k) {
      return cplx(std::exp(-t * lam * lam - t * (2.0 * heat_degree(k) + n) * alam -
                           0.5 * t * weight_norm2(k.mK)));
    });
  }
  return out;
}

double slice_l2_quadrature(const TwistedSlice& slice, int n_nodes) {
  const int n = slice.n(), d = slice.d();
  const auto& gh = cached_gauss_hermite(n_nodes);
  const double sc = std::sqrt(2.0 / slice.lambda().abs());
  const int Nt = 2 * slice.max_weight() + 1;
  const auto trap = periodic_trapezoid_rule(Nt);
  std::vector<int> idx(2 * n, 0);
  std::vector<cplx> z(n), w(n);
  std::vector<cplx> red;
  cplx lp;
  double acc = 0.0;
  do {
    double wt = std::pow(sc, 2 * n);
    for (int j = 0; j < n; ++j) {
      z[j] = sc * gh.nodes[idx[j]];
      w[j] = sc * gh.nodes[idx[n + j]];
      wt *= gh.scaled_weights[idx[j]] * gh.scaled_weights[idx[n + j]];
    }
    slice.evaluate_reduced(z, w, lp, red);
    const double g = std::exp(2.0 * lp.real());
    // K-integral of |sum_m F_m e^{i m.theta}|^2 with normalized Haar measure.
    double kint = 0.0;
    std::vector<int> kidx(d, 0);
    do {
      double kw = 1.0;
      for (int j = 0; j < d; ++j) kw *= trap.weights[kidx[j]] / (2.0 * kPi);
      cplx v = 0.0;
      for (std::size_t m = 0; m < red.size(); ++m) {
        double ph = 0.0;
        for (int j = 0; j < d; ++j) ph += slice.modes()[m][j] * trap.nodes[kidx[j]];
        v += red[m] * std::polar(1.0, ph);
      }
      kint += kw * std::norm(v);
    } while (d > 0 && advance(kidx, Nt));
    acc += wt * g * kint;
  } while (advance(idx, n_nodes));
  return acc;
}

std::vector<cplx> g_mode_gram(const std::vector<std::vector<int>>& modes, double t,
                              const QuadratureRule& quadG) {
  const std::size_t M = modes.size();
  std::vector<cplx> Q(M * M, 1.0);
  if (M == 0 || modes[0].empty()) return Q;
  const int d = static_cast<int>(modes[0].size());
  int maxw = 0;
  for (const auto& m : modes) maxw = std::max(maxw, weight_abs_sum(m));
  const auto trap = periodic_trapezoid_rule(4 * maxw + 2);
  const double st = std::sqrt(t);
  for (std::size_t a = 0; a < M; ++a) {
    for (std::size_t b = 0; b < M; ++b) {
      cplx prod = 1.0;
      for (int j = 0; j < d; ++j) {
        const int ma = modes[a][j], mb = modes[b][j];
        cplx kpart = 0.0;
        for (std::size_t i = 0; i < trap.size(); ++i)
          kpart += trap.weights[i] / (2.0 * kPi) * std::polar(1.0, (ma - mb) * trap.nodes[i]);
        // rho_t(H) dH with H = sqrt(t) eta becomes pi^{-1/2} e^{-eta^2} deta
        double hpart = 0.0;
        for (std::size_t i = 0; i < quadG.size(); ++i)
          hpart += quadG.weights[i] / std::sqrt(kPi) * std::exp(-(ma + mb) * st * quadG.nodes[i]);
        prod *= kpart * hpart;
      }
      Q[a * M + b] = prod;
    }
  }
  return Q;
}

namespace {

double bergman_once(const TwistedSlice& s, double t, double lw, const QuadratureRule& r,
                    const std::vector<cplx>& Q) {
  const int n = s.n();
  const int N = static_cast<int>(r.size());
  const double kappa = 0.5 * s.lambda().abs();
  const double cth = lambda_coth(lw, 2.0 * t);
  const double a = cth - kappa - lw * lw / (4.0 * kappa);
  if (!(a > 0.0))
    throw std::domain_error("bergman_norm: weight does not dominate the function's growth");
  const double sx = 1.0 / std::sqrt(kappa), sy = 1.0 / std::sqrt(a);
  const double log_const = n * std::log(4.0) - n * std::log(4.0 * kPi) +
                           n * std::log(lambda_over_sinh(lw, 2.0 * t)) +
                           2.0 * n * (std::log(sx) + std::log(sy));
  const std::size_t M = s.modes().size();
  std::vector<double> logw(N);
  for (int i = 0; i < N; ++i) logw[i] = std::log(r.scaled_weights[i]);

  std::vector<int> iy(2 * n, 0), ix(2 * n, 0);
  std::vector<double> y(n), v(n), cx(n), cu(n);
  std::vector<cplx> z(n), w(n), red;
  cplx lp;
  double acc = 0.0;
  do {
    double lwy = 0.0, r2 = 0.0;
    for (int j = 0; j < n; ++j) {
      y[j] = sy * r.nodes[iy[j]];
      v[j] = sy * r.nodes[iy[n + j]];
      lwy += logw[iy[j]] + logw[iy[n + j]];
      r2 += y[j] * y[j] + v[j] * v[j];
      cx[j] = -lw * v[j] / (2.0 * kappa);
      cu[j] = lw * y[j] / (2.0 * kappa);
    }
    double inner = 0.0;
    std::fill(ix.begin(), ix.end(), 0);
    do {
      double lwx = 0.0, sympl = 0.0;
      for (int j = 0; j < n; ++j) {
        const double x = cx[j] + sx * r.nodes[ix[j]];
        const double u = cu[j] + sx * r.nodes[ix[n + j]];
        lwx += logw[ix[j]] + logw[ix[n + j]];
        sympl += u * y[j] - v[j] * x;
        z[j] = cplx(x, y[j]);
        w[j] = cplx(u, v[j]);
      }
      s.evaluate_reduced(z, w, lp, red);
      double qf = 0.0;
      for (std::size_t p = 0; p < M; ++p)
        for (std::size_t q = 0; q < M; ++q) qf += (red[p] * std::conj(red[q]) * Q[p * M + q]).real();
      inner += std::exp(2.0 * lp.real() + lw * sympl - cth * r2 + lwx + lwy + log_const) * qf;
    } while (advance(ix, N));
    acc += inner;
  } while (advance(iy, N));
  return acc;
}

}  // namespace

double bergman_norm_with_weight(const TwistedSlice& image, double t, TwistedParameter weight_lambda,
                                const QuadratureRule& quad2n, const QuadratureRule& quadG,
                                bool check_consistency) {
  if (!(t > 0.0)) throw std::invalid_argument("bergman_norm: t must be positive");
  if (quad2n.kind != QuadratureKind::GaussHermite || quadG.kind != QuadratureKind::GaussHermite)
    throw std::invalid_argument("bergman_norm: Gauss-Hermite rules required");
  if (image.empty()) return 0.0;
  auto Q = g_mode_gram(image.modes(), t, quadG);
  const double coarse = bergman_once(image, t, weight_lambda.value(), quad2n, Q);
  if (!check_consistency) return coarse;
  const auto& finer = cached_gauss_hermite(static_cast<int>(quad2n.size()) + 8);
  const auto& finerG = cached_gauss_hermite(static_cast<int>(quadG.size()) + 8);
  const double fine =
      bergman_once(image, t, weight_lambda.value(), finer, g_mode_gram(image.modes(), t, finerG));
  if (relative_error(coarse, fine) > 1e-6)
    throw QuadratureError("bergman_norm: N vs N+8 rules disagree (rel " +
                          std::to_string(relative_error(coarse, fine)) + ")");
  return fine;
}

double bergman_norm(const TwistedSlice& image, double t, const QuadratureRule& quad2n,
                    const QuadratureRule& quadG) {
  return bergman_norm_with_weight(image, t, image.lambda(), quad2n, quadG, true);
}

double direct_integral_norm(const BandLimitedFunction& image, double t,
                            const DirectIntegralOptions& opts) {
  const auto& r2n = cached_gauss_hermite(opts.nodes_2n);
  const auto& rG = cached_gauss_hermite(opts.nodes_G);
  std::vector<double> per_node(image.slices.size(), 0.0);
  parallel_for(image.slices.size(), [&](std::size_t i) {
    const auto& s = image.slices[i];
    const double lam = s.lambda().value();
    per_node[i] = image.grid.weights[i] * std::exp(2.0 * t * lam * lam) *
                  bergman_norm_with_weight(s, t, s.lambda(), r2n, rG,
                                           opts.check_consistency && i == 0);
  });
  double acc = 0.0;
  for (double v : per_node) acc += v;
  return kFourierTimeConstant * acc;
}

VerificationReport nonnegative_weight_probe(double t, const WeightProbeOptions& opts) {
  const TwistedParameter plus(1.0), minus(-1.0);
  CoefficientMap c;
  // e^{-t L} of the unit vector phi_{01}: multiplier on the second index (2*1 + 1)|lambda|
  c[{MultiIndex({0}), MultiIndex({1}), {}}] = opts.scale * std::exp(-3.0 * t);
  TwistedSlice image(plus, 1, 0, std::move(c));
  const auto& r = cached_gauss_hermite(opts.nodes_2n);
  const auto& rG = cached_gauss_hermite(8);
  const double norm_plus = bergman_norm_with_weight(image, t, plus, r, rG, true);
  const double norm_other =
      bergman_norm_with_weight(image, t, opts.single_lambda ? plus : minus, r, rG, true);
  const double margin = std::abs(norm_plus - norm_other) / std::max(norm_plus, norm_other);
  VerificationReport rep;
  rep.identity_name = "nonnegative_weight_probe";
  rep.lhs = margin;
  rep.rhs = 0.0;
  rep.abs_err = margin;
  rep.rel_err = margin;
  rep.params = {{"t", t},
                {"norm_weight_plus", norm_plus},
                {"norm_weight_other", norm_other},
                {"preimage_norm", opts.scale * opts.scale},
                {"single_lambda", std::int64_t(opts.single_lambda ? 1 : 0)}};
  rep.passed = opts.single_lambda ? margin < 1e-12 : margin > 0.0;
  return rep;
}

}  // namespace hmh
