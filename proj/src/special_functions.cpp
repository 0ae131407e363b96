#include "hmh/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hmh {

TwistedParameter::TwistedParameter(double lambda) : lambda_(lambda) {
  if (lambda == 0.0 || !std::isfinite(lambda))
    throw std::invalid_argument("TwistedParameter: lambda must be finite and nonzero");
}

std::vector<cplx> hermite_polynomial_values(int k_max, cplx x) {
  std::vector<cplx> p(k_max + 1);
  p[0] = std::pow(kPi, -0.25);
  if (k_max >= 1) p[1] = std::sqrt(2.0) * x * p[0];
  for (int k = 1; k < k_max; ++k)
    p[k + 1] = x * std::sqrt(2.0 / (k + 1)) * p[k] - std::sqrt(double(k) / (k + 1)) * p[k - 1];
  return p;
}

std::vector<cplx> hermite_function_values(int k_max, cplx x) {
  std::vector<cplx> h(k_max + 1);
  h[0] = std::pow(kPi, -0.25) * std::exp(-0.5 * x * x);
  if (k_max >= 1) h[1] = std::sqrt(2.0) * x * h[0];
  for (int k = 1; k < k_max; ++k)
    h[k + 1] = x * std::sqrt(2.0 / (k + 1)) * h[k] - std::sqrt(double(k) / (k + 1)) * h[k - 1];
  return h;
}

cplx hermite_function(int k, cplx x, int k_max) {
  if (k < 0 || k > k_max)
    throw std::out_of_range("hermite_function: k=" + std::to_string(k) + " exceeds K_max=" +
                            std::to_string(k_max));
  return hermite_function_values(k, x)[k];
}

cplx scaled_hermite(const MultiIndex& alpha, TwistedParameter lambda, std::span<const cplx> x,
                    int k_max) {
  if (static_cast<int>(x.size()) != alpha.size())
    throw std::invalid_argument("scaled_hermite: dimension mismatch");
  const double s = std::sqrt(lambda.abs());
  cplx v = 1.0;
  for (int j = 0; j < alpha.size(); ++j)
    v *= std::sqrt(s) * hermite_function(alpha[j], s * x[j], k_max);
  return v;
}

cplx laguerre(int m, int a, cplx x) {
  if (m < 0 || m > kLaguerreMax)
    throw std::out_of_range("laguerre: degree out of range [0, 256]");
  if (a < 0) throw std::invalid_argument("laguerre: alpha_type must be >= 0");
  cplx l0 = 1.0;
  if (m == 0) return l0;
  cplx l1 = 1.0 + double(a) - x;
  for (int k = 1; k < m; ++k) {
    cplx l2 = ((2.0 * k + a + 1.0 - x) * l1 - double(k + a) * l0) / double(k + 1);
    l0 = l1;
    l1 = l2;
  }
  return l1;
}

double special_hermite_normalization(TwistedParameter lambda, int n) {
  return std::pow(lambda.abs() / (2.0 * kPi), 0.5 * n);
}

SchrodingerTable::SchrodingerTable(TwistedParameter lambda, cplx z, cplx w, int max_degree,
                                   const QuadratureRule& rule)
    : max_degree_(max_degree) {
  build(lambda, z, w, rule);
}

SchrodingerTable::SchrodingerTable(TwistedParameter lambda, cplx z, cplx w, int max_degree)
    : max_degree_(max_degree) {
  build(lambda, z, w, cached_gauss_hermite(max_degree + 2));
}

void SchrodingerTable::build(TwistedParameter lambda, cplx z, cplx w, const QuadratureRule& rule) {
  if (rule.kind != QuadratureKind::GaussHermite)
    throw std::invalid_argument("SchrodingerTable: Gauss-Hermite rule required");
  const int M = max_degree_;
  const double s = std::sqrt(lambda.abs());
  const double sg = lambda.sign();
  const cplx i(0.0, 1.0);
  log_prefactor_ = -0.25 * s * s * (z * z + w * w);
  const cplx c1 = 0.5 * (i * sg * s * z + s * w);
  const cplx c2 = 0.5 * (i * sg * s * z - s * w);
  reduced_.assign((M + 1) * (M + 1), 0.0);
  std::vector<cplx> pa(M + 1), pb(M + 1);
  const double p0 = std::pow(kPi, -0.25);
  auto fill = [&](std::vector<cplx>& p, cplx x) {
    p[0] = p0;
    if (M >= 1) p[1] = std::sqrt(2.0) * x * p0;
    for (int k = 1; k < M; ++k)
      p[k + 1] = x * std::sqrt(2.0 / (k + 1)) * p[k] - std::sqrt(double(k) / (k + 1)) * p[k - 1];
  };
  for (std::size_t j = 0; j < rule.size(); ++j) {
    fill(pa, rule.nodes[j] + c1);
    fill(pb, rule.nodes[j] + c2);
    const double wt = rule.weights[j];
    for (int a = 0; a <= M; ++a) {
      const cplx fa = wt * pa[a];
      for (int b = 0; b <= M; ++b) reduced_[a * (M + 1) + b] += fa * pb[b];
    }
  }
}

SpecialHermiteTable::SpecialHermiteTable(TwistedParameter lambda, std::span<const cplx> z,
                                         std::span<const cplx> w, int max_degree) {
  if (z.size() != w.size()) throw std::invalid_argument("SpecialHermiteTable: size mismatch");
  const int n = static_cast<int>(z.size());
  log_prefactor_ = std::log(special_hermite_normalization(lambda, n));
  coords_.reserve(n);
  for (int j = 0; j < n; ++j) {
    coords_.emplace_back(lambda, z[j], w[j], max_degree);
    log_prefactor_ += coords_.back().log_prefactor();
  }
}

cplx SpecialHermiteTable::reduced(const MultiIndex& alpha, const MultiIndex& beta) const {
  cplx v = 1.0;
  for (int j = 0; j < dimension(); ++j) v *= coords_[j].reduced(alpha[j], beta[j]);
  return v;
}

cplx special_hermite(const MultiIndex& alpha, const MultiIndex& beta, TwistedParameter lambda,
                     std::span<const cplx> z, std::span<const cplx> w,
                     const QuadratureRule& quad) {
  const int n = alpha.size();
  if (beta.size() != n || static_cast<int>(z.size()) != n || static_cast<int>(w.size()) != n)
    throw std::invalid_argument("special_hermite: dimension mismatch");
  int M = 0;
  for (int j = 0; j < n; ++j) M = std::max({M, alpha[j], beta[j]});
  if (M > kDefaultHermiteMax) throw std::out_of_range("special_hermite: index exceeds K_max");
  const auto& finer = cached_gauss_hermite(static_cast<int>(quad.size()) + 8);
  cplx coarse = 1.0, fine = 1.0, log_pre = std::log(special_hermite_normalization(lambda, n));
  for (int j = 0; j < n; ++j) {
    SchrodingerTable a(lambda, z[j], w[j], M, quad);
    SchrodingerTable b(lambda, z[j], w[j], M, finer);
    coarse *= a.reduced(alpha[j], beta[j]);
    fine *= b.reduced(alpha[j], beta[j]);
    log_pre += a.log_prefactor();
  }
  // Relative to the natural size of the matrix coefficient at this point.
  const double scale = std::max({std::abs(coarse), std::abs(fine), 1e-12});
  if (std::abs(coarse - fine) > 1e-9 * scale)
    throw QuadratureError("special_hermite: insufficient quadrature degree (" +
                          std::to_string(quad.size()) + " nodes for indices " + alpha.str() +
                          ", " + beta.str() + ")");
  return std::exp(log_pre) * coarse;
}

double laguerre_function(int m, TwistedParameter lambda, std::span<const double> x,
                         std::span<const double> u) {
  if (x.size() != u.size()) throw std::invalid_argument("laguerre_function: size mismatch");
  const int n = static_cast<int>(x.size());
  double r2 = 0.0;
  for (int j = 0; j < n; ++j) r2 += x[j] * x[j] + u[j] * u[j];
  const double a = lambda.abs() * r2;
  return laguerre(m, n - 1, 0.5 * a).real() * std::exp(-0.25 * a);
}

double laguerre_function_imag(int m, TwistedParameter lambda, std::span<const double> y,
                              std::span<const double> v) {
  if (y.size() != v.size()) throw std::invalid_argument("laguerre_function_imag: size mismatch");
  const int n = static_cast<int>(y.size());
  double r2 = 0.0;
  for (int j = 0; j < n; ++j) r2 += y[j] * y[j] + v[j] * v[j];
  const double a = lambda.abs() * r2;
  return laguerre(m, n - 1, -2.0 * a).real() * std::exp(a);
}

}  // namespace hmh
