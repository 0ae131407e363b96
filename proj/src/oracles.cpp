#include "hmh/oracles.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace hmh::oracle {

double laguerre_series(int m, int a, double x) {
  long double sum = 0.0L;
  long double xk = 1.0L, kfact = 1.0L;
  for (int k = 0; k <= m; ++k) {
    if (k > 0) {
      xk *= x;
      kfact *= k;
    }
    const long double term = static_cast<long double>(binomial(m + a, m - k)) * xk / kfact;
    sum += (k % 2 == 0) ? term : -term;
  }
  return static_cast<double>(sum);
}

double hermite_function_explicit(int k, double x) {
  // H_k(x) = k! sum_j (-1)^j (2x)^{k-2j} / (j! (k-2j)!)
  long double h = 0.0L;
  long double kfact = std::tgamma(k + 1.0L);
  for (int j = 0; 2 * j <= k; ++j) {
    long double term = kfact / (std::tgamma(j + 1.0L) * std::tgamma(k - 2 * j + 1.0L)) *
                       std::pow(2.0L * x, static_cast<long double>(k - 2 * j));
    h += (j % 2 == 0) ? term : -term;
  }
  const long double norm = std::sqrt(std::pow(2.0L, k) * kfact * std::sqrt(static_cast<long double>(kPi)));
  return static_cast<double>(h / norm * std::exp(-0.5L * x * x));
}

double phi00_closed_form(double lambda, std::span<const double> x, std::span<const double> u) {
  const int n = static_cast<int>(x.size());
  double r2 = 0.0;
  for (int j = 0; j < n; ++j) r2 += x[j] * x[j] + u[j] * u[j];
  const double al = std::abs(lambda);
  return std::pow(2.0 * kPi, -0.5 * n) * std::pow(al, 0.5 * n) * std::exp(-0.25 * al * r2);
}

cplx schrodinger_coefficient(int a, int b, double lambda, double x, double u) {
  const double s = std::sqrt(std::abs(lambda));
  const double sg = lambda < 0 ? -1.0 : 1.0;
  const double half = 12.0 + 0.5 * s * std::abs(u);
  // trapezoid is spectrally accurate for this smooth, rapidly decaying integrand
  const int steps = static_cast<int>(std::ceil(2.0 * half / 0.05));
  const double h = 2.0 * half / steps;
  cplx acc = 0.0;
  for (int i = 0; i <= steps; ++i) {
    const double xi = -half + i * h;
    const double f = hermite_function_explicit(a, xi + 0.5 * s * u) *
                     hermite_function_explicit(b, xi - 0.5 * s * u);
    acc += (i == 0 || i == steps ? 0.5 : 1.0) * f * std::polar(1.0, sg * s * x * xi);
  }
  return acc * h;
}

cplx special_hermite(const MultiIndex& alpha, const MultiIndex& beta, double lambda,
                     std::span<const double> x, std::span<const double> u) {
  const int n = alpha.size();
  cplx v = std::pow(2.0 * kPi, -0.5 * n) * std::pow(std::abs(lambda), 0.5 * n);
  for (int j = 0; j < n; ++j) v *= schrodinger_coefficient(alpha[j], beta[j], lambda, x[j], u[j]);
  return v;
}

double twisted_convolution_constant(double lambda, int n) {
  PlaneFunction g = [lambda](std::span<const double> x, std::span<const double> u) {
    return cplx(phi00_closed_form(lambda, x, u));
  };
  std::vector<double> zero(n, 0.0);
  const cplx conv = twisted_convolution(g, g, TwistedParameter(lambda), zero, zero,
                                        cached_gauss_hermite(24));
  return conv.real() / phi00_closed_form(lambda, zero, zero);
}

int heat_index(double lambda, double t) {
  const MultiIndex a({1}), b({3});
  PlaneFunction F = [&](std::span<const double> x, std::span<const double> u) {
    return special_hermite(a, b, lambda, x, u);
  };
  PlaneFunction P = [&](std::span<const double> x, std::span<const double> u) {
    std::vector<cplx> xc(x.begin(), x.end()), uc(u.begin(), u.end());
    return heat_kernel_twisted(t, TwistedParameter(lambda), xc, uc);
  };
  const std::vector<double> x{0.37}, u{-0.52};
  // Gaussian rates: |lambda|/4 from F about 0, kappa from the kernel about (x, u)
  const double al = std::abs(lambda);
  const double kappa = 0.25 * al / std::tanh(al * t), rate = 0.25 * al + kappa;
  GaussianFrame frame{{kappa * x[0] / rate, kappa * u[0] / rate}, 1.0 / std::sqrt(rate)};
  const cplx conv = twisted_convolution(F, P, TwistedParameter(lambda), x, u,
                                        cached_gauss_hermite(28), frame);
  const cplx f = F(x, u);
  const cplx first = std::exp(-t * (2.0 * a.degree() + 1) * al) * f;
  const cplx second = std::exp(-t * (2.0 * b.degree() + 1) * al) * f;
  return std::abs(conv - second) < std::abs(conv - first) ? 1 : 0;
}

double fourier_entry_modulus(double lambda, int alpha0, int beta0) {
  const MultiIndex a({alpha0}), b({beta0});
  const auto& rule = cached_gauss_hermite(16);
  const double sc = std::sqrt(2.0 / std::abs(lambda));
  cplx acc = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) {
    for (std::size_t j = 0; j < rule.size(); ++j) {
      const double x[1] = {sc * rule.nodes[i]}, u[1] = {sc * rule.nodes[j]};
      acc += rule.scaled_weights[i] * rule.scaled_weights[j] * special_hermite(a, b, lambda, x, u) *
             special_hermite(b, a, lambda, x, u);
    }
  }
  acc *= sc * sc;
  const double c = std::sqrt(std::abs(lambda) / (2.0 * kPi));
  return std::abs(acc) / c;
}

double fourier_time_constant() {
  const auto rule = gauss_legendre_rule(160, -14.0, 14.0);
  double space = 0.0, freq = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i) space += rule.weights[i] * std::exp(-rule.nodes[i] * rule.nodes[i]);
  for (std::size_t k = 0; k < rule.size(); ++k) {
    const double lam = rule.nodes[k];
    cplx ft = 0.0;
    for (std::size_t i = 0; i < rule.size(); ++i)
      ft += rule.weights[i] * std::exp(-0.5 * rule.nodes[i] * rule.nodes[i]) *
            std::polar(1.0, lam * rule.nodes[i]);
    freq += rule.weights[k] * std::norm(ft);
  }
  return space / freq;
}

double plancherel_constant_n1() {
  // unit coefficient at (1, 2) on the single node lambda = 1 with weight 1
  const double lambda = 1.0;
  const MultiIndex a({1}), b({2});
  const auto& rule = cached_gauss_hermite(16);
  const double sc = std::sqrt(2.0 / lambda);
  double slice_norm = 0.0;
  for (std::size_t i = 0; i < rule.size(); ++i)
    for (std::size_t j = 0; j < rule.size(); ++j) {
      const double x[1] = {sc * rule.nodes[i]}, u[1] = {sc * rule.nodes[j]};
      slice_norm += rule.scaled_weights[i] * rule.scaled_weights[j] *
                    std::norm(special_hermite(a, b, lambda, x, u));
    }
  slice_norm *= sc * sc;
  const double space = fourier_time_constant() * slice_norm;
  const double hs = std::pow(fourier_entry_modulus(lambda, 1, 2), 2);
  return space / (lambda * hs);
}

int metaplectic_sign() {
  const double lambda = 1.3, theta = 0.7;
  const MultiIndex a({1}), b({3});
  const double x[1] = {0.4}, u[1] = {-0.3};
  const double xr[1] = {x[0] * std::cos(theta) - u[0] * std::sin(theta)};
  const double ur[1] = {x[0] * std::sin(theta) + u[0] * std::cos(theta)};
  const cplx ratio = special_hermite(a, b, lambda, xr, ur) / special_hermite(a, b, lambda, x, u);
  const double shift = (b.degree() - a.degree()) * theta;
  return std::abs(ratio - std::polar(1.0, shift)) < std::abs(ratio - std::polar(1.0, -shift)) ? 1
                                                                                             : -1;
}

namespace {

bool next_box(std::vector<int>& idx, int N) {
  for (int j = static_cast<int>(idx.size()) - 1; j >= 0; --j) {
    if (++idx[j] < N) return true;
    idx[j] = 0;
  }
  return false;
}

}  // namespace

double lemma_block_norm(const BandLimitedFunction& f, const ComplexGroupPoint& p) {
  const int n = f.n, d = f.d;
  double total = 0.0;
  for (std::size_t i = 0; i < f.slices.size(); ++i) {
    const auto& sl = f.slices[i];
    if (sl.empty()) continue;
    const TwistedParameter lam = sl.lambda();
    const auto& first = sl.coefficients().begin()->first;
    std::vector<int> block_pi = first.mK, block_nu(d);
    for (int j = 0; j < d; ++j) block_nu[j] = lam.sign() * (first.beta[j] - first.alpha[j]);
    for (const auto& [key, c] : sl.coefficients()) {
      for (int j = 0; j < d; ++j)
        if (key.mK[j] != block_pi[j] || lam.sign() * (key.beta[j] - key.alpha[j]) != block_nu[j])
          throw std::invalid_argument("lemma_block_norm: coefficients span more than one block");
    }
    double expo = -2.0 * lam.value() * p.tau.imag();
    for (int j = 0; j < d; ++j) expo += 2.0 * (block_pi[j] + block_nu[j]) * p.H[j];

    const int B = sl.max_degree() + 40;
    SpecialHermiteTable table(lam, p.z, p.w, B);
    const double pre = std::exp(2.0 * table.log_prefactor().real());
    const double inv_c2 = std::pow(2.0 * kPi / lam.abs(), n);
    // column alpha (second key index), row beta over the box
    std::map<MultiIndex, std::vector<std::pair<MultiIndex, cplx>>> columns;
    for (const auto& [key, c] : sl.coefficients())
      columns[key.beta].push_back(
          {key.alpha, ((key.alpha.degree() + key.beta.degree()) % 2 ? -1.0 : 1.0) * c});
    double node = 0.0;
    std::vector<int> row(n, 0);
    do {
      const MultiIndex beta(row);
      for (const auto& [alpha, col] : columns) {
        cplx acc = 0.0;
        for (const auto& [delta, v] : col) acc += table.reduced(delta, beta) * v;
        node += std::norm(acc);
      }
    } while (next_box(row, B + 1));
    total += f.grid.weights[i] * std::exp(expo) * inv_c2 * pre * node;
  }
  return total / (2.0 * kPi);
}

std::map<std::string, double> measure_constants() {
  return {
      {"twisted_convolution_constant_n1_lambda1", twisted_convolution_constant(1.0, 1)},
      {"twisted_convolution_constant_n2_lambda2", twisted_convolution_constant(2.0, 2)},
      {"heat_index_second", double(heat_index(1.5, 0.2))},
      {"heat_index_second_negative_lambda", double(heat_index(-1.5, 0.2))},
      {"fourier_entry_modulus_lambda1", fourier_entry_modulus(1.0, 1, 2)},
      {"fourier_time_constant", fourier_time_constant()},
      {"plancherel_constant_n1", plancherel_constant_n1()},
      {"metaplectic_sign", double(metaplectic_sign())},
  };
}

}  // namespace hmh::oracle
