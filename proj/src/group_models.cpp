#include "hmh/group_models.hpp"

#include <cmath>
#include <string>

namespace hmh {

namespace {

void check_same(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

}  // namespace

HeisenbergElement heisenberg_multiply(const HeisenbergElement& a, const HeisenbergElement& b) {
  check_same(a.x.size(), b.x.size(), "heisenberg_multiply");
  check_same(a.u.size(), b.u.size(), "heisenberg_multiply");
  HeisenbergElement c;
  c.x = a.x;
  c.u = a.u;
  double sympl = 0.0;
  for (std::size_t j = 0; j < a.x.size(); ++j) {
    c.x[j] += b.x[j];
    c.u[j] += b.u[j];
    sympl += b.x[j] * a.u[j] - b.u[j] * a.x[j];
  }
  c.t = a.t + b.t + 0.5 * sympl;
  return c;
}

HeisenbergElement heisenberg_inverse(const HeisenbergElement& a) {
  HeisenbergElement c = a;
  for (auto& v : c.x) v = -v;
  for (auto& v : c.u) v = -v;
  c.t = -a.t;
  return c;
}

void torus_act(const TorusElement& k, std::span<const double> x, std::span<const double> u,
               std::span<double> x_out, std::span<double> u_out) {
  check_same(x.size(), u.size(), "torus_act");
  if (k.theta.size() > x.size()) throw std::invalid_argument("torus_act: d exceeds n");
  for (std::size_t j = 0; j < x.size(); ++j) {
    double xj = x[j], uj = u[j];
    if (j < k.theta.size()) {
      double c = std::cos(k.theta[j]), s = std::sin(k.theta[j]);
      x_out[j] = xj * c - uj * s;
      u_out[j] = xj * s + uj * c;
    } else {
      x_out[j] = xj;
      u_out[j] = uj;
    }
  }
}

void torus_act_complex(std::span<const cplx> angles, std::span<const cplx> z,
                       std::span<const cplx> w, std::span<cplx> z_out, std::span<cplx> w_out) {
  check_same(z.size(), w.size(), "torus_act_complex");
  if (angles.size() > z.size()) throw std::invalid_argument("torus_act_complex: d exceeds n");
  for (std::size_t j = 0; j < z.size(); ++j) {
    cplx zj = z[j], wj = w[j];
    if (j < angles.size()) {
      cplx c = std::cos(angles[j]), s = std::sin(angles[j]);
      z_out[j] = zj * c - wj * s;
      w_out[j] = zj * s + wj * c;
    } else {
      z_out[j] = zj;
      w_out[j] = wj;
    }
  }
}

HMElement hm_multiply(const HMElement& a, const HMElement& b) {
  check_same(a.k.theta.size(), b.k.theta.size(), "hm_multiply");
  HMElement c;
  HeisenbergElement rotated = b.h;
  torus_act(a.k, b.h.x, b.h.u, rotated.x, rotated.u);
  c.h = heisenberg_multiply(a.h, rotated);
  c.k.theta = a.k.theta;
  for (std::size_t j = 0; j < c.k.theta.size(); ++j)
    c.k.theta[j] = std::remainder(a.k.theta[j] + b.k.theta[j], 2.0 * kPi);
  return c;
}

HMElement hm_inverse(const HMElement& a) {
  HMElement c;
  c.k.theta = a.k.theta;
  for (auto& v : c.k.theta) v = -v;
  HeisenbergElement inv = heisenberg_inverse(a.h);
  c.h = inv;
  torus_act(c.k, inv.x, inv.u, c.h.x, c.h.u);
  return c;
}

double TorusIrrep::casimir() const {
  double s = 0.0;
  for (int m : weight_) s += double(m) * m;
  return s;
}

cplx TorusIrrep::character(const TorusElement& k) const {
  check_same(k.theta.size(), weight_.size(), "TorusIrrep::character");
  double phase = 0.0;
  for (std::size_t j = 0; j < weight_.size(); ++j) phase += weight_[j] * k.theta[j];
  return std::polar(1.0, phase);
}

cplx TorusIrrep::character(std::span<const cplx> angles) const {
  check_same(angles.size(), weight_.size(), "TorusIrrep::character");
  cplx phase = 0.0;
  for (std::size_t j = 0; j < weight_.size(); ++j) phase += double(weight_[j]) * angles[j];
  return std::exp(cplx(0.0, 1.0) * phase);
}

double TorusIrrep::character_imag(std::span<const double> H) const {
  check_same(H.size(), weight_.size(), "TorusIrrep::character_imag");
  double e = 0.0;
  for (std::size_t j = 0; j < weight_.size(); ++j) e += weight_[j] * H[j];
  return std::exp(-2.0 * e);
}

std::map<std::vector<int>, cplx> peter_weyl_coefficients(std::span<const cplx> samples,
                                                         int grid_size, int d, int max_weight) {
  if (d < 1) throw std::invalid_argument("peter_weyl_coefficients: d must be >= 1");
  std::size_t total = 1;
  for (int j = 0; j < d; ++j) total *= grid_size;
  if (samples.size() != total)
    throw std::invalid_argument("peter_weyl_coefficients: expected grid_size^d samples");
  if (2 * max_weight >= grid_size)
    throw std::domain_error("peter_weyl_coefficients: aliasing, weight " +
                            std::to_string(max_weight) + " >= N/2 for N=" +
                            std::to_string(grid_size));
  std::map<std::vector<int>, cplx> out;
  std::vector<int> m(d, -max_weight);
  const double h = 2.0 * kPi / grid_size;
  while (true) {
    cplx acc = 0.0;
    for (std::size_t idx = 0; idx < total; ++idx) {
      std::size_t rest = idx;
      double phase = 0.0;
      for (int j = d - 1; j >= 0; --j) {
        phase += m[j] * h * double(rest % grid_size);
        rest /= grid_size;
      }
      acc += samples[idx] * std::polar(1.0, -phase);
    }
    out[m] = acc / double(total);
    int j = d - 1;
    while (j >= 0 && m[j] == max_weight) m[j--] = -max_weight;
    if (j < 0) break;
    ++m[j];
  }
  return out;
}

cplx metaplectic_phase(const TorusElement& k, const MultiIndex& alpha, TwistedParameter lambda) {
  if (static_cast<int>(k.theta.size()) > alpha.size())
    throw std::invalid_argument("metaplectic_phase: d exceeds n");
  double phase = 0.0;
  for (std::size_t j = 0; j < k.theta.size(); ++j) phase += alpha[j] * k.theta[j];
  return std::polar(1.0, lambda.sign() * phase);
}

cplx metaplectic_phase(std::span<const cplx> angles, const MultiIndex& alpha,
                       TwistedParameter lambda) {
  if (static_cast<int>(angles.size()) > alpha.size())
    throw std::invalid_argument("metaplectic_phase: d exceeds n");
  cplx phase = 0.0;
  for (std::size_t j = 0; j < angles.size(); ++j) phase += double(alpha[j]) * angles[j];
  return std::exp(cplx(0.0, lambda.sign()) * phase);
}

std::vector<PmComponent> pm_decomposition(int m, int n, int d) {
  if (d < n)
    throw std::invalid_argument(
        "pm_decomposition: d < n, the torus action on P_m need not be multiplicity-free");
  if (d > n) throw std::invalid_argument("pm_decomposition: d exceeds n");
  std::vector<PmComponent> out;
  int label = 1;
  for (auto& a : indices_of_degree(n, m)) out.push_back({label++, {a}});
  return out;
}

int heat_kernel_K_truncation(double t, double H_abs, double tol) {
  if (!(t > 0.0)) throw std::invalid_argument("heat_kernel_K: t must be positive");
  constexpr int kMaxTerms = 10000;
  // Terms decrease once m t / 2 > 2|H|; bound the tail by a geometric series from there.
  for (int M = 0; M <= kMaxTerms; ++M) {
    double m1 = M + 1.0;
    double first = std::exp(-m1 * m1 * t / 2.0 + 2.0 * m1 * H_abs);
    double ratio = std::exp(-(2.0 * m1 + 1.0) * t / 2.0 + 2.0 * H_abs);
    if (ratio < 1.0 && 2.0 * first / (1.0 - ratio) < tol) return M;
  }
  throw std::domain_error("heat_kernel_K: no truncation <= 10^4 meets the tail bound");
}

cplx heat_kernel_K(double t, const TorusElement& k, std::span<const double> H) {
  if (!H.empty()) check_same(H.size(), k.theta.size(), "heat_kernel_K");
  cplx total = 1.0;
  for (std::size_t j = 0; j < k.theta.size(); ++j) {
    double h = H.empty() ? 0.0 : H[j];
    int M = heat_kernel_K_truncation(t, std::abs(h));
    cplx angle(k.theta[j], h);
    cplx s = 0.0;
    for (int m = -M; m <= M; ++m)
      s += std::exp(-0.5 * m * m * t + cplx(0.0, 1.0) * double(m) * angle);
    total *= s;
  }
  return total;
}

double g_measure_density(double t, std::span<const double> H) {
  if (!(t > 0.0)) throw std::invalid_argument("g_measure_density: t must be positive");
  double h2 = 0.0;
  for (double h : H) h2 += h * h;
  return std::pow(kPi * t, -0.5 * H.size()) * std::exp(-h2 / t);
}

}  // namespace hmh
