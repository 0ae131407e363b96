#include "hmh/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <sstream>

namespace hmh {

namespace {

constexpr double kNewtonTol = 1e-15;
constexpr int kMaxNewton = 100;

// Orthonormal Hermite functions h_{n-1}(x), h_n(x) (Gaussian factor included,
// so nothing overflows for large n).
void hermite_pair(int n, double x, double& h_prev, double& h_n) {
  double p0 = std::pow(kPi, -0.25) * std::exp(-0.5 * x * x);
  double p1 = 0.0;
  for (int j = 1; j <= n; ++j) {
    double p2 = p1;
    p1 = p0;
    p0 = x * std::sqrt(2.0 / j) * p1 - std::sqrt((j - 1.0) / j) * p2;
  }
  h_n = p0;
  h_prev = p1;
}

}  // namespace

std::string to_string(QuadratureKind kind) {
  switch (kind) {
    case QuadratureKind::GaussHermite: return "gauss_hermite";
    case QuadratureKind::GaussLegendre: return "gauss_legendre";
    case QuadratureKind::PeriodicTrapezoid: return "periodic_trapezoid";
  }
  return "unknown";
}

QuadratureRule gauss_hermite_rule(int n) {
  if (n < 1 || n > 512)
    throw std::invalid_argument("gauss_hermite_rule: n_points must be in [1, 512]");
  QuadratureRule rule;
  rule.kind = QuadratureKind::GaussHermite;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  rule.scaled_weights.assign(n, 0.0);

  const int m = (n + 1) / 2;
  double z = 0.0;
  std::vector<double> roots(m);
  for (int i = 0; i < m; ++i) {
    // Initial guesses from the asymptotic root distribution.
    if (i == 0) {
      z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
    } else if (i == 1) {
      z -= 1.14 * std::pow(static_cast<double>(n), 0.426) / z;
    } else if (i == 2) {
      z = 1.86 * z - 0.86 * roots[0];
    } else if (i == 3) {
      z = 1.91 * z - 0.91 * roots[1];
    } else {
      z = 2.0 * z - roots[i - 2];
    }
    double hp = 0.0, hn = 0.0;
    for (int it = 0; it < kMaxNewton; ++it) {
      hermite_pair(n, z, hp, hn);
      // h_n' / h_n reduces to sqrt(2n) h_{n-1} / h_n at a root of the polynomial part.
      double dz = hn / (std::sqrt(2.0 * n) * hp);
      z -= dz;
      if (std::abs(dz) <= kNewtonTol * std::max(1.0, std::abs(z))) break;
    }
    roots[i] = z;
    hermite_pair(n, z, hp, hn);
    double scaled = 1.0 / (n * hp * hp);
    rule.nodes[i] = z;
    rule.nodes[n - 1 - i] = -z;
    rule.scaled_weights[i] = rule.scaled_weights[n - 1 - i] = scaled;
    double w = std::exp(-z * z) * scaled;
    rule.weights[i] = rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[m - 1] = 0.0;
  std::reverse(rule.nodes.begin(), rule.nodes.end());
  std::reverse(rule.weights.begin(), rule.weights.end());
  std::reverse(rule.scaled_weights.begin(), rule.scaled_weights.end());
  rule.lower = -INFINITY;
  rule.upper = INFINITY;
  return rule;
}

QuadratureRule gauss_legendre_rule(int n, double a, double b) {
  if (n < 1 || n > 512)
    throw std::invalid_argument("gauss_legendre_rule: n_points must be in [1, 512]");
  if (!(a < b)) throw std::invalid_argument("gauss_legendre_rule: requires a < b");
  QuadratureRule rule;
  rule.kind = QuadratureKind::GaussLegendre;
  rule.nodes.assign(n, 0.0);
  rule.weights.assign(n, 0.0);
  rule.lower = a;
  rule.upper = b;
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < kMaxNewton; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
      double dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) <= kNewtonTol) break;
    }
    {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 1; j <= n; ++j) {
        double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j - 1.0) * z * p2 - (j - 1.0) * p3) / j;
      }
      pp = n * (z * p1 - p2) / (z * z - 1.0);
    }
    if (n % 2 == 1 && i == m - 1) z = 0.0;
    double w = 2.0 / ((1.0 - z * z) * pp * pp);
    rule.nodes[i] = mid - half * z;
    rule.nodes[n - 1 - i] = mid + half * z;
    rule.weights[i] = rule.weights[n - 1 - i] = half * w;
  }
  return rule;
}

QuadratureRule periodic_trapezoid_rule(int n) {
  if (n < 1) throw std::invalid_argument("periodic_trapezoid_rule: n_points must be >= 1");
  QuadratureRule rule;
  rule.kind = QuadratureKind::PeriodicTrapezoid;
  rule.lower = 0.0;
  rule.upper = 2.0 * kPi;
  rule.nodes.resize(n);
  rule.weights.assign(n, 2.0 * kPi / n);
  for (int j = 0; j < n; ++j) rule.nodes[j] = 2.0 * kPi * j / n;
  return rule;
}

const QuadratureRule& cached_gauss_hermite(int n) {
  thread_local std::map<int, const QuadratureRule*> local;
  if (auto it = local.find(n); it != local.end()) return *it->second;
  static std::mutex mu;
  static std::map<int, std::unique_ptr<QuadratureRule>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<QuadratureRule>(gauss_hermite_rule(n));
  local[n] = slot.get();
  return *slot;
}

MultiIndex::MultiIndex(std::vector<int> entries) : entries_(std::move(entries)) {
  for (int e : entries_)
    if (e < 0) throw std::invalid_argument("MultiIndex: negative entry");
}

int MultiIndex::degree() const {
  int s = 0;
  for (int e : entries_) s += e;
  return s;
}

std::string MultiIndex::str() const {
  std::ostringstream os;
  os << '(';
  for (std::size_t j = 0; j < entries_.size(); ++j) os << (j ? "," : "") << entries_[j];
  os << ')';
  return os.str();
}

namespace {

void compositions(int n, int pos, int remaining, std::vector<int>& cur,
                  std::vector<MultiIndex>& out) {
  if (pos == n - 1) {
    cur[pos] = remaining;
    out.emplace_back(cur);
    return;
  }
  for (int v = remaining; v >= 0; --v) {
    cur[pos] = v;
    compositions(n, pos + 1, remaining - v, cur, out);
  }
}

}  // namespace

std::vector<MultiIndex> indices_of_degree(int n, int degree) {
  if (n < 1) throw std::invalid_argument("indices_of_degree: n must be >= 1");
  std::vector<MultiIndex> out;
  if (degree < 0) return out;
  std::vector<int> cur(n, 0);
  compositions(n, 0, degree, cur, out);
  return out;
}

std::vector<MultiIndex> enumerate_indices(int n, int max_total_degree) {
  std::vector<MultiIndex> out;
  for (int m = 0; m <= max_total_degree; ++m) {
    auto layer = indices_of_degree(n, m);
    out.insert(out.end(), layer.begin(), layer.end());
  }
  return out;
}

long long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double relative_error(cplx lhs, cplx rhs) {
  double scale = std::max({std::abs(lhs), std::abs(rhs), kRelErrFloor});
  return std::abs(lhs - rhs) / scale;
}

VerificationReport make_report(std::string name, cplx lhs, cplx rhs, double rel_tol,
                               ParamMap params) {
  VerificationReport r;
  r.identity_name = std::move(name);
  r.lhs = lhs;
  r.rhs = rhs;
  r.abs_err = std::abs(lhs - rhs);
  r.rel_err = relative_error(lhs, rhs);
  params["tolerance"] = rel_tol;
  r.params = std::move(params);
  r.passed = std::isfinite(r.rel_err) && r.rel_err <= rel_tol;
  return r;
}

}  // namespace hmh
