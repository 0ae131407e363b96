#pragma once

#include <complex>
#include <compare>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace hmh {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846264338327950288;

// Raised when a two-rule consistency check disagrees beyond tolerance.
class QuadratureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class QuadratureKind { GaussHermite, GaussLegendre, PeriodicTrapezoid };

std::string to_string(QuadratureKind kind);

struct QuadratureRule {
  QuadratureKind kind = QuadratureKind::GaussHermite;
  std::vector<double> nodes;
  std::vector<double> weights;
  // Gauss-Hermite only: weights[j] * exp(nodes[j]^2). These never underflow
  // and are what integrands without the Gaussian factor are summed against.
  std::vector<double> scaled_weights;
  // Interval [lower, upper] for Legendre, [0, 2*pi) for the trapezoid rule.
  double lower = 0.0;
  double upper = 0.0;

  std::size_t size() const { return nodes.size(); }
};

QuadratureRule gauss_hermite_rule(int n_points);
QuadratureRule gauss_legendre_rule(int n_points, double a, double b);
QuadratureRule periodic_trapezoid_rule(int n_points);

// Process-wide cache of Gauss-Hermite rules; safe for concurrent callers.
const QuadratureRule& cached_gauss_hermite(int n_points);

class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(std::vector<int> entries);
  static MultiIndex zeros(int n) { return MultiIndex(std::vector<int>(n, 0)); }

  int size() const { return static_cast<int>(entries_.size()); }
  int operator[](int j) const { return entries_[j]; }
  int degree() const;
  const std::vector<int>& entries() const { return entries_; }
  std::string str() const;

  auto operator<=>(const MultiIndex&) const = default;
  bool operator==(const MultiIndex&) const = default;

 private:
  std::vector<int> entries_;
};

// All indices of total degree exactly `degree`, first entry descending.
std::vector<MultiIndex> indices_of_degree(int n, int degree);
// Graded lexicographic enumeration of |alpha| <= max_total_degree.
std::vector<MultiIndex> enumerate_indices(int n, int max_total_degree);

long long binomial(int n, int k);

using ParamValue = std::variant<double, std::int64_t, std::string>;
using ParamMap = std::map<std::string, ParamValue>;

inline constexpr double kRelErrFloor = 1e-300;

struct VerificationReport {
  std::string identity_name;
  cplx lhs;
  cplx rhs;
  double abs_err = 0.0;
  double rel_err = 0.0;
  ParamMap params;
  bool passed = false;
};

double relative_error(cplx lhs, cplx rhs);

// Fills errors and sets passed = rel_err <= rel_tol.
VerificationReport make_report(std::string name, cplx lhs, cplx rhs,
                               double rel_tol, ParamMap params = {});

}  // namespace hmh
