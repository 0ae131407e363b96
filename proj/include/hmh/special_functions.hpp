#pragma once

#include <span>
#include <vector>

#include "hmh/numerics.hpp"

namespace hmh {

class TwistedParameter {
 public:
  explicit TwistedParameter(double lambda);
  double value() const { return lambda_; }
  double abs() const { return lambda_ < 0 ? -lambda_ : lambda_; }
  int sign() const { return lambda_ < 0 ? -1 : 1; }

 private:
  double lambda_;
};

inline constexpr int kDefaultHermiteMax = 64;
inline constexpr int kLaguerreMax = 256;

// Orthonormal Hermite functions h_0..h_kmax at complex x.
std::vector<cplx> hermite_function_values(int k_max, cplx x);
// Polynomial parts p_k(x) = h_k(x) e^{x^2/2}, p_0 = pi^{-1/4}.
std::vector<cplx> hermite_polynomial_values(int k_max, cplx x);

cplx hermite_function(int k, cplx x, int k_max = kDefaultHermiteMax);

// |lambda|^{n/4} prod_j h_{alpha_j}(|lambda|^{1/2} x_j)
cplx scaled_hermite(const MultiIndex& alpha, TwistedParameter lambda,
                    std::span<const cplx> x, int k_max = kDefaultHermiteMax);

// Generalized Laguerre L_m^{a}(x) by three-term recurrence.
cplx laguerre(int m, int alpha_type, cplx x);

// (2 pi)^{-n/2} |lambda|^{n/2}
double special_hermite_normalization(TwistedParameter lambda, int n);

// Matrix coefficients <pi_lambda(z,w) h_a, h_b> on one coordinate for
// a, b <= max_degree, stored as exp(log_prefactor) * reduced(a, b).
// The Gaussian-factored integrand is a polynomial, so Gauss-Hermite with
// more than max_degree nodes is exact for complex (z, w).
class SchrodingerTable {
 public:
  SchrodingerTable(TwistedParameter lambda, cplx z, cplx w, int max_degree,
                   const QuadratureRule& rule);
  SchrodingerTable(TwistedParameter lambda, cplx z, cplx w, int max_degree);

  int max_degree() const { return max_degree_; }
  cplx log_prefactor() const { return log_prefactor_; }
  cplx reduced(int a, int b) const { return reduced_[a * (max_degree_ + 1) + b]; }
  cplx value(int a, int b) const { return std::exp(log_prefactor_) * reduced(a, b); }

 private:
  void build(TwistedParameter lambda, cplx z, cplx w, const QuadratureRule& rule);

  int max_degree_;
  cplx log_prefactor_;
  std::vector<cplx> reduced_;
};

// phi^lambda_{alpha beta}(z, w) for all |alpha_j|, |beta_j| <= max_degree,
// factorized over coordinates.
class SpecialHermiteTable {
 public:
  SpecialHermiteTable(TwistedParameter lambda, std::span<const cplx> z,
                      std::span<const cplx> w, int max_degree);

  int dimension() const { return static_cast<int>(coords_.size()); }
  // log of normalization times the Gaussian prefactor
  cplx log_prefactor() const { return log_prefactor_; }
  cplx reduced(const MultiIndex& alpha, const MultiIndex& beta) const;
  cplx value(const MultiIndex& alpha, const MultiIndex& beta) const {
    return std::exp(log_prefactor_) * reduced(alpha, beta);
  }

 private:
  std::vector<SchrodingerTable> coords_;
  cplx log_prefactor_;
};

// Single value with an N vs N+8 node consistency check (1e-9 relative).
cplx special_hermite(const MultiIndex& alpha, const MultiIndex& beta, TwistedParameter lambda,
                     std::span<const cplx> z, std::span<const cplx> w,
                     const QuadratureRule& quad);

// L_m^{n-1}(|lambda| r^2 / 2) e^{-|lambda| r^2 / 4}, r^2 = |x|^2 + |u|^2
double laguerre_function(int m, TwistedParameter lambda, std::span<const double> x,
                         std::span<const double> u);

// L_m^{n-1}(-2|lambda| r^2) e^{|lambda| r^2}, r^2 = |y|^2 + |v|^2
double laguerre_function_imag(int m, TwistedParameter lambda, std::span<const double> y,
                              std::span<const double> v);

}  // namespace hmh
