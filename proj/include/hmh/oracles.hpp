#pragma once

// Independent reference computations used by tests and by `hmh pin-constants`.
// Nothing in the core library depends on this module.

#include <map>
#include <span>
#include <string>

#include "hmh/spectral_identities.hpp"

namespace hmh::oracle {

// L_m^a(x) from the explicit finite sum, accumulated in long double.
double laguerre_series(int m, int a, double x);

// Orthonormal Hermite function from the explicit sum for H_k.
double hermite_function_explicit(int k, double x);

// (2 pi)^{-n/2} |lambda|^{n/2} e^{-|lambda| (|x|^2 + |u|^2) / 4}
double phi00_closed_form(double lambda, std::span<const double> x, std::span<const double> u);

// One-coordinate matrix coefficient as a trapezoid sum of
// int h_a(xi + s u / 2) h_b(xi - s u / 2) e^{i sgn(lambda) s x xi} d xi, s = |lambda|^{1/2}.
cplx schrodinger_coefficient(int a, int b, double lambda, double x, double u);

// Full special Hermite function at a real point from the trapezoid coefficients.
cplx special_hermite(const MultiIndex& alpha, const MultiIndex& beta, double lambda,
                     std::span<const double> x, std::span<const double> u);

// (phi00 *_lambda phi00)(0) / phi00(0) by quadrature of closed-form Gaussians.
double twisted_convolution_constant(double lambda, int n);

// 1 when the heat multiplier must read the second index, 0 for the first.
int heat_index(double lambda, double t);

// |<fhat(lambda, sigma) phi_gamma, phi_beta>| for a unit coefficient at (alpha0, beta0),
// n = 1, by quadrature of the defining integral over R^2.
double fourier_entry_modulus(double lambda, int alpha0, int beta0);

// The constant C with int |f|^2 dt = C int |f^lambda|^2 d lambda, measured on a Gaussian.
double fourier_time_constant();

// Plancherel constant for n = 1 assembled from the measured pieces above.
double plancherel_constant_n1();

// s in phi_ab(k.X) = e^{i s sgn(lambda) (b - a) theta} phi_ab(X), measured at one point.
int metaplectic_sign();

// Closed-form Paley-Wiener norm of a function whose coefficients form one block
// (fixed K-weight pi, fixed nu on the torus coordinates), evaluated at p.
double lemma_block_norm(const BandLimitedFunction& f, const ComplexGroupPoint& p);

// All pinned constants keyed by the names used in the golden file.
std::map<std::string, double> measure_constants();

}  // namespace hmh::oracle
