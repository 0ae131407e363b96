#pragma once

#include <map>
#include <span>
#include <vector>

#include "hmh/numerics.hpp"
#include "hmh/special_functions.hpp"

namespace hmh {

struct HeisenbergElement {
  std::vector<double> x;
  std::vector<double> u;
  double t = 0.0;
};

// Angles of a torus element; rotates the first theta.size() coordinate planes.
struct TorusElement {
  std::vector<double> theta;
};

struct HMElement {
  HeisenbergElement h;
  TorusElement k;
};

HeisenbergElement heisenberg_multiply(const HeisenbergElement& a, const HeisenbergElement& b);
HeisenbergElement heisenberg_inverse(const HeisenbergElement& a);

// (x_j, u_j) -> (x_j cos - u_j sin, x_j sin + u_j cos) for j < d.
void torus_act(const TorusElement& k, std::span<const double> x, std::span<const double> u,
               std::span<double> x_out, std::span<double> u_out);
// Complex-linear extension; angles may be complex (theta + iH).
void torus_act_complex(std::span<const cplx> angles, std::span<const cplx> z,
                       std::span<const cplx> w, std::span<cplx> z_out, std::span<cplx> w_out);

HMElement hm_multiply(const HMElement& a, const HMElement& b);
HMElement hm_inverse(const HMElement& a);

class TorusIrrep {
 public:
  explicit TorusIrrep(std::vector<int> weight) : weight_(std::move(weight)) {}
  const std::vector<int>& weight() const { return weight_; }
  int degree() const { return 1; }
  double casimir() const;
  cplx character(const TorusElement& k) const;
  // e^{i m.(theta + iH)}
  cplx character(std::span<const cplx> angles) const;
  // chi_m(exp 2iH) = e^{-2 m.H}
  double character_imag(std::span<const double> H) const;

 private:
  std::vector<int> weight_;
};

// Discrete Fourier coefficients of samples on an N^d trapezoid grid
// (row-major, last angle fastest) for all weights with |m_j| <= max_weight.
std::map<std::vector<int>, cplx> peter_weyl_coefficients(std::span<const cplx> samples,
                                                         int grid_size, int d, int max_weight);

// e^{i sgn(lambda) alpha.theta}; angles padded with zeros beyond d.
cplx metaplectic_phase(const TorusElement& k, const MultiIndex& alpha, TwistedParameter lambda);
cplx metaplectic_phase(std::span<const cplx> angles, const MultiIndex& alpha,
                       TwistedParameter lambda);

struct PmComponent {
  int label;
  std::vector<MultiIndex> basis;
};

std::vector<PmComponent> pm_decomposition(int m, int n, int d);

// Smallest M with sum_{|m|>M} e^{-m^2 t/2} e^{2|m||H|} below tol (per coordinate).
int heat_kernel_K_truncation(double t, double H_abs, double tol = 1e-12);
// Sum_m e^{-|m|^2 t/2} e^{i m.(theta + iH)}.
cplx heat_kernel_K(double t, const TorusElement& k, std::span<const double> H = {});

// (pi t)^{-d/2} e^{-|H|^2 / t}
double g_measure_density(double t, std::span<const double> H);

}  // namespace hmh
