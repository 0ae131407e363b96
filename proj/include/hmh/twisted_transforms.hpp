#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "hmh/group_models.hpp"
#include "hmh/numerics.hpp"
#include "hmh/special_functions.hpp"

namespace hmh {

// ||f||^2 = kFourierTimeConstant * int ||f^lambda||^2 dlambda for f^lambda = int f e^{i lambda t} dt
inline constexpr double kFourierTimeConstant = 1.0 / (2.0 * kPi);

// phi_ab *_lambda phi_cd = twisted_convolution_constant * delta_bc * phi_ad
inline double twisted_convolution_constant(double lambda, int n) {
  return std::pow(2.0 * kPi / std::abs(lambda), 0.5 * n);
}
// The heat multiplier e^{-t(2|idx|+n)|lambda|} reads the second (beta) index.
inline constexpr bool kHeatActsOnSecondIndex = true;

struct SliceKey {
  MultiIndex alpha;
  MultiIndex beta;
  std::vector<int> mK;
  auto operator<=>(const SliceKey&) const = default;
  bool operator==(const SliceKey&) const = default;
};

using CoefficientMap = std::map<SliceKey, cplx>;

// f^lambda(x,u,k) = sum c * phi_{alpha beta}^lambda(x,u) e^{i mK.theta}
class TwistedSlice {
 public:
  TwistedSlice(TwistedParameter lambda, int n, int d, CoefficientMap coeffs = {});

  TwistedParameter lambda() const { return lambda_; }
  int n() const { return n_; }
  int d() const { return d_; }
  const CoefficientMap& coefficients() const { return coeffs_; }
  bool empty() const { return coeffs_.empty(); }

  double norm_squared() const;
  // Largest single-coordinate entry of any alpha or beta.
  int max_degree() const { return max_degree_; }
  int max_total_degree() const;
  int max_weight() const;
  // Distinct K-weights, in map order; evaluate_modes returns values aligned with it.
  const std::vector<std::vector<int>>& modes() const { return modes_; }

  // Multiplies coefficient (alpha, beta, mK) by fn(key).
  TwistedSlice transformed(const std::function<cplx(const SliceKey&)>& fn) const;
  TwistedSlice scaled(cplx c) const;

  // K-Fourier components at a complex point, as exp(log_prefactor) * reduced[mode].
  void evaluate_reduced(std::span<const cplx> z, std::span<const cplx> w, cplx& log_prefactor,
                        std::vector<cplx>& reduced) const;
  std::vector<cplx> evaluate_modes(std::span<const cplx> z, std::span<const cplx> w) const;
  // Full value at (z, w, g) with g given by complex angles theta + iH (length d).
  cplx evaluate(std::span<const cplx> z, std::span<const cplx> w,
                std::span<const cplx> angles = {}) const;

 private:
  struct Term {
    MultiIndex alpha, beta;
    int mode;
    cplx c;
  };
  TwistedParameter lambda_;
  int n_, d_;
  CoefficientMap coeffs_;
  std::vector<std::vector<int>> modes_;
  std::vector<Term> terms_;
  int max_degree_ = 0;
};

struct LambdaGrid {
  std::vector<double> nodes;
  std::vector<double> weights;
  // Gauss-Legendre on [a,b], mirrored onto [-b,-a] when symmetric.
  static LambdaGrid gauss_legendre(double a, double b, int nodes_per_side, bool symmetric);
  static LambdaGrid single(double lambda, double weight = 1.0);
};

struct BandLimitedFunction {
  int n = 1;
  int d = 0;
  LambdaGrid grid;
  std::vector<TwistedSlice> slices;
  std::vector<double> profile;

  double norm_squared() const;
  BandLimitedFunction scaled(cplx c) const;
};

BandLimitedFunction add(const BandLimitedFunction& f, const BandLimitedFunction& g);

struct BergmanWeight {
  double t;
  TwistedParameter lambda;
  double log_value(std::span<const cplx> z, std::span<const cplx> w) const;
  double operator()(std::span<const cplx> z, std::span<const cplx> w) const;
};

// (4 pi)^{-n} (lambda / sinh lambda t)^n e^{-(lambda/4) coth(lambda t)(x.x + u.u)}
cplx heat_kernel_twisted(double t, TwistedParameter lambda, std::span<const cplx> x,
                         std::span<const cplx> u);
cplx log_heat_kernel_twisted(double t, TwistedParameter lambda, std::span<const cplx> x,
                             std::span<const cplx> u);

using PlaneFunction = std::function<cplx(std::span<const double>, std::span<const double>)>;

// Nodes are placed at center + scale * (Gauss-Hermite node) in every coordinate.
struct GaussianFrame {
  std::vector<double> center;  // length 2n: (x, u)
  double scale = 1.0;
};

cplx twisted_convolution(const PlaneFunction& F, const PlaneFunction& G, TwistedParameter lambda,
                         std::span<const double> x, std::span<const double> u,
                         const QuadratureRule& quad, std::optional<GaussianFrame> frame = {});

TwistedSlice heat_multiplier_apply(const TwistedSlice& slice, double t);
BandLimitedFunction segal_bargmann(const BandLimitedFunction& f, double t);

// ||f^lambda||^2 on R^{2n} x K by tensor Gauss-Hermite and trapezoid quadrature.
double slice_l2_quadrature(const TwistedSlice& slice, int n_nodes);

// Gram matrix Q_{m m'} = int_G chi_m conj(chi_m') dnu_t for the slice's modes.
std::vector<cplx> g_mode_gram(const std::vector<std::vector<int>>& modes, double t,
                              const QuadratureRule& quadG);

double bergman_norm(const TwistedSlice& image, double t, const QuadratureRule& quad2n,
                    const QuadratureRule& quadG);
// Same integral for a function expanded in the basis of its own lambda, measured with the
// Bergman weight of weight_lambda (used by the weight probe).
double bergman_norm_with_weight(const TwistedSlice& image, double t, TwistedParameter weight_lambda,
                                const QuadratureRule& quad2n, const QuadratureRule& quadG,
                                bool check_consistency = true);

struct DirectIntegralOptions {
  int nodes_2n = 10;
  int nodes_G = 40;
  bool check_consistency = false;
};

double direct_integral_norm(const BandLimitedFunction& image, double t,
                            const DirectIntegralOptions& opts = {});

struct WeightProbeOptions {
  bool single_lambda = false;
  double scale = 1.0;
  int nodes_2n = 12;
};

VerificationReport nonnegative_weight_probe(double t, const WeightProbeOptions& opts = {});

}  // namespace hmh
