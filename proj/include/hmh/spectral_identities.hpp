#pragma once

#include <map>
#include <span>
#include <utility>
#include <vector>

#include "hmh/group_models.hpp"
#include "hmh/twisted_transforms.hpp"

namespace hmh {

// Plancherel constant under f^lambda = int f e^{i lambda t} dt (pinned by the Gaussian-in-t oracle).
inline double plancherel_constant(int n) { return std::pow(2.0 * kPi, -n - 1.0); }
// Constant as displayed in the source formula, kept for reporting.
inline double printed_plancherel_constant(int n) { return std::pow(2.0 * kPi, -double(n)); }

struct ComplexGroupPoint {
  std::vector<cplx> z, w;
  cplx tau = 0.0;
  TorusElement k;
  std::vector<double> H;

  static ComplexGroupPoint identity(int n, int d);
  // theta + iH, length d
  std::vector<cplx> angles() const;
  int n() const { return static_cast<int>(z.size()); }
  int d() const { return static_cast<int>(k.theta.size()); }
};

// Entries <fhat(lambda, sigma) phi_gamma, phi_beta>, keyed (gamma, beta).
struct FourierMatrix {
  TwistedParameter lambda;
  TorusIrrep sigma;
  std::map<std::pair<MultiIndex, MultiIndex>, cplx> entries;
  double hs_norm_squared() const;
};

double gutzmer_rhs(const TwistedSlice& slice, std::span<const double> y, std::span<const double> v);
double gutzmer_lhs(const TwistedSlice& slice, std::span<const double> y, std::span<const double> v,
                   const QuadratureRule& quadK, const QuadratureRule& quad2n);

BandLimitedFunction poisson_apply(const BandLimitedFunction& f, double q);

struct PoissonOptions {
  int nodes_2n = 16;
  int circle_nodes = 0;  // 0: chosen from the band
  int k_nodes = 0;       // 0: chosen from the band
  double tolerance = 1e-4;
};

VerificationReport poisson_identity_check(const BandLimitedFunction& f, double q, double r,
                                          std::span<const double> H, double s,
                                          const PoissonOptions& opts = {});

// sigma weight paired with coefficient key (alpha, beta, mK) at this lambda
std::vector<int> fourier_sigma_of(const SliceKey& key, TwistedParameter lambda);

FourierMatrix fourier_transform_hm(const BandLimitedFunction& f, std::size_t node,
                                   const TorusIrrep& sigma);
// All sigma carrying nonzero entries at this node.
std::vector<FourierMatrix> fourier_transform_band(const BandLimitedFunction& f, std::size_t node);

VerificationReport plancherel_check(const BandLimitedFunction& f, double tolerance = 1e-6);
// Both sides of the polarized identity: <f,g> against the Fourier-side pairing.
VerificationReport plancherel_polarization(const BandLimitedFunction& f, const BandLimitedFunction& g,
                                           double tolerance = 1e-6);

struct RepNormOptions {
  int beta_margin = 40;
  double tail_tolerance = 1e-14;
};

// ||rho(p) F||_HS^2 for one Fourier matrix, rows truncated adaptively.
double rep_hs_norm_squared(const FourierMatrix& F, const ComplexGroupPoint& p,
                           const RepNormOptions& opts = {});

double complexified_rep_norm(const BandLimitedFunction& f, const ComplexGroupPoint& p,
                             const RepNormOptions& opts = {});

struct PaleyWienerOptions {
  int nodes_2n = 16;
  int k_nodes = 0;  // 0: chosen from the band
  double tolerance = 1e-4;
  RepNormOptions rep;
};

double paley_wiener_lhs(const BandLimitedFunction& f, const ComplexGroupPoint& p,
                        const PaleyWienerOptions& opts = {});
VerificationReport paley_wiener_check(const BandLimitedFunction& f, const ComplexGroupPoint& p,
                                      const PaleyWienerOptions& opts = {});

// phi_ab(k.X) against conj(eta_a(k)) eta_b(k) phi_ab(X) for |a|, |b| <= max_degree, real X.
// Reports the worst entry; passes when max deviation / max |phi| <= tolerance.
VerificationReport metaplectic_intertwining_check(TwistedParameter lambda, std::span<const double> x,
                                                  std::span<const double> u, const TorusElement& k,
                                                  int max_degree, double tolerance = 1e-9);

// rho(p)^* rho(p) = I on columns |beta_j| <= max_degree at a real point (H = 0, Im tau = 0),
// rows truncated at max_degree + row_margin per coordinate.
VerificationReport rep_unitarity_check(TwistedParameter lambda, const TorusIrrep& sigma,
                                       const ComplexGroupPoint& p, int max_degree,
                                       int row_margin = 40, double tolerance = 1e-10);

}  // namespace hmh
