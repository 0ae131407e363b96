#include <doctest.h>

#include <cmath>
#include <vector>

#include "hmh/oracles.hpp"
#include "hmh/special_functions.hpp"

using namespace hmh;

namespace {

double phi_norm(double lambda, int n) { return special_hermite_normalization(TwistedParameter(lambda), n); }

}  // namespace

TEST_SUITE("special_functions") {
  TEST_CASE("lambda must be nonzero and finite") {
    CHECK_THROWS_AS(TwistedParameter(0.0), std::invalid_argument);
    CHECK_THROWS_AS(TwistedParameter{INFINITY}, std::invalid_argument);
    TwistedParameter p(-2.5);
    CHECK(p.abs() == 2.5);
    CHECK(p.sign() == -1);
  }

  TEST_CASE("hermite functions match the explicit formula") {
    for (double x : {-3.1, -0.4, 0.0, 0.7, 2.2})
      for (int k = 0; k <= 10; ++k)
        CHECK(hermite_function(k, x).real() ==
              doctest::Approx(oracle::hermite_function_explicit(k, x)).epsilon(1e-12).scale(1.0));
    CHECK(hermite_function(0, 0.0).real() == doctest::Approx(std::pow(kPi, -0.25)));
    CHECK_THROWS_AS(hermite_function(65, 0.0), std::out_of_range);
  }

  TEST_CASE("hermite polynomial parts obey h_k = p_k e^{-x^2/2}") {
    const cplx x(0.3, -0.8);
    const auto h = hermite_function_values(8, x);
    const auto p = hermite_polynomial_values(8, x);
    for (int k = 0; k <= 8; ++k) CHECK(std::abs(h[k] - p[k] * std::exp(-0.5 * x * x)) < 1e-14);
  }

  TEST_CASE("laguerre recurrence matches the finite series") {
    for (int a : {0, 1, 3})
      for (double x : {-2.5, 0.0, 0.3, 1.7, 5.0})
        for (int m = 0; m <= 12; ++m) {
          const double ref = oracle::laguerre_series(m, a, x);
          CHECK(std::abs(laguerre(m, a, x).real() - ref) <= 1e-12 * std::max(1.0, std::abs(ref)));
        }
    CHECK(laguerre(1, 0, 2.0).real() == doctest::Approx(-1.0));
    CHECK_THROWS_AS(laguerre(300, 0, 1.0), std::out_of_range);
  }

  TEST_CASE("phi_00 is the normalized Gaussian") {
    const auto& rule = cached_gauss_hermite(12);
    for (double lambda : {0.5, 1.0, -2.0}) {
      const cplx z[1] = {0.4}, w[1] = {-0.9};
      const double x[1] = {0.4}, u[1] = {-0.9};
      const cplx v = special_hermite(MultiIndex({0}), MultiIndex({0}), TwistedParameter(lambda), z,
                                     w, rule);
      CHECK(std::abs(v - oracle::phi00_closed_form(lambda, x, u)) < 1e-14);
      const cplx o[1] = {0.0};
      CHECK(special_hermite(MultiIndex({0}), MultiIndex({0}), TwistedParameter(lambda), o, o, rule)
                .real() == doctest::Approx(phi_norm(lambda, 1)));
    }
  }

  TEST_CASE("matrix coefficients match direct quadrature of the defining integral") {
    const double x[1] = {0.3}, u[1] = {-0.7};
    const cplx z[1] = {0.3}, w[1] = {-0.7};
    for (double lambda : {1.5, -1.5})
      for (int a = 0; a <= 3; ++a)
        for (int b = 0; b <= 3; ++b) {
          const cplx lib = special_hermite(MultiIndex({a}), MultiIndex({b}),
                                           TwistedParameter(lambda), z, w, cached_gauss_hermite(8));
          const cplx ref = oracle::special_hermite(MultiIndex({a}), MultiIndex({b}), lambda, x, u);
          CHECK(std::abs(lib - ref) < 1e-12);
        }
  }

  TEST_CASE("table agrees with the checked single-value path") {
    const std::vector<cplx> z{cplx(0.2, 0.3), cplx(-0.5, 0.1)}, w{cplx(0.7, -0.2), cplx(0.1, 0.4)};
    const TwistedParameter lam(-0.8);
    SpecialHermiteTable table(lam, z, w, 4);
    for (const auto& a : enumerate_indices(2, 3))
      for (const auto& b : enumerate_indices(2, 3)) {
        const cplx single = special_hermite(a, b, lam, z, w, cached_gauss_hermite(10));
        CHECK(std::abs(table.value(a, b) - single) <= 1e-13 * std::max(1.0, std::abs(single)));
      }
  }

  TEST_CASE("too few nodes is reported as a quadrature error") {
    const cplx z[1] = {0.5}, w[1] = {0.5};
    CHECK_THROWS_AS(special_hermite(MultiIndex({9}), MultiIndex({9}), TwistedParameter(1.0), z, w,
                                    cached_gauss_hermite(2)),
                    QuadratureError);
  }

  TEST_CASE("gram matrix of phi_ab on R^2 is the identity") {
    for (double lambda : {0.5, 1.0, 3.0, -2.0}) {
      const TwistedParameter lam(lambda);
      const auto& r = cached_gauss_hermite(20);
      const double sc = std::sqrt(2.0 / lam.abs());
      const int M = 3;
      std::vector<cplx> G((M + 1) * (M + 1) * (M + 1) * (M + 1), 0.0);
      for (std::size_t i = 0; i < r.size(); ++i)
        for (std::size_t j = 0; j < r.size(); ++j) {
          const cplx z[1] = {sc * r.nodes[i]}, w[1] = {sc * r.nodes[j]};
          SpecialHermiteTable t(lam, z, w, M);
          const double wt = sc * sc * r.scaled_weights[i] * r.scaled_weights[j];
          for (int p = 0; p <= M * M + 2 * M; ++p)
            for (int q = 0; q <= M * M + 2 * M; ++q) {
              const MultiIndex a({p / (M + 1)}), b({p % (M + 1)});
              const MultiIndex c({q / (M + 1)}), d({q % (M + 1)});
              G[p * (M + 1) * (M + 1) + q] += wt * t.value(a, b) * std::conj(t.value(c, d));
            }
        }
      const int N = (M + 1) * (M + 1);
      for (int p = 0; p < N; ++p)
        for (int q = 0; q < N; ++q) CHECK(std::abs(G[p * N + q] - (p == q ? 1.0 : 0.0)) < 1e-12);
    }
  }

  TEST_CASE("diagonal continuation equals the Laguerre closed form") {
    for (double lambda : {1.0, -0.7})
      for (int k = 0; k <= 5; ++k) {
        const double y = 0.35, v = -0.2;
        const cplx z[1] = {cplx(0.0, 2.0 * y)}, w[1] = {cplx(0.0, 2.0 * v)};
        const cplx val = SpecialHermiteTable(TwistedParameter(lambda), z, w, k)
                             .value(MultiIndex({k}), MultiIndex({k}));
        const double r2 = y * y + v * v, al = std::abs(lambda);
        const double closed =
            phi_norm(lambda, 1) * oracle::laguerre_series(k, 0, -2.0 * al * r2) * std::exp(al * r2);
        CHECK(std::abs(val - closed) < 1e-13 * std::abs(closed));
        const double ys[1] = {y}, vs[1] = {v};
        CHECK(laguerre_function_imag(k, TwistedParameter(lambda), ys, vs) ==
              doctest::Approx(closed / phi_norm(lambda, 1)).epsilon(1e-13));
      }
  }

  TEST_CASE("sum of diagonal entries of degree m gives the Laguerre function") {
    const TwistedParameter lam(1.2);
    const std::vector<double> x{0.3, -0.4}, u{0.5, 0.1};
    const std::vector<cplx> z(x.begin(), x.end()), w(u.begin(), u.end());
    SpecialHermiteTable t(lam, z, w, 4);
    for (int m = 0; m <= 4; ++m) {
      cplx s = 0.0;
      for (const auto& a : indices_of_degree(2, m)) s += t.value(a, a);
      CHECK(std::abs(s - phi_norm(1.2, 2) * laguerre_function(m, lam, x, u)) < 1e-13);
    }
  }

  TEST_CASE("scaled hermite functions are orthonormal in L2(R^n)") {
    const TwistedParameter lam(3.0);
    const auto& r = cached_gauss_hermite(16);
    const double s = std::sqrt(lam.abs());
    double g01 = 0.0, g11 = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      const cplx x[1] = {r.nodes[i] / s};
      const double wt = r.scaled_weights[i] / s;
      g01 += wt * (scaled_hermite(MultiIndex({0}), lam, x) * scaled_hermite(MultiIndex({1}), lam, x)).real();
      g11 += wt * std::norm(scaled_hermite(MultiIndex({1}), lam, x));
    }
    CHECK(std::abs(g01) < 1e-14);
    CHECK(g11 == doctest::Approx(1.0).epsilon(1e-14));
  }
}
