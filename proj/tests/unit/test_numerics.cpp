#include <doctest.h>

#include <cmath>

#include "hmh/numerics.hpp"

using namespace hmh;

TEST_SUITE("numerics") {
  TEST_CASE("gauss-hermite integrates polynomials exactly") {
    for (int n : {1, 5, 20, 48}) {
      const auto r = gauss_hermite_rule(n);
      REQUIRE(r.size() == std::size_t(n));
      double w = 0.0;
      for (double v : r.weights) {
        CHECK(v > 0.0);
        w += v;
      }
      CHECK(w == doctest::Approx(std::sqrt(kPi)).epsilon(1e-14));
      for (int k = 0; k < 2 * n; k += 2) {
        double m = 0.0;
        for (std::size_t i = 0; i < r.size(); ++i) m += r.weights[i] * std::pow(r.nodes[i], k);
        // int x^k e^{-x^2} = Gamma((k+1)/2)
        CHECK(m == doctest::Approx(std::tgamma(0.5 * (k + 1))).epsilon(1e-12));
      }
    }
  }

  TEST_CASE("gauss-hermite nodes are symmetric and ascending") {
    const auto r = gauss_hermite_rule(33);
    for (std::size_t i = 0; i + 1 < r.size(); ++i) CHECK(r.nodes[i] < r.nodes[i + 1]);
    for (std::size_t i = 0; i < r.size(); ++i)
      CHECK(r.nodes[i] == doctest::Approx(-r.nodes[r.size() - 1 - i]).epsilon(1e-14));
    CHECK(std::abs(r.nodes[16]) < 1e-15);
    for (std::size_t i = 0; i < r.size(); ++i)
      CHECK(r.scaled_weights[i] ==
            doctest::Approx(r.weights[i] * std::exp(r.nodes[i] * r.nodes[i])).epsilon(1e-12));
  }

  TEST_CASE("gauss-hermite rejects bad sizes") {
    CHECK_THROWS_AS(gauss_hermite_rule(0), std::invalid_argument);
    CHECK_THROWS_AS(gauss_hermite_rule(513), std::invalid_argument);
  }

  TEST_CASE("cached rules match fresh ones") {
    const auto& a = cached_gauss_hermite(24);
    const auto b = gauss_hermite_rule(24);
    CHECK(a.nodes == b.nodes);
    CHECK(&cached_gauss_hermite(24) == &a);
  }

  TEST_CASE("gauss-legendre integrates polynomials on an interval") {
    const auto r = gauss_legendre_rule(9, 0.5, 1.5);
    double s = 0.0, s17 = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
      s += r.weights[i];
      s17 += r.weights[i] * std::pow(r.nodes[i], 17);
    }
    CHECK(s == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(s17 == doctest::Approx((std::pow(1.5, 18) - std::pow(0.5, 18)) / 18).epsilon(1e-13));
    CHECK_THROWS_AS(gauss_legendre_rule(4, 1.0, 1.0), std::invalid_argument);
  }

  TEST_CASE("periodic trapezoid is exact for low trigonometric degree") {
    const auto r = periodic_trapezoid_rule(7);
    for (int m = -6; m <= 6; ++m) {
      cplx s = 0.0;
      for (std::size_t i = 0; i < r.size(); ++i) s += r.weights[i] * std::polar(1.0, m * r.nodes[i]);
      CHECK(std::abs(s - (m == 0 ? 2.0 * kPi : 0.0)) < 1e-13);
    }
  }

  TEST_CASE("multi-index enumeration") {
    CHECK(enumerate_indices(1, 6).size() == 7);
    CHECK(enumerate_indices(2, 6).size() == std::size_t(binomial(8, 2)));
    CHECK(enumerate_indices(3, 4).size() == std::size_t(binomial(7, 3)));
    const auto deg2 = indices_of_degree(2, 2);
    REQUIRE(deg2.size() == 3);
    CHECK(deg2[0] == MultiIndex({2, 0}));
    CHECK(deg2[2] == MultiIndex({0, 2}));
    const auto all = enumerate_indices(2, 3);
    for (std::size_t i = 0; i + 1 < all.size(); ++i) CHECK(all[i].degree() <= all[i + 1].degree());
    CHECK(MultiIndex({1, 2, 3}).degree() == 6);
    CHECK(MultiIndex({1, 2}).str() == "(1,2)");
    CHECK_THROWS_AS(MultiIndex({-1}), std::invalid_argument);
  }

  TEST_CASE("binomial") {
    CHECK(binomial(5, 2) == 10);
    CHECK(binomial(5, 0) == 1);
    CHECK(binomial(3, 4) == 0);
    CHECK(binomial(30, 15) == 155117520);
  }

  TEST_CASE("reports carry errors and tolerance") {
    auto r = make_report("x", 1.0, 1.0 + 1e-9, 1e-8, {{"k", std::int64_t(3)}});
    CHECK(r.passed);
    CHECK(r.abs_err == doctest::Approx(1e-9));
    CHECK(std::get<double>(r.params.at("tolerance")) == 1e-8);
    CHECK(std::get<std::int64_t>(r.params.at("k")) == 3);
    CHECK_FALSE(make_report("x", 1.0, 2.0, 1e-3).passed);
    CHECK(relative_error(0.0, 0.0) == 0.0);
    CHECK_FALSE(make_report("nan", std::nan(""), 1.0, 1.0).passed);
  }
}
