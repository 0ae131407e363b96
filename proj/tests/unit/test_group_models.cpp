#include <doctest.h>

#include <cmath>
#include <vector>

#include "hmh/group_models.hpp"
#include "hmh/rng.hpp"

using namespace hmh;

namespace {

HeisenbergElement random_h(SplitMix64& rng, int n) {
  HeisenbergElement h;
  for (int j = 0; j < n; ++j) {
    h.x.push_back(rng.uniform(-2, 2));
    h.u.push_back(rng.uniform(-2, 2));
  }
  h.t = rng.uniform(-2, 2);
  return h;
}

HMElement random_hm(SplitMix64& rng, int n, int d) {
  HMElement g{random_h(rng, n), {}};
  for (int j = 0; j < d; ++j) g.k.theta.push_back(rng.uniform(-kPi, kPi));
  return g;
}

void check_close(const HeisenbergElement& a, const HeisenbergElement& b, double tol = 1e-12) {
  for (std::size_t j = 0; j < a.x.size(); ++j) {
    CHECK(a.x[j] == doctest::Approx(b.x[j]).epsilon(tol).scale(1.0));
    CHECK(a.u[j] == doctest::Approx(b.u[j]).epsilon(tol).scale(1.0));
  }
  CHECK(a.t == doctest::Approx(b.t).epsilon(tol).scale(1.0));
}

void check_close(const HMElement& a, const HMElement& b) {
  check_close(a.h, b.h);
  for (std::size_t j = 0; j < a.k.theta.size(); ++j)
    CHECK(std::abs(std::remainder(a.k.theta[j] - b.k.theta[j], 2 * kPi)) < 1e-12);
}

}  // namespace

TEST_SUITE("group_models") {
  TEST_CASE("heisenberg law is associative with inverses") {
    SplitMix64 rng(7);
    for (int n : {1, 2, 3}) {
      auto a = random_h(rng, n), b = random_h(rng, n), c = random_h(rng, n);
      check_close(heisenberg_multiply(heisenberg_multiply(a, b), c),
                  heisenberg_multiply(a, heisenberg_multiply(b, c)));
      auto e = heisenberg_multiply(a, heisenberg_inverse(a));
      check_close(e, HeisenbergElement{std::vector<double>(n), std::vector<double>(n), 0.0});
    }
  }

  TEST_CASE("heisenberg center term") {
    HeisenbergElement a{{1.0}, {0.0}, 0.0}, b{{0.0}, {1.0}, 0.0};
    // t'' = t + t' + (x'.u - u'.x) / 2
    CHECK(heisenberg_multiply(a, b).t == doctest::Approx(-0.5));
    CHECK(heisenberg_multiply(b, a).t == doctest::Approx(0.5));
  }

  TEST_CASE("motion group law is associative with inverses") {
    SplitMix64 rng(11);
    for (int d : {0, 1, 2}) {
      auto a = random_hm(rng, 2, d), b = random_hm(rng, 2, d), c = random_hm(rng, 2, d);
      check_close(hm_multiply(hm_multiply(a, b), c), hm_multiply(a, hm_multiply(b, c)));
      HMElement id{{std::vector<double>(2), std::vector<double>(2), 0.0},
                   {std::vector<double>(d)}};
      check_close(hm_multiply(a, hm_inverse(a)), id);
      check_close(hm_multiply(hm_inverse(a), a), id);
    }
  }

  TEST_CASE("torus action preserves the symplectic form") {
    SplitMix64 rng(3);
    auto p = random_h(rng, 2), q = random_h(rng, 2);
    TorusElement k{{0.7, -1.9}};
    std::vector<double> px(2), pu(2), qx(2), qu(2);
    torus_act(k, p.x, p.u, px, pu);
    torus_act(k, q.x, q.u, qx, qu);
    double s0 = 0.0, s1 = 0.0;
    for (int j = 0; j < 2; ++j) {
      s0 += q.x[j] * p.u[j] - q.u[j] * p.x[j];
      s1 += qx[j] * pu[j] - qu[j] * px[j];
    }
    CHECK(s1 == doctest::Approx(s0).epsilon(1e-13));
    std::vector<cplx> z(p.x.begin(), p.x.end()), w(p.u.begin(), p.u.end()), zo(2), wo(2);
    const std::vector<cplx> ang{0.7, -1.9};
    torus_act_complex(ang, z, w, zo, wo);
    for (int j = 0; j < 2; ++j) {
      CHECK(std::abs(zo[j] - px[j]) < 1e-14);
      CHECK(std::abs(wo[j] - pu[j]) < 1e-14);
    }
    CHECK_THROWS_AS(torus_act(TorusElement{{1, 2, 3}}, p.x, p.u, px, pu), std::invalid_argument);
  }

  TEST_CASE("complex rotations compose additively") {
    const std::vector<cplx> z{cplx(0.3, 0.1)}, w{cplx(-0.2, 0.5)};
    const std::vector<cplx> a{cplx(0.4, 0.2)}, b{cplx(-1.1, 0.3)}, ab{a[0] + b[0]};
    std::vector<cplx> z1(1), w1(1), z2(1), w2(1), z3(1), w3(1);
    torus_act_complex(b, z, w, z1, w1);
    torus_act_complex(a, z1, w1, z2, w2);
    torus_act_complex(ab, z, w, z3, w3);
    CHECK(std::abs(z2[0] - z3[0]) < 1e-14);
    CHECK(std::abs(w2[0] - w3[0]) < 1e-14);
  }

  TEST_CASE("torus characters") {
    TorusIrrep chi({2, -1});
    CHECK(chi.degree() == 1);
    CHECK(chi.casimir() == 5.0);
    const TorusElement k{{0.3, 0.8}};
    CHECK(std::abs(chi.character(k) - std::polar(1.0, 0.6 - 0.8)) < 1e-15);
    const std::vector<double> H{0.1, -0.2};
    CHECK(chi.character_imag(H) == doctest::Approx(std::exp(-2.0 * (0.2 + 0.2))));
    const std::vector<cplx> ang{cplx(0.0, 0.2), cplx(0.0, -0.4)};
    CHECK(std::abs(chi.character(ang) - chi.character_imag(H)) < 1e-14);
  }

  TEST_CASE("peter-weyl coefficients recover a trigonometric polynomial") {
    const int N = 9;
    std::vector<cplx> samples(N * N);
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        const double a = 2 * kPi * i / N, b = 2 * kPi * j / N;
        samples[i * N + j] = 2.0 * std::polar(1.0, a - 3 * b) + cplx(0, 1) * std::polar(1.0, -2 * a);
      }
    const auto c = peter_weyl_coefficients(samples, N, 2, 3);
    CHECK(c.size() == 49);
    CHECK(std::abs(c.at({1, -3}) - 2.0) < 1e-13);
    CHECK(std::abs(c.at({-2, 0}) - cplx(0, 1)) < 1e-13);
    CHECK(std::abs(c.at({0, 0})) < 1e-13);
    CHECK_THROWS_AS(peter_weyl_coefficients(samples, N, 2, 5), std::domain_error);
  }

  TEST_CASE("metaplectic phase") {
    const TorusElement k{{0.4}};
    CHECK(std::abs(metaplectic_phase(k, MultiIndex({3}), TwistedParameter(2.0)) - std::polar(1.0, 1.2)) < 1e-15);
    CHECK(std::abs(metaplectic_phase(k, MultiIndex({3}), TwistedParameter(-2.0)) - std::polar(1.0, -1.2)) < 1e-15);
    // padded with zeros beyond d
    CHECK(std::abs(metaplectic_phase(k, MultiIndex({1, 5}), TwistedParameter(1.0)) - std::polar(1.0, 0.4)) < 1e-15);
  }

  TEST_CASE("P_m splits into monomial lines under the full torus") {
    const auto comps = pm_decomposition(3, 2, 2);
    CHECK(comps.size() == 4);
    for (const auto& c : comps) {
      CHECK(c.basis.size() == 1);
      CHECK(c.basis[0].degree() == 3);
    }
    CHECK_THROWS_AS(pm_decomposition(3, 2, 1), std::invalid_argument);
  }

  TEST_CASE("heat kernel on K and the measure on the imaginary directions") {
    const double t = 0.6;
    const TorusElement k{{1.1}};
    cplx ref = 0.0;
    for (int m = -40; m <= 40; ++m) ref += std::exp(-0.5 * m * m * t) * std::cos(m * 1.1);
    CHECK(std::abs(heat_kernel_K(t, k) - ref) < 1e-13);
    // continuation in H: sum e^{-m^2 t / 2} e^{i m theta} e^{-m H}
    const std::vector<double> H{0.3};
    cplx refH = 0.0;
    for (int m = -60; m <= 60; ++m)
      refH += std::exp(-0.5 * m * m * t) * std::polar(1.0, m * 1.1) * std::exp(-m * 0.3);
    CHECK(std::abs(heat_kernel_K(t, k, H) - refH) < 1e-12);
    // moments: int e^{-2 m H} density(H) dH = e^{m^2 t}
    const auto r = gauss_hermite_rule(40);
    for (int m : {0, 1, 3}) {
      double s = 0.0;
      for (std::size_t i = 0; i < r.size(); ++i) {
        const double h = std::sqrt(t) * r.nodes[i];
        const double hv[1] = {h};
        s += r.scaled_weights[i] * std::sqrt(t) * g_measure_density(t, hv) * std::exp(-2.0 * m * h);
      }
      CHECK(s == doctest::Approx(std::exp(m * m * t)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(heat_kernel_K(0.0, k), std::invalid_argument);
  }
}
