import cmath
import math

import pytest

import hmh


def test_phi00_closed_form():
    lam, x, u = 1.3, 0.4, -0.7
    expect = math.sqrt(lam / (2 * math.pi)) * math.exp(-lam * (x * x + u * u) / 4)
    assert abs(hmh.special_hermite([0], [0], lam, [x], [u]) - expect) < 1e-14


def test_laguerre_values():
    assert hmh.laguerre(2, 0, 1.0) == pytest.approx(-0.5)
    assert hmh.laguerre(3, 1, 0.0) == pytest.approx(4.0)


def test_heat_kernel_origin():
    lam, t = 0.8, 0.5
    expect = lam / math.sinh(lam * t) / (4 * math.pi)
    assert abs(hmh.heat_kernel_twisted(t, lam, [0.0], [0.0]) - expect) < 1e-14


def test_slice_roundtrip_and_parseval():
    s = hmh.TwistedSlice(-1.2, 1, 0, [([1], [2], [], 0.5 + 0.5j), ([0], [0], [], 1.0)])
    assert s.norm_squared() == pytest.approx(1.5)
    assert s.l2_quadrature() == pytest.approx(1.5, rel=1e-8)
    assert len(s.terms()) == 2


def test_heat_multiplier_second_index():
    s = hmh.TwistedSlice(2.0, 1, 0, [([0], [3], [], 1.0)])
    (_, _, _, c), = s.heat(0.25).terms()
    assert c == pytest.approx(math.exp(-0.25 * 7 * 2.0))


def test_rng_reference():
    r = hmh.SplitMix64(1234567)
    assert r.next() == 6457827717110365317


def test_verify_orthonormality():
    res = hmh.verify("orthonormality")
    assert res["passed"]
    rep = res["reports"][0]
    assert list(rep) == ["identity", "lhs_re", "lhs_im", "rhs_re", "rhs_im", "abs_err",
                         "rel_err", "params", "passed", "wall_ms"]


def test_config_errors():
    cfg = hmh.default_config()
    cfg["n"] = 0
    with pytest.raises(ValueError):
        hmh.verify("orthonormality", cfg)
    with pytest.raises(ValueError):
        hmh.verify("orthonormality", {"no_such_field": 1})


def test_constants_and_dump():
    consts = hmh.library_constants()
    assert consts["plancherel_constant_n1"] == pytest.approx(hmh.plancherel_constant(1))
    csv = hmh.dump("heat_kernel", grid=3)
    assert csv.splitlines()[0] == "x,u,re,im,abs"
    assert len(csv.splitlines()) == 10
    assert abs(hmh.heat_kernel_K(0.5, [0.0]) - sum(math.exp(-m * m / 4) for m in range(-20, 21))) < 1e-12
    assert cmath.isfinite(hmh.hermite_function(3, 0.5 + 0.2j))
