import math

import numpy as np
import pytest
from scipy.integrate import quad

from intrusion_detect.errors import BadParameters, DegenerateTransfer
from intrusion_detect.transfer import (
    TransferFunction,
    adaptive_simpson,
    derivative_sign_breaks,
    endpoint_equal,
    get_transfer,
    identity,
    limit_I,
    polynomial,
    quadratic,
)


def quad_limit(h):
    """Independent oracle: scipy QUADPACK on the same integrands."""
    pts = derivative_sign_breaks(h) or None
    up = quad(lambda u: max(h.derivative(u), 0.0), h.a, h.b, points=pts, epsabs=1e-13)[0]
    tot = quad(lambda u: abs(h.derivative(u)), h.a, h.b, points=pts, epsabs=1e-13)[0]
    return up / tot


def test_quadratic_limit_analytic():
    # up-variation h(4/5) - h(0) = 16/25, down-variation h(4/5) - h(1) = 1/25
    assert limit_I(quadratic(0, 1)) == pytest.approx(16 / 17, abs=1e-10)


def test_symmetric_window_gives_half():
    assert limit_I(quadratic(0, 1.6)) == pytest.approx(0.5, abs=1e-10)


@pytest.mark.parametrize("a, b", [(0, 1), (-3, 2), (10, 10.5)])
def test_identity_limit(a, b):
    assert limit_I(identity(a, b)) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize(
    "h",
    [
        quadratic(0, 1),
        quadratic(0.2, 1.5),
        polynomial([0, 1, -3, 2], 0, 1),
        polynomial([1, 0, 0, -1, 0.5], -1, 2),
        TransferFunction(math.sin, 0, 7, name="sin"),
    ],
    ids=lambda h: h.name,
)
def test_limit_matches_scipy_oracle(h):
    assert limit_I(h) == pytest.approx(quad_limit(h), abs=1e-9)


def test_flat_transfer_is_degenerate():
    with pytest.raises(DegenerateTransfer):
        limit_I(polynomial([2.5], 0, 1))


def test_reflection_complements():
    for h in (quadratic(0, 1), polynomial([0, 1, -3, 2], 0, 1), quadratic(0.1, 0.9)):
        assert limit_I(h) + limit_I(h.reflected()) == pytest.approx(1.0, abs=1e-10)


def test_shift_and_scale_invariance():
    base = polynomial([0.3, 1, -3, 2], 0, 1)
    shifted = polynomial([10.3, 1, -3, 2], 0, 1)
    scaled = polynomial([0.9, 3, -9, 6], 0, 1)
    ref = limit_I(base)
    assert limit_I(shifted) == pytest.approx(ref, abs=1e-10)
    assert limit_I(scaled) == pytest.approx(ref, abs=1e-10)


def test_finite_difference_fallback():
    h = TransferFunction(lambda x: 1.0 - (x - 0.8) ** 2, 0, 1)
    assert h.derivative(0.3) == pytest.approx(1.0, abs=1e-6)
    assert limit_I(h) == pytest.approx(16 / 17, abs=1e-8)


@pytest.mark.parametrize("h", [quadratic(0, 1), identity(0, 1), polynomial([1, -2, 0.5, 3], -1, 1)],
                         ids=lambda h: h.name)
def test_analytic_derivative_matches_fd(h):
    assert h.check_derivative()


def test_bad_derivative_detected():
    h = TransferFunction(lambda x: x * x, 0, 1, deriv=lambda x: x)
    assert not h.check_derivative()


@pytest.mark.parametrize(
    "h, expected",
    [(quadratic(0, 1.6), True), (quadratic(0, 1), False), (identity(0, 1), False)],
)
def test_endpoint_equal(h, expected):
    assert endpoint_equal(h) is expected


def test_endpoint_iff_half():
    for h in (quadratic(0, 1.6), quadratic(0, 1), quadratic(0.5, 1.1), identity(0, 1),
              polynomial([0, 1, -1], 0, 1), polynomial([0, 1, -3, 2], 0, 1)):
        assert endpoint_equal(h) == (abs(limit_I(h) - 0.5) <= 1e-8)


def test_adaptive_simpson_smooth():
    assert adaptive_simpson(math.exp, 0, 1) == pytest.approx(math.e - 1, abs=1e-10)
    assert adaptive_simpson(math.sin, 0, math.pi) == pytest.approx(2.0, abs=1e-10)


def test_sign_breaks_bisected():
    (root,) = derivative_sign_breaks(quadratic(0, 1))
    assert root == pytest.approx(0.8, abs=1e-12)


def test_registry():
    assert get_transfer("quadratic", 0, 1)(0.8) == 1.0
    assert get_transfer("polynomial", 0, 1, [1, 2])(0.5) == 2.0
    with pytest.raises(BadParameters):
        get_transfer("polynomial", 0, 1)
    with pytest.raises(KeyError):
        get_transfer("nope", 0, 1)
    with pytest.raises(BadParameters):
        quadratic(1, 1)


def test_polynomial_vectorizes_sensibly():
    p = polynomial([1, 2, 3], 0, 1)
    xs = np.linspace(0, 1, 5)
    assert [p(x) for x in xs] == pytest.approx(1 + 2 * xs + 3 * xs**2)
