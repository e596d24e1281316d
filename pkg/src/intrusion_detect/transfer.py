"""Transfer functions on a closed window ``[a, b]`` and their no-intrusion limit.

Without intrusions ``I_n`` tends to the share of the total variation of ``h``
that is upward variation::

    I(h) = int (h')_+ / int |h'|

which equals 1/2 exactly when ``h(a) == h(b)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from .errors import BadParameters, DegenerateTransfer

SCAN_POINTS = 1024
ROOT_TOL = 1e-12
QUAD_TOL = 1e-10


@dataclass(frozen=True)
class TransferFunction:
    """Static map ``h`` on ``[a, b]`` with derivative access.

    When ``deriv`` is omitted a central difference with step
    ``1e-6 * (b - a)`` is used.
    """

    eval: Callable[[float], float]
    a: float
    b: float
    name: str = "custom"
    deriv: Optional[Callable[[float], float]] = None
    params: tuple = field(default=(), compare=False)

    def __post_init__(self):
        if not self.a < self.b:
            raise BadParameters(f"transfer window needs a < b, got [{self.a}, {self.b}]")

    def __call__(self, x: float) -> float:
        return self.eval(x)

    @property
    def fd_step(self) -> float:
        return 1e-6 * (self.b - self.a)

    def derivative(self, x: float) -> float:
        if self.deriv is not None:
            return self.deriv(x)
        return self.fd_derivative(x)

    def fd_derivative(self, x: float) -> float:
        s = self.fd_step
        return (self.eval(x + s) - self.eval(x - s)) / (2 * s)

    def check_derivative(self, points: int = 101, atol: float = 1e-6) -> bool:
        """Compare the analytic derivative with central differences on a probe grid."""
        if self.deriv is None:
            return True
        probes = np.linspace(self.a, self.b, points)
        return all(abs(self.deriv(x) - self.fd_derivative(x)) <= atol for x in probes)

    def reflected(self) -> "TransferFunction":
        """``x -> h(a + b - x)`` on the same window."""
        a, b, f = self.a, self.b, self.eval
        d = None if self.deriv is None else (lambda x, g=self.deriv: -g(a + b - x))
        return TransferFunction(
            eval=lambda x: f(a + b - x), a=a, b=b, name=f"{self.name}_reflected", deriv=d
        )


def quadratic(a: float = 0.0, b: float = 1.0) -> TransferFunction:
    """``h(x) = 1 - (x - 4/5)**2``, the transfer used by every preset."""
    return TransferFunction(
        eval=lambda x: 1.0 - (x - 0.8) ** 2,
        deriv=lambda x: -2.0 * (x - 0.8),
        a=a,
        b=b,
        name="quadratic",
    )


def identity(a: float = 0.0, b: float = 1.0) -> TransferFunction:
    return TransferFunction(eval=lambda x: x, deriv=lambda x: 1.0, a=a, b=b, name="identity")


def polynomial(coeffs: Sequence[float], a: float = 0.0, b: float = 1.0) -> TransferFunction:
    """Polynomial with coefficients in ascending-degree order."""
    coeffs = tuple(float(c) for c in coeffs)
    if not coeffs:
        raise BadParameters("polynomial needs at least one coefficient")
    p = np.polynomial.Polynomial(coeffs)
    dp = p.deriv()
    return TransferFunction(
        eval=lambda x: float(p(x)),
        deriv=lambda x: float(dp(x)),
        a=a,
        b=b,
        name="polynomial",
        params=coeffs,
    )


REGISTRY = {"quadratic": quadratic, "identity": identity, "polynomial": polynomial}


def get_transfer(
    name: str, a: float, b: float, coeffs: Optional[Sequence[float]] = None
) -> TransferFunction:
    """Look up a built-in transfer function by name."""
    if name not in REGISTRY:
        raise KeyError(f"unknown transfer function {name!r}; known: {sorted(REGISTRY)}")
    if name == "polynomial":
        if coeffs is None:
            raise BadParameters("polynomial transfer requires coefficients")
        return polynomial(coeffs, a, b)
    return REGISTRY[name](a, b)


def adaptive_simpson(
    f: Callable[[float], float], lo: float, hi: float, tol: float = QUAD_TOL, max_depth: int = 50
) -> float:
    """Adaptive Simpson quadrature with Richardson correction."""

    def simpson(fa, fm, fb, width):
        return width / 6.0 * (fa + 4.0 * fm + fb)

    def recurse(a, b, fa, fm, fb, whole, tol, depth):
        m = 0.5 * (a + b)
        lm, rm = 0.5 * (a + m), 0.5 * (m + b)
        flm, frm = f(lm), f(rm)
        left = simpson(fa, flm, fm, m - a)
        right = simpson(fm, frm, fb, b - m)
        delta = left + right - whole
        if depth <= 0 or abs(delta) <= 15.0 * tol:
            return left + right + delta / 15.0
        return recurse(a, m, fa, flm, fm, left, tol / 2, depth - 1) + recurse(
            m, b, fm, frm, fb, right, tol / 2, depth - 1
        )

    if hi == lo:
        return 0.0
    fa, fb, fm = f(lo), f(hi), f(0.5 * (lo + hi))
    whole = simpson(fa, fm, fb, hi - lo)
    return recurse(lo, hi, fa, fm, fb, whole, tol, max_depth)


def _bisect_root(g: Callable[[float], float], lo: float, hi: float, tol: float = ROOT_TOL) -> float:
    glo = g(lo)
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        gm = g(mid)
        if gm == 0.0:
            return mid
        if (gm > 0) == (glo > 0):
            lo, glo = mid, gm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def derivative_sign_breaks(h: TransferFunction, scan: int = SCAN_POINTS) -> list[float]:
    """Locate sign changes of ``h'`` by a uniform scan followed by bisection.

    Returns the interior break points in increasing order.
    """
    grid = np.linspace(h.a, h.b, scan + 1)
    vals = [h.derivative(x) for x in grid]
    breaks = []
    for k in range(scan):
        v0, v1 = vals[k], vals[k + 1]
        if v0 == 0.0 and 0 < k:
            breaks.append(float(grid[k]))
        elif v0 * v1 < 0:
            breaks.append(_bisect_root(h.derivative, float(grid[k]), float(grid[k + 1])))
    return breaks


def variations(h: TransferFunction) -> tuple[float, float]:
    """Upward and total variation of ``h`` on its window."""
    edges = [h.a, *derivative_sign_breaks(h), h.b]
    up = total = 0.0
    for lo, hi in zip(edges, edges[1:]):
        up += adaptive_simpson(lambda u: max(h.derivative(u), 0.0), lo, hi)
        total += adaptive_simpson(lambda u: abs(h.derivative(u)), lo, hi)
    return up, total


def limit_I(h: TransferFunction) -> float:
    """Limit of ``I_n`` for uncompromised outputs of ``h``.

    Raises
    ------
    DegenerateTransfer
        If ``int |h'|`` is below 1e-12, i.e. ``h`` is constant on the window.
    """
    up, total = variations(h)
    if total < 1e-12:
        raise DegenerateTransfer(f"{h.name} has no variation on [{h.a}, {h.b}]")
    return min(max(up / total, 0.0), 1.0)


def endpoint_equal(h: TransferFunction, tol: Optional[float] = None) -> bool:
    ha, hb = h(h.a), h(h.b)
    if tol is None:
        tol = 1e-9 * max(1.0, abs(ha))
    return abs(ha - hb) <= tol


def lipschitz_constant(h: TransferFunction, scan: int = SCAN_POINTS) -> float:
    """``sup |h'|`` estimated on a fine scan (exact for monotone ``|h'|`` pieces)."""
    grid = np.linspace(h.a, h.b, scan + 1)
    return max(abs(h.derivative(x)) for x in grid)
