"""Seeded inputs, intrusion variables and output synthesis.

Uniform doubles come from numpy's PCG64 bit generator, whose raw stream is
stable across platforms and releases.  Gaussian and gamma variates are
produced here from those doubles with fixed algorithms (Marsaglia's polar
method and Marsaglia-Tsang squeeze rejection) so a ``(seed, key)`` pair
always replays the same draws, independent of numpy's distribution code.

Inputs and intrusions use separate streams derived from one master seed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .core_stats import PairedSample
from .errors import BadParameters, DomainViolation

INPUT_STREAM = 0
INTRUSION_STREAM = 1

_BLOCK = 512


class Sampler:
    """Private RNG state for one stream. Not thread-safe; one per thread."""

    def __init__(self, seed: int, key: tuple[int, ...] = ()):
        if not 0 <= int(seed) < 2**64:
            raise BadParameters(f"seed must be an unsigned 64-bit integer, got {seed}")
        self.seed = int(seed)
        self.key = tuple(int(k) for k in key)
        ss = np.random.SeedSequence(self.seed, spawn_key=self.key)
        self._gen = np.random.Generator(np.random.PCG64(ss))
        self._buf = np.empty(0)
        self._pos = 0
        self._spare: Optional[float] = None

    def uniform(self) -> float:
        """Uniform double in [0, 1)."""
        if self._pos >= self._buf.size:
            self._buf = self._gen.random(_BLOCK)
            self._pos = 0
        u = self._buf[self._pos]
        self._pos += 1
        return float(u)

    def normal(self) -> float:
        if self._spare is not None:
            z, self._spare = self._spare, None
            return z
        while True:
            u = 2.0 * self.uniform() - 1.0
            v = 2.0 * self.uniform() - 1.0
            s = u * u + v * v
            if 0.0 < s < 1.0:
                break
        f = math.sqrt(-2.0 * math.log(s) / s)
        self._spare = v * f
        return u * f

    def gamma(self, shape: float) -> float:
        """Unit-scale gamma variate (Marsaglia-Tsang)."""
        if shape <= 0:
            raise BadParameters(f"gamma shape must be positive, got {shape}")
        if shape < 1.0:
            # boost: G(k) = G(k + 1) * U**(1/k)
            g = self.gamma(shape + 1.0)
            u = self.uniform()
            while u == 0.0:
                u = self.uniform()
            return g * u ** (1.0 / shape)
        d = shape - 1.0 / 3.0
        c = 1.0 / math.sqrt(9.0 * d)
        while True:
            z = self.normal()
            v = 1.0 + c * z
            if v <= 0.0:
                continue
            v = v * v * v
            u = self.uniform()
            if u < 1.0 - 0.0331 * z**4:
                return d * v
            if u > 0.0 and math.log(u) < 0.5 * z * z + d * (1.0 - v + math.log(v)):
                return d * v

    def beta(self, alpha: float, beta: float) -> float:
        x = self.gamma(alpha)
        y = self.gamma(beta)
        return x / (x + y)


@dataclass(frozen=True)
class InputModel:
    """Distribution (or deterministic design) of the inputs.

    ``kind`` is one of ``"scaled_beta"``, ``"uniform"`` or ``"grid"``.
    """

    kind: str
    alpha: Optional[float] = None
    beta: Optional[float] = None
    scale: float = 1.0
    a: float = 0.0
    b: float = 1.0

    @classmethod
    def scaled_beta(cls, alpha: float, beta: float, scale: float = 1.0) -> "InputModel":
        if alpha <= 0 or beta <= 0 or scale <= 0:
            raise BadParameters(f"Beta parameters must be positive: {alpha=}, {beta=}, {scale=}")
        return cls("scaled_beta", alpha=float(alpha), beta=float(beta), scale=float(scale),
                   a=0.0, b=float(scale))

    @classmethod
    def uniform(cls) -> "InputModel":
        return cls("uniform", a=0.0, b=1.0)

    @classmethod
    def grid(cls, a: float, b: float) -> "InputModel":
        if not a < b:
            raise BadParameters(f"grid needs a < b, got [{a}, {b}]")
        return cls("grid", a=float(a), b=float(b))

    def __post_init__(self):
        if self.kind not in ("scaled_beta", "uniform", "grid"):
            raise BadParameters(f"unknown input kind {self.kind!r}")
        if self.kind == "scaled_beta" and not (
            self.alpha and self.beta and self.alpha > 0 and self.beta > 0 and self.scale > 0
        ):
            raise BadParameters("scaled_beta needs positive alpha, beta and scale")

    @property
    def is_deterministic(self) -> bool:
        return self.kind == "grid"

    @property
    def support(self) -> tuple[float, float]:
        return self.a, self.b

    @property
    def label(self) -> str:
        """``<alpha>_<beta>`` tag used in artifact file names."""
        if self.kind == "scaled_beta":
            return f"{self.alpha:g}_{self.beta:g}"
        return "na_na"


@dataclass(frozen=True)
class IntrusionModel:
    """Additive zero-mean intrusion law.

    ``kind`` is ``"degenerate"``, ``"gaussian"`` or ``"custom"``; a custom
    model supplies ``sampler(Sampler) -> float`` and is trusted to have mean
    zero and finite variance.
    """

    kind: str = "degenerate"
    sigma2: float = 0.0
    sampler: Optional[Callable[[Sampler], float]] = None

    @classmethod
    def degenerate(cls) -> "IntrusionModel":
        return cls("degenerate")

    @classmethod
    def gaussian(cls, sigma2: float) -> "IntrusionModel":
        return cls("gaussian", sigma2=float(sigma2))

    @classmethod
    def custom(cls, sampler: Callable[[Sampler], float]) -> "IntrusionModel":
        return cls("custom", sampler=sampler)

    def __post_init__(self):
        if self.kind not in ("degenerate", "gaussian", "custom"):
            raise BadParameters(f"unknown intrusion kind {self.kind!r}")
        if self.sigma2 < 0:
            raise BadParameters(f"variance must be nonnegative, got {self.sigma2}")
        if self.kind == "custom" and self.sampler is None:
            raise BadParameters("custom intrusion needs a sampler")

    @property
    def is_degenerate(self) -> bool:
        return self.kind == "degenerate" or (self.kind == "gaussian" and self.sigma2 == 0.0)

    @property
    def sigma(self) -> float:
        return math.sqrt(self.sigma2)

    def mean_abs_difference(self) -> Optional[float]:
        """``E|eps_2 - eps_1|`` when known in closed form (``2 sigma / sqrt(pi)``)."""
        if self.is_degenerate:
            return 0.0
        if self.kind == "gaussian":
            return 2.0 * self.sigma / math.sqrt(math.pi)
        return None


def grid_inputs(a: float, b: float, n: int) -> np.ndarray:
    """Equispaced design ``a + (b - a)(i - 1)/(n - 1)``, ``i = 1..n``."""
    if n < 2:
        raise BadParameters(f"a grid needs n >= 2, got {n}")
    i = np.arange(n, dtype=float)
    x = a + (b - a) * i / (n - 1)
    x[-1] = b
    return x


def sample_inputs(model: InputModel, n: int, seed: int, key: tuple[int, ...] = ()) -> np.ndarray:
    """Draw ``n`` inputs from ``model`` on the input stream of ``(seed, key)``."""
    if n < 1:
        raise BadParameters(f"n must be positive, got {n}")
    if model.kind == "grid":
        return grid_inputs(model.a, model.b, n)
    rng = Sampler(seed, (*key, INPUT_STREAM))
    if model.kind == "uniform":
        return np.array([rng.uniform() for _ in range(n)])
    return np.array([model.scale * rng.beta(model.alpha, model.beta) for _ in range(n)])


def sample_intrusions(
    model: IntrusionModel, n: int, seed: int, key: tuple[int, ...] = ()
) -> np.ndarray:
    if model.is_degenerate:
        return np.zeros(n)
    rng = Sampler(seed, (*key, INTRUSION_STREAM))
    if model.kind == "gaussian":
        s = model.sigma
        return np.array([s * rng.normal() for _ in range(n)])
    return np.array([float(model.sampler(rng)) for _ in range(n)])


def generate_outputs(
    h, x, intrusion: IntrusionModel, seed: int, key: tuple[int, ...] = ()
) -> PairedSample:
    """Pairs ``(x_i, h(x_i) + eps_i)`` with intrusions from their own stream."""
    x = np.asarray(x, dtype=float).reshape(-1)
    outside = (x < h.a) | (x > h.b)
    if np.any(outside):
        raise DomainViolation(f"x={x[outside][0]!r} outside [{h.a}, {h.b}]")
    eps = sample_intrusions(intrusion, x.size, seed, key)
    y = np.array([h(v) for v in x]) + eps
    return PairedSample(x, y)
