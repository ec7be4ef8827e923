"""Seeded sample paths: AR(1) with stationary noise, and rank-2 degenerate processes.

Every path records a JSON descriptor of its generator; together with the seed
it regenerates the path bit for bit (see :func:`regenerate`). Random numbers
come from numpy's PCG64 bit generator.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from enum import Enum
from typing import Union

import numpy as np
from scipy.signal import lfilter

from .covariance import CovarianceSequence, DegenerateParam
from .errors import InvalidBError, InvalidPhiError, OutOfRangeError

RNG_ALGORITHM = "numpy.PCG64"
INIT_TOL = 1e-12


def _rng(seed: int) -> np.random.Generator:
    if seed < 0 or seed >= 2**64:
        raise ValueError(f"seed must be an unsigned 64-bit integer, got {seed}")
    return np.random.Generator(np.random.PCG64(seed))


@dataclass(frozen=True)
class WhiteGaussian:
    sigma2: float = 1.0

    def __post_init__(self):
        if not self.sigma2 > 0:
            raise ValueError(f"sigma2 must be positive, got {self.sigma2}")

    def autocovariance(self, m: int) -> float:
        return self.sigma2 if m == 0 else 0.0

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        return math.sqrt(self.sigma2) * rng.standard_normal(n)

    def describe(self) -> dict:
        return {"kind": "white", "sigma2": self.sigma2}


@dataclass(frozen=True)
class MovingAverage:
    """Z_t = e_t + theta_1 e_{t-1} + ... + theta_q e_{t-q}, e white with variance sigma2."""

    theta: tuple[float, ...]
    sigma2: float = 1.0

    def __post_init__(self):
        if not self.sigma2 > 0:
            raise ValueError(f"sigma2 must be positive, got {self.sigma2}")
        object.__setattr__(self, "theta", tuple(float(t) for t in self.theta))

    @property
    def q(self) -> int:
        return len(self.theta)

    def autocovariance(self, m: int) -> float:
        c = (1.0,) + self.theta
        if m > self.q:
            return 0.0
        return self.sigma2 * math.fsum(c[j] * c[j + m] for j in range(len(c) - m))

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        e = math.sqrt(self.sigma2) * rng.standard_normal(n + self.q)
        return np.convolve(e, (1.0,) + self.theta, mode="valid")

    def describe(self) -> dict:
        return {"kind": "ma", "theta": list(self.theta), "sigma2": self.sigma2}


@dataclass(frozen=True)
class ARNoise:
    """Stationary AR(1) noise Z_t = rho Z_{t-1} + e_t, e white with variance sigma2."""

    rho: float
    sigma2: float = 1.0

    def __post_init__(self):
        if not self.sigma2 > 0:
            raise ValueError(f"sigma2 must be positive, got {self.sigma2}")
        if not abs(self.rho) < 1:
            raise ValueError(f"|rho| must be below 1, got {self.rho}")

    def autocovariance(self, m: int) -> float:
        return self.sigma2 * self.rho**m / (1.0 - self.rho**2)

    def sample(self, rng: np.random.Generator, n: int) -> np.ndarray:
        z0 = math.sqrt(self.autocovariance(0)) * rng.standard_normal()
        e = math.sqrt(self.sigma2) * rng.standard_normal(n)
        z, _ = lfilter([1.0], [1.0, -self.rho], e, zi=[self.rho * z0])
        return z

    def describe(self) -> dict:
        return {"kind": "ar", "rho": self.rho, "sigma2": self.sigma2}


NoiseModel = Union[WhiteGaussian, MovingAverage, ARNoise]


def noise_from_dict(d: dict) -> NoiseModel:
    kind = d["kind"]
    if kind == "white":
        return WhiteGaussian(d["sigma2"])
    if kind == "ma":
        return MovingAverage(tuple(d["theta"]), d["sigma2"])
    if kind == "ar":
        return ARNoise(d["rho"], d["sigma2"])
    raise ValueError(f"unknown noise kind {kind!r}")


def noise_autocovariance(noise: NoiseModel, m: int) -> float:
    if m < 0:
        raise OutOfRangeError(f"lag must be non-negative, got {m}")
    return noise.autocovariance(m)


def noise_sequence(noise: NoiseModel, max_lag: int) -> CovarianceSequence:
    return CovarianceSequence([noise_autocovariance(noise, m) for m in range(max_lag + 1)])


def _truncation(phi: float, tol: float = INIT_TOL) -> int:
    return max(0, math.ceil(math.log(tol) / math.log(phi)))


def ar1_autocovariance(phi: float, noise: NoiseModel, max_lag: int) -> CovarianceSequence:
    """Model autocovariance of X_t = phi X_{t-1} + Z_t from the MA(inf) form.

    gamma(m) = sum_k phi^|k| r(m + k) / (1 - phi^2), truncated where phi^|k|
    falls below 1e-12.
    """
    if not 0.0 < phi < 1.0:
        raise InvalidPhiError(f"phi must lie in (0, 1), got {phi}")
    J = _truncation(phi)
    k = np.arange(-J, J + 1)
    w = phi ** np.abs(k)
    r = np.array([noise.autocovariance(abs(j)) for j in range(max_lag + J + 1)])
    g = [float(np.dot(w, r[np.abs(m + k)])) / (1.0 - phi * phi) for m in range(max_lag + 1)]
    return CovarianceSequence(g)


@dataclass(frozen=True)
class SamplePath:
    values: np.ndarray
    seed: int
    model_descriptor: str

    def __len__(self):
        return self.values.size


def simulate_ar1(phi: float, noise: NoiseModel, n: int, seed: int) -> SamplePath:
    """Stationary path of X_t = phi X_{t-1} + Z_t, t = 0..n-1.

    X_0 is the MA(inf) sum truncated at J = ceil(ln(1e-12) / ln(phi)) terms,
    so no burn-in is needed.
    """
    if not 0.0 < phi < 1.0:
        raise InvalidPhiError(f"phi must lie in (0, 1), got {phi}")
    if n < 1:
        raise OutOfRangeError(f"path length must be positive, got {n}")
    J = _truncation(phi)
    z = noise.sample(_rng(seed), n + J)
    x = lfilter([1.0], [1.0, -phi], z)[J:]
    desc = {"generator": "ar1", "rng": RNG_ALGORITHM, "phi": phi, "noise": noise.describe(), "n": n}
    return SamplePath(np.ascontiguousarray(x), seed, json.dumps(desc, sort_keys=True))


class Law(str, Enum):
    GAUSSIAN_PAIR = "gaussian-pair"
    UNIFORM_PHASE = "uniform-phase"


def _rank2_param(b) -> DegenerateParam:
    p = b if isinstance(b, DegenerateParam) else DegenerateParam(b)
    if p.b <= 0.0:
        raise InvalidBError(f"rank-2 processes need b in (0, 2], got {p.b}")
    return p


def _rotation_angles(p: DegenerateParam, n: int) -> tuple[np.ndarray, np.ndarray]:
    """(distinct angles, index per time) with t * omega = angles[index[t]].

    For a rational angle only 4l distinct residues occur, which makes the
    generated paths exactly periodic.
    """
    t = np.arange(n, dtype=np.int64)
    if p.rational_angle is not None:
        k, l = p.rational_angle
        return np.arange(4 * l) * (math.pi / (2 * l)), (t * (l - k)) % (4 * l)
    return np.array([p.rotation(int(i)) for i in t]), t


def _rank2_draw(p: DegenerateParam, n: int, rng: np.random.Generator, law: Law, size: int) -> np.ndarray:
    angles, idx = _rotation_angles(p, n)
    if law is Law.GAUSSIAN_PAIR:
        y = rng.standard_normal((size, 2))
        table = y[:, :1] * np.cos(angles) + y[:, 1:] * np.sin(angles)
    else:
        u = rng.uniform(0.0, 2.0 * math.pi, size=(size, 1))
        table = math.sqrt(2.0) * np.cos(angles + u)
    return table[:, idx]


def simulate_degenerate_rank2(b, n: int, seed: int, law: Law | str = Law.GAUSSIAN_PAIR) -> SamplePath:
    """X_t = cos(t omega) Y1 + sin(t omega) Y2 (or sqrt 2 cos(t omega + U)), omega = pi/2 - arcsin(b/2)."""
    p = _rank2_param(b)
    law = Law(law)
    if n < 1:
        raise OutOfRangeError(f"path length must be positive, got {n}")
    x = _rank2_draw(p, n, _rng(seed), law, 1)[0]
    desc = {"generator": "rank2", "rng": RNG_ALGORITHM, "b": p.b, "rational_angle": p.rational_angle,
            "law": law.value, "n": n}
    return SamplePath(np.ascontiguousarray(x), seed, json.dumps(desc, sort_keys=True))


def rank2_ensemble(b, n: int, n_paths: int, seed: int, law: Law | str = Law.GAUSSIAN_PAIR) -> np.ndarray:
    """Independent rank-2 paths as rows of an (n_paths, n) array."""
    return _rank2_draw(_rank2_param(b), n, _rng(seed), Law(law), n_paths)


def regenerate(model_descriptor: str, seed: int) -> SamplePath:
    d = json.loads(model_descriptor)
    if d.get("rng") != RNG_ALGORITHM:
        raise ValueError(f"unsupported RNG {d.get('rng')!r}")
    if d["generator"] == "ar1":
        return simulate_ar1(d["phi"], noise_from_dict(d["noise"]), d["n"], seed)
    if d["generator"] == "rank2":
        ra = d["rational_angle"]
        p = DegenerateParam(d["b"], tuple(ra) if ra else None)
        return simulate_degenerate_rank2(p, d["n"], seed, d["law"])
    raise ValueError(f"unknown generator {d['generator']!r}")
