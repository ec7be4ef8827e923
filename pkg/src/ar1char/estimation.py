"""Closed-form estimation of phi in X_t = phi X_{t-1} + Z_t.

For every lag m with gamma(m) != 0 the autocovariances of X and Z satisfy

    gamma(m) phi^2 - (gamma(m+1) + gamma(m-1)) phi + (gamma(m) - r(m)) = 0,

so each lag yields two candidate roots. The true phi is the root shared by
all lags, unless the pair (gamma, r) sits in the degenerate family where
r(m) / gamma(m) is constant and every lag yields the same two roots.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .covariance import CovarianceSequence
from .errors import (
    ConditionNotMetError,
    InsufficientLagsError,
    NegativeDiscriminantError,
    OutOfRangeError,
    PathTooShortError,
    ZeroGammaLagError,
)

DISC_TOL = 1e-10
ZERO_TOL = 1e-10


@dataclass(frozen=True)
class Tolerances:
    """Decision thresholds; ``zero`` is relative to gamma(0)."""

    zero: float = ZERO_TOL
    disc: float = DISC_TOL
    ratio: float = 1e-6
    recursion: float = 1e-8
    resolve: float = 1e-3
    # sampling noise can push a double root slightly complex; drop such lags
    skip_complex_lags: bool = False


EXACT = Tolerances()
SAMPLE = Tolerances(ratio=0.05, recursion=0.05, resolve=0.05, skip_complex_lags=True)


def tolerances_for(mode: str) -> Tolerances:
    try:
        return {"exact": EXACT, "sample": SAMPLE}[mode]
    except KeyError:
        raise ValueError(f"mode must be 'exact' or 'sample', got {mode!r}") from None


def _as_seq(gamma) -> CovarianceSequence:
    return gamma if isinstance(gamma, CovarianceSequence) else CovarianceSequence(gamma)


@dataclass(frozen=True)
class CandidatePair:
    lag: int
    root_minus: float
    root_plus: float
    discriminant: float

    @property
    def roots(self) -> tuple[float, float]:
        return self.root_minus, self.root_plus


def phi_candidates(
    gamma_mm1: float,
    gamma_m: float,
    gamma_mp1: float,
    r_m: float,
    *,
    lag: int = 0,
    zero_tol: float = ZERO_TOL,
    disc_tol: float = DISC_TOL,
) -> CandidatePair:
    """Both roots of the per-lag quadratic in phi, sorted ascending."""
    if abs(gamma_m) <= zero_tol:
        raise ZeroGammaLagError(f"gamma({lag}) = {gamma_m!r} is numerically zero")
    s = gamma_mp1 + gamma_mm1
    c = gamma_m - r_m
    disc = s * s - 4.0 * gamma_m * c
    if disc < 0:
        if disc < -disc_tol:
            raise NegativeDiscriminantError(
                f"lag {lag}: discriminant {disc:.3e} < 0, inputs are not a valid (gamma, r, phi) triple"
            )
        disc = 0.0
    # avoid cancellation: q carries the sign of s
    q = 0.5 * (s + math.copysign(math.sqrt(disc), s))
    if q == 0.0:
        x1 = x2 = 0.0
    else:
        x1, x2 = q / gamma_m, c / q
    lo, hi = sorted((x1, x2))
    return CandidatePair(lag, lo, hi, disc)


def noise_autocov_from_phi(phi: float, gamma, m: int) -> float:
    """r(m) = (1 + phi^2) gamma(m) - phi (gamma(m+1) + gamma(m-1))."""
    gamma = _as_seq(gamma)
    if not 0 <= m <= gamma.M - 1:
        raise OutOfRangeError(f"lag {m} needs gamma up to lag {m + 1}, have {gamma.M}")
    return (1.0 + phi * phi) * gamma[m] - phi * (gamma[m + 1] + gamma[m - 1])


def sample_autocovariance(path, max_lag: int) -> CovarianceSequence:
    """Biased (1/n), mean-centred sample autocovariance at lags 0..max_lag."""
    x = np.asarray(getattr(path, "values", path), dtype=float)
    n = x.size
    if max_lag < 0:
        raise OutOfRangeError(f"max_lag must be non-negative, got {max_lag}")
    if n <= max_lag:
        raise PathTooShortError(f"path of length {n} is too short for lag {max_lag}")
    d = x - x.mean()
    return CovarianceSequence([float(np.dot(d[: n - m], d[m:])) / n for m in range(max_lag + 1)])


class Status(str, Enum):
    RESOLVED = "Resolved"
    AMBIGUOUS = "Ambiguous"
    DEGENERATE = "Degenerate"
    INSUFFICIENT_LAGS = "InsufficientLags"


@dataclass(frozen=True)
class PhiEstimate:
    phi: float
    lags_used: tuple[int, ...]
    cluster_spread: float
    status: Status
    candidates: tuple[CandidatePair, ...] = ()


@dataclass(frozen=True)
class DegeneracyReport:
    is_degenerate: bool
    a_hat: Optional[float]
    b_hat: Optional[float]
    max_ratio_deviation: float
    zero_lag_consistency: bool


def degeneracy_detect(gamma, r, tol: Tolerances = EXACT) -> DegeneracyReport:
    """Test whether r(m)/gamma(m) and (gamma(m+1)+gamma(m-1))/gamma(m) are constant."""
    gamma, r = _as_seq(gamma), _as_seq(r)
    M = min(gamma.M, r.M)
    if M < 3:
        raise InsufficientLagsError(f"need lags up to at least 3, have {M}")
    zero = tol.zero * gamma[0]
    zero_r = tol.zero * max(gamma[0], abs(r[0]))

    a, bs = [], []
    consistent = True
    for m in range(M + 1):
        g = gamma[m]
        if abs(g) <= zero:
            consistent &= abs(r[m]) <= zero_r
            continue
        a.append(r[m] / g)
        if m < M:
            bs.append((gamma[m + 1] + gamma[m - 1]) / g)
    if len(bs) < 3:
        raise InsufficientLagsError(f"only {len(bs)} lags with non-zero gamma")

    a, bs = np.array(a), np.array(bs)
    a_hat, b_hat = float(a.mean()), float(bs.mean())
    dev = max(float(np.max(np.abs(a - a_hat))), float(np.max(np.abs(bs - b_hat))))
    degenerate = dev <= tol.ratio and consistent and 0.0 < a_hat < 1.0
    return DegeneracyReport(degenerate, a_hat, b_hat, dev, bool(consistent))


def _clusters(values: Sequence[float], labels: Sequence[int], width: float):
    order = np.argsort(values, kind="stable")
    out: list[list[tuple[float, int]]] = []
    for i in order:
        v = values[i]
        if out and v - out[-1][0][0] <= width:
            out[-1].append((v, labels[i]))
        else:
            out.append([(v, labels[i])])
    return out


def resolve_phi(gamma, r, lags: Sequence[int], tol: Tolerances = EXACT) -> PhiEstimate:
    """Pick the root in (0, 1) that every usable lag agrees on.

    Roots in (0, 1) from all usable lags are pooled and split into clusters
    no wider than ``tol.resolve``. The estimate is resolved when exactly one
    cluster holds a root from every usable lag.
    """
    gamma, r = _as_seq(gamma), _as_seq(r)
    nan = float("nan")
    try:
        if degeneracy_detect(gamma, r, tol).is_degenerate:
            return PhiEstimate(nan, (), nan, Status.DEGENERATE)
    except InsufficientLagsError:
        pass

    zero = tol.zero * gamma[0]
    pairs: list[CandidatePair] = []
    for m in sorted(set(abs(int(m)) for m in lags)):
        if m + 1 > gamma.M or m > r.M or abs(gamma[m]) <= zero:
            continue
        try:
            pairs.append(phi_candidates(gamma[m - 1], gamma[m], gamma[m + 1], r[m],
                                        lag=m, zero_tol=zero, disc_tol=tol.disc))
        except NegativeDiscriminantError:
            if not tol.skip_complex_lags:
                raise
    used = tuple(p.lag for p in pairs)
    if len(pairs) < 2:
        return PhiEstimate(nan, used, nan, Status.INSUFFICIENT_LAGS, tuple(pairs))

    roots, owners = [], []
    for p in pairs:
        for x in set(p.roots):
            if 0.0 < x < 1.0:
                roots.append(x)
                owners.append(p.lag)
    full = [c for c in _clusters(roots, owners, tol.resolve) if {lag for _, lag in c} == set(used)]
    if len(full) != 1:
        return PhiEstimate(nan, used, nan, Status.AMBIGUOUS, tuple(pairs))
    vals = [v for v, _ in full[0]]
    return PhiEstimate(float(np.mean(vals)), used, max(vals) - min(vals), Status.RESOLVED, tuple(pairs))


class RecursionFit(NamedTuple):
    b_hat: Optional[float]
    residual: float

    @property
    def accepted(self) -> bool:
        return self.b_hat is not None


def recursion_fit(gamma, tol: float = EXACT.recursion) -> RecursionFit:
    """Test whether gamma obeys gamma(m+1) = b gamma(m) - gamma(m-1) for b = 2 gamma(1)/gamma(0)."""
    gamma = _as_seq(gamma)
    if gamma.M < 3:
        raise InsufficientLagsError(f"need lags up to at least 3, have {gamma.M}")
    g0 = gamma[0]
    if g0 <= 0:
        raise ValueError(f"gamma(0) must be positive, got {g0}")
    v = gamma.values
    b = 2.0 * v[1] / g0
    residual = float(np.max(np.abs(v[2:] - b * v[1:-1] + v[:-2]))) / g0
    ok = residual <= tol and 0.0 <= b <= 2.0
    return RecursionFit(float(b) if ok else None, residual)


class Side(str, Enum):
    UPPER = "UpperDamped"
    LOWER = "LowerDamped"


@dataclass(frozen=True)
class DampingCondition:
    """r(m) <= r(0)(1 - eps) (upper) or r(m) >= -r(0)(1 - eps) (lower) for all m >= M."""

    epsilon: float
    M: int
    side: Side = Side.UPPER

    def __post_init__(self):
        if not 0.0 < self.epsilon <= 1.0:
            raise ValueError(f"epsilon must lie in (0, 1], got {self.epsilon}")
        if self.M < 0:
            raise ValueError(f"M must be non-negative, got {self.M}")
        object.__setattr__(self, "side", Side(self.side))

    def violations(self, r) -> list[int]:
        r = _as_seq(r)
        v = r.values[self.M:]
        bound = r[0] * (1.0 - self.epsilon)
        bad = v > bound if self.side is Side.UPPER else v < -bound
        return [int(i) + self.M for i in np.flatnonzero(bad)]


def estimation_guard(r, cond: DampingCondition, gamma, tol: float = EXACT.recursion) -> bool:
    """True iff gamma is rejected by :func:`recursion_fit`, given a damped noise covariance r.

    A damped r rules out the degenerate recursion for gamma, so a False
    return means a tolerance or implementation failure.
    """
    bad = cond.violations(r)
    if bad:
        raise ConditionNotMetError(
            f"noise covariance violates the {cond.side.value} condition at lag {bad[0]}"
            f" (epsilon={cond.epsilon}, M={cond.M})"
        )
    return not recursion_fit(gamma, tol).accepted
