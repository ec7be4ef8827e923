"""Numerical verification suites behind ``ar1char verify``.

Each suite returns a list of :class:`Case` rows sorted by key.
"""

from __future__ import annotations

import math
from typing import NamedTuple, Sequence

import numpy as np

from . import covariance as cov
from .estimation import DampingCondition, estimation_guard, recursion_fit
from .simulation import ARNoise, MovingAverage, WhiteGaussian, ar1_autocovariance, noise_sequence


class Case(NamedTuple):
    key: tuple
    label: str
    passed: bool
    detail: str


def _sorted(cases: list[Case]) -> list[Case]:
    return sorted(cases, key=lambda c: c.key)


def spectrum(pairs: Sequence[tuple[int, int]]) -> tuple[list[Case], dict]:
    cases, reports = [], {}
    for k, l in pairs:
        rep = cov.nonzero_spectrum_check((k, l))
        reports[(k, l)] = rep
        ok = (rep.ok and rep.rank_estimate <= 2
              and abs(rep.trace - 4 * l) <= 1e-8
              and abs(rep.frobenius_sq - 8 * l * l) <= 1e-6 * l * l)
        nz = ", ".join(f"{v:.10g}" for v in rep.nonzero)
        cases.append(Case((l, k), f"k={k} l={l}", ok,
                          f"{rep.classification.value} rank={rep.rank_estimate} nonzero={{{nz}}} "
                          f"trace={rep.trace:.12g} frob2={rep.frobenius_sq:.12g}"))
    return _sorted(cases), reports


def psd(bs: Sequence[float], n: int) -> list[Case]:
    cases = []
    for b in bs:
        res = cov.psd_check(b, n)
        cases.append(Case((b,), f"b={b:g} n={n}", res.is_psd, f"min_eigenvalue={res.min_eigenvalue:.3e}"))
    return _sorted(cases)


def sumcos(max_l: int, tol: float = 1e-10) -> list[Case]:
    cases = []
    for k, l in cov.q_members(max_l):
        s = cov.alternating_cos_sum(k, l)
        cases.append(Case((l, k), f"k={k} l={l}", abs(s + 1.0) <= tol, f"sum={s:.17g}"))
    return _sorted(cases)


def period(max_l: int, max_m: int, tol: float = 1e-10) -> list[Case]:
    """gamma(m + 4l) = gamma(m), evaluated from the floating b without the exact angle."""
    cases = []
    for l in range(2, max_l + 1):
        for k in range(1, l):
            if math.gcd(k, l) != 1:
                continue
            p = cov.DegenerateParam(cov.DegenerateParam.from_rational(k, l).b)
            P = cov.minimal_stated_period(k, l)
            err = max(abs(cov.gamma_closed_form(p, m + P) - cov.gamma_closed_form(p, m)) for m in range(max_m + 1))
            cases.append(Case((l, k), f"k={k} l={l}", err <= tol, f"period={P} max_err={err:.3e}"))
    return _sorted(cases)


def density(b: float, targets: Sequence[float], tol: float, start: int, cap: int) -> list[Case]:
    cases = []
    for t in targets:
        m = cov.density_search(b, t, tol, start, cap)
        if m is None:
            cases.append(Case((t,), f"b={b:g} target={t:g}", False, f"NotFound up to lag {cap}"))
        else:
            g = cov.gamma_closed_form(b, m)
            cases.append(Case((t,), f"b={b:g} target={t:g}", True, f"lag={m} gamma={g:.12g}"))
    return _sorted(cases)


DAMPED_NOISE = {
    "white": WhiteGaussian(1.0),
    "ma1": MovingAverage((0.5,), 1.0),
    "ma2": MovingAverage((0.6, -0.3), 1.0),
    "ar0.3": ARNoise(0.3, 1.0),
    "ar0.8": ARNoise(0.8, 0.36),
}


def damping_guard(phis: Sequence[float], epsilon: float, M: int, max_lag: int) -> list[Case]:
    """Damped noise never yields an X covariance obeying the degenerate recursion."""
    cases = []
    cond = DampingCondition(epsilon, M)
    for name, noise in DAMPED_NOISE.items():
        r = noise_sequence(noise, max_lag)
        for phi in phis:
            g = ar1_autocovariance(phi, noise, max_lag)
            ok = estimation_guard(r, cond, g)
            cases.append(Case((name, phi), f"noise={name} phi={phi:g}", ok,
                              f"recursion residual={recursion_fit(g).residual:.3e}"))
    return _sorted(cases)


def all_passed(cases: Sequence[Case]) -> bool:
    return all(c.passed for c in cases)


def format_table(cases: Sequence[Case]) -> str:
    width = max((len(c.label) for c in cases), default=0)
    lines = [f"{c.label:<{width}}  {'PASS' if c.passed else 'FAIL'}  {c.detail}" for c in cases]
    n_ok = sum(c.passed for c in cases)
    lines.append(f"{n_ok}/{len(cases)} cases passed")
    return "\n".join(lines) + "\n"


def default_psd_bs() -> list[float]:
    return [0.0, 0.6, 1.0, float(np.sqrt(2.0)), 1.7, 2.0]
