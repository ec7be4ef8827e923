"""The degenerate covariance family gamma_b.

gamma_b is the symmetric solution of

    gamma(m + 1) = b * gamma(m) - gamma(m - 1),    gamma(1) = (b / 2) * gamma(0),

normalised to gamma(0) = 1. Writing A = arcsin(b / 2), the solution is
(-1)^(m/2) cos(mA) for even m and (-1)^((m-1)/2) sin(mA) for odd m, which is
the same as cos(m * omega) with omega = pi/2 - A.

Angles m*A are reduced modulo 2 pi before calling cos/sin. For a general b
the float A is multiplied and reduced in 256-bit fixed point, which keeps the
error at a few ulp for every lag instead of growing like m * ulp. When the
angle is a rational multiple of pi/2, b = 2 sin((k/l) pi/2), the reduction is
done on integer residues so that the 4l-periodicity holds bit for bit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import NamedTuple, Optional

import numpy as np

from .errors import InvalidBError, InvalidRationalError, NotInQError, OutOfRangeError
from .linalg import SymmetricMatrix, symmetric_eigenvalues

M_POLY_MAX = 30
SPECTRUM_TOL = 1e-6
DENSITY_CAP = 10**6
_SCAN_CHUNK = 1 << 16

_PI_DIGITS = "3.14159265358979323846264338327950288419716939937510582097494459230781640628620899862803482534211706798"
_SHIFT = 256
_TWO_PI_FIXED = int(Fraction(_PI_DIGITS) * 2 * 2**_SHIFT)


def reduce_angle(m: int, x: float) -> float:
    """(m * x) mod 2 pi for an integer m and a float x, without the m * ulp error of m * x.

    x is exact as num / 2^d, so m * x * 2^256 is an integer that can be
    reduced against a 256-bit fixed-point 2 pi.
    """
    num, den = float(x).as_integer_ratio()
    d = den.bit_length() - 1
    if d > _SHIFT:
        return math.fmod(m * x, 2 * math.pi)
    r = (m * num << (_SHIFT - d)) % _TWO_PI_FIXED
    return math.ldexp(float(r), -_SHIFT)


def rank_tolerance(n: int) -> float:
    return 1e-8 * n


def psd_tolerance(n: int) -> float:
    return 1e-8 * n


@dataclass(frozen=True)
class DegenerateParam:
    """Recursion coefficient b in [0, 2], optionally carrying an exact angle k/l."""

    b: float
    rational_angle: Optional[tuple[int, int]] = field(default=None)

    def __post_init__(self):
        b = float(self.b)
        if not (0.0 <= b <= 2.0):
            raise InvalidBError(f"b must lie in [0, 2], got {self.b!r}")
        object.__setattr__(self, "b", b)
        if self.rational_angle is not None:
            k, l = self.rational_angle
            if math.gcd(k, l) != 1 or not 0 < k < l:
                raise InvalidRationalError(f"angle {k}/{l} must be reduced and in (0, 1)")
            if abs(b - 2.0 * math.sin(k / l * math.pi / 2)) > 1e-12:
                raise InvalidRationalError(f"b={b!r} does not match angle {k}/{l}")

    @classmethod
    def from_rational(cls, k: int, l: int) -> "DegenerateParam":
        """Build b = 2 sin((k/l) pi/2); the fraction is reduced first."""
        if k <= 0 or l <= 0 or k >= l:
            raise InvalidRationalError(f"need 0 < k < l, got k={k}, l={l}")
        g = math.gcd(k, l)
        k, l = k // g, l // g
        return cls(2.0 * math.sin(k * math.pi / (2 * l)), (k, l))

    @property
    def A(self) -> float:
        """arcsin(b / 2), in [0, pi/2]."""
        if self.rational_angle is not None:
            k, l = self.rational_angle
            return k * math.pi / (2 * l)
        return math.asin(self.b / 2.0)

    @property
    def omega(self) -> float:
        """Rotation angle of the harmonic form gamma(m) = cos(m * omega)."""
        if self.rational_angle is not None:
            k, l = self.rational_angle
            return (l - k) * math.pi / (2 * l)
        return math.pi / 2 - math.asin(self.b / 2.0)

    def angle(self, m: int) -> float:
        """m * A reduced modulo 2 pi; by integer residues when the angle is rational."""
        if self.rational_angle is not None:
            k, l = self.rational_angle
            return ((m * k) % (4 * l)) * math.pi / (2 * l)
        return reduce_angle(m, self.A)

    def rotation(self, t: int) -> float:
        """t * omega = t pi/2 - t A, reduced modulo 2 pi."""
        if self.rational_angle is not None:
            k, l = self.rational_angle
            return ((t * (l - k)) % (4 * l)) * math.pi / (2 * l)
        if self.b == 2.0:
            return 0.0  # omega = 0 exactly
        return (t % 4) * (math.pi / 2) - reduce_angle(t, self.A)


@dataclass(frozen=True)
class QMembership:
    k: int
    l: int
    in_Q: bool

    @classmethod
    def of(cls, k: int, l: int) -> "QMembership":
        ok = k > 0 and l > 0 and k < l and math.gcd(k, l) == 1 and (k - l) % 2 == 1
        return cls(k, l, ok)


def q_members(max_l: int):
    """Every (k, l) in Q with l <= max_l, ordered by (l, k)."""
    for l in range(2, max_l + 1):
        for k in range(1, l):
            if QMembership.of(k, l).in_Q:
                yield k, l


@dataclass(frozen=True)
class CovarianceSequence:
    """Autocovariances at lags 0..M; negative lags follow by symmetry."""

    values: np.ndarray

    def __post_init__(self):
        v = np.array(self.values, dtype=float)
        if v.ndim != 1 or v.size == 0:
            raise ValueError("covariance sequence must be a non-empty 1-d array")
        if not np.all(np.isfinite(v)):
            raise ValueError("covariance sequence contains non-finite values")
        if v[0] < 0:
            raise ValueError(f"variance gamma(0) must be non-negative, got {v[0]}")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def M(self) -> int:
        return self.values.size - 1

    def __len__(self):
        return self.values.size

    def __getitem__(self, m: int) -> float:
        return float(self.values[abs(m)])

    @property
    def bounded(self) -> bool:
        """Cauchy-Schwarz check |gamma(m)| <= gamma(0)."""
        return bool(np.all(np.abs(self.values) <= self.values[0] * (1 + 1e-12)))

    def scaled(self, factor: float) -> "CovarianceSequence":
        return CovarianceSequence(factor * self.values)


def _as_param(p) -> DegenerateParam:
    return p if isinstance(p, DegenerateParam) else DegenerateParam(p)


def gamma_closed_form(p: DegenerateParam | float, m: int) -> float:
    p = _as_param(p)
    m = abs(int(m))
    x = p.angle(m)
    if m % 2 == 0:
        return (-1.0) ** ((m // 2) % 2) * math.cos(x)
    return (-1.0) ** (((m - 1) // 2) % 2) * math.sin(x)


def gamma_values(p: DegenerateParam | float, lags) -> np.ndarray:
    """Vectorised closed form over an integer array of lags, for screening.

    Forms m * A in plain double precision, so the error grows like m * ulp;
    use :func:`gamma_closed_form` where accuracy matters.
    """
    p = _as_param(p)
    m = np.abs(np.asarray(lags, dtype=np.int64))
    if p.rational_angle is not None:
        k, l = p.rational_angle
        x = ((m * k) % (4 * l)) * (math.pi / (2 * l))
    else:
        x = m * p.A
    sign = np.where((m // 2) % 2 == 0, 1.0, -1.0)
    return sign * np.where(m % 2 == 0, np.cos(x), np.sin(x))


def gamma_recursion(p: DegenerateParam | float, M: int) -> CovarianceSequence:
    """Run the three-term recursion forward from gamma(0)=1, gamma(1)=b/2."""
    if M < 0:
        raise OutOfRangeError(f"max lag must be non-negative, got {M}")
    b = _as_param(p).b
    g = np.empty(M + 1)
    g[0] = 1.0
    if M >= 1:
        g[1] = b / 2.0
    for m in range(1, M):
        g[m + 1] = b * g[m] - g[m - 1]
    return CovarianceSequence(g)


def gamma_sequence(p: DegenerateParam | float, M: int) -> CovarianceSequence:
    """Closed-form values at lags 0..M."""
    if M < 0:
        raise OutOfRangeError(f"max lag must be non-negative, got {M}")
    p = _as_param(p)
    return CovarianceSequence([gamma_closed_form(p, m) for m in range(M + 1)])


def _binom(n: int, k: int) -> int:
    return math.comb(n, k) if 0 <= k <= n else 0


def gamma_polynomial(b: float, m: int) -> float:
    """Evaluate the finite polynomial expansion of gamma_b(m) in b.

    The alternating terms grow like (1 + sqrt 2)^m while the result stays in
    [-1, 1], so the sum is formed exactly over the rationals and rounded once.
    """
    if not 1 <= m <= M_POLY_MAX:
        raise OutOfRangeError(f"polynomial expansion supports 1 <= m <= {M_POLY_MAX}, got {m}")
    x = Fraction(float(b))
    half = Fraction(1, 2)
    total = Fraction(0)
    if m % 2 == 0:
        total += x**m
        for n in range(m // 2, m):
            sign = (-1) ** (m - n)
            total += sign * (_binom(n, m - n) * x ** (2 * n - m) + _binom(n, m - n - 1) * x ** (2 * n - m + 2) * half)
    else:
        for n in range((m + 1) // 2, m + 1):
            total += (-1) ** (m - n) * _binom(n, m - n) * x ** (2 * n - m)
        for n in range((m - 1) // 2, m):
            total += (-1) ** (m - n) * _binom(n, m - n - 1) * x ** (2 * n - m + 2) * half
    return float(total)


def minimal_stated_period(k: int, l: int) -> int:
    """Return 4l, a (not necessarily minimal) period of gamma_b for b = 2 sin((k/l) pi/2)."""
    if not 0 < k < l or math.gcd(k, l) != 1:
        raise InvalidRationalError(f"need reduced 0 < k < l, got k={k}, l={l}")
    return 4 * l


def alternating_cos_sum(k: int, l: int) -> float:
    """Direct sum of (-1)^j cos^2(j x) for j = 1..2l-1, x = (k/l) pi/2."""
    if not QMembership.of(k, l).in_Q:
        raise NotInQError(f"{k}/{l} is not a reduced fraction in (0, 1) with k - l odd")
    x = k / l * math.pi / 2
    return math.fsum((-1) ** j * math.cos(j * x) ** 2 for j in range(1, 2 * l))


def build_covariance_matrix(p: DegenerateParam | float, n: int) -> SymmetricMatrix:
    """n x n Toeplitz matrix with entries gamma(|i - j|)."""
    if n < 1:
        raise OutOfRangeError(f"matrix dimension must be positive, got {n}")
    p = _as_param(p)
    g = np.array([gamma_closed_form(p, m) for m in range(n)])
    idx = np.arange(n)
    return SymmetricMatrix(g[np.abs(idx[:, None] - idx[None, :])])


class SpectrumClass(str, Enum):
    TWO_FOLD_2L = "TwoFold2l"
    SINGLE_4L = "Single4l"
    OTHER = "Other"


@dataclass(frozen=True)
class SpectrumReport:
    k: int
    l: int
    eigenvalues: np.ndarray
    rank_estimate: int
    classification: SpectrumClass
    trace: float
    frobenius_sq: float

    @property
    def nonzero(self) -> np.ndarray:
        return self.eigenvalues[np.abs(self.eigenvalues) > rank_tolerance(self.eigenvalues.size)]

    @property
    def ok(self) -> bool:
        return self.classification is not SpectrumClass.OTHER


def classify_spectrum(eigenvalues: np.ndarray, l: int, tol: float = SPECTRUM_TOL) -> tuple[int, SpectrumClass]:
    n = eigenvalues.size
    big = np.abs(eigenvalues) > rank_tolerance(n)
    rank = int(big.sum())
    nz = eigenvalues[big]
    if rank == 2 and np.all(np.abs(nz - 2 * l) <= tol):
        return rank, SpectrumClass.TWO_FOLD_2L
    if rank == 1 and abs(nz[0] - 4 * l) <= tol:
        return rank, SpectrumClass.SINGLE_4L
    return rank, SpectrumClass.OTHER


def nonzero_spectrum_check(p: DegenerateParam | tuple[int, int]) -> SpectrumReport:
    """Eigen-decompose the 4l x 4l covariance matrix for an angle k/l in Q."""
    if not isinstance(p, DegenerateParam):
        p = DegenerateParam.from_rational(*p)
    if p.rational_angle is None:
        raise NotInQError("spectrum check needs an exact rational angle (k, l)")
    k, l = p.rational_angle
    if not QMembership.of(k, l).in_Q:
        raise NotInQError(f"{k}/{l} is not in Q (k - l must be odd)")
    c = build_covariance_matrix(p, 4 * l)
    eig = symmetric_eigenvalues(c)
    rank, cls = classify_spectrum(eig, l)
    return SpectrumReport(k, l, eig, rank, cls, c.trace(), c.frobenius_sq())


class PsdResult(NamedTuple):
    min_eigenvalue: float
    is_psd: bool


def psd_check(p: DegenerateParam | float, n: int) -> PsdResult:
    eig = symmetric_eigenvalues(build_covariance_matrix(p, n))
    lo = float(eig[0])
    return PsdResult(lo, lo >= -psd_tolerance(n))


def density_search(
    p: DegenerateParam | float,
    target: float,
    tol: float,
    M_start: int = 0,
    M_cap: int = DENSITY_CAP,
) -> Optional[int]:
    """Smallest lag m in [M_start, M_cap] with |gamma(m) - target| <= tol, else None.

    Lags are screened in vectorised chunks with a small slack and every
    candidate is confirmed with :func:`gamma_closed_form`, so the answer is
    exactly that of a scalar forward scan.
    """
    if tol < 0:
        raise ValueError(f"tolerance must be non-negative, got {tol}")
    if not 0 <= M_start <= M_cap:
        raise ValueError(f"need 0 <= M_start <= M_cap, got {M_start}, {M_cap}")
    p = _as_param(p)
    slack = 1e-8
    for lo in range(M_start, M_cap + 1, _SCAN_CHUNK):
        lags = np.arange(lo, min(lo + _SCAN_CHUNK, M_cap + 1))
        near = np.flatnonzero(np.abs(gamma_values(p, lags) - target) <= tol + slack)
        for i in near:
            m = int(lags[i])
            if abs(gamma_closed_form(p, m) - target) <= tol:
                return m
    return None
