"""Closed-form functions of the Mellin variable s.

Fourier convention: f^(s) = (2 pi)^(-1/2) int exp(-i s x) f(x) dx.
All even functions are evaluated through |s| so symmetry is exact.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import eval_legendre

from .config import DEFAULT

SQRT3 = math.sqrt(3.0)
SQRT2PI = math.sqrt(2.0 * math.pi)

# gamma(0) = 1 - 4 pi / (3 sqrt 3)
GAMMA_AT_ZERO = 1.0 - 4.0 * math.pi / (3.0 * SQRT3)
# shifts that lift the minimum of the regularized curves to sigma-proportional values
SIGMA0_MF = 2.0 * math.pi * SQRT3 * (4.0 * math.pi / (3.0 * SQRT3) - 1.0)
SIGMA0_HE = 4.0 * math.pi / (3.0 * SQRT3) - 1.0

_SERIES = DEFAULT.series_cutoff
_BAND = DEFAULT.taylor_band


class Variant(str, enum.Enum):
    CANONICAL = "canonical"
    PLUS = "plus"
    MINLOS_FADDEEV = "minlos-faddeev"
    HIGH_ENERGY = "high-energy"


@dataclass(frozen=True)
class SpectralCurve:
    variant: Variant = Variant.CANONICAL
    sigma: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant(self.variant))
        if self.regularized:
            if not (math.isfinite(self.sigma) and self.sigma > 0):
                raise ValueError("sigma must be positive for regularized curves")

    @property
    def regularized(self) -> bool:
        return self.variant in (Variant.MINLOS_FADDEEV, Variant.HIGH_ENERGY)

    @classmethod
    def canonical(cls):
        return cls(Variant.CANONICAL)

    @classmethod
    def plus(cls):
        return cls(Variant.PLUS)

    @classmethod
    def minlos_faddeev(cls, sigma):
        return cls(Variant.MINLOS_FADDEEV, float(sigma))

    @classmethod
    def high_energy(cls, sigma):
        return cls(Variant.HIGH_ENERGY, float(sigma))

    def __call__(self, s):
        return eval_gamma(self, s)

    def minimum(self) -> float:
        """Analytic minimum over the real line (attained at s = 0)."""
        if self.variant is Variant.MINLOS_FADDEEV:
            return self.sigma / (2.0 * math.pi * SQRT3)
        if self.variant is Variant.HIGH_ENERGY:
            return self.sigma
        if self.variant is Variant.CANONICAL:
            return GAMMA_AT_ZERO
        return 0.0  # infimum, approached as |s| -> inf

    def limit_at_infinity(self) -> float:
        if self.variant is Variant.HIGH_ENERGY:
            return 1.0 + SIGMA0_HE + self.sigma
        if self.variant is Variant.PLUS:
            return 0.0
        return 1.0


@dataclass(frozen=True)
class RootResult:
    s0: float
    residual: float
    iterations: int


# -- overflow-safe building blocks (even in s) -------------------------------

def _as_abs(s):
    s = np.asarray(s, dtype=float)
    if not np.all(np.isfinite(s)):
        raise ValueError("non-finite s")
    return np.abs(s)


def sinh_over_s_cosh(a, b, s):
    """sinh(a s) / (s cosh(b s)) for a, b > 0."""
    t = _as_abs(s)
    small = t < _SERIES
    ts = np.where(small, 1.0, t)
    big = np.exp((a - b) * ts) * (-np.expm1(-2 * a * ts)) / (1 + np.exp(-2 * b * ts)) / ts
    ser = a + (a ** 3 / 6 - a * b * b / 2) * t * t
    return np.where(small, ser, big)


def s_over_sinh(b, s):
    """s / sinh(b s)."""
    t = _as_abs(s)
    small = t < _SERIES
    ts = np.where(small, 1.0, t)
    big = 2 * ts * np.exp(-b * ts) / (-np.expm1(-2 * b * ts))
    ser = (1 - b * b * t * t / 6) / b
    return np.where(small, ser, big)


def sinh_ratio(a, b, s):
    """sinh(a s) / sinh(b s) for 0 <= a < b (a may be an array)."""
    t = _as_abs(s)
    a = np.asarray(a, dtype=float)
    small = t < _SERIES
    ts = np.where(small, 1.0, t)
    big = np.exp(-(b - a) * ts) * (-np.expm1(-2 * a * ts)) / (-np.expm1(-2 * b * ts))
    ser = (a / b) * (1 + (a * a - b * b) * t * t / 6)
    return np.where(small, ser, big)


def tanh_over_s(b, s):
    """tanh(b s) / s."""
    t = _as_abs(s)
    small = t < _SERIES
    ts = np.where(small, 1.0, t)
    return np.where(small, b * (1 - (b * t) ** 2 / 3), np.tanh(b * ts) / ts)


def _scalar(x, like):
    return float(x) if np.ndim(like) == 0 else x


# -- the gamma family --------------------------------------------------------

def _gamma_canonical(s):
    return 1.0 - (8.0 / SQRT3) * sinh_over_s_cosh(math.pi / 6, math.pi / 2, s)


def _gamma_complex(z):
    z = np.asarray(z, dtype=complex)
    return 1.0 - (8.0 / SQRT3) * np.sinh(math.pi * z / 6) / (z * np.cosh(math.pi * z / 2))


@lru_cache(maxsize=1)
def _taylor_at_s0(order=10, radius=0.25, m=128):
    """Taylor coefficients c_k of gamma around s0 (c_0 = 0) by a Cauchy integral."""
    s0 = get_s0()
    phi = 2 * np.pi * np.arange(m) / m
    vals = _gamma_complex(s0 + radius * np.exp(1j * phi))
    k = np.arange(order + 1)
    c = (vals[None, :] * np.exp(-1j * np.outer(k, phi))).mean(axis=1).real / radius ** k
    c[0] = 0.0
    return s0, c


def _gamma_plus(s):
    t = _as_abs(s)
    s0, c = _taylor_at_s0()
    d = t - s0
    near = np.abs(d) < _BAND
    ds = np.where(near, 1.0, d)
    far = _gamma_canonical(t) / (ds * (t + s0))
    # gamma(s0 + d) / d = sum_k c_k d^(k-1)
    poly = np.polyval(c[:0:-1], d)
    return np.where(near, poly / (t + s0), far)


def eval_gamma(curve: SpectralCurve, s):
    """Evaluate a gamma-type curve; accepts scalars or arrays."""
    v = curve.variant
    if v is Variant.CANONICAL:
        out = _gamma_canonical(s)
    elif v is Variant.PLUS:
        out = _gamma_plus(s)
    elif v is Variant.MINLOS_FADDEEV:
        out = _gamma_canonical(s) + (SIGMA0_MF + curve.sigma) / (math.pi ** 2 * SQRT3) * tanh_over_s(
            math.pi / 2, s)
    else:
        out = _gamma_canonical(s) + SIGMA0_HE + curve.sigma
    return _scalar(out, s)


# -- root ----------------------------------------------------------------------

def find_s0(tol: float = 1e-12) -> RootResult:
    """Positive root of gamma: bracket on (0.5, 1.5) at step 1e-3, then bisect."""
    if not tol > 0:
        raise ValueError("tol must be positive")
    grid = np.arange(0.5, 1.5 + 5e-4, 1e-3)
    vals = _gamma_canonical(grid)
    idx = np.nonzero(np.sign(vals[:-1]) != np.sign(vals[1:]))[0]
    if idx.size != 1:
        raise RuntimeError("could not bracket the root of gamma")
    a, b = float(grid[idx[0]]), float(grid[idx[0] + 1])
    fa = float(_gamma_canonical(a))
    it = 0
    while True:
        it += 1
        m = 0.5 * (a + b)
        fm = float(_gamma_canonical(m))
        if abs(fm) <= tol or m in (a, b) or it > 200:
            break
        if np.sign(fm) == np.sign(fa):
            a, fa = m, fm
        else:
            b = m
    return RootResult(m, abs(fm), it)


@lru_cache(maxsize=1)
def get_s0() -> float:
    """s0 to full double precision (cached)."""
    return find_s0(1e-16).s0


def efimov_ratio() -> float:
    """Ratio of consecutive Efimov energies, exp(2 pi / s0)."""
    return math.exp(2 * math.pi / get_s0())


# -- S_l curves ----------------------------------------------------------------

@lru_cache(maxsize=4)
def _gl(n):
    return np.polynomial.legendre.leggauss(n)


def eval_S(ell: int, s, n_nodes: int = DEFAULT.s_curve_nodes):
    """S_l(s) = 2 pi^2 int_{-1}^{1} P_l(t) sinh(s phi) / (sin(phi) sinh(pi s)) dt, phi = arccos(t/2)."""
    if ell < 0:
        raise ValueError("ell must be nonnegative")
    t, w = _gl(n_nodes)
    phi = np.arccos(t / 2)
    base = w * eval_legendre(ell, t) / np.sin(phi)
    s_arr = np.atleast_1d(_as_abs(s))
    ratio = sinh_ratio(phi[None, :], math.pi, s_arr[:, None])
    out = 2 * math.pi ** 2 * (ratio @ base)
    return _scalar(out[0], s) if np.ndim(s) == 0 else out.reshape(np.shape(s))


def S_at_zero(ell: int) -> float:
    """Closed forms for l = 0, 1, 2."""
    pi = math.pi
    table = {0: 2 * pi ** 3 / 3,
             1: -8 * pi * (1 - pi / (2 * SQRT3)),
             2: (pi ** 2 / 3) * (5 * pi - 9 * SQRT3)}
    return table[ell]


# -- Fourier kernel pairs --------------------------------------------------------

class KernelKind(str, enum.Enum):
    LOG_RATIO = "log-ratio"      # log((2 cosh x + 1) / (2 cosh x - 1))
    SECH2 = "sech2"              # 1 / cosh(x)^2
    COSH_PLUS = "cosh-plus"      # 1 / (2 cosh x + 1)
    COSH_MINUS = "cosh-minus"    # 1 / (2 cosh x - 1)
    LOG_COTH = "log-coth"        # log|coth(x / 2)|


def kernel_pair(kind, s):
    """Closed-form Fourier transform of the x-space kernel `kind`."""
    kind = KernelKind(kind)
    pi = math.pi
    if kind is KernelKind.LOG_RATIO:
        out = SQRT2PI * sinh_over_s_cosh(pi / 6, pi / 2, s)
    elif kind is KernelKind.SECH2:
        out = math.sqrt(pi / 2) * s_over_sinh(pi / 2, s)
    elif kind is KernelKind.COSH_MINUS:
        out = math.sqrt(2 * pi / 3) * sinh_ratio(2 * pi / 3, pi, s)
    elif kind is KernelKind.COSH_PLUS:
        out = math.sqrt(2 * pi / 3) * sinh_ratio(pi / 3, pi, s)
    else:
        out = math.sqrt(pi / 2) * tanh_over_s(pi / 2, s)
    return _scalar(out, s)


def kernel_x(kind, x, h=None):
    """Sample the x-space kernel.

    LOG_COTH is singular at 0. When `h` is given and x contains 0, that sample
    is replaced by log(4 pi / h), which makes the plain trapezoid rule on a
    uniform grid of step h accurate for the log singularity.
    """
    kind = KernelKind(kind)
    x = np.abs(np.asarray(x, dtype=float))
    if kind is KernelKind.LOG_RATIO:
        c = np.cosh(np.minimum(x, 700.0))
        return np.log1p(2.0 / (2.0 * c - 1.0))
    if kind is KernelKind.SECH2:
        e = np.exp(-2 * x)
        return 4 * e / (1 + e) ** 2
    if kind in (KernelKind.COSH_PLUS, KernelKind.COSH_MINUS):
        sgn = 1.0 if kind is KernelKind.COSH_PLUS else -1.0
        e = np.exp(-x)
        return e / (1 + sgn * e + e * e)
    zero = x == 0
    xs = np.where(zero, 1.0, x)
    out = -np.log(np.tanh(xs / 2))
    if h is not None:
        out = np.where(zero, math.log(4 * math.pi / h), out)
    else:
        out = np.where(zero, np.inf, out)
    return out
