"""Rescaled variable x and its Fourier layer.

p and x are related by sinh x = sqrt(3 p^2 / (4 lam)); an s-wave profile f(p)
becomes the odd function theta(x) = lam f(p(x)) sinh x cosh x, on which the
s-wave T operator acts as a convolution diagonalized by the Fourier transform.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.interpolate import make_interp_spline
from scipy.signal import fftconvolve

from .config import DEFAULT, GridError, QuadratureConfig, geometric_grid, x_grid
from .kernels import RadialProfile
from .specfun import (SQRT3, SIGMA0_HE, SIGMA0_MF, KernelKind, SpectralCurve,
                      Variant, eval_gamma, kernel_x)

FORM_PREFACTOR = 8 * math.pi ** 2 / (3 * SQRT3)
_C_LOGRATIO = 4 / (math.pi * SQRT3)


def enforce_odd(values):
    v = np.asarray(values)
    n = v.size
    mirror = v[(n - np.arange(n)) % n]
    out = 0.5 * (v - mirror)
    return out


@dataclass(frozen=True, eq=False)
class RescaledProfile:
    x: np.ndarray
    values: np.ndarray
    lam: float = 1.0

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        n = x.size
        if n < 16 or n % 2:
            raise GridError("x grid must have an even number of points")
        h = x[1] - x[0]
        if not np.allclose(np.diff(x), h, rtol=1e-9, atol=0) or abs(x[n // 2]) > 1e-12 * h:
            raise GridError("x grid must be uniform with x[n/2] = 0")
        if not self.lam > 0:
            raise ValueError("lam must be positive")
        v = np.asarray(self.values)
        if v.shape != x.shape:
            raise GridError("values and x differ in shape")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "values", enforce_odd(v))

    @classmethod
    def sample(cls, func, lam=1.0, config: QuadratureConfig = DEFAULT, x_max=None, n=None):
        x = x_grid(config.x_max if x_max is None else x_max, config.x_n if n is None else n)
        return cls(x, func(x), lam)

    @property
    def h(self) -> float:
        return float(self.x[1] - self.x[0])

    @property
    def x_max(self) -> float:
        return -float(self.x[0])

    def with_values(self, values):
        return RescaledProfile(self.x, values, self.lam)

    def interior(self, x_int=DEFAULT.x_interior):
        return np.abs(self.x) <= x_int

    def at(self, xq):
        """Spline interpolation, zero outside the grid."""
        xq = np.asarray(xq, dtype=float)
        spl = make_interp_spline(self.x, self.values, k=5)
        out = spl(np.clip(xq, self.x[0], self.x[-1]))
        return np.where(np.abs(xq) <= self.x[-1], out, 0.0)


@dataclass(frozen=True, eq=False)
class FourierProfile:
    s: np.ndarray
    values: np.ndarray

    @property
    def ds(self) -> float:
        return float(self.s[1] - self.s[0])


def s_grid(n, h):
    return 2 * np.pi * (np.arange(n) - n // 2) / (n * h)


def fourier(theta: RescaledProfile) -> FourierProfile:
    """theta^(s_k) = (2 pi)^(-1/2) h sum_j theta_j exp(-i s_k x_j), s increasing."""
    n, h = theta.x.size, theta.h
    sgn = np.where(np.arange(n) % 2, -1.0, 1.0)
    F = h / math.sqrt(2 * math.pi) * sgn * np.fft.fft(theta.values)
    return FourierProfile(s_grid(n, h), np.fft.fftshift(F))


def inverse_fourier(F: FourierProfile, like: RescaledProfile, real=True) -> np.ndarray:
    n, h = like.x.size, like.h
    sgn = np.where(np.arange(n) % 2, -1.0, 1.0)
    v = np.fft.ifft(sgn * np.fft.ifftshift(F.values)) * math.sqrt(2 * math.pi) / h
    return v.real if real else v


# -- change of variables -------------------------------------------------------

def p_of_x(x, lam):
    return 2 * math.sqrt(lam) / SQRT3 * np.sinh(x)


def x_of_p(p, lam):
    return np.arcsinh(np.sqrt(3 * np.asarray(p) ** 2 / (4 * lam)))


def to_rescaled(lam, f: RadialProfile, config: QuadratureConfig = DEFAULT) -> RescaledProfile:
    """theta(x) = lam f(p(x)) sinh x cosh x, odd extension."""
    if not lam > 0:
        raise ValueError("lam must be positive")
    x = x_grid(config.x_max, config.x_n)
    u = np.log(f.nodes)
    spl = make_interp_spline(u, f.values, k=5)
    pos = x > 0
    p = p_of_x(x[pos], lam)
    up = np.log(p)
    fv = np.where(up < u[0], f.values[0], spl(np.clip(up, u[0], u[-1])))
    fv = np.where(up > u[-1], 0.0, fv)
    theta = np.zeros(x.size, dtype=fv.dtype)
    theta[pos] = lam * fv * np.sinh(x[pos]) * np.cosh(x[pos])
    n = x.size
    neg = np.arange(1, n // 2)
    theta[neg] = -theta[n - neg]
    return RescaledProfile(x, theta, lam)


def from_rescaled(lam, theta: RescaledProfile, nodes=None, weights=None) -> RadialProfile:
    """f(p) = theta(x(p)) / (sqrt(3/4) p sqrt(3 p^2 / 4 + lam))."""
    if not lam > 0:
        raise ValueError("lam must be positive")
    if nodes is None:
        nodes, weights = geometric_grid()
    p = np.asarray(nodes, dtype=float)
    th = theta.at(x_of_p(p, lam))
    return RadialProfile(p, th / (math.sqrt(0.75) * p * np.sqrt(0.75 * p * p + lam)), weights)


# -- Theta operators ---------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ThetaOperatorResult:
    theta_out: RescaledProfile
    discrepancy: float
    tail_bound: float


def _conv(theta, kern_vals, h):
    """h sum_j K(x_i - x_j) theta_j for samples of K at offsets (k - n + 1) h."""
    n = theta.size
    full = fftconvolve(theta, kern_vals, mode="full")
    return h * full[n - 1:2 * n - 1]


def _offsets(n, h):
    return (np.arange(2 * n - 1) - (n - 1)) * h


def convolve_kernel(kind, theta: RescaledProfile) -> np.ndarray:
    """Trapezoid quadrature of int K(x - y) theta(y) dy on the grid."""
    d = _offsets(theta.x.size, theta.h)
    return _conv(theta.values, kernel_x(kind, d, theta.h), theta.h)


def _route_a(curve: SpectralCurve, theta: RescaledProfile):
    v = theta.values
    lr = convolve_kernel(KernelKind.LOG_RATIO, theta)
    if curve.variant is Variant.CANONICAL:
        return v - _C_LOGRATIO * lr
    if curve.variant is Variant.HIGH_ENERGY:
        return (1 + SIGMA0_HE + curve.sigma) * v - _C_LOGRATIO * lr
    lc = convolve_kernel(KernelKind.LOG_COTH, theta)
    return v - _C_LOGRATIO * lr + (SIGMA0_MF + curve.sigma) / (math.pi ** 3 * SQRT3) * lc


def _route_b(curve: SpectralCurve, theta: RescaledProfile):
    F = fourier(theta)
    G = FourierProfile(F.s, eval_gamma(curve, F.s) * F.values)
    return inverse_fourier(G, theta, real=not np.iscomplexobj(theta.values))


def tail_bound(theta: RescaledProfile, x_int=DEFAULT.x_interior) -> float:
    """Kernel mass beyond the grid seen from the interior window, times sup|theta|.

    Both kernels decay like 2 exp(-|x|) (log-ratio) and 2 exp(-|x|) (log-coth).
    """
    gap = theta.x_max - x_int
    return float(np.max(np.abs(theta.values))) * 4 * math.exp(-gap)


def apply_theta_operator(curve: SpectralCurve, theta: RescaledProfile,
                         config: QuadratureConfig = DEFAULT) -> ThetaOperatorResult:
    """Theta = theta - (4/(pi sqrt 3)) K_logratio * theta (+ variant terms).

    Route (a): direct convolution quadrature; route (b): gamma * theta^ and
    inverse FFT. Returns route (a), max |a - b| over the interior window, and
    the truncation bound.
    """
    if curve.variant is Variant.PLUS:
        raise ValueError("the Plus curve is not the symbol of an operator here")
    tb = tail_bound(theta, config.x_interior)
    scale = max(1.0, float(np.max(np.abs(theta.values))))
    if tb > config.tail_tol * scale:
        raise GridError("grid too short: kernel tail %.3g exceeds tolerance" % tb)
    a = _route_a(curve, theta)
    b = _route_b(curve, theta)
    m = theta.interior(config.x_interior)
    disc = float(np.max(np.abs(a[m] - b[m])))
    return ThetaOperatorResult(theta.with_values(a), disc, tb)


def one_sided_logratio(theta: RescaledProfile) -> np.ndarray:
    """Canonical integral term on x >= 0 using only y >= 0 and the two kernels
    K(x - y) - K(x + y); returns values on the x >= 0 half of the grid."""
    n, h = theta.x.size, theta.h
    half = theta.values[n // 2:]
    xh = theta.x[n // 2:]
    w = np.full(half.size, h)
    w[0] = 0.5 * h  # theta(0) = 0 anyway
    K = kernel_x(KernelKind.LOG_RATIO, xh[:, None] - xh[None, :]) \
        - kernel_x(KernelKind.LOG_RATIO, xh[:, None] + xh[None, :])
    return K @ (w * half)


# -- quadratic forms ----------------------------------------------------------------

def spectral_form(curve: SpectralCurve, theta: RescaledProfile) -> float:
    """(8 pi^2 / (3 sqrt 3)) int gamma(s) |theta^(s)|^2 ds."""
    F = fourier(theta)
    return float(FORM_PREFACTOR * np.sum(eval_gamma(curve, F.s) * np.abs(F.values) ** 2) * F.ds)


def l2_norm2(theta: RescaledProfile) -> float:
    return float(theta.h * np.sum(np.abs(theta.values) ** 2))


def sech_norm2(theta: RescaledProfile) -> float:
    """int |theta|^2 / cosh(x)^2 dx, the weighted proxy for the H^(-1/2) charge norm."""
    w = kernel_x(KernelKind.SECH2, theta.x)
    return float(theta.h * np.sum(w * np.abs(theta.values) ** 2))


def w_form_s_wave(theta1: RescaledProfile, theta2: RescaledProfile | None = None, cutoff=1e-300):
    """s-wave W pairing written in x:

    (4 pi^2 / (lam sqrt 3)) int th1 th2 / cosh^2
      + (32 pi / lam) int int th1(x) th2(y) / ((2 cosh(x+y) + 1)(2 cosh(x-y) - 1)).
    Double integral is restricted to nodes where either profile is non-negligible.
    """
    theta2 = theta1 if theta2 is None else theta2
    lam, h = theta1.lam, theta1.h
    if theta2.lam != lam or not np.array_equal(theta1.x, theta2.x):
        raise GridError("profiles differ in grid or lam")
    a, b = np.conj(theta1.values), theta2.values
    diag = 4 * math.pi ** 2 / (lam * SQRT3) * h * np.sum(a * b * kernel_x(KernelKind.SECH2, theta1.x))
    keep = (np.abs(a) > cutoff) | (np.abs(b) > cutoff)
    xs, a, b = theta1.x[keep], a[keep], b[keep]
    tot = 0.0
    chunk = 1024
    for i in range(0, xs.size, chunk):
        xi = xs[i:i + chunk, None]
        M = kernel_x(KernelKind.COSH_PLUS, xi + xs[None, :]) * kernel_x(KernelKind.COSH_MINUS, xi - xs[None, :])
        tot = tot + a[i:i + chunk] @ (M @ b)
    out = diag + 32 * math.pi / lam * h * h * tot
    return float(np.real(out)) if not np.iscomplexobj(out) or abs(np.imag(out)) == 0 else complex(out)


# -- unbounded-below scaling ------------------------------------------------------

def rayleigh_scan(theta, eps_list, lam=1.0, config: QuadratureConfig = DEFAULT):
    """Quotients spectral_form(canonical, theta_eps) / int |theta_eps|^2 / cosh^2.

    theta is a callable or a RescaledProfile; theta_eps(x) = theta(eps x). The
    grid is stretched to half-width x_max / eps with the same step so the
    scaled profile is fully represented.
    """
    f = theta.at if isinstance(theta, RescaledProfile) else theta
    scale = float(np.max(np.abs(theta.values))) if isinstance(theta, RescaledProfile) else 1.0
    if abs(float(np.real(f(np.array([0.0]))[0]))) > 1e-12 * max(scale, 1.0):
        raise ValueError("theta(0) must vanish")
    h = config.x_step
    out = []
    for eps in eps_list:
        if not 0 < eps <= 1:
            raise ValueError("eps must lie in (0, 1]")
        n = int(2 ** math.ceil(math.log2(config.x_n / eps - 1e-9)))
        x_max = n * h / 2
        th = RescaledProfile(x_grid(x_max, n), f(eps * x_grid(x_max, n)), lam)
        out.append((eps, spectral_form(SpectralCurve.canonical(), th) / sech_norm2(th)))
    return out
