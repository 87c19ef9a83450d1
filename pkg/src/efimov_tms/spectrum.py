"""Efimov levels, eigencharges, the radial TMS solver and deficiency asymptotics."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate
from scipy.signal import fftconvolve

from .config import DEFAULT, GridError, QuadratureConfig, geometric_grid, x_grid
from .kernels import RadialProfile
from .mellin import (FourierProfile, RescaledProfile, apply_theta_operator, fourier,
                     inverse_fourier)
from .specfun import (SQRT3, SpectralCurve, Variant, eval_gamma, get_s0, s_over_sinh)


# -- levels ----------------------------------------------------------------------

def arccot(beta):
    """Branch with values in (0, pi)."""
    return math.pi / 2 - math.atan(beta)


@dataclass(frozen=True)
class EfimovLevel:
    beta: float
    n: int
    energy: float
    s0: float

    @property
    def binding(self) -> float:
        return -self.energy


def level_energy(beta, n, s0=None):
    s0 = get_s0() if s0 is None else s0
    return -3.0 * math.exp(-(2.0 / s0) * arccot(beta)) * math.exp(2.0 * math.pi * n / s0)


def efimov_levels(beta, n_min, n_max):
    """Levels E_{beta, n} for n_min <= n <= n_max, sorted by n."""
    s0 = get_s0()
    return [EfimovLevel(float(beta), n, level_energy(beta, n, s0), s0) for n in range(n_min, n_max + 1)]


def quantization_residual(beta, lam):
    """cos(s0 L) - beta sin(s0 L) with L = log sqrt(3 / lam)."""
    if not lam > 0:
        raise ValueError("lam must be positive")
    a = get_s0() * 0.5 * math.log(3.0 / lam)
    return math.cos(a) - beta * math.sin(a)


# -- eigencharges --------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class EigenchargeProfile:
    level: EfimovLevel
    profile: RadialProfile
    normalization: str


def level_grid(level: EfimovLevel, n=4096, span=(1e-6, 1e10)):
    """Geometric grid scaled by sqrt|E|, wide enough for the tail criterion."""
    k = math.sqrt(level.binding)
    return geometric_grid(span[0] * k, span[1] * k, n)


def _eigencharge_values(level, p):
    s0, E = level.s0, level.binding
    x = np.arcsinh(np.sqrt(3 * p * p / (4 * E)))
    return np.sin(s0 * x) / (p * np.sqrt(0.75 * p * p + E))


def eigencharge(level: EfimovLevel, nodes=None, weights=None, normalization="unit-rho"):
    """Closed-form s-wave eigencharge of a level; 'raw' or 'unit-rho' normalized."""
    if nodes is None:
        nodes, weights = level_grid(level)
    f = RadialProfile(nodes, _eigencharge_values(level, np.asarray(nodes, dtype=float)), weights)
    if normalization == "unit-rho":
        f = f.with_values(f.values / math.sqrt(f.norm2()))
    elif normalization != "raw":
        raise ValueError("normalization must be 'raw' or 'unit-rho'")
    return EigenchargeProfile(level, f, normalization)


def _mass_fraction_outside(level, p_lo, p_hi):
    """Exact fraction of int p^2 f^2 dp lying outside [p_lo, p_hi].

    In x the density is proportional to sin(s0 x)^2 / cosh x on x > 0.
    """
    s0 = level.s0
    dens = lambda x: math.sin(s0 * x) ** 2 * 2 * math.exp(-x) / (1 + math.exp(-2 * x))
    total = integrate.quad(dens, 0, np.inf, limit=400)[0]
    x_lo = float(np.arcsinh(math.sqrt(3 * p_lo ** 2 / (4 * level.binding))))
    x_hi = float(np.arcsinh(math.sqrt(3 * p_hi ** 2 / (4 * level.binding))))
    lo = integrate.quad(dens, 0, x_lo)[0]
    hi = integrate.quad(dens, x_hi, np.inf, limit=400)[0]
    return (lo + hi) / total


def radial_distribution(level: EfimovLevel, nodes=None, weights=None, tail_tol=1e-6) -> RadialProfile:
    """rho(p) = p^2 |f|^2 / int p^2 |f|^2 dp on the grid."""
    if nodes is None:
        nodes, weights = level_grid(level)
    nodes = np.asarray(nodes, dtype=float)
    if _mass_fraction_outside(level, nodes[0], nodes[-1]) > tail_tol:
        raise GridError("grid does not span the charge distribution")
    f = eigencharge(level, nodes, weights, "raw").profile
    rho = nodes ** 2 * np.abs(f.values) ** 2
    return f.with_values(rho / np.sum(f.weights * rho))


def quantile(rho: RadialProfile, q):
    """p at which the cumulative distribution reaches q (log-linear interpolation)."""
    c = np.cumsum(rho.weights * rho.values)
    c = c / c[-1]
    return float(np.exp(np.interp(q, c, np.log(rho.nodes))))


def interquantile_width(rho: RadialProfile, lo=0.25, hi=0.75):
    return quantile(rho, hi) - quantile(rho, lo)


# -- radial TMS equation -------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class TmsSolution:
    datum: RescaledProfile
    c: complex
    theta: RescaledProfile
    residual: float


def sin_abs_convolve(h_vals, x, s0):
    """int sin(s0 |x - y|) h(y) dy by trapezoid with a kink correction.

    The integrand has a derivative jump 2 s0 h(x) at y = x; Euler-Maclaurin
    gives the O(dx^2) correction (dx^2 s0 / 6) h(x).
    """
    n = x.size
    dx = x[1] - x[0]
    d = (np.arange(2 * n - 1) - (n - 1)) * dx
    full = fftconvolve(h_vals, np.sin(s0 * np.abs(d)), mode="full")
    return dx * full[n - 1:2 * n - 1] + dx * dx * s0 / 6.0 * h_vals


def tms_solve(lam, datum: RescaledProfile, c=0.0, config: QuadratureConfig = DEFAULT) -> TmsSolution:
    """General solution theta = c sin(s0 x) - (1/(2 s0)) sin(s0|.|) * (datum^ / gamma_plus)^v.

    The residual of theta - (4/(pi sqrt 3)) K * theta = datum is measured on the
    interior window.
    """
    s0 = get_s0()
    x = datum.x
    support = np.abs(datum.values) > 1e-14 * max(1e-300, float(np.max(np.abs(datum.values))))
    if np.any(support) and np.max(np.abs(x[support])) > config.x_interior:
        raise GridError("datum support must lie inside the interior window")
    F = fourier(datum)
    H = FourierProfile(F.s, F.values / eval_gamma(SpectralCurve.plus(), F.s))
    h_vals = inverse_fourier(H, datum, real=not np.iscomplexobj(datum.values))
    theta_vals = c * np.sin(s0 * x) - sin_abs_convolve(h_vals, x, s0) / (2 * s0)
    if np.isrealobj(datum.values) and np.imag(c) == 0:
        theta_vals = np.real(theta_vals)
    theta = RescaledProfile(x, theta_vals, lam)
    res = tms_residual(theta, datum, config)
    return TmsSolution(datum, complex(c), theta, res)


def tms_residual(theta: RescaledProfile, datum: RescaledProfile, config: QuadratureConfig = DEFAULT):
    out = apply_theta_operator(SpectralCurve.canonical(), theta, config).theta_out.values
    m = theta.interior(config.x_interior)
    return float(np.max(np.abs(out[m] - datum.values[m])))


def fit_cos(x, y, s0, window):
    """Least-squares y ~ a cos(s0 x + phi) on window[0] < x < window[1].

    Returns (a, phi, relative max misfit) with a >= 0 and phi in [0, 2 pi).
    """
    m = (x > window[0]) & (x < window[1])
    A = np.column_stack([np.cos(s0 * x[m]), np.sin(s0 * x[m])])
    coef, *_ = np.linalg.lstsq(A, y[m], rcond=None)
    a = float(math.hypot(coef[0], coef[1]))
    phi = math.atan2(-coef[1], coef[0]) % (2 * math.pi)
    resid = float(np.max(np.abs(A @ coef - y[m])))
    return a, phi, resid / a if a > 0 else math.inf


def bump_datum(coeffs, width=5.0, lam=1.0, config: QuadratureConfig = DEFAULT):
    """Smooth odd compactly supported datum: sum_k c_k x^(2k+1) times a C-infinity bump."""
    def func(x):
        t = x / width
        inside = np.abs(t) < 1
        ts = np.where(inside, t, 0.0)
        b = np.where(inside, np.exp(-1.0 / np.where(inside, 1 - ts * ts, 1.0)), 0.0)
        poly = sum(ck * ts ** (2 * k + 1) for k, ck in enumerate(coeffs))
        return poly * b
    return RescaledProfile.sample(func, lam, config)


# -- deficiency asymptotics ------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class DeficiencyResult:
    s: np.ndarray
    lambda_hat: np.ndarray
    a_fit: float
    sigma_fit: float
    fit_misfit: float
    W: complex
    z_over_lambda: float


def deficiency_hat(s):
    """Closed form of Lambda^(s): purely imaginary and odd."""
    s0 = get_s0()
    s = np.asarray(s, dtype=float)
    pi = math.pi
    t1 = s_over_sinh(pi / 2, s - s0)
    t2 = s_over_sinh(pi / 2, s + s0)
    # sinh(pi s/6) / ((1 + 2 cosh a)(1 + 2 cosh b)) written without overflow
    a = np.abs(pi * (s - s0) / 3)
    b = np.abs(pi * (s + s0) / 3)
    ea, eb = np.exp(-a), np.exp(-b)
    num = np.sign(s) * 0.5 * (-np.expm1(-pi * np.abs(s) / 3)) * np.exp(pi * np.abs(s) / 6 - a - b)
    t3 = (32 / (pi * SQRT3)) * math.sinh(pi * s0 / 6) * num / ((1 + ea + ea * ea) * (1 + eb + eb * eb))
    pref = 1j * math.sqrt(pi) / (8 * s0 * math.sqrt(2)) / eval_gamma(SpectralCurve.plus(), s)
    return pref * (t1 - t2 - t3)


def deficiency_amplitude_exact():
    """Leading large-x coefficient of sin(s0|.|) * Lambda along cos(s0 x): -i sqrt(2 pi) Lambda^(s0)."""
    return float(np.real(-1j * math.sqrt(2 * math.pi) * deficiency_hat(get_s0())))


def w_function(lam, z, a):
    L = 0.5 * math.log(3.0 / lam)
    s0 = get_s0()
    r = z / lam
    return (math.sin(s0 * L) + r * a * math.cos(s0 * L)) / (math.cos(s0 * L) - r * a * math.sin(s0 * L))


def deficiency_profile(lam, z, config: QuadratureConfig = DEFAULT) -> DeficiencyResult:
    """Lambda^, the fitted large-x amplitude of sin(s0|.|) * Lambda, and W(z) at first order in z/lam.

    The amplitude is signed: A(x) ~ a_fit cos(s0 x + sigma_fit) with sigma_fit in
    (-pi/2, pi/2].
    """
    if not lam > 0:
        raise ValueError("lam must be positive")
    s0 = get_s0()
    x = x_grid(config.x_max, config.x_n)
    dummy = RescaledProfile(x, np.zeros_like(x), lam)
    F = fourier(dummy)
    lh = deficiency_hat(F.s)
    Lam = inverse_fourier(FourierProfile(F.s, lh), dummy, real=True)
    A = sin_abs_convolve(Lam, x, s0)
    a, phi, misfit = fit_cos(x, A, s0, config.fit_window)
    if phi > math.pi:
        phi -= 2 * math.pi
    if phi > math.pi / 2:
        a, phi = -a, phi - math.pi
    elif phi <= -math.pi / 2:
        a, phi = -a, phi + math.pi
    W = w_function(lam, z, a)
    return DeficiencyResult(F.s, lh, a, phi, misfit, complex(W), abs(z) / lam)


# -- regularized models ------------------------------------------------------------------

@dataclass(frozen=True)
class NoBoundStateReport:
    curve: SpectralCurve
    minimum: float
    argmin: float
    expected_minimum: float
    positive: bool
    canonical_bracket: tuple


def no_bound_states_report(curve: SpectralCurve, s_max=50.0, n=100001) -> NoBoundStateReport:
    """Scan a regularized curve for its minimum and contrast with the canonical sign change."""
    if not curve.regularized:
        raise ValueError("curve must be regularized")
    s = np.linspace(-s_max, s_max, n)
    g = eval_gamma(curve, s)
    i = int(np.argmin(g))
    s0 = get_s0()
    lo, hi = s0 - 1e-6, s0 + 1e-6
    canon = SpectralCurve.canonical()
    bracket = (lo, hi) if eval_gamma(canon, lo) * eval_gamma(canon, hi) < 0 else ()
    return NoBoundStateReport(curve, float(g[i]), float(s[i]), curve.minimum(),
                              bool(np.all(g > 0)), bracket)
