"""Momentum-space sector operators, quadratic forms and regularizers.

A radial profile f(p) lives on a positive grid with quadrature weights for dp.
The sector-l kernel is K_l(p, q) = int_{-1}^{1} P_l(t) dt / (p^2 + q^2 + p q t + lam).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.special import eval_legendre

from .config import DEFAULT, GridError, geometric_grid
from .specfun import (SQRT3, SIGMA0_HE, SIGMA0_MF, SpectralCurve, Variant,
                      GAMMA_AT_ZERO, _gl)

KAPPA_PLUS = 16.0 / (math.pi * SQRT3) - 5.0 / 3.0
KAPPA_MINUS = 7.0 - 10.0 * math.pi / (3.0 * SQRT3)
KAPPA_MINUS_S_WAVE = GAMMA_AT_ZERO  # = -(4 pi / (3 sqrt 3) - 1)


@dataclass(frozen=True, eq=False)
class RadialProfile:
    nodes: np.ndarray
    values: np.ndarray
    weights: np.ndarray = field(default=None)

    def __post_init__(self):
        p = np.asarray(self.nodes, dtype=float)
        v = np.asarray(self.values)
        if not np.iscomplexobj(v):
            v = v.astype(float)
        if p.ndim != 1 or p.size == 0:
            raise GridError("empty profile")
        if v.shape != p.shape:
            raise GridError("values and nodes differ in shape")
        if not (np.all(np.isfinite(p)) and np.all(p > 0) and np.all(np.diff(p) > 0)):
            raise GridError("nodes must be finite, positive and increasing")
        w = self.weights
        if w is None:
            w = _trapezoid_weights(p)
        w = np.asarray(w, dtype=float)
        if w.shape != p.shape or np.any(w <= 0):
            raise GridError("weights must be positive and match nodes")
        object.__setattr__(self, "nodes", p)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "weights", w)

    @classmethod
    def sample(cls, func, nodes=None, weights=None):
        """Evaluate `func` on a grid (default: the geometric grid)."""
        if nodes is None:
            nodes, weights = geometric_grid()
        return cls(nodes, func(np.asarray(nodes)), weights)

    def with_values(self, values):
        return RadialProfile(self.nodes, values, self.weights)

    def norm2(self) -> float:
        """int p^2 |f|^2 dp on the grid."""
        return float(np.sum(self.weights * self.nodes ** 2 * np.abs(self.values) ** 2))

    def same_grid(self, other) -> bool:
        return self.nodes.shape == other.nodes.shape and np.array_equal(self.nodes, other.nodes)


def _trapezoid_weights(p):
    w = np.zeros_like(p)
    d = np.diff(p)
    w[:-1] += d / 2
    w[1:] += d / 2
    return w


@dataclass(frozen=True)
class SectorParams:
    ell: int = 0
    lam: float = 1.0
    alpha: float = 0.0

    def __post_init__(self):
        if int(self.ell) != self.ell or self.ell < 0:
            raise ValueError("ell must be a nonnegative integer")
        if not (math.isfinite(self.lam) and self.lam > 0):
            raise ValueError("lam must be positive")


# -- angular kernel ------------------------------------------------------------

def _atanh_over_u(u):
    small = np.abs(u) < 1e-3
    us = np.where(small, 0.5, u)
    u2 = u * u
    return np.where(small, 1 + u2 / 3 + u2 * u2 / 5 + u2 ** 3 / 7, np.arctanh(us) / us)


def angular_kernel(ell, p, q, lam, power=1, n_nodes=DEFAULT.angular_nodes):
    """int_{-1}^{1} P_l(t) dt / (p^2 + q^2 + p q t + lam)^power, power in {1, 2}.

    l = 0 uses closed forms; l >= 1 uses Gauss-Legendre in t.
    Broadcasts over p and q.
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if np.any(p < 0) or np.any(q < 0):
        raise ValueError("momenta must be nonnegative")
    if lam < 0:
        raise ValueError("lam must be nonnegative")
    a = p * p + q * q + lam
    b = p * q
    if ell == 0:
        if power == 1:
            # (1/(pq)) log((a + b)/(a - b)) = (2/a) atanh(u)/u with u = b/a
            out = 2.0 / a * _atanh_over_u(b / a)
        elif power == 2:
            out = 2.0 / ((a - b) * (a + b))
        else:
            raise ValueError("power must be 1 or 2")
    else:
        t, w = _gl(n_nodes)
        wl = w * eval_legendre(ell, t)
        a, b = np.broadcast_arrays(a, b)
        out = np.zeros(a.shape)
        tmp = np.empty(a.shape)
        for tk, wk in zip(t, wl):
            np.multiply(b, tk, out=tmp)
            tmp += a
            np.reciprocal(tmp, out=tmp)
            if power == 2:
                tmp *= tmp
            tmp *= wk
            out += tmp
    return float(out) if out.ndim == 0 else out


@lru_cache(maxsize=24)
def _kernel_matrix_cached(ell, lam, power, key):
    p = np.frombuffer(key, dtype=float)
    m = angular_kernel(ell, p[:, None], p[None, :], lam, power)
    m.setflags(write=False)
    return m


def kernel_matrix(ell, p, lam, power=1):
    """K_l(p_i, p_j) on a grid, cached by (l, lam, power, grid)."""
    p = np.ascontiguousarray(p, dtype=float)
    return _kernel_matrix_cached(int(ell), float(lam), int(power), p.tobytes())


# -- operator and forms ----------------------------------------------------------

def _dispersion(p, lam):
    return np.sqrt(0.75 * p * p + lam)


def apply_T_sector(params: SectorParams, f: RadialProfile) -> RadialProfile:
    """(T_lam^(l) + alpha) f evaluated on the grid of f."""
    p, w = f.nodes, f.weights
    K = kernel_matrix(params.ell, p, params.lam)
    g = (2 * math.pi ** 2 * _dispersion(p, params.lam) + params.alpha) * f.values
    g = g - 4 * math.pi * (K @ (w * p * p * f.values))
    return f.with_values(g)


class FormKind(str, enum.Enum):
    T_PAIRING = "T"
    W_PAIRING = "W"
    PHI = "Phi"
    PSI = "Psi"


def _check_pair(f, g):
    if not f.same_grid(g):
        raise GridError("profiles live on different grids")


def phi_form(lam, f, g=None):
    g = f if g is None else g
    _check_pair(f, g)
    p, w = f.nodes, f.weights
    return 2 * math.pi ** 2 * np.sum(w * p * p * _dispersion(p, lam) * np.conj(f.values) * g.values)


def psi_form(ell, lam, f, g=None):
    """Psi_{lam,l}[f, g] = 2 pi int int p^2 q^2 conj(f(p)) g(q) K_l(p, q); lam = 0 allowed."""
    g = f if g is None else g
    _check_pair(f, g)
    p, w = f.nodes, f.weights
    K = kernel_matrix(ell, p, lam)
    a = w * p * p * np.conj(f.values)
    b = w * p * p * g.values
    return 2 * math.pi * (a @ (K @ b))


def _real_if_real(x, f, g):
    if not (np.iscomplexobj(f.values) or np.iscomplexobj(g.values)):
        return float(np.real(x))
    return complex(x)


def sector_form(kind, params: SectorParams, f: RadialProfile, g: RadialProfile | None = None):
    """Bilinear forms on a sector: T pairing, W pairing, Phi, Psi."""
    kind = FormKind(kind)
    g = f if g is None else g
    _check_pair(f, g)
    lam, ell = params.lam, params.ell
    p, w = f.nodes, f.weights
    if kind is FormKind.PHI:
        out = phi_form(lam, f, g)
    elif kind is FormKind.PSI:
        out = psi_form(ell, lam, f, g)
    elif kind is FormKind.T_PAIRING:
        out = phi_form(lam, f, g) - 2 * psi_form(ell, lam, f, g)
        if params.alpha:
            out = out + params.alpha * np.sum(w * p * p * np.conj(f.values) * g.values)
        direct = np.sum(w * p * p * np.conj(f.values) * apply_T_sector(params, g).values)
        scale = 1e-9 * max(1.0, abs(out), abs(direct))
        assert abs(out - direct) <= scale, "T pairing inconsistent with Phi - 2 Psi"
    else:
        K2 = kernel_matrix(ell, p, lam, power=2)
        a = w * p * p * np.conj(f.values)
        b = w * p * p * g.values
        diag = np.sum(a * g.values * 3 * math.pi ** 2 / _dispersion(p, lam))
        out = diag + 12 * math.pi * (a @ (K2 @ b))
    return _real_if_real(out, f, g)


def kappa_ratio(params: SectorParams, f: RadialProfile) -> float:
    """T pairing of f with itself over Phi[f]; normalization-free."""
    den = float(np.real(phi_form(params.lam, f)))
    if den == 0:
        raise ZeroDivisionError("zero profile")
    num = float(np.real(sector_form(FormKind.T_PAIRING, SectorParams(params.ell, params.lam), f)))
    return num / den


def kappa_bounds(ell):
    """(lower, upper) bounds of kappa_ratio for sector l."""
    return (KAPPA_MINUS_S_WAVE if ell == 0 else KAPPA_MINUS), KAPPA_PLUS


# -- regularizers ----------------------------------------------------------------

def _log_antiderivative(p, q):
    """F with F'(q) = log((p + q)/|p - q|)."""
    d = q - p
    ad = np.abs(d)
    t2 = np.where(ad > 0, d * np.log(np.where(ad > 0, ad, 1.0)), 0.0)
    return (p + q) * np.log(p + q) - t2


def _mf_integral(p, w, values):
    """I(p_i) = int q f(q) log((p_i + q)/|p_i - q|) dq with singularity subtraction."""
    P = p[:, None]
    Q = p[None, :]
    with np.errstate(divide="ignore"):
        L = np.log((P + Q) / np.abs(P - Q))
    np.fill_diagonal(L, 0.0)
    qf = p * values
    # sum_j w_j (q_j f_j - p_i f_i) L_ij
    inner = L @ (w * qf) - qf * (L @ w)
    back = qf * (_log_antiderivative(p, p[-1]) - _log_antiderivative(p, p[0]))
    # piece below the first node with f held at f(p_0):
    # int_0^a q log((p+q)/|p-q|) dq = ((a^2 - p^2)/2) log((p+a)/|p-a|) + p a
    a = p[0]
    d = np.abs(p - a)
    head = np.where(d > 0, 0.5 * (a * a - p * p) * np.log((p + a) / np.where(d > 0, d, 1.0)), 0.0) + p * a
    return inner + back + values[0] * head


def apply_K_regularizer(curve: SpectralCurve, params: SectorParams, f: RadialProfile) -> RadialProfile:
    """Action of the three-body regularizer on an s-wave radial profile."""
    if params.ell != 0:
        raise ValueError("regularizers act on the l = 0 sector only")
    if not curve.regularized:
        raise ValueError("curve must be Minlos-Faddeev or high-energy")
    p, w = f.nodes, f.weights
    if curve.variant is Variant.HIGH_ENERGY:
        out = 2 * math.pi ** 2 * (SIGMA0_HE + curve.sigma) * _dispersion(p, params.lam) * f.values
    else:
        out = (SIGMA0_MF + curve.sigma) / math.pi * _mf_integral(p, w, f.values) / p
    return f.with_values(out)


# -- ball integrals --------------------------------------------------------------

def ball_integral(p, lam, R):
    """int_{|k| < R} dk / (p^2 + k^2 + p.k + lam) in closed form, and 4 pi R - 2 pi^2 c.

    c = sqrt(3 p^2 / 4 + lam). Returns (exact, leading).
    """
    if not R > 0:
        raise ValueError("R must be positive")
    p = abs(float(p))
    c = math.sqrt(0.75 * p * p + lam)
    leading = 4 * math.pi * R - 2 * math.pi ** 2 * c
    if p == 0:
        r = math.sqrt(lam)
        return 4 * math.pi * (R - r * math.atan(R / r)), leading
    qm = R * R - p * R + p * p + lam
    logratio = math.log1p(2 * p * R / qm)
    exact = (math.pi / p) * (R * R + p * p / 2 + lam) * logratio + 2 * math.pi * R \
        - 2 * math.pi * c * (math.atan((2 * R + p) / (2 * c)) + math.atan((2 * R - p) / (2 * c)))
    return exact, leading


def ball_integral_squared(p, lam):
    """int_{R^3} dk / (p^2 + k^2 + p.k + lam)^2 = pi^2 / sqrt(3 p^2 / 4 + lam)."""
    return math.pi ** 2 / math.sqrt(0.75 * p * p + lam)
