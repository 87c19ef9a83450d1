"""Grid and tolerance settings shared by all modules."""
from __future__ import annotations

from dataclasses import dataclass, asdict

import numpy as np


class GridError(ValueError):
    """Raised when a grid is incompatible or too small for the requested accuracy."""


@dataclass(frozen=True)
class QuadratureConfig:
    # momentum grid (geometric)
    p_min: float = 1e-4
    p_max: float = 1e4
    p_n: int = 2048
    # rescaled grid (uniform, periodic, symmetric)
    x_max: float = 40.0
    x_n: int = 2 ** 14
    x_interior: float = 25.0
    fit_window: tuple = (20.0, 25.0)
    # Gauss-Legendre orders
    angular_nodes: int = 64
    s_curve_nodes: int = 128
    # removable singularity handling
    series_cutoff: float = 1e-4
    taylor_band: float = 1e-3
    # tail of kernels past the interior window
    tail_tol: float = 1e-5

    def __post_init__(self):
        if not (0 < self.p_min < self.p_max) or self.p_n < 4:
            raise GridError("bad momentum grid")
        if self.x_max <= 0 or self.x_n < 16 or self.x_n % 2:
            raise GridError("bad rescaled grid")
        if not 0 < self.x_interior < self.x_max:
            raise GridError("interior window must lie inside the grid")

    @property
    def x_step(self) -> float:
        return 2.0 * self.x_max / self.x_n

    def as_dict(self) -> dict:
        return asdict(self)


DEFAULT = QuadratureConfig()


def geometric_grid(p_min=DEFAULT.p_min, p_max=DEFAULT.p_max, n=DEFAULT.p_n):
    """Nodes uniform in log p and trapezoid weights for dp."""
    u = np.linspace(np.log(p_min), np.log(p_max), n)
    p = np.exp(u)
    du = u[1] - u[0]
    w = p * du
    w[0] *= 0.5
    w[-1] *= 0.5
    return p, w


def x_grid(x_max=DEFAULT.x_max, n=DEFAULT.x_n):
    """Periodic symmetric grid x_j = (j - n/2) h, h = 2 x_max / n."""
    h = 2.0 * x_max / n
    return (np.arange(n) - n // 2) * h
