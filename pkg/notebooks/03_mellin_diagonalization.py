# %% [markdown]
# # Diagonalizing the s-wave operator
#
# In the rescaled variable x the operator is a convolution, so it can be applied
# two ways: directly on the grid, or as gamma(s) times the Fourier transform.

# %%
import numpy as np

from efimov_tms import SpectralCurve, get_s0
from efimov_tms import mellin as M
from efimov_tms.checks import eigencharge_theta

theta = M.RescaledProfile.sample(lambda x: np.sin(1.3 * x) * np.exp(-x * x / 6))
for curve in (SpectralCurve.canonical(), SpectralCurve.minlos_faddeev(1.0), SpectralCurve.high_energy(1.0)):
    r = M.apply_theta_operator(curve, theta)
    print("%-16s route discrepancy %.2e  tail bound %.1e" % (curve.variant.value, r.discrepancy, r.tail_bound))

# %%
# sin(s0 x) is annihilated: this is the eigencharge at lam = |E|.
th = eigencharge_theta(1.0, 0)
out = M.apply_theta_operator(SpectralCurve.canonical(), th).theta_out.values
print("eigen residual on the interior:", np.max(np.abs(out[th.interior()])))

# %%
# Squeezing sin(s0 x) drives the quadratic form to minus infinity (Thomas collapse).
s0 = get_s0()
for eps, q in M.rayleigh_scan(lambda x: np.where(np.abs(x) <= 40, np.sin(s0 * x), 0.0), [1, 0.5, 0.25, 0.125]):
    print("eps=%.3f  quotient=% .4g" % (eps, q))
