# %% [markdown]
# # The curve gamma(s) and its root
#
# The s-wave operator becomes multiplication by gamma(s) after the log-rescaling
# and Fourier transform. Its positive root s0 fixes everything downstream.

# %%
import math

import numpy as np

from efimov_tms import SpectralCurve, eval_gamma, find_s0
from efimov_tms.specfun import GAMMA_AT_ZERO

canon = SpectralCurve.canonical()
r = find_s0(1e-14)
print("s0 =", r.s0, " residual =", r.residual, " iterations =", r.iterations)
print("exp(2 pi / s0) =", math.exp(2 * math.pi / r.s0))

# %%
# gamma is negative at 0, crosses zero once at s0, and tends to 1.
for s in (0.0, 0.5, r.s0, 2.0, 5.0, 20.0):
    print("%6.3f  % .12f" % (s, eval_gamma(canon, s)))
print("gamma(0) closed form:", GAMMA_AT_ZERO)

# %%
# gamma_plus divides out the two roots; the Taylor branch keeps it smooth there.
plus = SpectralCurve.plus()
s = r.s0 + np.array([-2e-3, -5e-4, 0.0, 5e-4, 2e-3])
print(np.column_stack([s, eval_gamma(plus, s)]))
