# %% [markdown]
# # Radial TMS equation with a compactly supported datum
#
# The general solution is c sin(s0 x) plus a particular solution that becomes
# a pure cosine of frequency s0 outside the support of the datum.

# %%
import numpy as np

from efimov_tms import get_s0
from efimov_tms import spectrum as SP

rng = np.random.default_rng(0)
datum = SP.bump_datum(rng.normal(size=3), width=5.0)
sol = SP.tms_solve(1.0, datum, c=0.3)
print("residual on |x| <= 25:", sol.residual)

# %%
a, phi, misfit = SP.fit_cos(sol.theta.x, sol.theta.values, get_s0(), (20.0, 25.0))
print("tail ~ %.6f cos(s0 x + %.6f), relative misfit %.1e" % (a, phi, misfit))

# %%
# Deficiency asymptotics: amplitude from the closed form against the fitted one.
r = SP.deficiency_profile(1.0, 0.01)
print("exact amplitude", SP.deficiency_amplitude_exact(), " fitted", r.a_fit, " phase", r.sigma_fit)
print("W(z) at z/lam = %.2g:" % r.z_over_lambda, r.W)
