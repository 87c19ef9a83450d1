# %% [markdown]
# # Regularized curves
#
# Both regularizations lift gamma so that its minimum sits at s = 0 and is
# positive, which removes the Efimov levels altogether.

# %%
import math

from efimov_tms import SpectralCurve
from efimov_tms import spectrum as SP

for sigma in (0.1, 1.0, 10.0):
    for curve in (SpectralCurve.minlos_faddeev(sigma), SpectralCurve.high_energy(sigma)):
        r = SP.no_bound_states_report(curve)
        print("%-15s sigma=%5.1f min=%.10f (expected %.10f) at s=%.3g positive=%s"
              % (curve.variant.value, sigma, r.minimum, r.expected_minimum, r.argmin, r.positive))

# %%
# Large-s behaviour differs: the momentum cutoff tends to 1 + sigma0 + sigma,
# the position-space one returns to 1 only like 1/s.
print("HE limit", SpectralCurve.high_energy(1.0).limit_at_infinity())
print("MF limit", SpectralCurve.minlos_faddeev(1.0).limit_at_infinity())
print("sigma/(2 pi sqrt 3) for sigma=1:", 1 / (2 * math.pi * math.sqrt(3)))
