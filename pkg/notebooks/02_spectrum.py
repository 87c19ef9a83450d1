# %% [markdown]
# # Efimov levels
#
# For each three-body parameter beta the s-wave levels form one geometric
# sequence with ratio exp(2 pi / s0). Changing beta slides the whole sequence.

# %%
import numpy as np

from efimov_tms import spectrum as SP

for beta in (-2.0, 0.0, 1.0, 10.0):
    lv = SP.efimov_levels(beta, -2, 2)
    print("beta=%5.1f" % beta, " ".join("% .4e" % l.energy for l in lv))

# %%
# The quantization condition cos(s0 L) = beta sin(s0 L), L = log sqrt(3 / lam),
# vanishes exactly at the binding energies and changes sign between them.
lam = np.geomspace(1e-4, 3, 9)
print(np.column_stack([lam, [SP.quantization_residual(1.0, x) for x in lam]]))

# %%
# Radial distributions of consecutive levels: the same shape on a log axis,
# shifted by the Efimov ratio, so the linear width grows by about 22.7.
for lv in SP.efimov_levels(1.0, 2, 3):
    rho = SP.radial_distribution(lv)
    print(lv.n, "median p = %.4g" % SP.quantile(rho, 0.5), "IQR = %.4g" % SP.interquantile_width(rho))
