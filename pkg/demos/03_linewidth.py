# # Optical linewidth
#
# A two-phonon process activated across the polaronic gap broadens the line
# on top of the radiative and residual widths.

import numpy as np

from sivpolaron import V1, fit_linewidth, linewidth_model

t = np.arange(4.0, 29.0, 2.0)
gamma = linewidth_model(t, V1.linewidth_a, V1.delta_p, V1.gamma_r, V1.gamma_1)
for ti, g in zip(t, gamma):
    print(f"{ti:5.1f} K  {g:7.4f} GHz")

# Add some noise and fit A and Gamma_1 back, holding the gap fixed.

rng = np.random.default_rng(1)
noisy = gamma + rng.normal(0, 0.05, len(t))
res = fit_linewidth(np.column_stack([t, noisy]), V1.delta_p, V1.gamma_r)
for name in ("A", "gamma_1"):
    print(f"{name:8s} = {res[name]:.4f} +/- {res.std_errors[name]:.4f} {res.units[name]}")
