# # Strain shift of the zero-phonon line
#
# The shift is linear in the diagonal strain components.

import numpy as np

from sivpolaron import V1, StrainTensorDiag, fit_linear_slope, zpl_strain_shift

eps = StrainTensorDiag(eps_xx=7.5e-5)
print("V1, eps_xx = 7.5e-5:", zpl_strain_shift(V1.strain_coeffs, eps), "meV")

# Recover a coefficient from a set of computed ZPL energies.

x = np.linspace(-0.003, 0.003, 7)
zpl = 1.45 + V1.strain_coeffs[2] * x
res = fit_linear_slope(x=x, y=zpl)
print(f"fitted slope {res['a']:.6f} eV/strain, intercept {res['b']:.6f} eV")
