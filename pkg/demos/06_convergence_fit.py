# # Extrapolating to large supercells
#
# Quantities computed in finite supercells approach their limit
# exponentially in the cell size.

import numpy as np

from sivpolaron import fit_exponential_convergence

sizes = np.array([96.0, 576.0, 768.0, 1728.0])
values = 0.29 + 0.1 * np.exp(-sizes / 200.0)

res = fit_exponential_convergence(sizes=sizes, values=values)
print(f"limit {res['v_inf']:.4f}, length {res['length']:.1f}, converged {res.converged}")
