# # Spin-orbit fine structure
#
# Adding the spin-orbit term splits each vibronic branch into Kramers
# doublets. The vibronic dressing quenches the orbital splitting.

import numpy as np

from sivpolaron import V1, CenterParams, spin_orbit_structure

# Without phonons the E manifold splits into four equally spaced doublets.

bare = CenterParams(hbar_omega=100.0, delta=5.0, lambda_par=V1.lambda_par)
e_branch = spin_orbit_structure(bare, n_max=0)[1]
print("bare doublet spacing:", np.diff(e_branch.doublet_energies), "meV")

# The full model, on a smaller basis so the demo runs quickly.

for b in spin_orbit_structure(V1, n_max=6, n_branches=4):
    line = f"branch {b.branch_id}: {len(b.doublet_energies)} doublets at {b.energy:.3f} meV"
    if b.delta is not None:
        line += f", Delta = {b.delta_ghz:.3f} GHz"
    if b.d_so is not None:
        line += f", D_SO = {b.d_so_mhz:.3f} MHz"
    print(line)
