# # Polaronic spectrum of the V1 and V2 centers
#
# The excited state couples a threefold orbital manifold to three degenerate
# phonon modes. We build the Hamiltonian in a truncated phonon basis and
# diagonalize it.

import numpy as np

from sivpolaron import V1, V2, enumerate_basis, polaronic_gap, polaronic_spectrum

# The basis keeps every phonon configuration with at most n_max quanta in total.

basis = enumerate_basis(8)
print("phonon states:", len(basis), " product states:", 3 * len(basis))

# Lowest multiplets, with the weight of each orbital character.

for params in (V1, V2):
    spec = polaronic_spectrum(params, n_max=8)
    print(f"\n{params.label}: polaronic gap {polaronic_gap(spec):.3f} meV")
    for group in spec.multiplets()[:4]:
        s = group[0]
        print(f"  E = {s.energy_rel:8.3f} meV  x{len(group)}  c_a1 = {s.c_a1:.2f}  "
              f"sum c_e = {sum(t.c_e for t in group):.2f}")

# Truncation convergence: the gap settles as n_max grows.

gaps = [polaronic_gap(polaronic_spectrum(V1, n_max=n)) for n in range(4, 11)]
print("\nV1 gap vs n_max:", np.round(gaps, 4))
