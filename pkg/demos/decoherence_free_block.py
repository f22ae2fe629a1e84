"""A dissipator confined to one Liouville block leaves the other block intact."""

import numpy as np

from liouvsym.models import (
    BLOCH_LABELS,
    EffParams,
    bloch_liouvillian,
    block_projector,
    qubit_liouvillian,
    ten_block_projector,
)
from liouvsym.open_system import (
    Dissipator,
    block_leakage,
    dfls_scan,
    evolve,
    lindblad_superop,
    pauli_dephasing,
    projected_dissipator,
    sigma_minus,
)
from liouvsym.operator_core import pauli
from liouvsym.symmetry_analysis import block_decompose, dfls_check

p = EffParams(alpha=0.7, gamma=-1.1, delta=0.4, zeta=0.9, eta=-0.3)
l_u = qubit_liouvillian(p)

# Pauli dephasing squeezed onto the ten-block. No Hermitian jump operator
# vanishes on the five-block by itself, so the confinement is put in by hand.
l_d = projected_dissipator(lindblad_superop(pauli_dephasing(["0x", "zz", "x0"], [0.4, 0.3, 0.2])),
                           ten_block_projector())
leaky = l_d + lindblad_superop(Dissipator([sigma_minus(2, 1)], [1e-2]))

bd = block_decompose(bloch_liouvillian(p), BLOCH_LABELS)
for r in dfls_scan(l_u, l_d, bd):
    print(r.labels[:3], "... decoherence free:", r.decoherence_free)

P = block_projector()
print("confined:", dfls_check(l_d, P).annihilated, " perturbed:", dfls_check(leaky, P).annihilated)

rho0 = np.kron(0.5 * (np.eye(2) + 0.6 * pauli("y") + 0.7 * pauli("z")), np.eye(2) / 2)
t = np.linspace(0, 10, 11)
print(" t    leak(confined)   leak(perturbed)")
for ti, a, b in zip(t, block_leakage(evolve(l_u + l_d, rho0, t), P), block_leakage(evolve(l_u + leaky, rho0, t), P)):
    print(f"{ti:4.1f}  {a:.3e}        {b:.3e}")
