"""Ladder superoperators of the truncated oscillator and the Stark ladder."""

import numpy as np

from liouvsym.models import (
    coherent_state,
    harmonic_oscillator,
    ladder_superop_algebra,
    ladder_superops,
    stark_ladder,
    uncoupled_composite,
)

ho = harmonic_oscillator(20)
rep = ladder_superop_algebra(ho.a, ho.h, (0, 15))
for k, v in rep.to_dict().items():
    print(f"{k:28s} {v}")

# [S+, S-] does not reduce to iL; on the window it equals -(H_l + H_r)
print("=> [S+,S-] + H_l + H_r vanishes, [S+,S-] - iL does not")

# coherent states are eigenvectors of S- with eigenvalue |alpha|^2
alpha = 0.5j
ket = coherent_state(alpha, 30)
rho = np.outer(ket, ket.conj())
_, sm = ladder_superops(harmonic_oscillator(30).a)
print("S- eigenrelation error:", np.abs(sm(rho) - abs(alpha) ** 2 * rho).max())

# Stark ladder: equally spaced levels again, and now [S+, S-] = 0 away from the edges
st = stark_ladder(20, 0.7)
srep = ladder_superop_algebra(st.a, st.h, (3, 17))
print("Stark [L,S+], [L,S-], [S+,S-]:", srep.l_splus, srep.l_sminus, srep.splus_sminus)

# two uncoupled subsystems: every w_ik - w_il = w_jk - w_jl shows up as one class
comp = uncoupled_composite(np.diag([0.0, 1.0]), np.diag([0.0, np.pi]))
print("identities confirmed:", comp.identities_confirmed, "/", comp.identities_checked)
