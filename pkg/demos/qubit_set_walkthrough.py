"""Qubit coupled to a single-electron transistor: spectrum, correlators, Bloch blocks.

Run with ``python3 demos/qubit_set_walkthrough.py``.
"""

import numpy as np

from liouvsym.models import (
    BLOCH_LABELS,
    EffParams,
    analytic_spectrum,
    bloch_liouvillian,
    block_projector,
    build_heff,
    cancellation_report,
    qubit_liouvillian,
    qubit_marginal_trajectory,
)
from liouvsym.liouville_space import commute_residual
from liouvsym.operator_core import hermitian_eig, random_density_matrix
from liouvsym.symmetry_analysis import block_decompose, difference_degeneracies

rng = np.random.default_rng(0)
p = EffParams(alpha=0.7, gamma=-1.1, delta=0.4, zeta=0.9, eta=-0.3)  # beta = epsilon = 0

# closed-form spectrum vs. Jacobi eigensolver
w = analytic_spectrum(p)
w_num, _ = hermitian_eig(build_heff(p))
print("eigenvalues      ", np.round(w, 6))
print("max deviation    ", np.abs(w - w_num).max())

# two equal energy differences, w3 - w1 = w4 - w2
rep = difference_degeneracies(w)
print("(0,2) and (1,3) share a class:", rep.class_of((0, 2)) == rep.class_of((1, 3)))

# 25 of the 45 nontrivial correlators vanish identically
cr = cancellation_report(p)
print(len(cr.vanishing), "vanishing:", " ".join(sorted(cr.vanishing)))

# breaking beta = 0 destroys some of them
cr_b = cancellation_report(p.replace(beta=0.3))
print("with beta = 0.3:", len(cr_b.vanishing), "vanishing")

# the 15x15 generator of Pauli coefficients splits 5 + 10
m = bloch_liouvillian(p)
bd = block_decompose(m, BLOCH_LABELS)
print(bd.table())

P = block_projector()
print("|[L, P]| =", commute_residual(qubit_liouvillian(p), P))

# the qubit's y-z marginal ignores whatever the SET started in
t = np.linspace(0, 10, 6)
a = qubit_marginal_trajectory(p, 0.9, 0.4, random_density_matrix(2, rng), t)
b = qubit_marginal_trajectory(p, 0.9, 0.4, random_density_matrix(2, rng), t)
print(np.column_stack([t, a]))
print("spread across SET states:", np.abs(a - b).max())
