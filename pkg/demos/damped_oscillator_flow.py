"""Phase-space flow of the damped oscillator and its scaling symmetry.

Writes ``flow_gamma0.csv`` and ``flow_gamma005.csv`` (columns t, p, q) in the
current directory. Plot q against p with any tool to see a circle and a
logarithmic spiral.
"""

from fractions import Fraction

import numpy as np

from liouvsym import classical as cl
from liouvsym.serialization import series_csv

D = 6
H = cl.PolyFunction.oscillator_hamiltonian(D)
L = cl.classical_liouvillian(H, D)
E = cl.scaling_generator(D)

print("L(q) =", L(cl.PolyFunction.q(D)).coeffs, " L(p) =", L(cl.PolyFunction.p(D)).coeffs)
print("[L, d_H] == 0:", cl.op_commutator(L, E).is_zero())
print("[H*, d_H] == 0:", cl.op_commutator(cl.multiplication_op(H, D), E).is_zero())

g = Fraction(1, 20)
for mu in (Fraction(0), g):
    ltot = cl.damped_liouvillian(g, mu, D)
    print(f"gamma={g}, mu={mu}: [L_tot, d_H] == 0 ->", cl.op_commutator(ltot, E).is_zero())
    print("   eigenfrequencies", cl.damped_eigenfrequencies(float(g), float(mu)))

t = np.linspace(0, 4 * np.pi, 401)
for gamma, name in ((0.0, "flow_gamma0.csv"), (0.05, "flow_gamma005.csv")):
    traj = cl.flow_trajectory(gamma, gamma, (0.0, 1.0), t)
    with open(name, "w") as fh:
        fh.write(series_csv(["t", "p", "q"], np.column_stack([t, traj]).tolist()))
    print(name, "final radius", np.hypot(*traj[-1]), "expected", np.exp(-gamma * t[-1]))

# scaling the start point scales the whole trajectory
a = cl.flow_trajectory(0.05, 0.0, (0.3, 0.5), t)
b = cl.flow_trajectory(0.05, 0.0, (0.6, 1.0), t)
print("scaled-start mismatch:", np.abs(2 * a - b).max())
