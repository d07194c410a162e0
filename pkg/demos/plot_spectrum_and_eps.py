"""
Eigenfrequencies and exceptional points
=======================================

Sweep the coupling of a gain-loss pair and a gain-neutral-loss chain and
watch the normal-mode frequencies turn from real to imaginary.
"""

import numpy as np

from ptesd import ResonatorNetwork, classify_phase, eigenfrequencies, locate_ep

for topology in ("binary", "ternary"):
    net = ResonatorNetwork(topology, gain_rate=1.0)

    # the critical coupling comes from a scan plus bisection on the spectrum
    j_ep, order = locate_ep(net)
    print(f"{topology}: exceptional point of order {order} at J/Gamma = {j_ep:.10f}")

    for j in np.linspace(0.0, 1.0, 6):
        w = eigenfrequencies(net.with_coupling(j))
        phase = classify_phase(net.with_coupling(j)).value
        print(f"  J/Gamma = {j:.2f}  {phase:>18}  " + "  ".join(f"{z.real:+.4f}{z.imag:+.4f}j" for z in w))
    print()

# at the EP itself eigenvalues and eigenvectors merge; a dense solver
# resolves an order-3 coalescence only to about eps**(1/3)
w = eigenfrequencies(ResonatorNetwork("ternary", 1.0, coupling=1 / (2 * np.sqrt(2))))
print("ternary frequencies at the EP:", np.round(w, 4))
