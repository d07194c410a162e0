"""
Wigner slices of the evolving pair
==================================

The Wigner function restricted to p1 = p2 = 0 is an ellipse in the
(q1, q2) plane; its elongation along the diagonal shows how much two-mode
squeezing is left.
"""

import numpy as np

from ptesd import ResonatorNetwork, linear_system, two_mode_squeezed, wigner_slice
from ptesd.dynamics import propagate
from ptesd.measures import slice_anisotropy

V0 = two_mode_squeezed(1.0)
for J in (1.0, 0.53):
    system = linear_system(ResonatorNetwork("binary", 1.0, 1e-3, J))
    for t in (0.5, 0.75):
        V = propagate(system, V0, t, 1e-3)
        q, _, W = wigner_slice(V, np.linspace(-3, 3, 7), np.linspace(-3, 3, 7))
        print(f"J/Gamma = {J}, Gamma*t = {t}: anisotropy {slice_anisotropy(V):.3f}, W(0,0) = {W[3, 3]:.4f}")

# a coarse text rendering of one slice: q1 to the right, q2 upwards
q1, q2, W = wigner_slice(propagate(linear_system(ResonatorNetwork("binary", 1.0, 1e-3, 0.53)), V0, 0.75, 1e-3),
                         np.linspace(-3, 3, 25), np.linspace(-3, 3, 25))
shades = " .:-=+*#%@"
for row in (W / W.max()).T[::-1]:
    print("".join(shades[min(int(v * len(shades)), len(shades) - 1)] for v in row))
