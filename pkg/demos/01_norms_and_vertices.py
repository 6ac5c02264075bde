"""Polytopes as unit balls: facets in, vertices and norms out."""
# %%
import numpy as np

from mink import SymmetricPolytope, gauge_eval, standard_body

# %% The regular hexagon with unit inradius; vertices are derived, never given.
H = standard_body("hexagon")
for v, active in H.vertices:
    print(np.round(v, 6), "active facets", sorted(active), "norm", gauge_eval(v, H))

# %% The same point has different lengths in different norms.
x = [1.0, 1.0]
for name in ("cube", "cross", "hexagon"):
    print(f"{name:8s} ||(1,1)|| = {gauge_eval(x, standard_body(name, 2)):.6f}")

# %% Bodies are validated on construction; this one is not centred.
try:
    SymmetricPolytope([[1, 0], [0, 1], [-1, 0]])
except ValueError as err:
    print("rejected:", err.reason())
