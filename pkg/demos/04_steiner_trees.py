"""Exact shortest networks in polygonal norms, approximate ones in the plane."""
# %%
import math

import numpy as np

from mink import EuclideanGauge, mst_length, solve_smt, standard_body
from mink.steiner import steiner_angles
from mink.svg import render_tree

# %% Classical Euclidean case: the Fermat point meets all edges at 120 degrees.
tri = np.array([[0.0, 0.0], [1.0, 0.0], [0.5, math.sqrt(3) / 2]])
tree, rep = solve_smt(tri, EuclideanGauge(2))
print("length", tree.length, "angles", steiner_angles(tree))

# %% The same four points under three norms.
pts = np.array([[0.0, 0.0], [1.0, 0.2], [0.3, 1.0], [-0.8, 0.5]])
for name in ("cube", "cross", "hexagon"):
    K = standard_body(name, 2)
    tree, rep = solve_smt(pts, K)
    print(f"{name:8s} SMT {tree.length:.6f}  MST {mst_length(pts, K):.6f}  "
          f"max degree {rep.max_degree}")

# %% Drawings for planar instances.
tree, _ = solve_smt(pts, standard_body("hexagon"))
with open("hexagon_tree.svg", "w") as fh:
    fh.write(render_tree(tree, standard_body("hexagon")))
print("wrote hexagon_tree.svg")
