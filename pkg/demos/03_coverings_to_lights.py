"""Covering a body by smaller copies, and turning the cover into lights."""
# %%
import numpy as np

from mink import (certify, convert_covering_to_lights, corner_covering, covering_cost,
                  cube_halfcover, illuminates_body, random_symmetric_polygon)

# %% Half-size cubes cover the cube; the verifier proves it.
for d in (2, 3, 4):
    cert = cube_halfcover(d)
    print(f"d={d}: {len(cert.homothets)} copies, verdict {cert.verdict}, "
          f"cost {covering_cost(cert)}")

# %% Drop one copy and the verifier points at the hole.
partial = certify(cube_halfcover(2).without(0))
print(partial.verdict, "first witness cell:\n", partial.witnesses[0].points)

# %% Any verified covering yields lights with at most twice its cost.
rng = np.random.default_rng(1)
K = random_symmetric_polygon(rng, 5)
cert = certify(corner_covering(K, rng))
lights = convert_covering_to_lights(cert, eps=1e-6)
print("covering", cert.verdict, "cost", round(covering_cost(cert), 4))
print("lights cost", round(lights.cost, 4), "illuminates", illuminates_body(lights.lights, K))
