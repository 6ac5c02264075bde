"""High-degree vertices in shortest trees, bounded by the illumination cost."""
# %%
from mink import (bezdek_parameter, degree_bound_check, standard_body, star_smt_test,
                  steiner_star_test, thm2_local_move)

# %% A star from the origin to all hexagon vertices is already shortest.
H = standard_body("hexagon")
print(star_smt_test(H, H.vertices.points).to_json())

# %% Without the centre as a terminal, four of the vertices still meet in a star.
print(steiner_star_test(H, H.vertices.points[[0, 1, 3, 4]]).to_json())

# %% Rerouting through a light: lit vertices never outnumber the light's norm.
p = bezdek_parameter(H).B_witness.lights[0]
move = thm2_local_move(H, H.vertices.points, p, 1e-4)
print("lit", len(move.illuminated), "norm", round(move.light_norm, 6),
      "star", move.star_length, "rerouted", round(move.modified_length, 6))

# %% Random instances never exceed the bound.
for name in ("hexagon", "cube", "cross"):
    chk = degree_bound_check(standard_body(name, 2), trials=20, seed=3)
    print(name, chk.to_json())
