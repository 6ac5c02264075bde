"""How many light sources, and how far away, to light up a polytope."""
# %%
from mink import bezdek_parameter, illuminates_body, standard_body

# %% Minimum number of lights L and minimum total light norm B.
for name, d in [("hexagon", 2), ("cube", 2), ("cube", 3), ("cross", 2), ("cross", 3)]:
    K = standard_body(name, d)
    rep = bezdek_parameter(K)
    print(f"{K.name:8s} L={rep.L_value}  B={rep.B_value:.6f}  "
          f"partitions={rep.partitions_examined}")

# %% The hexagon's cheapest lights each sit beyond a pair of adjacent vertices.
H = standard_body("hexagon")
rep = bezdek_parameter(H)
print("groups:", rep.best_partition)
print("lights:\n", rep.B_witness.lights.round(6))
print("illuminates:", illuminates_body(rep.B_witness.lights, H))

# %% One light short of the witness leaves vertices dark.
print("without the first light:", illuminates_body(rep.B_witness.lights[1:], H))
