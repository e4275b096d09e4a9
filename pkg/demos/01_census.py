"""Counting Sudo-Cubes of size 3.

Fix the bottom layer to 1..9 in reading order, enumerate every way to
finish the cube, then multiply back the 9! relabelings.
"""
import math
from collections import Counter

from sudocube.core import find_obstructions, standard_layer
from sudocube.enumeration import (
    all_base_grids,
    case_census,
    classify_case,
    five_corner_positions,
    sudo_cases,
    total_grids,
)

base = all_base_grids(3)
print("base grids:", len(base))
print("total grids:", total_grids(3), "=", len(base), "* 9!", "=", len(base) * math.factorial(9))

# the first base grid, layer by layer
g = base[0]
for l in range(3):
    print(f"layer {l}:", " / ".join("".join(map(str, row)) for row in g.layer(l)))

# Two filled layers determine the third, unless two digits collide there.
# Swapping 1 and 5 between the bottom two layers is one such collision.
layer1 = [list(row) for row in g.layer(1)]
print("obstructions in a base grid:", find_obstructions(standard_layer(3), layer1))

census = case_census()
print("cases:", {c.name: census[c] for c in sorted(census, key=lambda c: c.value)})

cases = sudo_cases()
print("sudo-cases (5 at the upper-left of layer 1):", len(cases))
print("  by case:", dict(sorted(Counter(classify_case(c).name for c in cases).items())))
print("  10 * 4 * 9! =", 10 * 4 * math.factorial(9))

corners = five_corner_positions()
print("where 5 sits in layer 1:", corners.corner_counts, "off corner:", corners.off_corner)

for n in (1, 2, 3):
    print(f"n={n}: {total_grids(n)} grids")
