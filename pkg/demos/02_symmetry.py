"""Symmetry classes of the 40 base grids."""
from sudocube.core import Axis
from sudocube.enumeration import all_base_grids, sudo_cases
from sudocube.symmetry import (
    canonical_form,
    diagonal_planes_signature,
    geometric_group,
    orbit_partition,
    reflect_blocks_relabeled,
    shape_census,
    swap_layers,
    to_sudo_case,
    uniform_partition_detector,
)

grids = all_base_grids(3)
print("geometric transforms:", len(geometric_group(3)))

classes = orbit_partition(grids)
for i, c in enumerate(classes):
    print(f"class {i}: {c.size} base grids, key starts {c.key[:9].hex()}")
    print("   uniform partition:", {uniform_partition_detector(g) for g in c.members})
    print("   diagonal-plane signatures:", sorted({diagonal_planes_signature(g) for g in c.members}))

# witnesses are ordinary group elements
small, large = classes
w = large.witnesses[-1]
print("witness for the last large-class member:", w.describe())
assert w(large.members[-1]) == large.representative

# the sudo-cases fall 1 + 9
print("sudo-case classes:", [c.size for c in orbit_partition(sudo_cases())])

# a few named moves and where they send sudo-case 1 (index 1 in our order)
cases = sudo_cases()
for name, move in [("swap B1,B2", swap_layers(Axis.LAYER, 0, 1)),
                   ("swap rows 0,1", swap_layers(Axis.ROW, 0, 1)),
                   ("reflect + relabel", reflect_blocks_relabeled())]:
    image, _ = to_sudo_case(move(cases[1]))
    print(f"{name}: sudo-case 1 -> sudo-case {cases.index(image)}")

g = grids[0]
print("shape census of one grid:", {k.value: v for k, v in shape_census(g).items()})
print("canonical keys over the 40:", len({canonical_form(g) for g in grids}))
