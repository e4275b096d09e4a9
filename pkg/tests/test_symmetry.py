import random
from itertools import permutations

import numpy as np
import pytest

from sudocube.core import Axis, CubeGrid, is_valid
from sudocube.enumeration import all_base_grids, sudo_cases
from sudocube.symmetry import (
    GeometricTransform,
    GroupElement,
    Relabeling,
    ShapeClass,
    apply,
    canonical_form,
    classify_cells,
    diagonal_planes_signature,
    find_mapping,
    geometric_group,
    normalize_relabel,
    orbit_partition,
    placement_census,
    reflect_blocks_relabeled,
    shape_census,
    space_diagonal_rotation,
    swap_layers,
    transpose_blocks,
    uniform_partition_detector,
)

BASES = all_base_grids(3)


def random_element(rng, n=3):
    geo = rng.choice(geometric_group(n))
    perm = list(range(1, n * n + 1))
    rng.shuffle(perm)
    return GroupElement(geo, Relabeling(tuple(perm)))


def orbit_images_in_base_set(grid):
    """Oracle: apply every transform one by one, normalize, keep base grids."""
    base_set = {g.cells for g in BASES}
    seen = set()
    for t in geometric_group(3):
        img, _ = normalize_relabel(t(grid))
        if img.cells in base_set:
            seen.add(img.cells)
    return seen


def test_group_orders():
    assert [len(geometric_group(n)) for n in (1, 2, 3)] == [6, 48, 1296]
    with pytest.raises(ValueError):
        geometric_group(4)


def test_size_one_acts_trivially():
    g = CubeGrid(1, (1,))
    assert all(t(g) == g for t in geometric_group(1))


def test_transforms_distinct_for_n3():
    assert len({tuple(t.source_index()) for t in geometric_group(3)}) == 1296


def test_closure_sampled():
    rng = random.Random(21)
    group = geometric_group(3)
    actions = {tuple(t.source_index()) for t in group}
    for _ in range(10000):
        a, b = rng.choice(group), rng.choice(group)
        ab = a.then(b)
        assert tuple(ab.source_index()) in actions
    for t in group[::37]:
        assert tuple(t.then(t.inverse()).source_index()) == tuple(range(27))


def test_then_matches_sequential_application():
    rng = random.Random(4)
    g = BASES[7]
    for _ in range(200):
        a, b = random_element(rng), random_element(rng)
        assert a.then(b)(g) == b(a(g))
        assert a.inverse()(a(g)) == g


def test_apply_preserves_validity():
    rng = random.Random(2)
    group = geometric_group(3)
    for grid in BASES:
        for t in group[::5]:
            perm = list(range(1, 10))
            rng.shuffle(perm)
            assert is_valid(apply(GroupElement(t, Relabeling(tuple(perm))), grid))


def test_identity():
    g = BASES[3]
    assert apply(GroupElement.identity(3), g) == g


def test_layer_swap_example():
    g = BASES[0]
    s = apply(swap_layers(Axis.LAYER, 0, 1), g)
    assert s.layer(0) == g.layer(1) and s.layer(1) == g.layer(0) and s.layer(2) == g.layer(2)


def test_transpose_example():
    g = BASES[0]
    t = apply(transpose_blocks(), g)
    for l in range(3):
        assert t.layer(l) == tuple(zip(*g.layer(l)))


def test_reflect_relabel_restores_base():
    rel = reflect_blocks_relabeled()
    assert rel.relabel == Relabeling.from_transpositions(9, (2, 4), (3, 7), (6, 8))
    for g in BASES:
        after = rel(g)
        assert normalize_relabel(transpose_blocks()(g))[0] == after


def test_normalize_base_is_identity():
    for g in BASES:
        out, rho = normalize_relabel(g)
        assert out == g and rho == Relabeling.identity(9)


def test_normalize_recovers_inverse():
    rng = random.Random(6)
    for _ in range(500):
        g = rng.choice(BASES)
        perm = list(range(1, 10))
        rng.shuffle(perm)
        pi = Relabeling(tuple(perm))
        out, rho = normalize_relabel(pi(g))
        assert out == g and rho == pi.inverse()


def test_random_grids_normalize_into_base_set():
    rng = random.Random(8)
    base_set = {g.cells for g in BASES}
    for _ in range(10000):
        perm = list(range(1, 10))
        rng.shuffle(perm)
        g = Relabeling(tuple(perm))(rng.choice(BASES))
        assert normalize_relabel(g)[0].cells in base_set


def test_canonical_form_invariance():
    rng = random.Random(10)
    for _ in range(1000):
        g = rng.choice(BASES)
        assert canonical_form(apply(random_element(rng), g)) == canonical_form(g)


def test_two_keys_over_base_grids():
    assert len({canonical_form(g) for g in BASES}) == 2


def test_single_key_for_size_two():
    (base,) = all_base_grids(2)
    grids = {Relabeling(p)(base) for p in permutations(range(1, 5))}
    assert len(grids) == 24
    assert len({canonical_form(g) for g in grids}) == 1
    assert len(orbit_partition(sorted(grids, key=lambda g: g.cells))) == 1


def test_orbit_sizes_against_enumeration():
    classes = orbit_partition(BASES)
    assert [c.size for c in classes] == [4, 36]
    for c in classes:
        assert orbit_images_in_base_set(c.representative) == {m.cells for m in c.members}


def test_witnesses_map_members():
    for c in orbit_partition(BASES):
        assert c.representative == min(c.members, key=lambda g: g.cells)
        for m, w in zip(c.members, c.witnesses):
            assert w(m) == c.representative


def test_find_mapping_across_classes_is_none():
    small, large = orbit_partition(BASES)
    assert find_mapping(small.representative, large.representative) is None


def test_jobs_do_not_change_result():
    a = orbit_partition(BASES)
    b = orbit_partition(BASES, jobs=4)
    assert [(c.key, c.members) for c in a] == [(c.key, c.members) for c in b]


def test_sudo_cases_split():
    assert [c.size for c in orbit_partition(sudo_cases())] == [1, 9]
    assert len(orbit_partition([BASES[0]])) == 1


def test_uniform_detector_exact():
    small, _ = orbit_partition(BASES)
    for g in BASES:
        assert uniform_partition_detector(g) == (canonical_form(g) == small.key)


def test_uniform_detector_invariant():
    rng = random.Random(12)
    for _ in range(300):
        g = rng.choice(BASES)
        assert uniform_partition_detector(apply(random_element(rng), g)) == uniform_partition_detector(g)


def test_shape_examples():
    assert classify_cells([(0, 0, 0), (1, 1, 1), (2, 2, 2)]) is ShapeClass.DIAGONAL
    assert classify_cells([(0, 0, 0), (1, 2, 2), (2, 1, 1)]) is ShapeClass.SCALENE_CORNER
    assert classify_cells([(0, 1, 0), (1, 2, 2), (2, 0, 1)]) is ShapeClass.EQUILATERAL


def test_shape_census_every_grid():
    want = {ShapeClass.DIAGONAL: 1, ShapeClass.SCALENE_CORNER: 6, ShapeClass.EQUILATERAL: 2}
    rng = random.Random(14)
    for g in BASES:
        assert shape_census(g) == want
        assert shape_census(apply(random_element(rng), g)) == want


def test_placement_census():
    c = placement_census()
    assert c == {ShapeClass.DIAGONAL: 4, ShapeClass.SCALENE_CORNER: 24, ShapeClass.EQUILATERAL: 8}
    assert sum(c.values()) == 36


def test_equilateral_cells_pairwise_far():
    # mid-edge cells, one coordinate central, all other coordinates distinct
    from sudocube.enumeration import placements

    for p in placements(3):
        if classify_cells(p) is ShapeClass.EQUILATERAL:
            for a in p:
                assert sum(x == 1 for x in a) == 1
                for b in p:
                    if a != b:
                        assert sum(x != y for x, y in zip(a, b)) == 3


def test_diagonal_planes_signature_exact():
    small, _ = orbit_partition(BASES)
    for g in BASES:
        sig = diagonal_planes_signature(g)
        if canonical_form(g) == small.key:
            assert sig == (3, 3, 3)
        else:
            assert max(sig) > 3


def test_diagonal_planes_signature_invariant():
    # only rigid motions: general layer shuffles move the centre cell
    rigid = [t for t in geometric_group(3) if all(L in ((0, 1, 2), (2, 1, 0)) for L in t.layer_perms)]
    assert len(rigid) == 48
    rng = random.Random(16)
    for _ in range(300):
        g = rng.choice(BASES)
        perm = list(range(1, 10))
        rng.shuffle(perm)
        moved = apply(GroupElement(rng.choice(rigid), Relabeling(tuple(perm))), g)
        assert sorted(diagonal_planes_signature(moved)) == sorted(diagonal_planes_signature(g))


def test_space_diagonal_rotation_fixes_its_axis():
    for corner in ((0, 0, 0), (0, 0, 1), (0, 1, 0), (1, 0, 0)):
        for turns in (1, 2):
            rot = space_diagonal_rotation(corner, turns=turns)
            diag = [tuple(2 - i if corner[a] else i for a in range(3)) for i in range(3)]
            assert all(tuple(rot.map_coord(p)) == p for p in diag)
            three = GeometricTransform.identity(3)
            for _ in range(3):
                three = three.then(space_diagonal_rotation(corner))
            assert three == GeometricTransform.identity(3)


def test_source_index_is_permutation():
    for t in geometric_group(2):
        assert sorted(np.asarray(t.source_index()).tolist()) == list(range(8))
