import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from hforge.errors import ValidationError
from hforge.rays import (
    MarkedRay,
    Ray,
    RayPartition,
    Region,
    canonicalize_region,
    cell_of_point,
    common_refinement,
    grid_cells,
    grid_partition,
    partition_validate,
    ray_from_json,
    ray_intersect,
    ray_split,
    ray_to_json,
    region_complement,
    region_equal,
    region_from_json,
    region_to_json,
)

from _oracles import ray_points_in_box


def R(base, *dirs):
    return Ray(tuple(base), tuple(dirs))


def test_ray_contains_examples():
    assert R((1, 1), 1, 2).contains((5, 7))
    assert not R((3, 2), 1).contains((3, 3))
    # brute-force membership over the box [1..10]^2
    pts = ray_points_in_box((3, 2), (1,), 2, 10)
    assert (9, 2) in pts
    assert R((3, 2), 1).contains((9, 2))
    for p in itertools.product(range(1, 11), repeat=2):
        assert R((3, 2), 1).contains(p) == (p in pts)


def test_ray_contains_dimension_mismatch():
    with pytest.raises(ValidationError):
        R((1, 1), 1).contains((1,))


def test_ray_validation():
    with pytest.raises(ValidationError):
        Ray((0, 1), ())
    with pytest.raises(ValidationError):
        Ray((1, 1), (2, 1))
    with pytest.raises(ValidationError):
        Ray((1,), (2,))


def test_ray_intersect_examples():
    got = ray_intersect(R((1, 1), 1, 2), R((3, 2), 1))
    assert got == R((3, 2), 1)
    assert ray_intersect(R((1, 1)), R((2, 2), 1)) is None
    r = R((2, 3), 2)
    assert ray_intersect(r, r) == r


@given(
    st.integers(1, 2),
    st.data(),
)
@settings(max_examples=200, deadline=None)
def test_ray_intersect_matches_pointwise(k, data):
    def rand_ray():
        base = tuple(data.draw(st.integers(1, 4)) for _ in range(k))
        dirs = tuple(
            j for j in range(1, k + 1) if data.draw(st.booleans())
        )
        return Ray(base, dirs)

    r1, r2 = rand_ray(), rand_ray()
    got = ray_intersect(r1, r2)
    pts1 = ray_points_in_box(r1.base, r1.dirs, k, 8)
    pts2 = ray_points_in_box(r2.base, r2.dirs, k, 8)
    expected = pts1 & pts2
    if got is None:
        assert expected == set()
    else:
        assert ray_points_in_box(got.base, got.dirs, k, 8) == expected


def test_ray_intersect_box_oracle_k3():
    rng = random.Random(7)
    for trial in range(60):
        k = 3
        hi = 12 if trial < 10 else 6
        r1 = Ray(tuple(rng.randint(1, 3) for _ in range(k)),
                 tuple(j for j in range(1, k + 1) if rng.random() < 0.5))
        r2 = Ray(tuple(rng.randint(1, 3) for _ in range(k)),
                 tuple(j for j in range(1, k + 1) if rng.random() < 0.5))
        got = ray_intersect(r1, r2)
        expected = ray_points_in_box(r1.base, r1.dirs, k, hi) & ray_points_in_box(
            r2.base, r2.dirs, k, hi
        )
        if got is None:
            assert expected == set()
        else:
            assert ray_points_in_box(got.base, got.dirs, k, hi) == expected


@given(st.integers(1, 3), st.data())
@settings(max_examples=150, deadline=None)
def test_cell_of_point_membership(k, data):
    t = data.draw(st.integers(0, 4))
    p = tuple(data.draw(st.integers(1, 9)) for _ in range(k))
    cell = cell_of_point(p, t)
    assert cell.contains(p)
    assert cell in grid_cells(k, t)


@given(st.integers(1, 3), st.data())
@settings(max_examples=150, deadline=None)
def test_ray_split_disjoint_union(k, data):
    base = tuple(data.draw(st.integers(1, 5)) for _ in range(k))
    dirs = tuple(j for j in range(1, k + 1) if data.draw(st.booleans()))
    if not dirs:
        return
    r = Ray(base, dirs)
    j = data.draw(st.sampled_from(dirs))
    child, rest = ray_split(r, j)
    assert ray_intersect(child, rest) is None
    whole = ray_points_in_box(base, dirs, k, 8)
    assert ray_points_in_box(child.base, child.dirs, k, 8) | ray_points_in_box(
        rest.base, rest.dirs, k, 8
    ) == whole


def test_ray_split_examples():
    child, rest = ray_split(R((1,), 1), 1)
    assert child == R((1,))
    assert rest == R((2,), 1)

    child, rest = ray_split(R((1, 1), 1, 2), 2)
    assert child == R((1, 1), 1)
    assert rest == R((1, 2), 1, 2)
    # disjoint union equals the input, brute force on [1..6]^2
    whole = ray_points_in_box((1, 1), (1, 2), 2, 6)
    a = ray_points_in_box(child.base, child.dirs, 2, 6)
    b = ray_points_in_box(rest.base, rest.dirs, 2, 6)
    assert a | b == whole
    assert a & b == set()

    with pytest.raises(ValidationError):
        ray_split(R((1, 1), 1), 2)


def test_ray_split_partitions_parent():
    r = R((2, 1, 3), 1, 3)
    child, rest = ray_split(r, 3)
    region = Region(3, 1, (MarkedRay(r, 1),))
    part = RayPartition(region, (MarkedRay(child, 1), MarkedRay(rest, 1)))
    assert partition_validate(part).ok


def test_grid_partition_examples():
    p = grid_partition(1, 2, 1)
    got = {(m.ray.base, m.ray.dirs) for m in p.cells}
    assert got == {((1,), ()), ((2,), ()), ((3,), (1,))}

    p = grid_partition(2, 1, 1)
    got = {(m.ray.base, m.ray.dirs) for m in p.cells}
    assert got == {
        ((1, 1), ()),
        ((1, 2), (2,)),
        ((2, 1), (1,)),
        ((2, 2), (1, 2)),
    }
    # exhaustive disjoint cover on [1..6]^2
    seen = {}
    for m in p.cells:
        for pt in ray_points_in_box(m.ray.base, m.ray.dirs, 2, 6):
            assert pt not in seen
            seen[pt] = m
    assert len(seen) == 36

    p = grid_partition(1, 0, 3)
    assert len(p.cells) == 3
    assert all(m.ray == R((1,), 1) for m in p.cells)


@pytest.mark.parametrize("k,t,n", [(k, t, n) for k in (1, 2, 3) for t in (0, 1, 2, 3) for n in (1, 2, 3)])
def test_grid_partition_validates(k, t, n):
    assert partition_validate(grid_partition(k, t, n)).ok
    assert len(grid_partition(k, t, n).cells) == n * (t + 1) ** k


def test_containment_lemma_exhaustive():
    # a ray fitting the threshold contains every grid cell it meets
    for k in (1, 2):
        for t in (1, 2, 3):
            cells = grid_cells(k, t)
            for base in itertools.product(range(1, t + 1), repeat=k):
                for rdirs in itertools.chain.from_iterable(
                    itertools.combinations(range(1, k + 1), r) for r in range(k + 1)
                ):
                    ray = Ray(base, tuple(rdirs))
                    rpts = ray_points_in_box(base, rdirs, k, 2 * t + 3)
                    for cell in cells:
                        cpts = ray_points_in_box(cell.base, cell.dirs, k, 2 * t + 3)
                        if rpts & cpts:
                            assert cpts <= rpts


def test_containment_lemma_symbolic_k3():
    # same statement as above at k = 3, decided through ray_intersect, whose
    # own pointwise correctness is established separately
    k = 3
    for t in (1, 2, 3):
        cells = grid_cells(k, t)
        for base in itertools.product(range(1, t + 1), repeat=k):
            for r in range(k + 1):
                for rdirs in itertools.combinations(range(1, k + 1), r):
                    ray = Ray(base, rdirs)
                    for cell in cells:
                        meet = ray_intersect(ray, cell)
                        if meet is not None:
                            assert meet == cell


def test_partition_validate_gap_and_overlap():
    region = Region.full(1, 1)
    gap = RayPartition(region, (MarkedRay(R((1,)), 1), MarkedRay(R((3,), 1), 1)))
    diag = partition_validate(gap)
    assert not diag.ok
    assert "uncovered" in diag.reason

    with pytest.raises(ValidationError):
        # overlapping cells are rejected by the region/partition invariants
        Region(1, 1, (MarkedRay(R((1,), 1), 1), MarkedRay(R((2,), 1), 1)))
    overlap = RayPartition(region, (MarkedRay(R((1,), 1), 1), MarkedRay(R((2,), 1), 1)))
    diag = partition_validate(overlap)
    assert not diag.ok
    assert "overlap" in diag.reason


def test_common_refinement_examples():
    whole = RayPartition(Region.full(1, 1), (MarkedRay(R((1,), 1), 1),))
    two = RayPartition(
        Region.full(1, 1), (MarkedRay(R((1,)), 1), MarkedRay(R((2,), 1), 1))
    )
    assert common_refinement(whole, two).cells == two.cells

    g1, g2 = grid_partition(1, 1, 1), grid_partition(1, 2, 1)
    assert set(common_refinement(g1, g2).cells) == set(g2.cells)

    p = grid_partition(2, 1, 2)
    assert set(common_refinement(p, p).cells) == set(p.cells)


def test_common_refinement_refines_and_validates():
    rng = random.Random(11)
    for _ in range(20):
        k = rng.choice((1, 2))
        n = rng.choice((1, 2))
        p1 = _random_split_partition(rng, k, n)
        p2 = _random_split_partition(rng, k, n)
        ref = common_refinement(p1, p2)
        assert partition_validate(ref).ok
        for cell in ref.cells:
            assert any(
                marked_intersect_eq(cell, big) for big in p1.cells
            ) and any(marked_intersect_eq(cell, big) for big in p2.cells)


def marked_intersect_eq(small, big):
    from hforge.rays import marked_intersect

    got = marked_intersect(small, big)
    return got == small


def _random_split_partition(rng, k, n, splits=4):
    cells = list(grid_partition(k, 0, n).cells)
    for _ in range(splits):
        i = rng.randrange(len(cells))
        m = cells[i]
        if not m.ray.dirs:
            continue
        j = rng.choice(m.ray.dirs)
        child, rest = ray_split(m.ray, j)
        cells[i : i + 1] = [MarkedRay(child, m.copy), MarkedRay(rest, m.copy)]
    return RayPartition(Region.full(k, n), tuple(cells))


def test_region_complement_examples():
    tail = Region(1, 1, (MarkedRay(R((3,), 1), 1),))
    comp = region_complement(tail)
    assert {(m.ray.base, m.ray.dirs, m.copy) for m in comp.rays} == {
        ((1,), (), 1),
        ((2,), (), 1),
    }

    image = Region(1, 2, (MarkedRay(R((2,), 1), 1),))
    comp = region_complement(image)
    # {(1,1)} plus all of copy 2; checked pointwise on [1..20]
    for x in range(1, 21):
        assert comp.contains((x,), 2)
        assert comp.contains((x,), 1) == (x == 1)

    assert region_complement(Region.full(2, 2)).is_empty


def test_region_complement_involution():
    rng = random.Random(5)
    for _ in range(30):
        k = rng.choice((1, 2))
        n = rng.choice((1, 2))
        part = _random_split_partition(rng, k, n)
        sub = Region(k, n, tuple(m for m in part.cells if rng.random() < 0.5))
        assert region_equal(region_complement(region_complement(sub)), sub)


def test_canonicalize_region_examples():
    two_chunks = Region(1, 1, (MarkedRay(R((1,)), 1), MarkedRay(R((2,), 1), 1)))
    canon = canonicalize_region(two_chunks)
    assert canon.rays == (MarkedRay(R((1,), 1), 1),)

    # point on copy 1 plus a tail on copy 2, presented with redundant splits
    messy = Region(
        1,
        2,
        (
            MarkedRay(R((1,)), 1),
            MarkedRay(R((2,)), 2),
            MarkedRay(R((3,)), 2),
            MarkedRay(R((4,)), 2),
            MarkedRay(R((5,), 1), 2),
        ),
    )
    canon = canonicalize_region(messy)
    assert canon.rays == (
        MarkedRay(R((1,)), 1),
        MarkedRay(R((2,), 1), 2),
    )
    assert canon.threshold == 1


def test_canonicalize_region_representation_independent():
    rng = random.Random(42)
    for _ in range(500):
        k = rng.choice((1, 2))
        n = rng.choice((1, 2))
        part = _random_split_partition(rng, k, n, splits=3)
        chosen = tuple(m for m in part.cells if rng.random() < 0.6)
        reg = Region(k, n, chosen)
        resplit = list(chosen)
        for _ in range(3):
            if not resplit:
                break
            i = rng.randrange(len(resplit))
            m = resplit[i]
            if not m.ray.dirs:
                continue
            j = rng.choice(m.ray.dirs)
            child, rest = ray_split(m.ray, j)
            resplit[i : i + 1] = [MarkedRay(child, m.copy), MarkedRay(rest, m.copy)]
        reg2 = Region(k, n, tuple(resplit))
        assert canonicalize_region(reg) == canonicalize_region(reg2)
        assert region_equal(reg, reg2)


def test_cell_of_point():
    assert cell_of_point((1, 5), 2) == R((1, 3), 2)
    assert cell_of_point((3,), 2) == R((3,), 1)
    assert cell_of_point((2,), 2) == R((2,))


def test_json_round_trip():
    r = R((2, 1), 2)
    assert ray_from_json(ray_to_json(r)) == r
    reg = Region(2, 2, (MarkedRay(r, 1), MarkedRay(R((1, 1)), 2)))
    back = region_from_json(region_to_json(reg))
    assert region_equal(reg, back)
    # parser accepts unsorted dirs
    assert ray_from_json({"base": [1, 1], "dirs": [2, 1]}) == R((1, 1), 1, 2)
    with pytest.raises(ValidationError):
        ray_from_json({"dirs": []})
