import itertools
import random

import pytest

from hforge.complexes import (
    SimplicialComplex,
    boundary_matrices,
    build_s_section,
    build_sn_truncated,
    complex_from_json,
    complex_to_json,
    connectivity_probe,
    enumerate_bounded_vertices,
    homological_connectivity,
    homology_to_json,
    is_q_acyclic,
    link,
    pi_projection,
    reduced_homology,
    simplex_test,
    simplexwise_injective_check,
    skeleton,
    star,
    verify_s_section,
    wcm_check,
)
from hforge.errors import SizeLimitError, ValidationError
from hforge.houghton import (
    HoughtonMap,
    PermutationN,
    Translation,
    canonical_form,
    canonical_threshold,
    compose,
    embed_symmetric,
    equals,
    random_element,
    validate,
)
from hforge.rays import MarkedRay, Ray
from hforge.snf import snf_diagonal

from _oracles import (
    boundary_matrices_from_facets,
    marked_points_in_box,
    minor_gcd_diagonal,
    RP2_FACETS,
)


def full_simplex(n):
    """The full simplex on n vertices."""
    return SimplicialComplex.from_maximal(tuple(range(n)), [tuple(range(n))])


def boundary_simplex(n):
    """The boundary of the (n-1)-simplex on n vertices."""
    face = tuple(range(n))
    return SimplicialComplex.from_maximal(
        tuple(range(n)), [face[:i] + face[i + 1 :] for i in range(n)]
    )


def simplex_skeleton(n, d):
    """The d-skeleton of the (n-1)-simplex."""
    return skeleton(full_simplex(n), d)


def vertex_map(k, n, pieces):
    return canonical_form(HoughtonMap(k, 1, n, pieces))


def inclusion(k, n, copy, shift=0):
    full = Ray((1,) * k, tuple(range(1, k + 1)))
    return vertex_map(k, n, ((MarkedRay(full, 1), Translation((shift,) * k, copy)),))


def test_build_and_face_closure():
    K = full_simplex(4)
    assert K.dim == 3
    assert K.simplex_count() == 15
    assert (0, 2) in K
    assert (0, 1, 2, 3) in K
    assert K.euler_characteristic() == 1
    assert K.maximal_simplices() == [(0, 1, 2, 3)]
    with pytest.raises(ValidationError):
        SimplicialComplex.build((0, 1), [(0, 0)])
    with pytest.raises(ValidationError):
        SimplicialComplex.build((0, 1), [(0, 2)])
    with pytest.raises(SizeLimitError):
        SimplicialComplex.from_maximal(tuple(range(20)), [tuple(range(20))], size_limit=100)


def test_link_star_skeleton_examples():
    bd3 = boundary_simplex(4)
    lk = link(bd3, (0,))
    # boundary of a triangle: a 3-cycle
    assert lk.simplices_of_dim(0) == [(1,), (2,), (3,)]
    assert lk.simplices_of_dim(1) == [(1, 2), (1, 3), (2, 3)]
    assert lk.dim == 1

    sk = skeleton(full_simplex(4), 2)
    assert sk.simplex_count() == 14  # all nonempty subsets of size <= 3
    assert sk.dim == 2

    lk_edge = link(simplex_skeleton(4, 2), (0, 1))
    assert lk_edge.simplices_of_dim(0) == [(2,), (3,)]
    assert lk_edge.dim == 0

    st = star(bd3, (0,))
    assert (1, 2) in st and (1, 2, 3) not in st

    with pytest.raises(ValidationError):
        link(bd3, (0, 1, 2, 3))


def test_boundary_matrices_shape_and_squares_to_zero():
    chain = boundary_matrices(boundary_simplex(4))
    assert len(chain.boundaries) == 3
    assert chain.boundaries[0] == ((1, 1, 1, 1),)
    assert len(chain.boundaries[1]) == 4 and len(chain.boundaries[1][0]) == 6
    assert len(chain.boundaries[2]) == 6 and len(chain.boundaries[2][0]) == 4


def test_homology_point_and_spheres():
    pt = full_simplex(1)
    hom = reduced_homology(pt)
    assert all(hom.is_trivial(d) for d in range(3))

    for n in (3, 4, 5, 6):
        hom = reduced_homology(boundary_simplex(n))
        for d in range(n - 2):
            assert hom.is_trivial(d), (n, d)
        assert hom.betti(n - 2) == 1 and hom.torsion(n - 2) == ()


def test_homology_projective_plane_vs_hand_built_matrices():
    facets = [tuple(v - 1 for v in f) for f in RP2_FACETS]
    K = SimplicialComplex.from_maximal(tuple(range(6)), facets)
    assert K.euler_characteristic() == 1
    hom = reduced_homology(K)
    assert hom.betti(0) == 0 and hom.torsion(0) == ()
    assert hom.betti(1) == 0 and hom.torsion(1) == (2,)
    assert hom.betti(2) == 0 and hom.torsion(2) == ()

    # independent route: hand-built boundary matrices + minor-gcd diagonal
    d1, d2 = boundary_matrices_from_facets(RP2_FACETS)
    diag1 = minor_gcd_diagonal(d1, len(d1[0]))
    diag2 = minor_gcd_diagonal(d2, len(d2[0]))
    rank1 = sum(1 for x in diag1 if x)
    rank2 = sum(1 for x in diag2 if x)
    assert len(d1[0]) - rank1 - rank2 == 0  # betti_1
    assert [x for x in diag2 if x > 1] == [2]  # torsion Z/2
    assert snf_diagonal(d2) == diag2


def test_homology_cones_are_acyclic():
    rng = random.Random(6)
    for _ in range(100):
        nverts = rng.randint(1, 5)
        simplices = set()
        for _ in range(rng.randint(1, 6)):
            size = rng.randint(1, min(3, nverts))
            simplices.add(tuple(sorted(rng.sample(range(nverts), size))))
        base = SimplicialComplex.build(tuple(range(nverts + 1)), simplices)
        coned = {s + (nverts,) for s in base.all_simplices()} | set(base.all_simplices())
        cone = SimplicialComplex.build(tuple(range(nverts + 1)), coned)
        hom = reduced_homology(cone)
        assert all(hom.is_trivial(d) for d in range(cone.dim + 1))


def test_euler_characteristic_equals_alternating_betti_sum():
    for K in (full_simplex(4), boundary_simplex(4), simplex_skeleton(5, 2)):
        hom = reduced_homology(K)
        total = 1 + sum(
            (-1) ** d * hom.betti(d) for d in range(K.dim + 1)
        )  # unreduced chi
        assert K.euler_characteristic() == total
        assert all(not hom.torsion(d) for d in range(K.dim + 1))


def test_homological_connectivity():
    empty = SimplicialComplex.build((), [])
    assert homological_connectivity(empty) == -2
    assert homological_connectivity(full_simplex(1)) == 0
    assert homological_connectivity(boundary_simplex(4)) == 1
    two_points = SimplicialComplex.build((0, 1), [(0,), (1,)])
    assert homological_connectivity(two_points) == -1
    for n in (3, 4, 5, 6):
        assert homological_connectivity(simplex_skeleton(n, n - 2)) == n - 3
    assert is_q_acyclic(boundary_simplex(4), 1)
    assert not is_q_acyclic(boundary_simplex(4), 2)
    assert not is_q_acyclic(empty, -1)


def test_wcm_examples():
    ok, _ = wcm_check(full_simplex(3), 2)
    assert ok
    ok, _ = wcm_check(boundary_simplex(4), 2)
    assert ok
    ok, why = wcm_check(boundary_simplex(4), 3)
    assert not ok and "acyclic" in why
    for n in (4, 5, 6):
        ok, why = wcm_check(simplex_skeleton(n, n - 2), n - 2)
        assert ok, why


def _census_oracle(n):
    """Independent count of 1-bounded vertices for k = 1 via box enumeration."""
    cells = [((1,), ()), ((2,), (1,))]
    options = []
    for base, dirs in cells:
        opts = []
        for target in range(1, n + 1):
            for d in (-1, 0, 1):
                if base[0] + d >= 1:
                    opts.append((d, target))
        options.append(opts)
    count = 0
    for combo in itertools.product(*options):
        marked = [
            ((base[0] + d,), dirs, target)
            for (base, dirs), (d, target) in zip(cells, combo)
        ]
        sets = [marked_points_in_box([m], 1, n, 8) for m in marked]
        if sets[0] & sets[1]:
            continue
        count += 1
    return count


def test_bounded_vertex_census():
    vs1 = enumerate_bounded_vertices(1, 1, 1)
    assert len(vs1) == _census_oracle(1) == 3
    shapes = {
        tuple(
            (dom.ray.base, dom.ray.dirs, tr.offset[0], tr.target_copy)
            for dom, tr in v.pieces
        )
        for v in vs1
    }
    assert (((1,), (1,), 0, 1),) in shapes  # identity
    assert (((1,), (1,), 1, 1),) in shapes  # shift

    vs2 = enumerate_bounded_vertices(1, 2, 1)
    assert len(vs2) == _census_oracle(2) == 18

    for v in vs1 + vs2:
        diag = validate(v)
        assert diag.valid
        assert canonical_threshold(v) <= 1


def test_bounded_vertex_set_closed_under_symmetric_action():
    for n in (2, 3):
        vs = enumerate_bounded_vertices(1, n, 1)
        for sigma in itertools.permutations(range(1, n + 1)):
            e = embed_symmetric(PermutationN(tuple(sigma)), 1)
            for v in vs:
                moved = compose(e, v)
                assert any(equals(moved, w) for w in vs)


def test_build_sn_truncated():
    K1 = build_sn_truncated(1, 1, 1)
    assert len(K1.vertices) == 3
    assert K1.dim == 0

    K1top = build_sn_truncated(1, 1, 1, include_top=True)
    assert len(K1top.vertices) == 1  # only the bijection survives

    K2 = build_sn_truncated(1, 2, 1)
    assert len(K2.vertices) == 18
    assert K2.dim == 0  # p+1 <= n-1 allows only vertices

    K2top = build_sn_truncated(1, 2, 1, include_top=True)
    assert K2top.dim == 1
    for s in K2top.simplices_of_dim(1):
        maps = [K2top.vertices[i] for i in s]
        assert simplex_test(maps)

    K3 = build_sn_truncated(1, 3, 1)
    assert K3.dim <= 1
    assert len(K3.simplices_of_dim(1)) > 0
    with pytest.raises(SizeLimitError):
        build_sn_truncated(1, 3, 1, size_limit=10)


def test_canonical_inclusions_span_simplices():
    for k, n in ((1, 2), (2, 3), (1, 4)):
        incs = [inclusion(k, n, c) for c in range(1, n + 1)]
        for size in range(1, n + 1):
            assert simplex_test(incs[:size])


def test_pi_projection():
    assert pi_projection(inclusion(1, 2, 2)) == 2
    g = vertex_map(
        1,
        2,
        (
            (MarkedRay(Ray((1,), ()), 1), Translation((0,), 2)),
            (MarkedRay(Ray((2,), (1,)), 1), Translation((-1,), 1)),
        ),
    )
    assert pi_projection(g) == 1
    # vertices of a simplex project to pairwise distinct copies
    K = build_sn_truncated(1, 3, 1)
    for s in K.simplices_of_dim(1):
        a, b = (K.vertices[i] for i in s)
        assert pi_projection(a) != pi_projection(b)


def test_simplex_test_examples():
    miss = inclusion(1, 2, 1, shift=1)  # misses (1,1)
    other = inclusion(1, 2, 2)
    assert simplex_test([miss])
    assert simplex_test([miss, other]) is False  # top pair must cover everything
    assert simplex_test([inclusion(1, 2, 1), other]) is True

    gap = vertex_map(
        1,
        2,
        (
            (MarkedRay(Ray((1,), ()), 1), Translation((0,), 1)),
            (MarkedRay(Ray((2,), (1,)), 1), Translation((1,), 1)),
        ),
    )
    overlap = inclusion(1, 2, 1)
    assert not simplex_test([gap, overlap])

    with pytest.raises(ValidationError):
        simplex_test([inclusion(1, 2, 1), inclusion(1, 2, 2), inclusion(1, 2, 1, shift=3)])


def test_simplexwise_injective_check():
    K = build_sn_truncated(1, 3, 1)
    target = simplex_skeleton(3, 1)
    mapping = [pi_projection(v) - 1 for v in K.vertices]
    assert simplexwise_injective_check(K, target, mapping)

    edge = SimplicialComplex.build((0, 1), [(0, 1)])
    point = full_simplex(1)
    assert simplexwise_injective_check(edge, point, [0, 0]) is False
    assert simplexwise_injective_check(edge, edge, [0, 1]) is True
    with pytest.raises(ValidationError):
        simplexwise_injective_check(edge, SimplicialComplex.build((0, 1), [(0,), (1,)]), [0, 1])


def test_build_s_section_examples():
    fs = build_s_section(1, 2, [])
    assert equals(fs[0], inclusion(1, 2, 1))
    assert equals(fs[1], inclusion(1, 2, 2))

    s = inclusion(1, 2, 1)
    fs = build_s_section(1, 2, [s])
    # the lone S-vertex projects to copy 1, so nothing constrains either slot
    assert equals(fs[0], inclusion(1, 2, 1))
    assert equals(fs[1], inclusion(1, 2, 2))
    ok, _ = verify_s_section(1, 2, [s], fs)
    assert ok

    # an S-vertex aiming at copy 2 with debris in copy 1 pushes f_1 out
    g = vertex_map(
        1,
        2,
        (
            (MarkedRay(Ray((1,), ()), 1), Translation((2,), 1)),
            (MarkedRay(Ray((2,), (1,)), 1), Translation((-1,), 2)),
        ),
    )
    fs = build_s_section(1, 2, [g])
    assert equals(fs[0], inclusion(1, 2, 1, shift=3))
    ok, _ = verify_s_section(1, 2, [g], fs)
    assert ok


def test_verify_s_section_rejects_bad_sections():
    s = inclusion(1, 3, 2)
    good = build_s_section(1, 3, [s])
    ok, _ = verify_s_section(1, 3, [s], good)
    assert ok

    # overlap f_1 with the S-vertex's debris: break the biconditional
    bad = list(good)
    bad[0] = inclusion(1, 3, 1)
    overlapping = vertex_map(
        1,
        3,
        (
            (MarkedRay(Ray((1,), ()), 1), Translation((0,), 1)),
            (MarkedRay(Ray((2,), (1,)), 1), Translation((-1,), 2)),
        ),
    )
    ok, witness = verify_s_section(1, 3, [overlapping], [bad[0], good[1], good[2]])
    assert not ok
    assert witness is not None

    with pytest.raises(ValidationError):
        verify_s_section(1, 2, [], [inclusion(1, 2, 2), inclusion(1, 2, 2)])


def test_s_section_property_seeded():
    rng = random.Random(77)
    for trial in range(100):
        k = rng.choice((1, 2))
        n = rng.choice((2, 3, 4))
        size = rng.randint(0, 6)
        S = []
        for i in range(size):
            g = random_element(k, n, rng.randint(0, 2), seed=trial * 31 + i)
            S.append(canonical_form(restrict_vertex(g)))
        fs = build_s_section(k, n, S)
        for subset_size in range(1, n):
            for combo in itertools.combinations(fs, subset_size):
                assert simplex_test(list(combo))
        ok, witness = verify_s_section(k, n, S, fs)
        assert ok, witness


def restrict_vertex(g):
    from hforge.houghton import restrict

    return restrict(g, 1)


def test_connectivity_probe_n3():
    report = connectivity_probe(1, 3, 1, 3, trials=60, seed=9)
    assert report["connected_pairs"] == 60
    assert report["disconnected_pairs"] == 0
    assert report["max_path_length"] <= 2
    assert report["component_betti0"] == 0
    assert report["bounded_vertices"] == 45


def test_connectivity_probe_small_n():
    report = connectivity_probe(1, 2, 1, 3, trials=5, seed=1)
    assert "nonempty" in report["claim"] or "(-1)" in report["claim"]
    assert report["nonempty"] is True


def test_complex_json_round_trip():
    K = boundary_simplex(4)
    data = complex_to_json(K)
    back = complex_from_json(data)
    assert sorted(back.maximal_simplices()) == sorted(K.maximal_simplices())

    K2 = build_sn_truncated(1, 2, 1, include_top=True)
    data2 = complex_to_json(K2)
    back2 = complex_from_json(data2)
    assert len(back2.vertices) == 18
    assert back2.simplices == K2.simplices

    hom = homology_to_json(reduced_homology(K))
    assert hom == [
        {"degree": 0, "betti": 0, "torsion": []},
        {"degree": 1, "betti": 0, "torsion": []},
        {"degree": 2, "betti": 1, "torsion": []},
    ]
