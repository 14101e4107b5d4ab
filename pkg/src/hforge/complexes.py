"""Finite simplicial complexes, exact homology, and the stability complexes.

The complexes here are finite, face-closed simplex sets over an indexed
vertex list; homology is integral and reduced, computed from Smith normal
forms of the boundary matrices.  On top of that sit the bounded truncations
of the complexes S_n whose vertices are ray injections N^k -> N^k x [n] with
pairwise disjoint images, the projection recording where each vertex sends
its full-dimensional ray, section construction and verification for that
projection, homological connectivity, and weak Cohen-Macaulay certification.

Conventions: connectivity is measured homologically (q-acyclicity), -1 means
nonempty and -2 empty; a vertex is B-bounded when its canonical grid
threshold is at most B and every offset component lies in [-B, B]; sets of
n vertices count as top simplices only when their images are jointly
surjective, which is opt-in via ``include_top``.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass

from .errors import SizeLimitError, ValidationError
from .houghton import (
    HoughtonMap,
    Translation,
    _k_piece,
    canonical_form,
    canonical_threshold,
    equals,
    map_from_json,
    map_to_json,
    validate,
)
from .rays import MarkedRay, Ray, Region, grid_cells, marked_intersect, region_complement
from .snf import snf_diagonal

__all__ = [
    "SimplicialComplex",
    "ChainComplexZ",
    "HomologyResult",
    "DEFAULT_SIZE_LIMIT",
    "boundary_matrices",
    "reduced_homology",
    "homological_connectivity",
    "is_q_acyclic",
    "wcm_check",
    "link",
    "star",
    "skeleton",
    "simplex_dim",
    "enumerate_bounded_vertices",
    "build_sn_truncated",
    "pi_projection",
    "simplex_test",
    "build_s_section",
    "verify_s_section",
    "simplexwise_injective_check",
    "connectivity_probe",
    "complex_to_json",
    "complex_from_json",
    "homology_to_json",
]

DEFAULT_SIZE_LIMIT = 200_000


def _close_faces(simplices: set[tuple[int, ...]]) -> set[tuple[int, ...]]:
    closed: set[tuple[int, ...]] = set()
    stack = list(simplices)
    while stack:
        s = stack.pop()
        if s in closed or not s:
            continue
        closed.add(s)
        if len(s) > 1:
            for omit in range(len(s)):
                stack.append(s[:omit] + s[omit + 1 :])
    return closed


@dataclass(frozen=True, eq=False)
class SimplicialComplex:
    """Face-closed simplex sets over an indexed, optionally labelled vertex list."""

    vertices: tuple
    simplices: dict[int, frozenset[tuple[int, ...]]]

    @classmethod
    def build(cls, vertices, simplices, size_limit: int | None = DEFAULT_SIZE_LIMIT):
        """Face closure of arbitrary index tuples; every listed simplex is kept."""
        raw = set()
        for s in simplices:
            t = tuple(sorted(set(s)))
            if len(t) != len(s):
                raise ValidationError(f"simplex with repeated vertices: {s!r}")
            if t and (t[0] < 0 or t[-1] >= len(vertices)):
                raise ValidationError(f"simplex {s!r} outside vertex range")
            raw.add(t)
        closed = _close_faces(raw)
        if size_limit is not None and len(closed) > size_limit:
            raise SizeLimitError(
                f"complex would hold {len(closed)} simplices (limit {size_limit})"
            )
        by_dim: dict[int, set[tuple[int, ...]]] = {}
        for s in closed:
            by_dim.setdefault(len(s) - 1, set()).add(s)
        return cls(tuple(vertices), {d: frozenset(v) for d, v in sorted(by_dim.items())})

    @classmethod
    def from_maximal(cls, vertices, maximal, size_limit: int | None = DEFAULT_SIZE_LIMIT):
        return cls.build(vertices, maximal, size_limit)

    @property
    def is_empty(self) -> bool:
        return not self.simplices

    @property
    def dim(self) -> int:
        return max(self.simplices, default=-1)

    def simplices_of_dim(self, d: int) -> list[tuple[int, ...]]:
        return sorted(self.simplices.get(d, ()))

    def all_simplices(self):
        for d in sorted(self.simplices):
            yield from sorted(self.simplices[d])

    def __contains__(self, simplex) -> bool:
        t = tuple(sorted(simplex))
        return t in self.simplices.get(len(t) - 1, frozenset())

    def simplex_count(self) -> int:
        return sum(len(v) for v in self.simplices.values())

    def euler_characteristic(self) -> int:
        return sum((-1) ** d * len(v) for d, v in self.simplices.items())

    def maximal_simplices(self) -> list[tuple[int, ...]]:
        out = []
        for d in sorted(self.simplices, reverse=True):
            for s in sorted(self.simplices[d]):
                sset = set(s)
                if not any(sset < set(m) for m in out):
                    out.append(s)
        return sorted(out, key=lambda s: (len(s), s))


def simplex_dim(simplex) -> int:
    return len(simplex) - 1


def link(k: SimplicialComplex, simplex) -> SimplicialComplex:
    """Lk(s) = { t : t disjoint from s, t u s in K }, over the same labels."""
    s = tuple(sorted(simplex))
    if s not in k:
        raise ValidationError(f"{simplex!r} is not a simplex of the complex")
    sset = set(s)
    found = set()
    for d, simplices in k.simplices.items():
        if d < len(s):
            continue
        for rho in simplices:
            if sset <= set(rho):
                t = tuple(v for v in rho if v not in sset)
                if t:
                    found.add(t)
    return SimplicialComplex.build(k.vertices, found, size_limit=None)


def star(k: SimplicialComplex, simplex) -> SimplicialComplex:
    """Closed star: all simplices joining with ``simplex``, plus faces."""
    s = tuple(sorted(simplex))
    if s not in k:
        raise ValidationError(f"{simplex!r} is not a simplex of the complex")
    sset = set(s)
    found = {rho for simplices in k.simplices.values() for rho in simplices if sset <= set(rho)}
    return SimplicialComplex.build(k.vertices, found, size_limit=None)


def skeleton(k: SimplicialComplex, d: int) -> SimplicialComplex:
    kept = {s for dd, ss in k.simplices.items() if dd <= d for s in ss}
    return SimplicialComplex.build(k.vertices, kept, size_limit=None)


# -- homology ----------------------------------------------------------------


@dataclass(frozen=True)
class ChainComplexZ:
    """Reduced simplicial chain complex: bases by degree plus boundary matrices.

    ``boundaries[d]`` maps degree-d chains down; degree 0 carries the
    augmentation to Z, so homology computed from this complex is reduced.
    """

    bases: tuple[tuple[tuple[int, ...], ...], ...]
    boundaries: tuple[tuple[tuple[int, ...], ...], ...]

    def __post_init__(self):
        from .snf import mat_mul

        for lower, upper in zip(self.boundaries, self.boundaries[1:]):
            if upper and upper[0] and lower:
                prod = mat_mul(lower, upper)
                if any(any(row) for row in prod):
                    raise AssertionError("boundary of boundary is nonzero")


def boundary_matrices(k: SimplicialComplex) -> ChainComplexZ:
    if k.is_empty:
        return ChainComplexZ((), ())
    bases = tuple(tuple(k.simplices_of_dim(d)) for d in range(k.dim + 1))
    boundaries = []
    # augmentation row
    boundaries.append(((1,) * len(bases[0]),))
    for d in range(1, k.dim + 1):
        index = {s: i for i, s in enumerate(bases[d - 1])}
        rows = [[0] * len(bases[d]) for _ in bases[d - 1]]
        for col, s in enumerate(bases[d]):
            for omit in range(len(s)):
                face = s[:omit] + s[omit + 1 :]
                rows[index[face]][col] = -1 if omit % 2 else 1
        boundaries.append(tuple(tuple(r) for r in rows))
    return ChainComplexZ(bases, tuple(boundaries))


@dataclass(frozen=True)
class HomologyResult:
    """Reduced integral homology: per degree a betti number and torsion list."""

    is_empty: bool
    entries: tuple[tuple[int, int, tuple[int, ...]], ...]

    def betti(self, d: int) -> int:
        for deg, b, _ in self.entries:
            if deg == d:
                return b
        return 0

    def torsion(self, d: int) -> tuple[int, ...]:
        for deg, _, t in self.entries:
            if deg == d:
                return t
        return ()

    def is_trivial(self, d: int) -> bool:
        return self.betti(d) == 0 and not self.torsion(d)


def reduced_homology(k: SimplicialComplex, max_degree: int | None = None) -> HomologyResult:
    """Betti numbers and torsion from Smith normal forms of the boundaries."""
    if k.is_empty:
        return HomologyResult(True, ())
    chain = boundary_matrices(k)
    top = k.dim if max_degree is None else min(max_degree, k.dim)
    diags = {}
    for d in range(0, top + 2):
        if d <= k.dim:
            diags[d] = snf_diagonal(chain.boundaries[d])
        else:
            diags[d] = []
    entries = []
    for d in range(0, top + 1):
        ncols = len(chain.bases[d])
        rank_d = sum(1 for x in diags[d] if x)
        rank_up = sum(1 for x in diags[d + 1] if x)
        betti = ncols - rank_d - rank_up
        torsion = tuple(x for x in diags[d + 1] if x > 1)
        entries.append((d, betti, torsion))
    return HomologyResult(False, tuple(entries))


def is_q_acyclic(k: SimplicialComplex, q: int) -> bool:
    """Reduced homology vanishes in degrees <= q (vacuous above the dimension)."""
    if k.is_empty:
        return False
    if q < 0:
        return True
    hom = reduced_homology(k, max_degree=min(q, k.dim))
    return all(hom.is_trivial(d) for d in range(0, min(q, k.dim) + 1))


def homological_connectivity(k: SimplicialComplex) -> int:
    """Largest q with vanishing reduced homology through degree q.

    -2 for the empty complex, -1 for nonempty, capped at the dimension.
    """
    if k.is_empty:
        return -2
    hom = reduced_homology(k)
    q = -1
    while q + 1 <= k.dim and hom.is_trivial(q + 1):
        q += 1
    return q


def wcm_check(k: SimplicialComplex, n: int) -> tuple[bool, str | None]:
    """Weakly Cohen-Macaulay of dimension n, read homologically.

    Requires (n-1)-acyclicity of the complex and (n-p-2)-acyclicity of every
    p-simplex link; thresholds at or below -2 are vacuous, -1 means nonempty.
    """
    def meets(complex_, target, what):
        if target <= -2:
            return None
        if complex_.is_empty:
            return f"{what} is empty but must be {target}-connected"
        if target >= 0 and not is_q_acyclic(complex_, target):
            return f"{what} is not {target}-acyclic"
        return None

    problem = meets(k, n - 1, "complex")
    if problem:
        return False, problem
    for d in sorted(k.simplices):
        for s in sorted(k.simplices[d]):
            problem = meets(link(k, s), n - d - 2, f"link of {s}")
            if problem:
                return False, problem
    return True, None


# -- truncated stability complexes -------------------------------------------


def enumerate_bounded_vertices(
    k: int, n: int, bound: int, size_limit: int | None = DEFAULT_SIZE_LIMIT
) -> list[HoughtonMap]:
    """All ray injections N^k -> N^k x [n] that are B-bounded.

    Equivalently: all assignments of a translation with offsets in [-B, B]^k
    to each cell of the threshold-B grid of the domain, with pairwise
    disjoint images.  Backtracking prunes on image overlap.
    """
    if n < 1 or bound < 0:
        raise ValidationError("need n >= 1 and bound >= 0")
    cells = grid_cells(k, bound)
    options: list[list[Translation]] = []
    for cell in cells:
        opts = []
        for target in range(1, n + 1):
            for off in itertools.product(range(-bound, bound + 1), repeat=k):
                if all(b + d >= 1 for b, d in zip(cell.base, off)):
                    opts.append(Translation(off, target))
        options.append(opts)
    found: list[HoughtonMap] = []
    images: list[MarkedRay] = []
    chosen: list[Translation] = []

    def backtrack(i: int) -> None:
        if i == len(cells):
            pieces = tuple(
                (MarkedRay(cell, 1), tr) for cell, tr in zip(cells, chosen)
            )
            found.append(canonical_form(HoughtonMap(k, 1, n, pieces)))
            if size_limit is not None and len(found) > size_limit:
                raise SizeLimitError(
                    f"vertex enumeration exceeds the size limit {size_limit}"
                )
            return
        for tr in options[i]:
            img = MarkedRay(cells[i].translate(tr.offset), tr.target_copy)
            if all(marked_intersect(img, other) is None for other in images):
                images.append(img)
                chosen.append(tr)
                backtrack(i + 1)
                images.pop()
                chosen.pop()

    backtrack(0)
    return found


def _image_rays(v: HoughtonMap) -> tuple[MarkedRay, ...]:
    return tuple(v.image_ray(p) for p in v.pieces)


def _images_disjoint(a: tuple[MarkedRay, ...], b: tuple[MarkedRay, ...]) -> bool:
    return all(marked_intersect(x, y) is None for x in a for y in b)


def _jointly_surjective(k: int, n: int, image_rays: list[MarkedRay]) -> bool:
    return region_complement(Region(k, n, tuple(image_rays))).is_empty


def pi_projection(vertex: HoughtonMap) -> int:
    """Target copy of the vertex's full-dimensional ray."""
    if vertex.m != 1:
        raise ValidationError("projection applies to vertices (single-copy domains)")
    return _k_piece(vertex, 1)[1].target_copy


def simplex_test(vertices: list[HoughtonMap]) -> bool:
    """Tuples of vertices span a simplex iff their images are disjoint.

    Full-size tuples (as many vertices as copies) must additionally cover
    the whole codomain, matching the top-dimensional automorphism condition.
    """
    if not vertices:
        raise ValidationError("need at least one vertex")
    k, n = vertices[0].k, vertices[0].n
    if any((v.k, v.m, v.n) != (k, 1, n) for v in vertices):
        raise ValidationError("vertices must share one ambient and single-copy domains")
    if len(vertices) > n:
        raise ValidationError(f"at most {n} vertices can span a simplex")
    if len({id(v) for v in vertices}) != len(vertices):
        raise ValidationError("repeated vertex")
    for v in vertices:
        diag = validate(v)
        if not diag.valid:
            raise ValidationError(f"invalid vertex: {diag.problems}")
    rays = [_image_rays(v) for v in vertices]
    for a, b in itertools.combinations(rays, 2):
        if not _images_disjoint(a, b):
            return False
    if len(vertices) == n:
        return _jointly_surjective(k, n, [r for rs in rays for r in rs])
    return True


def build_sn_truncated(
    k: int,
    n: int,
    bound: int,
    include_top: bool = False,
    size_limit: int | None = DEFAULT_SIZE_LIMIT,
) -> SimplicialComplex:
    """The B-bounded truncation of S_n, with vertex maps as labels.

    Vertices are the B-bounded ray injections; p+1 of them span a p-simplex
    when their images are pairwise disjoint, for p+1 < n.  Sets of n vertices
    are included as top simplices only with ``include_top``, and then also
    need jointly surjective images.
    """
    candidates = enumerate_bounded_vertices(k, n, bound, size_limit)
    if include_top and n == 1:
        candidates = [
            v for v in candidates if _jointly_surjective(k, n, list(_image_rays(v)))
        ]
    rays = [_image_rays(v) for v in candidates]
    count = len(candidates)
    simplices: set[tuple[int, ...]] = {(i,) for i in range(count)}
    adjacency: dict[int, set[int]] = {i: set() for i in range(count)}
    if n >= 2:
        for i, j in itertools.combinations(range(count), 2):
            if _images_disjoint(rays[i], rays[j]):
                adjacency[i].add(j)
                adjacency[j].add(i)
    layer = [(i,) for i in range(count)]
    max_dim = n - 1 if include_top else n - 2
    total = count
    for dim in range(1, max_dim + 1):
        next_layer = []
        for s in layer:
            common = set.intersection(*(adjacency[v] for v in s)) if s else set()
            for w in common:
                if w > s[-1]:
                    t = s + (w,)
                    if dim == n - 1 and not _jointly_surjective(
                        k, n, [r for v in t for r in rays[v]]
                    ):
                        continue
                    next_layer.append(t)
                    total += 1
                    if size_limit is not None and total > size_limit:
                        raise SizeLimitError(
                            f"complex exceeds the size limit {size_limit}"
                        )
        simplices.update(next_layer)
        layer = next_layer
    return SimplicialComplex.build(tuple(candidates), simplices, size_limit=size_limit)


# -- sections of the copy projection ------------------------------------------


def _avoidance_offset(k: int, rays_in_copy: list[Ray]) -> int:
    """Least uniform offset whose orthant misses every listed ray.

    The orthant based at (M+1, ..., M+1) is disjoint from a ray exactly when
    some pinned coordinate of the ray stays below M+1; full rays cannot be
    avoided and are rejected.
    """
    m = 0
    for ray in rays_in_copy:
        pinned = [b for j, b in enumerate(ray.base, start=1) if j not in ray.dirs]
        if not pinned:
            raise ValidationError(f"cannot avoid the full ray {ray}")
        m = max(m, min(pinned))
    return m


def build_s_section(k: int, n: int, s_vertices: list[HoughtonMap]) -> list[HoughtonMap]:
    """Vertices f_1..f_n sending the full ray far enough out into each copy.

    f_p lands in copy p beyond everything the given vertices reach there,
    except for vertices whose own full ray already occupies copy p, which a
    section cannot and need not avoid.
    """
    for v in s_vertices:
        if (v.k, v.m, v.n) != (k, 1, n):
            raise ValidationError(f"vertex {v} does not live in the (k={k}, n={n}) complex")
        diag = validate(v)
        if not diag.valid:
            raise ValidationError(f"invalid vertex in S: {diag.problems}")
    full = Ray((1,) * k, tuple(range(1, k + 1)))
    out: list[HoughtonMap] = []
    for p in range(1, n + 1):
        avoid: list[Ray] = []
        for v in s_vertices:
            if pi_projection(v) == p:
                continue
            avoid.extend(m.ray for m in _image_rays(v) if m.copy == p)
        offset = _avoidance_offset(k, avoid)
        out.append(
            HoughtonMap(
                k, 1, n, ((MarkedRay(full, 1), Translation((offset,) * k, p)),)
            )
        )
    return out


def verify_s_section(
    k: int,
    n: int,
    s_vertices: list[HoughtonMap],
    rho: list[HoughtonMap],
) -> tuple[bool, tuple | None]:
    """Exhaustively check the link biconditional defining an S-section.

    For every simplex sigma spanned by S and every simplex tau of the
    codomain skeleton: tau lies in the link of the projected sigma iff the
    section's image of tau lies in the link of sigma.  Returns the first
    failing pair, if any.
    """
    if len(rho) != n:
        raise ValidationError(f"section must assign all {n} copies")
    rho = [canonical_form(v) for v in rho]
    svs = [canonical_form(v) for v in s_vertices]
    for v in rho + svs:
        diag = validate(v)
        if not diag.valid:
            raise ValidationError(f"invalid vertex: {diag.problems}")
    for p, f in enumerate(rho, start=1):
        if pi_projection(f) != p:
            raise ValidationError(f"not a section: assigned vertex for copy {p} projects to {pi_projection(f)}")
    all_maps = rho + svs
    imgs = {id(v): _image_rays(v) for v in all_maps}
    disjoint: dict[tuple[int, int], bool] = {}

    def dis(a, b):
        key = (id(a), id(b))
        if key not in disjoint:
            val = _images_disjoint(imgs[id(a)], imgs[id(b)])
            disjoint[key] = val
            disjoint[(key[1], key[0])] = val
        return disjoint[key]

    if n >= 3:
        for a, b in itertools.combinations(rho, 2):
            if not dis(a, b):
                raise ValidationError("not a section: assigned vertices do not span simplices")

    distinct_s = []
    for v in svs:
        if not any(equals(v, w) for w in distinct_s):
            distinct_s.append(v)

    def is_simplex(maps):
        return all(dis(a, b) for a, b in itertools.combinations(maps, 2))

    sigmas = [
        combo
        for size in range(1, min(len(distinct_s), n - 1) + 1)
        for combo in itertools.combinations(distinct_s, size)
        if is_simplex(combo)
    ]
    taus = [
        set(t)
        for size in range(1, n)
        for t in itertools.combinations(range(1, n + 1), size)
    ]
    for sigma in sigmas:
        pi_sigma = {pi_projection(v) for v in sigma}
        for tau in taus:
            lhs = not (tau & pi_sigma) and len(tau | pi_sigma) <= n - 1
            rho_tau = [rho[i - 1] for i in sorted(tau)]
            joint = list(sigma) + rho_tau
            no_repeats = all(
                not equals(a, b) for a, b in itertools.combinations(joint, 2)
            )
            rhs = (
                no_repeats
                and len(joint) <= n - 1
                and is_simplex(joint)
            )
            if lhs != rhs:
                return False, (tuple(map_to_json(v) for v in sigma), tuple(sorted(tau)))
    return True, None


def simplexwise_injective_check(
    domain: SimplicialComplex,
    codomain: SimplicialComplex,
    vertex_map: dict[int, int] | list[int],
) -> bool:
    """True when every simplex maps to a simplex of the same dimension.

    Raises when the vertex assignment is not simplicial at all.
    """
    get = vertex_map.__getitem__
    for s in domain.all_simplices():
        image = tuple(sorted({get(v) for v in s}))
        if image not in codomain:
            raise ValidationError(f"vertex map is not simplicial on {s}")
        if len(image) != len(s):
            return False
    return True


def _simplex_complex(n: int, max_dim: int) -> SimplicialComplex:
    """The max_dim-skeleton of the (n-1)-simplex on labels 1..n."""
    simplices = {
        tuple(c)
        for size in range(1, max_dim + 2)
        for c in itertools.combinations(range(n), size)
    }
    return SimplicialComplex.build(tuple(range(1, n + 1)), simplices, size_limit=None)


def connectivity_probe(
    k: int,
    n: int,
    bound: int,
    slack: int,
    trials: int,
    seed: int,
    size_limit: int | None = DEFAULT_SIZE_LIMIT,
) -> dict:
    """Path-connect sampled pairs of bounded vertices inside a larger truncation.

    Pairs of B-bounded vertices are joined either directly or through a far
    translate into a copy that neither endpoint's full ray occupies; the
    intermediate must stay (B+slack)-bounded.  A homology cross-check
    recomputes connectedness of the touched component from boundary matrices.
    """
    report: dict = {"k": k, "n": n, "bound": bound, "slack": slack, "trials": trials}
    vertices = enumerate_bounded_vertices(k, n, bound, size_limit)
    report["bounded_vertices"] = len(vertices)
    if n < 3:
        report["claim"] = (
            "only (-1)-connectivity (nonempty) is asserted for n < 3"
        )
        report["nonempty"] = bool(vertices)
        return report
    report["claim"] = "sampled pairs connect within the enlarged truncation"
    rng = random.Random(seed)
    rays = {id(v): _image_rays(v) for v in vertices}
    intermediates: list[HoughtonMap] = []
    full = Ray((1,) * k, tuple(range(1, k + 1)))
    connected = 0
    lengths = []
    failures = []
    for _ in range(trials):
        u, w = rng.choice(vertices), rng.choice(vertices)
        if equals(u, w):
            connected += 1
            lengths.append(0)
            continue
        if _images_disjoint(rays[id(u)], rays[id(w)]):
            connected += 1
            lengths.append(1)
            continue
        occupied = {pi_projection(u), pi_projection(w)}
        copy = next(c for c in range(1, n + 1) if c not in occupied)
        blockers = [
            m.ray
            for m in (*rays[id(u)], *rays[id(w)])
            if m.copy == copy
        ]
        offset = _avoidance_offset(k, blockers)
        z = HoughtonMap(
            k, 1, n, ((MarkedRay(full, 1), Translation((offset,) * k, copy)),)
        )
        z_ok = canonical_threshold(z) <= bound + slack and offset <= bound + slack
        z_rays = _image_rays(z)
        if (
            z_ok
            and _images_disjoint(z_rays, rays[id(u)])
            and _images_disjoint(z_rays, rays[id(w)])
        ):
            connected += 1
            lengths.append(2)
            intermediates.append(z)
        else:
            failures.append((map_to_json(u), map_to_json(w)))
    report["connected_pairs"] = connected
    report["disconnected_pairs"] = trials - connected
    report["max_path_length"] = max(lengths, default=0)
    report["failures"] = failures

    # homology cross-check on the touched component
    pool = list(vertices)
    for z in intermediates:
        if not any(equals(z, v) for v in pool):
            pool.append(z)
    pool_rays = [_image_rays(v) for v in pool]
    edges = [
        (i, j)
        for i, j in itertools.combinations(range(len(pool)), 2)
        if _images_disjoint(pool_rays[i], pool_rays[j])
    ]
    parent = list(range(len(pool)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in edges:
        parent[find(i)] = find(j)
    component = {i for i in range(len(pool)) if find(i) == find(0)}
    idx = sorted(component)
    remap = {v: i for i, v in enumerate(idx)}
    comp_simplices = {(remap[i],) for i in idx} | {
        (remap[i], remap[j]) for i, j in edges if i in component and j in component
    }
    comp_complex = SimplicialComplex.build(
        tuple(pool[i] for i in idx), comp_simplices, size_limit=None
    )
    hom = reduced_homology(comp_complex, max_degree=0)
    report["component_size"] = len(idx)
    report["component_betti0"] = hom.betti(0)
    return report


# -- JSON ---------------------------------------------------------------------


def _label_to_json(label):
    if isinstance(label, HoughtonMap):
        return map_to_json(label)
    return label


def complex_to_json(k: SimplicialComplex) -> dict:
    return {
        "vertices": [_label_to_json(v) for v in k.vertices],
        "maximal_simplices": [list(s) for s in k.maximal_simplices()],
    }


def complex_from_json(data: dict, size_limit: int | None = DEFAULT_SIZE_LIMIT) -> SimplicialComplex:
    try:
        vertices = list(data["vertices"])
        maximal = [tuple(s) for s in data["maximal_simplices"]]
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed complex object: {exc}") from exc
    labels = []
    for v in vertices:
        if isinstance(v, dict) and "pieces" in v:
            labels.append(map_from_json(v))
        else:
            labels.append(v)
    return SimplicialComplex.from_maximal(tuple(labels), maximal, size_limit)


def homology_to_json(hom: HomologyResult) -> list[dict]:
    return [
        {"degree": d, "betti": b, "torsion": list(t)} for d, b, t in hom.entries
    ]
