"""The multidimensional Houghton groups and their morphism category.

An element of the twisted group acting on N^k x [n] is stored as a finite
list of pieces: a partition of the domain into marked rays together with one
translation per ray (an offset in Z^k plus an absolute target copy).  The
same data with m domain copies and n >= m codomain copies encodes a ray
injection N^k x [m] -> N^k x [n]; the bijective m = n case is a group
element.

Equality, composition and inversion are exact.  Every map has a canonical
form: the coarsest grid of the domain on which it is a translation per cell.
Pointwise equality of maps is equality of canonical forms, and compositions
are computed by refining the first map's domain far enough that each image
cell lands inside a single canonical cell of the second map.

Everything is immutable and pure; seeded generators are deterministic.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from functools import lru_cache

from .errors import ValidationError
from .rays import (
    MarkedRay,
    Ray,
    RayPartition,
    Region,
    _cell_children,
    _cells_within_ray,
    canonicalize_region,
    cell_of_point,
    grid_cells,
    marked_intersect,
    marked_ray_from_json,
    partition_validate,
    ray_split,
    region_complement,
    region_equal,
)

__all__ = [
    "Translation",
    "HoughtonMap",
    "PermutationN",
    "MapDiagnostics",
    "identity_map",
    "validate",
    "apply_map",
    "compose",
    "inverse",
    "equals",
    "canonical_form",
    "canonical_threshold",
    "max_offset",
    "image_region",
    "sigma_projection",
    "in_kernel",
    "embed_symmetric",
    "decompose",
    "translation_vector",
    "k_ray_offsets",
    "eventual_translation_check",
    "fi_map",
    "extend_to_automorphism",
    "restrict",
    "same_subobject",
    "complement_subobject",
    "random_element",
    "random_injection",
    "map_to_json",
    "map_from_json",
]


@dataclass(frozen=True, slots=True)
class Translation:
    """Translate by ``offset`` and move to ``target_copy``."""

    offset: tuple[int, ...]
    target_copy: int

    def __post_init__(self) -> None:
        if not isinstance(self.target_copy, int) or self.target_copy < 1:
            raise ValidationError(f"target copy must be >= 1, got {self.target_copy!r}")
        if not self.offset or any(not isinstance(d, int) for d in self.offset):
            raise ValidationError(f"offset must be a nonempty integer vector, got {self.offset!r}")


@dataclass(frozen=True, slots=True)
class PermutationN:
    """A permutation of [n], stored as the tuple of images."""

    images: tuple[int, ...]

    def __post_init__(self) -> None:
        n = len(self.images)
        if sorted(self.images) != list(range(1, n + 1)):
            raise ValidationError(f"not a permutation of [{n}]: {self.images!r}")

    @classmethod
    def identity(cls, n: int) -> "PermutationN":
        return cls(tuple(range(1, n + 1)))

    @property
    def n(self) -> int:
        return len(self.images)

    def __call__(self, i: int) -> int:
        return self.images[i - 1]

    def compose(self, other: "PermutationN") -> "PermutationN":
        """self after other: (self * other)(i) = self(other(i))."""
        if self.n != other.n:
            raise ValidationError("permutation size mismatch")
        return PermutationN(tuple(self(other(i)) for i in range(1, self.n + 1)))

    def inverse(self) -> "PermutationN":
        img = [0] * self.n
        for i, j in enumerate(self.images, start=1):
            img[j - 1] = i
        return PermutationN(tuple(img))

    @property
    def is_identity(self) -> bool:
        return self.images == tuple(range(1, self.n + 1))


@dataclass(frozen=True, slots=True)
class HoughtonMap:
    """A ray injection N^k x [m] -> N^k x [n] given by per-ray translations."""

    k: int
    m: int
    n: int
    pieces: tuple[tuple[MarkedRay, Translation], ...]

    def __post_init__(self) -> None:
        if self.k < 1 or self.m < 1 or self.n < 1:
            raise ValidationError("need k, m, n >= 1")
        for dom, tr in self.pieces:
            if dom.ray.k != self.k or len(tr.offset) != self.k:
                raise ValidationError(f"piece {dom} has wrong dimension for k={self.k}")
            if dom.copy > self.m:
                raise ValidationError(f"domain copy {dom.copy} exceeds m={self.m}")
            if tr.target_copy > self.n:
                raise ValidationError(f"target copy {tr.target_copy} exceeds n={self.n}")
            moved = tuple(b + d for b, d in zip(dom.ray.base, tr.offset))
            if any(c < 1 for c in moved):
                raise ValidationError(
                    f"piece {dom} translated by {tr.offset} leaves N^{self.k}"
                )

    def image_ray(self, piece: tuple[MarkedRay, Translation]) -> MarkedRay:
        dom, tr = piece
        return MarkedRay(dom.ray.translate(tr.offset), tr.target_copy)


@dataclass(frozen=True, slots=True)
class MapDiagnostics:
    valid: bool
    bijective: bool
    problems: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.valid


def identity_map(k: int, n: int) -> HoughtonMap:
    full = Ray((1,) * k, tuple(range(1, k + 1)))
    pieces = tuple(
        (MarkedRay(full, c), Translation((0,) * k, c)) for c in range(1, n + 1)
    )
    return HoughtonMap(k, n, n, pieces)


def image_region(f: HoughtonMap) -> Region:
    return Region(f.k, f.n, tuple(f.image_ray(p) for p in f.pieces))


def validate(f: HoughtonMap) -> MapDiagnostics:
    """Domain partition, positivity, injectivity; bijectivity when m = n."""
    problems: list[str] = []
    domain = RayPartition(
        Region.full(f.k, f.m), tuple(dom for dom, _ in f.pieces)
    )
    diag = partition_validate(domain)
    if not diag.ok:
        problems.append(f"domain is not a ray partition: {diag.reason}")
    images = [f.image_ray(p) for p in f.pieces]
    for a, b in itertools.combinations(images, 2):
        if marked_intersect(a, b) is not None:
            problems.append(f"image rays overlap: {a} and {b}")
            break
    bijective = False
    if not problems and f.m == f.n:
        bijective = region_complement(Region(f.k, f.n, tuple(images))).is_empty
    return MapDiagnostics(not problems, bijective, tuple(problems))


# -- canonical form ----------------------------------------------------------

CellKey = tuple[int, Ray]


@lru_cache(maxsize=None)
def _canonical_table(f: HoughtonMap) -> tuple[int, tuple[tuple[CellKey, Translation], ...]]:
    """Minimal grid threshold and the per-cell translation table of ``f``.

    The table at the representation's own threshold is coarsened one grid
    level at a time while all sibling cells agree, so the result depends only
    on the map as a function.
    """
    t = max(dom.ray.threshold for dom, _ in f.pieces)
    table: dict[CellKey, Translation] = {}
    for dom, tr in f.pieces:
        for cell in _cells_within_ray(dom.ray, t):
            key = (dom.copy, cell)
            if key in table and table[key] != tr:
                raise ValidationError(
                    f"domain pieces overlap on copy {dom.copy} at {cell}"
                )
            table[key] = tr
    if len(table) != f.m * (t + 1) ** f.k:
        raise ValidationError("domain pieces do not cover every copy")
    while t > 0:
        merged: dict[CellKey, Translation] = {}
        ok = True
        for copy in range(1, f.m + 1):
            for parent in grid_cells(f.k, t - 1):
                children = _cell_children(parent, t)
                trs = {table[(copy, child)] for child in children}
                if len(trs) != 1:
                    ok = False
                    break
                merged[(copy, parent)] = next(iter(trs))
            if not ok:
                break
        if not ok:
            break
        table = merged
        t -= 1
    items = tuple(sorted(table.items(), key=lambda kv: (kv[0][0], kv[0][1].sort_key())))
    return t, items


@lru_cache(maxsize=None)
def _canonical_dict(f: HoughtonMap) -> tuple[int, dict[CellKey, Translation]]:
    t, items = _canonical_table(f)
    return t, dict(items)


def canonical_threshold(f: HoughtonMap) -> int:
    return _canonical_table(f)[0]


def max_offset(f: HoughtonMap) -> int:
    return max(abs(d) for _, tr in f.pieces for d in tr.offset)


def canonical_form(f: HoughtonMap) -> HoughtonMap:
    _, items = _canonical_table(f)
    pieces = tuple((MarkedRay(cell, copy), tr) for (copy, cell), tr in items)
    return HoughtonMap(f.k, f.m, f.n, pieces)


def equals(f: HoughtonMap, g: HoughtonMap) -> bool:
    """Pointwise equality, decided on canonical forms."""
    if (f.k, f.m, f.n) != (g.k, g.m, g.n):
        raise ValidationError("cannot compare maps of different shapes")
    return _canonical_table(f) == _canonical_table(g)


def apply_map(f: HoughtonMap, point: tuple[int, ...], copy: int) -> tuple[tuple[int, ...], int]:
    """Evaluate ``f`` at a point of N^k x [m]."""
    if len(point) != f.k or any(c < 1 for c in point):
        raise ValidationError(f"{point!r} is not a point of N^{f.k}")
    if not 1 <= copy <= f.m:
        raise ValidationError(f"copy {copy} outside [1, {f.m}]")
    t, table = _canonical_dict(f)
    tr = table[(copy, cell_of_point(point, t))]
    return tuple(x + d for x, d in zip(point, tr.offset)), tr.target_copy


def compose(g: HoughtonMap, f: HoughtonMap) -> HoughtonMap:
    """g after f.  Shapes must chain: f: m -> n, g: n -> r.

    f's domain is refined to a grid fine enough that each translated cell
    lies inside a single canonical cell of g; the two translations then
    combine cell by cell, and the result is re-canonicalised.
    """
    if f.k != g.k or f.n != g.m:
        raise ValidationError(
            f"shape mismatch: cannot compose {g.m}->{g.n} after {f.m}->{f.n}"
        )
    tf, f_table = _canonical_dict(f)
    tg, g_table = _canonical_dict(g)
    off = max((abs(d) for tr in f_table.values() for d in tr.offset), default=0)
    t = tf + tg + off
    pieces = []
    for copy in range(1, f.m + 1):
        for cell in grid_cells(f.k, t):
            tr1 = f_table[(copy, cell_of_point(cell.base, tf))]
            moved = cell.translate(tr1.offset)
            gcell = cell_of_point(moved.base, tg)
            # the refinement threshold guarantees the image cell sits in one
            # canonical cell of g; keep that explicit
            if not set(moved.dirs) <= set(gcell.dirs) or not gcell.contains(moved.base):
                raise AssertionError("composition refinement threshold too small")
            tr2 = g_table[(tr1.target_copy, gcell)]
            combined = Translation(
                tuple(a + b for a, b in zip(tr1.offset, tr2.offset)), tr2.target_copy
            )
            pieces.append((MarkedRay(cell, copy), combined))
    return canonical_form(HoughtonMap(f.k, f.m, g.n, tuple(pieces)))


def inverse(g: HoughtonMap) -> HoughtonMap:
    """Invert a bijective element: image rays with negated translations."""
    if g.m != g.n:
        raise ValidationError("only m = n maps can be inverted")
    diag = validate(g)
    if not diag.bijective:
        raise ValidationError(f"map is not bijective: {diag.problems or 'image has gaps'}")
    pieces = tuple(
        (g.image_ray((dom, tr)), Translation(tuple(-d for d in tr.offset), dom.copy))
        for dom, tr in g.pieces
    )
    return canonical_form(HoughtonMap(g.k, g.n, g.m, pieces))


def _k_piece(f: HoughtonMap, copy: int) -> tuple[MarkedRay, Translation]:
    """The unique full-dimensional piece of a domain copy."""
    for dom, tr in f.pieces:
        if dom.copy == copy and dom.ray.is_full:
            return dom, tr
    raise ValidationError(f"no full-dimensional ray on copy {copy}; invalid partition")


def sigma_projection(g: HoughtonMap) -> PermutationN:
    """Where each copy's full-dimensional ray is sent; a permutation for m = n."""
    if g.m != g.n:
        raise ValidationError("copy projection needs m = n")
    return PermutationN(tuple(_k_piece(g, c)[1].target_copy for c in range(1, g.n + 1)))


def in_kernel(g: HoughtonMap) -> bool:
    return sigma_projection(g).is_identity


def embed_symmetric(sigma: PermutationN, k: int) -> HoughtonMap:
    """The element permuting copies and fixing every point of N^k."""
    full = Ray((1,) * k, tuple(range(1, k + 1)))
    pieces = tuple(
        (MarkedRay(full, i), Translation((0,) * k, sigma(i)))
        for i in range(1, sigma.n + 1)
    )
    return HoughtonMap(k, sigma.n, sigma.n, pieces)


def decompose(g: HoughtonMap) -> tuple[HoughtonMap, PermutationN]:
    """Split g = h . embed(sigma) with h in the kernel of the copy projection."""
    sigma = sigma_projection(g)
    h = compose(g, embed_symmetric(sigma.inverse(), g.k))
    return h, sigma


def translation_vector(g: HoughtonMap) -> tuple[int, ...]:
    """The eventual translation amounts (d_1, ..., d_n) of a kernel element, k = 1."""
    if g.k != 1:
        raise ValidationError("translation vector is defined for k = 1 only")
    if not in_kernel(g):
        raise ValidationError("translation vector needs a kernel element")
    return tuple(_k_piece(g, c)[1].offset[0] for c in range(1, g.n + 1))


def k_ray_offsets(g: HoughtonMap) -> list[tuple[int, tuple[int, ...], int]]:
    """(copy, offset, target copy) of the full-dimensional piece of each copy."""
    if g.m != g.n:
        raise ValidationError("offset report needs m = n")
    out = []
    for c in range(1, g.n + 1):
        _, tr = _k_piece(g, c)
        out.append((c, tr.offset, tr.target_copy))
    return out


def eventual_translation_check(g: HoughtonMap) -> tuple[bool, dict[int, int]]:
    """Certify g(x, i) = (x + d_i, sigma(i)) beyond a per-copy threshold, k = 1.

    In dimension one the full ray of a copy covers everything beyond its
    base, so the certificate is exact: the threshold for copy i is the base
    of its 1-dimensional piece minus one.
    """
    if g.k != 1:
        raise ValidationError("eventual-translation check is for k = 1")
    if g.m != g.n:
        raise ValidationError("eventual-translation check needs m = n")
    thresholds = {}
    for c in range(1, g.n + 1):
        dom, tr = _k_piece(g, c)
        base = dom.ray.base[0]
        for other, _ in g.pieces:
            if other.copy == c and other is not dom and other.ray.base[0] >= base:
                return False, {}
        thresholds[c] = base - 1
    return True, thresholds


def restrict(g: HoughtonMap, m: int) -> HoughtonMap:
    """Restriction to the first m copies of the domain."""
    if not 1 <= m <= g.m:
        raise ValidationError(f"cannot restrict {g.m} copies to {m}")
    pieces = tuple(p for p in g.pieces if p[0].copy <= m)
    return HoughtonMap(g.k, m, g.n, pieces)


def fi_map(f_images: tuple[int, ...], n: int, g: HoughtonMap) -> HoughtonMap:
    """Push a kernel element of the m-copy group along an injection [m] -> [n].

    Copies are relabelled through the injection and the map is extended by
    the identity on copies outside its image.
    """
    m = len(f_images)
    if len(set(f_images)) != m or any(not 1 <= i <= n for i in f_images):
        raise ValidationError(f"{f_images!r} is not an injection into [{n}]")
    if g.m != m or g.n != m:
        raise ValidationError(f"element acts on {g.m} copies, injection leaves {m}")
    if not in_kernel(g):
        raise ValidationError("functoriality on copies needs a kernel element")
    pieces = [
        (
            MarkedRay(dom.ray, f_images[dom.copy - 1]),
            Translation(tr.offset, f_images[tr.target_copy - 1]),
        )
        for dom, tr in g.pieces
    ]
    full = Ray((1,) * g.k, tuple(range(1, g.k + 1)))
    for c in range(1, n + 1):
        if c not in f_images:
            pieces.append((MarkedRay(full, c), Translation((0,) * g.k, c)))
    return HoughtonMap(g.k, n, n, tuple(pieces))


def image_complement(f: HoughtonMap) -> Region:
    return region_complement(image_region(f))


def complement_subobject(f: HoughtonMap) -> RayPartition:
    """Ray partition of the codomain minus the image."""
    diag = validate(f)
    if not diag.valid:
        raise ValidationError(f"not a valid injection: {diag.problems}")
    comp = image_complement(f)
    return RayPartition(comp, comp.rays)


def same_subobject(f: HoughtonMap, g: HoughtonMap) -> bool:
    """Whether two injections into the same codomain have equal images."""
    if f.k != g.k or f.n != g.n:
        raise ValidationError("subobject comparison needs a common codomain")
    if f.m != g.m:
        return False
    return region_equal(image_region(f), image_region(g))


def extend_to_automorphism(f: HoughtonMap) -> HoughtonMap:
    """Extend an injection N^k x [m] -> N^k x [n], m < n, to a group element.

    The complement of the image is a finite union of grid cells containing
    exactly n - m full-dimensional ones.  Source copies m+1..n are matched to
    those; every lower-dimensional complement cell is produced by splitting a
    source full ray down a chain (coordinates in increasing order), with the
    chain's intermediate debris replicated on the complement side by
    splitting a complement full cell one step less deep, so both sides add
    rays with identical direction sets.
    """
    if f.m >= f.n:
        raise ValidationError("extension needs strictly fewer domain copies")
    diag = validate(f)
    if not diag.valid:
        raise ValidationError(f"not a valid injection: {diag.problems}")
    comp = canonicalize_region(image_complement(f))
    k = f.k
    full_dirs = tuple(range(1, k + 1))
    kcell_base = {
        m.copy: m.ray.base for m in comp.rays if m.ray.is_full
    }
    open_copies = sorted(kcell_base)
    if len(open_copies) != f.n - f.m:
        raise AssertionError("complement must contain one full cell per unused copy")
    source_for = {open_copies[i]: f.m + 1 + i for i in range(len(open_copies))}
    host_target = open_copies[0]
    host_source = source_for[host_target]
    src_base = {f.m + 1 + i: (1,) * k for i in range(len(open_copies))}

    def chain(start: Ray, js: list[int]) -> tuple[Ray, list[Ray], Ray]:
        """Split ``start`` along js in order; (final child, debris, moved start)."""
        current = start
        child = None
        debris = []
        for idx, j in enumerate(js):
            piece, rest = ray_split(current if idx == 0 else child, j)
            if idx == 0:
                current = rest
            else:
                debris.append(rest)
            child = piece
        return child, debris, current

    new_pieces: list[tuple[MarkedRay, Translation]] = []
    for target_cell in comp.rays:
        if target_cell.ray.is_full:
            continue
        missing = sorted(set(full_dirs) - set(target_cell.ray.dirs))
        src_ray = Ray(src_base[host_source], full_dirs)
        child, debris, moved = chain(src_ray, missing)
        src_base[host_source] = moved.base
        new_pieces.append(
            (
                MarkedRay(child, host_source),
                Translation(
                    tuple(b - a for a, b in zip(child.base, target_cell.ray.base)),
                    target_cell.copy,
                ),
            )
        )
        if debris:
            comp_ray = Ray(kcell_base[host_target], full_dirs)
            comp_child, comp_debris, comp_moved = chain(comp_ray, missing[:-1])
            kcell_base[host_target] = comp_moved.base
            matches = sorted(comp_debris + [comp_child], key=lambda r: -len(r.dirs))
            for src, dst in zip(debris, matches):
                if src.dirs != dst.dirs:
                    raise AssertionError("debris direction sets out of step")
                new_pieces.append(
                    (
                        MarkedRay(src, host_source),
                        Translation(
                            tuple(b - a for a, b in zip(src.base, dst.base)),
                            host_target,
                        ),
                    )
                )
    for target_copy, source_copy in source_for.items():
        base = src_base[source_copy]
        new_pieces.append(
            (
                MarkedRay(Ray(base, full_dirs), source_copy),
                Translation(
                    tuple(b - a for a, b in zip(base, kcell_base[target_copy])),
                    target_copy,
                ),
            )
        )
    out = HoughtonMap(k, f.n, f.n, f.pieces + tuple(new_pieces))
    check = validate(out)
    if not check.bijective:
        raise AssertionError(f"extension failed to close up: {check.problems}")
    return out


# -- seeded generators -------------------------------------------------------


def random_element(k: int, n: int, bound: int, seed: int) -> HoughtonMap:
    """Deterministic random element with canonical threshold and offsets <= bound.

    Draws a grid threshold t <= bound and permutes the grid cells within each
    direction class across copies; translations between same-shaped cells
    stay within the bound by construction.
    """
    if bound < 0:
        raise ValidationError("bound must be >= 0")
    rng = random.Random(seed)
    t = rng.randint(0, bound)
    by_dirs: dict[tuple[int, ...], list[MarkedRay]] = {}
    for copy in range(1, n + 1):
        for cell in grid_cells(k, t):
            by_dirs.setdefault(cell.dirs, []).append(MarkedRay(cell, copy))
    pieces = []
    for dirs in sorted(by_dirs):
        cells = by_dirs[dirs]
        targets = cells[:]
        rng.shuffle(targets)
        for src, dst in zip(cells, targets):
            offset = tuple(b - a for a, b in zip(src.ray.base, dst.ray.base))
            pieces.append((src, Translation(offset, dst.copy)))
    return HoughtonMap(k, n, n, tuple(pieces))


def random_injection(k: int, m: int, n: int, bound: int, seed: int) -> HoughtonMap:
    """Deterministic random ray injection N^k x [m] -> N^k x [n], via restriction."""
    if not 1 <= m <= n:
        raise ValidationError("need 1 <= m <= n")
    return restrict(random_element(k, n, bound, seed), m)


# -- JSON --------------------------------------------------------------------


def map_to_json(f: HoughtonMap) -> dict:
    canon = canonical_form(f)
    return {
        "k": canon.k,
        "m": canon.m,
        "n": canon.n,
        "pieces": [
            {
                "copy": dom.copy,
                "base": list(dom.ray.base),
                "dirs": list(dom.ray.dirs),
                "offset": list(tr.offset),
                "target_copy": tr.target_copy,
            }
            for dom, tr in canon.pieces
        ],
    }


def map_from_json(data: dict) -> HoughtonMap:
    """Parse and fully validate an element/injection; invalid data is an error."""
    try:
        k, m, n = int(data["k"]), int(data["m"]), int(data["n"])
        pieces = tuple(
            (
                marked_ray_from_json(p),
                Translation(tuple(int(d) for d in p["offset"]), int(p["target_copy"])),
            )
            for p in data["pieces"]
        )
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed map object: {exc}") from exc
    f = HoughtonMap(k, m, n, pieces)
    diag = validate(f)
    if not diag.valid:
        raise ValidationError("; ".join(diag.problems))
    return f
