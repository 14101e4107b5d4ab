"""Exact geometry of rays and ray partitions of N^k x [n].

Coordinates are positive integers (N starts at 1).  A ray is the subset of
N^k cut out by a base point and a set of free directions: coordinates in the
direction set range over [base_j, oo), all others are pinned to base_j.  A
0-dimensional ray is a point, a k-dimensional ray a translated orthant.

Rays are closed under intersection and split cleanly along any free
direction, which makes finite unions of disjoint rays (regions) and finite
partitions into rays exactly computable.  The normal form used throughout is
the *grid form*: for a threshold t >= 0 the cells with all fixed coordinates
in [1, t] and all free coordinates starting at t+1 partition N^k into
(t+1)^k rays, every grid refines all coarser grids, and any ray whose base
is small enough relative to t is a union of t-cells.  Canonicalising a
region means writing it as the set of cells of the minimal adequate grid.

All values are immutable and all functions are pure; everything is safe to
share between threads.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator

from .errors import ValidationError

__all__ = [
    "Ray",
    "MarkedRay",
    "Region",
    "RayPartition",
    "PartitionDiagnostics",
    "ray_intersect",
    "ray_split",
    "marked_intersect",
    "grid_partition",
    "grid_cells",
    "cell_of_point",
    "common_refinement",
    "region_complement",
    "partition_validate",
    "canonicalize_region",
    "region_equal",
    "ray_to_json",
    "ray_from_json",
    "marked_ray_to_json",
    "marked_ray_from_json",
    "region_to_json",
    "region_from_json",
]


def _check_coords(coords: tuple[int, ...]) -> None:
    if not coords:
        raise ValidationError("points need at least one coordinate")
    for c in coords:
        if not isinstance(c, int) or isinstance(c, bool) or c < 1:
            raise ValidationError(f"coordinates must be integers >= 1, got {coords!r}")


@dataclass(frozen=True, slots=True)
class Ray:
    """A ray of N^k: free directions ``dirs`` above ``base``, rest pinned.

    Denotes { y : y_j >= base_j for j in dirs, y_j = base_j otherwise }.
    """

    base: tuple[int, ...]
    dirs: tuple[int, ...]

    def __post_init__(self) -> None:
        _check_coords(self.base)
        k = len(self.base)
        prev = 0
        for j in self.dirs:
            if not isinstance(j, int) or j <= prev or j > k:
                raise ValidationError(
                    f"dirs must be strictly increasing within 1..{k}, got {self.dirs!r}"
                )
            prev = j

    @property
    def k(self) -> int:
        return len(self.base)

    @property
    def dim(self) -> int:
        return len(self.dirs)

    @property
    def is_full(self) -> bool:
        return len(self.dirs) == len(self.base)

    @property
    def threshold(self) -> int:
        """Least t such that this ray is a union of t-grid cells.

        Free coordinates may start at t+1, fixed ones must lie in [1, t].
        """
        t = 0
        free = set(self.dirs)
        for j, b in enumerate(self.base, start=1):
            t = max(t, b - 1 if j in free else b)
        return t

    def contains(self, point: tuple[int, ...]) -> bool:
        if len(point) != self.k:
            raise ValidationError(
                f"dimension mismatch: point of length {len(point)} in N^{self.k}"
            )
        free = set(self.dirs)
        for j, (p, b) in enumerate(zip(point, self.base), start=1):
            if j in free:
                if p < b:
                    return False
            elif p != b:
                return False
        return True

    def translate(self, offset: tuple[int, ...]) -> "Ray":
        if len(offset) != self.k:
            raise ValidationError("offset dimension mismatch")
        moved = tuple(b + d for b, d in zip(self.base, offset))
        if any(c < 1 for c in moved):
            raise ValidationError(
                f"translation by {offset} moves base {self.base} outside N^{self.k}"
            )
        return Ray(moved, self.dirs)

    def sort_key(self) -> tuple:
        return (self.dirs, self.base)


@dataclass(frozen=True, slots=True)
class MarkedRay:
    """A ray inside a specific copy of N^k within N^k x [n]."""

    ray: Ray
    copy: int

    def __post_init__(self) -> None:
        if not isinstance(self.copy, int) or self.copy < 1:
            raise ValidationError(f"copy index must be >= 1, got {self.copy!r}")

    def contains(self, point: tuple[int, ...], copy: int) -> bool:
        return copy == self.copy and self.ray.contains(point)

    def sort_key(self) -> tuple:
        return (self.copy, self.ray.dirs, self.ray.base)


def ray_intersect(r1: Ray, r2: Ray) -> Ray | None:
    """Intersection of two rays; None when empty.

    The result has direction set dirs(r1) & dirs(r2).  A coordinate fixed in
    one ray must satisfy the other ray's constraint on it; a coordinate free
    in both starts at the larger base.
    """
    if r1.k != r2.k:
        raise ValidationError("dimension mismatch between rays")
    free1, free2 = set(r1.dirs), set(r2.dirs)
    base: list[int] = []
    dirs: list[int] = []
    for j, (b1, b2) in enumerate(zip(r1.base, r2.base), start=1):
        in1, in2 = j in free1, j in free2
        if in1 and in2:
            dirs.append(j)
            base.append(max(b1, b2))
        elif in1:
            if b2 < b1:
                return None
            base.append(b2)
        elif in2:
            if b1 < b2:
                return None
            base.append(b1)
        else:
            if b1 != b2:
                return None
            base.append(b1)
    return Ray(tuple(base), tuple(dirs))


def marked_intersect(m1: MarkedRay, m2: MarkedRay) -> MarkedRay | None:
    if m1.copy != m2.copy:
        return None
    inner = ray_intersect(m1.ray, m2.ray)
    return None if inner is None else MarkedRay(inner, m1.copy)


def ray_split(r: Ray, j: int) -> tuple[Ray, Ray]:
    """Split ``r`` along free direction ``j`` into (slice, rest).

    The slice pins coordinate j to the base value, the rest starts one step
    further out; the two are disjoint and their union is ``r``.
    """
    if j not in r.dirs:
        raise ValidationError(f"direction {j} is not free in {r}")
    child = Ray(r.base, tuple(d for d in r.dirs if d != j))
    shifted = tuple(b + (1 if i == j else 0) for i, b in enumerate(r.base, start=1))
    return child, Ray(shifted, r.dirs)


# -- grid machinery ---------------------------------------------------------


@lru_cache(maxsize=None)
def grid_cells(k: int, t: int) -> tuple[Ray, ...]:
    """All cells of the threshold-t grid of N^k, in canonical order.

    For each S subset of {1..k} the cells fix coordinates outside S to values
    in [1, t] and free the coordinates of S starting at t+1; there are
    (t+1)^k cells and they partition N^k.
    """
    if k < 1 or t < 0:
        raise ValidationError("need k >= 1 and t >= 0")
    cells = []
    for mask in itertools.product((False, True), repeat=k):
        fixed_ranges = [range(1, t + 1) if not free else (t + 1,) for free in mask]
        dirs = tuple(j for j, free in enumerate(mask, start=1) if free)
        for base in itertools.product(*fixed_ranges):
            cells.append(Ray(tuple(base), dirs))
    cells.sort(key=Ray.sort_key)
    return tuple(cells)


def cell_of_point(point: tuple[int, ...], t: int) -> Ray:
    """The unique threshold-t grid cell containing ``point``."""
    dirs = tuple(j for j, p in enumerate(point, start=1) if p >= t + 1)
    base = tuple(min(p, t + 1) for p in point)
    return Ray(base, dirs)


def _cell_parent(cell: Ray, t: int) -> Ray:
    """The (t-1)-grid cell containing a t-grid cell."""
    return cell_of_point(cell.base, t - 1)


def _cell_children(cell: Ray, t: int) -> list[Ray]:
    """The t-grid cells partitioning a (t-1)-grid cell."""
    options = []
    free = set(cell.dirs)
    for j, b in enumerate(cell.base, start=1):
        if j in free:
            options.append(((t, False), (t + 1, True)))
        else:
            options.append(((b, False),))
    children = []
    for combo in itertools.product(*options):
        base = tuple(v for v, _ in combo)
        dirs = tuple(j for j, (_, f) in enumerate(combo, start=1) if f)
        children.append(Ray(base, dirs))
    return children


def _cells_within_ray(ray: Ray, t: int) -> Iterator[Ray]:
    """The t-grid cells whose union is ``ray``; requires t >= ray.threshold."""
    if t < ray.threshold:
        raise ValidationError(f"threshold {t} too small for {ray}")
    options = []
    free = set(ray.dirs)
    for j, b in enumerate(ray.base, start=1):
        if j in free:
            opts = [((v,), False) for v in range(b, t + 1)]
            opts.append(((t + 1,), True))
            options.append(opts)
        else:
            options.append([((b,), False)])
    for combo in itertools.product(*options):
        base = tuple(v[0] for v, _ in combo)
        dirs = tuple(j for j, (_, f) in enumerate(combo, start=1) if f)
        yield Ray(base, dirs)


def _ray_contains_cell(ray: Ray, cell: Ray, t: int) -> bool:
    """Whether a t-grid cell lies inside ``ray`` (needs t >= ray.threshold).

    At an adequate threshold a cell meeting the ray is contained in it, so
    base-point membership decides containment.
    """
    if t < ray.threshold:
        raise ValidationError("threshold too small for containment test")
    return ray.contains(cell.base)


# -- regions ----------------------------------------------------------------


@dataclass(frozen=True, slots=True)
class Region:
    """A finite disjoint union of marked rays inside N^k x [n]."""

    k: int
    n: int
    rays: tuple[MarkedRay, ...]

    def __post_init__(self) -> None:
        if self.k < 1 or self.n < 1:
            raise ValidationError("ambient needs k >= 1 and n >= 1")
        for m in self.rays:
            if m.ray.k != self.k:
                raise ValidationError(f"ray {m} does not live in N^{self.k}")
            if m.copy > self.n:
                raise ValidationError(f"copy {m.copy} exceeds ambient copy count {self.n}")
        for a, b in itertools.combinations(self.rays, 2):
            if marked_intersect(a, b) is not None:
                raise ValidationError(f"region rays overlap: {a} and {b}")

    @classmethod
    def full(cls, k: int, n: int) -> "Region":
        full_ray = Ray((1,) * k, tuple(range(1, k + 1)))
        return cls(k, n, tuple(MarkedRay(full_ray, c) for c in range(1, n + 1)))

    @classmethod
    def empty(cls, k: int, n: int) -> "Region":
        return cls(k, n, ())

    @property
    def is_empty(self) -> bool:
        return not self.rays

    @property
    def threshold(self) -> int:
        return max((m.ray.threshold for m in self.rays), default=0)

    def contains(self, point: tuple[int, ...], copy: int) -> bool:
        return any(m.contains(point, copy) for m in self.rays)


@dataclass(frozen=True, slots=True)
class RayPartition:
    """A region together with a decomposition into disjoint covering rays."""

    region: Region
    cells: tuple[MarkedRay, ...]

    def __post_init__(self) -> None:
        for m in self.cells:
            if m.ray.k != self.region.k or m.copy > self.region.n:
                raise ValidationError(f"cell {m} outside ambient of {self.region}")


@dataclass(frozen=True, slots=True)
class PartitionDiagnostics:
    ok: bool
    reason: str | None = None

    def __bool__(self) -> bool:
        return self.ok


def grid_partition(k: int, t: int, n: int) -> RayPartition:
    """Partition N^k x [n] into the n*(t+1)^k cells of the threshold-t grid."""
    if t < 0:
        raise ValidationError("threshold must be >= 0")
    cells = tuple(
        MarkedRay(cell, copy)
        for copy in range(1, n + 1)
        for cell in grid_cells(k, t)
    )
    return RayPartition(Region.full(k, n), cells)


def partition_validate(p: RayPartition) -> PartitionDiagnostics:
    """Check disjointness and exact coverage of the region by the cells.

    Coverage is decided on the grid whose threshold dominates every ray in
    sight, where cell containment reduces to a base-point test.
    """
    for a, b in itertools.combinations(p.cells, 2):
        if marked_intersect(a, b) is not None:
            return PartitionDiagnostics(False, f"cells overlap: {a} and {b}")
    t = max(
        p.region.threshold,
        max((m.ray.threshold for m in p.cells), default=0),
    )
    region_rays = {c: [m.ray for m in p.region.rays if m.copy == c] for c in range(1, p.region.n + 1)}
    cell_rays = {c: [m.ray for m in p.cells if m.copy == c] for c in range(1, p.region.n + 1)}
    # every cell must sit inside the region
    for copy, rays in cell_rays.items():
        hosts = region_rays[copy]
        for ray in rays:
            for sub in _cells_within_ray(ray, t):
                if not any(_ray_contains_cell(h, sub, t) for h in hosts):
                    return PartitionDiagnostics(
                        False, f"cell {ray} on copy {copy} leaves the region near {sub.base}"
                    )
    # every grid cell of the region must be covered
    for copy, hosts in region_rays.items():
        covers = cell_rays[copy]
        for host in hosts:
            for sub in _cells_within_ray(host, t):
                if not any(_ray_contains_cell(c, sub, t) for c in covers):
                    return PartitionDiagnostics(
                        False, f"uncovered cell {sub} on copy {copy}"
                    )
    return PartitionDiagnostics(True)


def common_refinement(p1: RayPartition, p2: RayPartition) -> RayPartition:
    """All nonempty pairwise intersections of cells; refines both inputs."""
    if not region_equal(p1.region, p2.region):
        raise ValidationError("partitions cover different regions")
    cells = []
    for a in p1.cells:
        for b in p2.cells:
            both = marked_intersect(a, b)
            if both is not None:
                cells.append(both)
    cells.sort(key=MarkedRay.sort_key)
    return RayPartition(p1.region, tuple(cells))


def _canonical_cells(reg: Region) -> tuple[int, tuple[MarkedRay, ...]]:
    """Minimal grid threshold t* and the t*-cells whose union is ``reg``.

    Starts from the grid adequate for the given representation and coarsens
    one level at a time; a level merge succeeds when every parent cell is
    fully covered by cells of the current level.  The search descends from
    the representation's own threshold, so the result is independent of how
    the region was presented.
    """
    if reg.is_empty:
        return 0, ()
    t = reg.threshold
    current: set[tuple[int, Ray]] = set()
    for m in reg.rays:
        for cell in _cells_within_ray(m.ray, t):
            current.add((m.copy, cell))
    while t > 0:
        groups: dict[tuple[int, Ray], set[Ray]] = {}
        for copy, cell in current:
            groups.setdefault((copy, _cell_parent(cell, t)), set()).add(cell)
        ok = all(
            len(found) == 2 ** len(parent.dirs)
            for (_, parent), found in groups.items()
        )
        if not ok:
            break
        current = set(groups.keys())
        t -= 1
    cells = sorted((MarkedRay(cell, copy) for copy, cell in current), key=MarkedRay.sort_key)
    return t, tuple(cells)


def canonicalize_region(reg: Region) -> Region:
    """Representation-independent normal form: minimal-grid cells in order."""
    _, cells = _canonical_cells(reg)
    return Region(reg.k, reg.n, cells)


def region_equal(a: Region, b: Region) -> bool:
    if a.k != b.k or a.n != b.n:
        return False
    return _canonical_cells(a)[1] == _canonical_cells(b)[1]


def region_complement(reg: Region) -> Region:
    """N^k x [n] minus the region, in canonical grid form."""
    t = reg.threshold
    per_copy: dict[int, list[Ray]] = {c: [] for c in range(1, reg.n + 1)}
    for m in reg.rays:
        per_copy[m.copy].append(m.ray)
    missing = []
    for copy in range(1, reg.n + 1):
        hosts = per_copy[copy]
        for cell in grid_cells(reg.k, t):
            if not any(_ray_contains_cell(h, cell, t) for h in hosts):
                missing.append(MarkedRay(cell, copy))
    return canonicalize_region(Region(reg.k, reg.n, tuple(missing)))


# -- JSON encoding ----------------------------------------------------------


def ray_to_json(r: Ray) -> dict:
    return {"base": list(r.base), "dirs": list(r.dirs)}


def ray_from_json(data: dict) -> Ray:
    try:
        base = tuple(int(c) for c in data["base"])
        dirs = tuple(sorted(int(j) for j in data["dirs"]))
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed ray object: {data!r}") from exc
    return Ray(base, dirs)


def marked_ray_to_json(m: MarkedRay) -> dict:
    out = ray_to_json(m.ray)
    out["copy"] = m.copy
    return out


def marked_ray_from_json(data: dict) -> MarkedRay:
    if "copy" not in data:
        raise ValidationError(f"marked ray needs a copy index: {data!r}")
    return MarkedRay(ray_from_json(data), int(data["copy"]))


def region_to_json(reg: Region) -> dict:
    canon = canonicalize_region(reg)
    return {
        "k": canon.k,
        "n": canon.n,
        "rays": [marked_ray_to_json(m) for m in canon.rays],
    }


def region_from_json(data: dict) -> Region:
    try:
        k, n = int(data["k"]), int(data["n"])
        rays = tuple(marked_ray_from_json(r) for r in data["rays"])
    except (KeyError, TypeError) as exc:
        raise ValidationError(f"malformed region object: {data!r}") from exc
    return Region(k, n, rays)
