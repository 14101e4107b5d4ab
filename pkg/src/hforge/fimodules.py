"""Truncated FI-modules with symmetric-group actions and generation analysis.

A truncated FI-module stores, for each level 0 <= n <= N, a free module of
finite rank over Z or Q, the inclusion map from the previous level, and the
action of the adjacent transpositions of the symmetric group on n letters.
Arbitrary injections act through a factorisation into a standard inclusion
followed by a permutation; the induced module at level n assembles n twisted
copies of level n-1, and the surjectivity of its differential onto level n
detects whether new generators appear there.  Everything is exact: ranks
over Q via fraction arithmetic, cokernels over Z via Smith normal forms.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .errors import ValidationError
from .snf import snf_diagonal

__all__ = [
    "Level",
    "TruncatedFIModule",
    "InducedModule",
    "ModuleDiagnostics",
    "validate_fimodule",
    "action_matrix",
    "evaluate_injection",
    "sigma1",
    "generation_degree",
    "surjectivity_table",
    "truncate",
    "essentially_fg_report",
    "houghton_h1_fimodule",
    "constant_module",
    "permutation_module",
    "sum_zero_coords",
    "coords_to_sum_zero",
    "module_to_json",
    "module_from_json",
]

Mat = tuple[tuple, ...]


def _as_mat(rows) -> Mat:
    return tuple(tuple(x for x in row) for row in rows)


def _identity(n: int) -> Mat:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def _zero(rows: int, cols: int) -> Mat:
    return tuple((0,) * cols for _ in range(rows))


def _matmul(a: Mat, b: Mat, cols_b: int) -> Mat:
    """a @ b with an explicit column count so zero-rank factors stay shaped."""
    if not b:
        return _zero(len(a), cols_b)
    return tuple(
        tuple(sum(row[i] * b[i][j] for i in range(len(b))) for j in range(cols_b))
        for row in a
    )


def _hstack(blocks: list[Mat], rows: int) -> Mat:
    out = []
    for i in range(rows):
        row: list = []
        for block in blocks:
            row.extend(block[i])
        out.append(tuple(row))
    return tuple(out)


def _rank_q(mat: Mat, cols: int) -> int:
    work = [[Fraction(x) for x in row] for row in mat]
    rank = 0
    col = 0
    while rank < len(work) and col < cols:
        pivot = next((i for i in range(rank, len(work)) if work[i][col] != 0), None)
        if pivot is None:
            col += 1
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        pv = work[rank][col]
        for i in range(len(work)):
            if i != rank and work[i][col] != 0:
                factor = work[i][col] / pv
                work[i] = [a - factor * b for a, b in zip(work[i], work[rank])]
        rank += 1
        col += 1
    return rank


@dataclass(frozen=True)
class Level:
    """One level of a truncated FI-module.

    ``iota`` includes the previous level (rank_{n-1} columns, rank_n rows;
    None at level 0); ``transpositions`` are the matrices of s_1..s_{n-1};
    ``presentation`` optionally lists relation columns for non-free Z-modules.
    """

    rank: int
    iota: Mat | None
    transpositions: tuple[Mat, ...]
    presentation: Mat | None = None


@dataclass(frozen=True)
class TruncatedFIModule:
    N: int
    ring: str
    levels: tuple[Level, ...]

    def __post_init__(self):
        if self.ring not in ("Z", "Q"):
            raise ValidationError(f"ring must be 'Z' or 'Q', got {self.ring!r}")
        if len(self.levels) != self.N + 1:
            raise ValidationError(
                f"expected {self.N + 1} levels, got {len(self.levels)}"
            )

    def rank(self, n: int) -> int:
        return self.levels[n].rank


@dataclass(frozen=True)
class ModuleDiagnostics:
    valid: bool
    problems: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return self.valid


def _shape_ok(mat: Mat | None, rows: int, cols: int) -> bool:
    if mat is None:
        return False
    return len(mat) == rows and all(len(r) == cols for r in mat)


def validate_fimodule(v: TruncatedFIModule) -> ModuleDiagnostics:
    """Shapes, Coxeter relations, and inclusion equivariance at every level."""
    problems = []
    for n in range(v.N + 1):
        lv = v.levels[n]
        r = lv.rank
        if r < 0:
            problems.append(f"level {n}: negative rank")
            continue
        if len(lv.transpositions) != max(n - 1, 0):
            problems.append(
                f"level {n}: expected {max(n - 1, 0)} transposition matrices"
            )
            continue
        if n >= 1 and not _shape_ok(lv.iota, r, v.levels[n - 1].rank):
            problems.append(f"level {n}: inclusion matrix has wrong shape")
            continue
        if v.ring == "Q" and lv.presentation is not None:
            problems.append(f"level {n}: presentations are only supported over Z")
        ident = _identity(r)
        s = lv.transpositions
        for i, si in enumerate(s, start=1):
            if not _shape_ok(si, r, r):
                problems.append(f"level {n}: s_{i} has wrong shape")
                break
            if _matmul(si, si, r) != ident:
                problems.append(f"level {n}: s_{i}^2 != 1")
        for i in range(1, len(s)):
            lhs = _matmul(_matmul(s[i - 1], s[i], r), s[i - 1], r)
            rhs = _matmul(_matmul(s[i], s[i - 1], r), s[i], r)
            if lhs != rhs:
                problems.append(f"level {n}: braid relation fails at (s_{i}, s_{i + 1})")
        for i in range(1, len(s) + 1):
            for j in range(i + 2, len(s) + 1):
                if _matmul(s[i - 1], s[j - 1], r) != _matmul(s[j - 1], s[i - 1], r):
                    problems.append(f"level {n}: s_{i} and s_{j} do not commute")
        if n >= 1:
            prev = v.levels[n - 1]
            for i in range(1, n - 1):
                lhs = _matmul(s[i - 1], lv.iota, prev.rank)
                rhs = _matmul(lv.iota, prev.transpositions[i - 1], prev.rank)
                if lhs != rhs:
                    problems.append(
                        f"level {n}: inclusion does not intertwine s_{i}"
                    )
    return ModuleDiagnostics(not problems, tuple(problems))


def _adjacent_word(perm: tuple[int, ...]) -> list[int]:
    """Indices a_1..a_L with perm = s_{a_1} o ... o s_{a_L} (rightmost first)."""
    arr = list(perm)
    swaps = []
    changed = True
    while changed:
        changed = False
        for i in range(len(arr) - 1):
            if arr[i] > arr[i + 1]:
                arr[i], arr[i + 1] = arr[i + 1], arr[i]
                swaps.append(i + 1)
                changed = True
    return list(reversed(swaps))


def action_matrix(v: TruncatedFIModule, n: int, perm: tuple[int, ...]) -> Mat:
    """Matrix of a permutation of [n] acting on level n."""
    if sorted(perm) != list(range(1, n + 1)):
        raise ValidationError(f"{perm!r} is not a permutation of [{n}]")
    if n > v.N:
        raise ValidationError(f"level {n} exceeds the truncation {v.N}")
    r = v.levels[n].rank
    out = _identity(r)
    for a in _adjacent_word(perm):
        out = _matmul(out, v.levels[n].transpositions[a - 1], r)
    return out


def _iota_chain(v: TruncatedFIModule, m: int, n: int) -> Mat:
    """The composite inclusion from level m into level n."""
    acc = _identity(v.levels[m].rank)
    cols = v.levels[m].rank
    for level in range(m + 1, n + 1):
        acc = _matmul(v.levels[level].iota, acc, cols)
    return acc


def evaluate_injection(v: TruncatedFIModule, images: tuple[int, ...], n: int) -> Mat:
    """Matrix of an injection [m] -> [n]: standard inclusion, then a permutation.

    The permutation sends i to images[i-1] for i <= m and lists the missing
    targets in increasing order afterwards; the result does not depend on
    this completion.
    """
    m = len(images)
    if len(set(images)) != m or any(not 1 <= x <= n for x in images):
        raise ValidationError(f"{images!r} is not an injection into [{n}]")
    if not 0 <= m <= n <= v.N:
        raise ValidationError(f"injection [{m}] -> [{n}] outside truncation {v.N}")
    rest = [x for x in range(1, n + 1) if x not in images]
    perm = tuple(list(images) + rest)
    return _matmul(action_matrix(v, n, perm), _iota_chain(v, m, n), v.levels[m].rank)


@dataclass(frozen=True)
class InducedModule:
    """Level-n module induced from level n-p, with coset labels and action.

    Components are indexed by coset representatives; a permutation permutes
    components and twists each by a permutation of the lower level.
    """

    module: TruncatedFIModule
    level: int
    shift: int
    base_rank: int
    coset_reps: tuple[tuple[int, ...], ...]

    @property
    def rank(self) -> int:
        return len(self.coset_reps) * self.base_rank

    def action_matrix(self, perm: tuple[int, ...]) -> Mat:
        n, r = self.level, self.base_rank
        reps = {rep: i for i, rep in enumerate(self.coset_reps)}
        blocks: dict[tuple[int, int], Mat] = {}
        for i, tau in enumerate(self.coset_reps):
            sigma_tau = tuple(perm[t - 1] for t in tau)
            j = reps[_rep_for(sigma_tau, n)]
            target = self.coset_reps[j]
            inv_target = [0] * n
            for a, b in enumerate(target, start=1):
                inv_target[b - 1] = a
            h_full = tuple(inv_target[s - 1] for s in sigma_tau)
            if h_full[n - 1] != n:
                raise AssertionError("twist does not fix the new slot")
            blocks[(j, i)] = action_matrix(self.module, n - 1, h_full[: n - 1])
        rows = []
        for j in range(len(self.coset_reps)):
            for rr in range(r):
                row: list = []
                for i in range(len(self.coset_reps)):
                    block = blocks.get((j, i))
                    row.extend(block[rr] if block is not None else (0,) * r)
                rows.append(tuple(row))
        return tuple(rows)


def _rep_for(perm: tuple[int, ...], n: int) -> tuple[int, ...]:
    """The coset representative with the same image of the last slot."""
    return _tau(perm[n - 1], n)


def _tau(i: int, n: int) -> tuple[int, ...]:
    """The cycle sending n to i and shifting i..n-1 up by one."""
    images = []
    for j in range(1, n):
        images.append(j + 1 if j >= i else j)
    images.append(i)
    return tuple(images)


def sigma1(v: TruncatedFIModule, n: int) -> tuple[InducedModule, Mat]:
    """The induced module at level n and its differential into level n.

    Component i carries level n-1 through the coset representative sending
    the new slot to i; the differential is that action composed with the
    inclusion, so its image is the symmetric-group span of the included
    lower level.
    """
    if not 1 <= n <= v.N:
        raise ValidationError(f"need 1 <= n <= {v.N}")
    base_rank = v.levels[n - 1].rank
    reps = tuple(_tau(i, n) for i in range(1, n + 1))
    induced = InducedModule(v, n, 1, base_rank, reps)
    blocks = [
        _matmul(action_matrix(v, n, tau), v.levels[n].iota, base_rank) for tau in reps
    ]
    d1 = _hstack(blocks, v.levels[n].rank)
    return induced, d1


def _surjective_at(v: TruncatedFIModule, n: int) -> bool:
    r = v.levels[n].rank
    if r == 0:
        return True
    _, d1 = sigma1(v, n)
    cols = n * v.levels[n - 1].rank
    pres = v.levels[n].presentation
    if pres is not None:
        d1 = _hstack([d1, pres], r)
        cols += len(pres[0]) if pres else 0
    if v.ring == "Q":
        return _rank_q(d1, cols) == r
    diag = snf_diagonal([list(row) for row in d1])
    return sum(1 for x in diag if x == 1) == r


def surjectivity_table(v: TruncatedFIModule) -> dict[int, bool]:
    """Level-by-level surjectivity of the induced differential."""
    return {n: _surjective_at(v, n) for n in range(1, v.N + 1)}


def generation_degree(v: TruncatedFIModule) -> int:
    """Last level where new generators appear (0 when every level is covered).

    Certified only up to the truncation: levels beyond N are not inspected.
    """
    diag = validate_fimodule(v)
    if not diag.valid:
        raise ValidationError("; ".join(diag.problems))
    table = surjectivity_table(v)
    return max((n for n, ok in table.items() if not ok), default=0)


def truncate(v: TruncatedFIModule, c: int) -> TruncatedFIModule:
    """Zero out all levels below c; inclusions into level c become zero maps."""
    if not 0 <= c <= v.N:
        raise ValidationError(f"truncation level {c} outside [0, {v.N}]")
    levels = []
    for n, lv in enumerate(v.levels):
        if n < c:
            levels.append(Level(0, None if n == 0 else (), tuple(_zero(0, 0) for _ in range(max(n - 1, 0)))))
        elif n == c:
            levels.append(
                Level(
                    lv.rank,
                    None if n == 0 else _zero(lv.rank, 0),
                    lv.transpositions,
                    lv.presentation,
                )
            )
        else:
            levels.append(lv)
    return TruncatedFIModule(v.N, v.ring, tuple(levels))


def essentially_fg_report(v: TruncatedFIModule) -> dict:
    """Truncation cut and generation degree supported by the level evidence.

    The cut is the smallest c with the differential surjective at every
    level in (c, N]; the verdict is evidence at truncation scale only and
    says nothing about levels beyond N.
    """
    table = surjectivity_table(v)
    cut = max((n for n, ok in table.items() if not ok), default=0)
    truncated = truncate(v, cut) if cut > 0 else v
    return {
        "cut_level": cut,
        "truncation_generation_degree": generation_degree(truncated),
        "per_level_surjective": {n: table[n] for n in sorted(table)},
        "certified_within": v.N,
        "caveat": (
            "surjectivity verified for levels up to the truncation bound only; "
            "no claim is made beyond it"
        ),
        "not_generated_within_bound": bool(table) and not table[v.N],
    }


# -- fixtures and the translation-vector module --------------------------------


def constant_module(N: int, ring: str = "Z") -> TruncatedFIModule:
    """Rank one everywhere, all maps the identity."""
    levels = [Level(1, None, ())]
    for n in range(1, N + 1):
        levels.append(Level(1, ((1,),), tuple(((1,),) for _ in range(n - 1))))
    return TruncatedFIModule(N, ring, tuple(levels))


def permutation_module(N: int, ring: str = "Z", zero_level0: bool = True) -> TruncatedFIModule:
    """Level n is R^n with coordinates permuted; level 0 optionally zero."""
    levels = [Level(0 if zero_level0 else 1, None, ())]
    for n in range(1, N + 1):
        prev = levels[-1].rank
        iota = tuple(
            tuple(1 if i == j else 0 for j in range(prev)) for i in range(n)
        )
        transpositions = []
        for i in range(1, n):
            perm = list(range(n))
            perm[i - 1], perm[i] = perm[i], perm[i - 1]
            transpositions.append(
                tuple(tuple(1 if r == perm[c] else 0 for c in range(n)) for r in range(n))
            )
        levels.append(Level(n, iota, tuple(transpositions)))
    return TruncatedFIModule(N, ring, tuple(levels))


def sum_zero_coords(vector: tuple[int, ...]) -> tuple[int, ...]:
    """Coordinates of a sum-zero vector in the basis e_i - e_{i+1}."""
    if sum(vector) != 0:
        raise ValidationError(f"vector {vector!r} does not sum to zero")
    coords = []
    acc = 0
    for x in vector[:-1]:
        acc += x
        coords.append(acc)
    return tuple(coords)


def coords_to_sum_zero(coords: tuple[int, ...]) -> tuple[int, ...]:
    """Inverse of :func:`sum_zero_coords`."""
    out = []
    prev = 0
    for c in coords:
        out.append(c - prev)
        prev = c
    out.append(-prev)
    return tuple(out)


def houghton_h1_fimodule(N: int, ring: str = "Z") -> TruncatedFIModule:
    """Sum-zero sublattices of Z^n with permuted coordinates.

    Level n has rank n-1 (0 for n <= 1) in the basis b_i = e_i - e_{i+1};
    inclusions pad by zero, and the adjacent transposition s_j sends
    b_{j-1} to b_{j-1} + b_j, negates b_j, and sends b_{j+1} to b_j + b_{j+1}.
    These are exactly the eventual translation amounts of the Houghton
    kernel elements, transported along injections of the copy set.
    """
    if N < 0:
        raise ValidationError("truncation bound must be >= 0")
    levels = [Level(0, None, ())]
    for n in range(1, N + 1):
        r = n - 1
        prev = max(n - 2, 0)
        iota = tuple(tuple(1 if i == j else 0 for j in range(prev)) for i in range(r))
        transpositions = []
        for j in range(1, n):
            cols = []
            for c in range(1, r + 1):
                col = [0] * r
                if c == j - 1:
                    col[c - 1] = 1
                    col[c] = 1
                elif c == j:
                    col[c - 1] = -1
                elif c == j + 1:
                    col[c - 2] = 1
                    col[c - 1] = 1
                else:
                    col[c - 1] = 1
                cols.append(col)
            transpositions.append(
                tuple(tuple(cols[c][rr] for c in range(r)) for rr in range(r))
            )
        levels.append(Level(r, iota, tuple(transpositions)))
    return TruncatedFIModule(N, ring, tuple(levels))


# -- JSON ----------------------------------------------------------------------


def _entry_to_json(x):
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return x


def _entry_from_json(x, ring: str):
    if isinstance(x, str):
        num, _, den = x.partition("/")
        value = Fraction(int(num), int(den or 1))
    else:
        value = Fraction(x)
    if ring == "Z":
        if value.denominator != 1:
            raise ValidationError(f"non-integer entry {x!r} in a Z-module")
        return value.numerator
    return value


def _mat_to_json(mat: Mat | None):
    if mat is None:
        return None
    return [[_entry_to_json(x) for x in row] for row in mat]


def module_to_json(v: TruncatedFIModule) -> dict:
    return {
        "N": v.N,
        "ring": v.ring,
        "levels": [
            {
                "rank": lv.rank,
                "iota": _mat_to_json(lv.iota),
                "transpositions": [_mat_to_json(s) for s in lv.transpositions],
                **(
                    {"presentation": _mat_to_json(lv.presentation)}
                    if lv.presentation is not None
                    else {}
                ),
            }
            for lv in v.levels
        ],
    }


def module_from_json(data: dict) -> TruncatedFIModule:
    try:
        ring = data["ring"]
        n_top = int(data["N"])
        levels = []
        for n, raw in enumerate(data["levels"]):
            rank = int(raw["rank"])
            iota = raw.get("iota")
            parsed_iota = (
                None
                if n == 0
                else tuple(
                    tuple(_entry_from_json(x, ring) for x in row) for row in (iota or [])
                )
            )
            transpositions = tuple(
                tuple(tuple(_entry_from_json(x, ring) for x in row) for row in s)
                for s in raw["transpositions"]
            )
            pres = raw.get("presentation")
            parsed_pres = (
                tuple(tuple(_entry_from_json(x, ring) for x in row) for row in pres)
                if pres is not None
                else None
            )
            levels.append(Level(rank, parsed_iota, transpositions, parsed_pres))
    except (KeyError, TypeError, ValueError) as exc:
        raise ValidationError(f"malformed module object: {exc}") from exc
    v = TruncatedFIModule(n_top, ring, tuple(levels))
    diag = validate_fimodule(v)
    if not diag.valid:
        raise ValidationError("; ".join(diag.problems))
    return v
