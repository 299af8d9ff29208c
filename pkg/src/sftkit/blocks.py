"""Admissibility, block enumeration, bounded extensibility and Wang conversion."""
from __future__ import annotations

import math
from itertools import product as iproduct
from typing import Iterator, Sequence

from . import engine
from .core import (
    Coord, Pattern, PeriodicConfig, ProjectedPattern, SftInputError, SftSpec,
    Verdict, WangTileset, Proven, Refuted, Unknown, check_pattern, cube, domain_cells,
)

NORMALIZE_LIMIT = 5_000_000


def _matches(f, lookup, X: SftSpec, t: Coord) -> bool:
    """Does forbidden entry ``f`` occur at translation ``t`` in ``lookup``?"""
    if isinstance(f, ProjectedPattern):
        image = f.projection.image
        for c, v in f.pattern.items():
            s = lookup(tuple(a + b for a, b in zip(c, t)))
            if s is None or image[X.alphabet.index(s)] != v:
                return False
        return True
    for c, v in f.items():
        if lookup(tuple(a + b for a, b in zip(c, t))) != v:
            return False
    return True


def is_admissible(p: Pattern, X: SftSpec) -> bool:
    """No translate of a forbidden pattern lies inside p's support and matches p there.

    This scans the forbidden list directly (no compiled tables), so it also
    serves as the reference check for the search engine.
    """
    check_pattern(p, X)
    cells = p.as_dict()
    for f in X.forbidden:
        fp = f.pattern if isinstance(f, ProjectedPattern) else f
        if len(fp) == 0:
            return False
        c0, _ = next(fp.items())
        for c in cells:
            t = tuple(a - b for a, b in zip(c, c0))
            if _matches(f, cells.get, X, t):
                return False
    return True


def _fixed_indices(plan: engine.Plan, X: SftSpec, p: Pattern | None) -> dict[int, int] | None:
    """Positions pinned by ``p``; ``None`` if p does not fit the region consistently."""
    if p is None:
        return {}
    fixed: dict[int, int] = {}
    per = plan.periods
    for c, v in p.items():
        if per is not None:
            c = tuple(x % q for x, q in zip(c, per))
        i = plan.index.get(c)
        if i is None:
            return None
        k = X.alphabet.index(v)
        if fixed.setdefault(i, k) != k:
            return None
    return fixed


def iter_block_indices(X: SftSpec, n: int, fixed: Pattern | None = None) -> Iterator[tuple[int, ...]]:
    """Admissible B_n blocks as index tuples over ``cube(n, d)``."""
    if n < 0:
        raise SftInputError("block radius must be >= 0")
    plan = X.plan(cube(n, X.dim))
    pins = _fixed_indices(plan, X, fixed)
    if pins is None:
        return iter(())
    return engine.search(plan, len(X.alphabet), pins)


def enumerate_admissible_blocks(X: SftSpec, n: int, workers: int | None = None) -> Iterator[Pattern]:
    """Every admissible B_n block exactly once, in lexicographic order.

    Cells are ordered lexicographically by coordinate and values by the
    alphabet's order. With ``workers > 1`` the first cell's values are split
    over a process pool and the chunks are concatenated in order.
    """
    if n < 0:
        raise SftInputError("block radius must be >= 0")
    cells = cube(n, X.dim)
    syms = X.alphabet.symbols
    workers = engine.default_workers() if workers is None else workers
    if workers > 1:
        stream = engine.parallel_search(X.plan(cells), len(syms), {}, workers)
    else:
        stream = iter_block_indices(X, n)
    for vals in stream:
        yield Pattern.from_block_indices(cells, vals, X.alphabet, X.dim)


def ring_cells(n: int, d: int) -> list[Coord]:
    """Cells of B_n from the origin outwards (by sup-norm, then lexicographically)."""
    return sorted(cube(n, d), key=lambda c: (max(map(abs, c), default=0), c))


def first_block(X: SftSpec, n: int, fixed: Pattern | None = None) -> Pattern | None:
    """Some admissible B_n block agreeing with ``fixed``, or None if there is none.

    Cells are filled from the centre outwards, which finds conflicts with a
    pinned central pattern much sooner than a row-by-row sweep.
    """
    if n < 0:
        raise SftInputError("block radius must be >= 0")
    cells = ring_cells(n, X.dim)
    plan = X.plan(cells)
    pins = _fixed_indices(plan, X, fixed)
    if pins is None:
        return None
    sol = engine.first(plan, len(X.alphabet), pins)
    if sol is None:
        return None
    return Pattern(zip(cells, (X.alphabet[v] for v in sol)), X.dim)


def find_periodic(X: SftSpec, periods: Sequence[int], fixed: Pattern | None = None) -> PeriodicConfig | None:
    """First valid configuration with the given periods (lexicographic), or None."""
    periods = tuple(periods)
    if len(periods) != X.dim:
        raise SftInputError("need one period per axis")
    plan = X.plan(domain_cells(periods), periods)
    pins = _fixed_indices(plan, X, fixed)
    if pins is None:
        return None
    sol = engine.first(plan, len(X.alphabet), pins)
    if sol is None:
        return None
    return PeriodicConfig(periods, tuple(X.alphabet[v] for v in sol))


def period_order(budget: int, d: int) -> list[tuple[int, ...]]:
    """Period vectors with entries <= budget: smallest area first, then lexicographic."""
    return sorted(iproduct(range(1, budget + 1), repeat=d), key=lambda p: (math.prod(p), p))


def search_periodic(X: SftSpec, period_budget: int, fixed: Pattern | None = None) -> PeriodicConfig | None:
    for periods in period_order(period_budget, X.dim):
        c = find_periodic(X, periods, fixed)
        if c is not None:
            return c
    return None


def is_valid_periodic(X: SftSpec, c: PeriodicConfig) -> bool:
    """Direct re-check: no forbidden pattern at any translate of the torus."""
    if c.dim != X.dim:
        return False
    for f in X.forbidden:
        fp = f.pattern if isinstance(f, ProjectedPattern) else f
        if len(fp) == 0:
            return False
        for t in domain_cells(c.periods):
            if _matches(f, c.at, X, t):
                return False
    return all(s in X.alphabet for s in c.cells)


def check_extensibility(p: Pattern, X: SftSpec, R: int, period_budget: int) -> Verdict:
    """Bounded two-sided test of whether p occurs in some configuration.

    Refuted(R0): no admissible B_R0 block (R0 <= R) contains p, which rules
    out every configuration. Proven(c): c is a valid periodic configuration
    containing p at its place. Unknown otherwise.
    """
    check_pattern(p, X)
    if not is_admissible(p, X):
        return Refuted(p.radius(), note="pattern is not admissible", R=R, period_budget=period_budget)
    for R0 in range(p.radius(), R + 1):
        if first_block(X, R0, p) is None:
            return Refuted(R0, R=R, period_budget=period_budget)
    if period_budget >= 1:
        c = search_periodic(X, period_budget, p)
        if c is not None:
            return Proven(c, R=R, period_budget=period_budget)
    return Unknown(R=R, period_budget=period_budget)


def normalize_to_radius(X: SftSpec, r: int) -> SftSpec:
    """Equivalent spec whose forbidden set is every inadmissible B_r block."""
    if r < X.radius:
        raise SftInputError(f"radius {r} cannot contain the forbidden supports (need >= {X.radius})")
    cells = cube(r, X.dim)
    k = len(X.alphabet)
    if k ** len(cells) > NORMALIZE_LIMIT:
        raise SftInputError(f"{k}^{len(cells)} blocks exceed the normalization limit {NORMALIZE_LIMIT}")
    plan = X.plan(cells)
    syms = X.alphabet.symbols
    bad = [Pattern(zip(cells, (syms[v] for v in vals)), X.dim)
           for vals in iproduct(range(k), repeat=len(cells)) if plan.violations(vals)]
    return SftSpec(X.alphabet, X.dim, tuple(bad))


def wang_to_sft(T: WangTileset) -> SftSpec:
    """Tilings of T as a 2D SFT over the tile names, forbidding mismatched dominoes."""
    names = T.names()
    bad = []
    for (t, a), (u, b) in iproduct(zip(names, T.tiles), repeat=2):
        if a[1] != b[3]:
            bad.append(Pattern({(0, 0): t, (1, 0): u}, 2))
        if a[0] != b[2]:
            bad.append(Pattern({(0, 0): t, (0, 1): u}, 2))
    return SftSpec(names, 2, tuple(bad))


_EAST = [c for c in cube(1, 2) if c[0] >= 0]
_WEST = [c for c in cube(1, 2) if c[0] <= 0]
_NORTH = [c for c in cube(1, 2) if c[1] >= 0]
_SOUTH = [c for c in cube(1, 2) if c[1] <= 0]


def sft_to_wang(X: SftSpec):
    """Wang tileset conjugate to a 2D SFT of radius <= 1, with the certificate.

    Tiles are the admissible 3x3 blocks; an edge color is the 2x3 (or 3x2)
    overlap a neighbor must share. Returns ``(T, F, G)`` where F (radius 1)
    reads a 3x3 window into its tile and G (radius 0) reads a tile's center.
    """
    from .codes import ProjectionCode, TableCode

    if X.dim != 2:
        raise SftInputError("sft_to_wang needs a 2-dimensional SFT")
    if X.radius > 1:
        raise SftInputError(f"SFT radius {X.radius} does not normalize to radius 1")
    cells = cube(1, 2)
    pos = {c: i for i, c in enumerate(cells)}
    blocks = list(iter_block_indices(X, 1))

    def color(b, part, tag):
        return tag + ".".join(str(b[pos[c]]) for c in part)

    tiles = tuple((color(b, _NORTH, "h"), color(b, _EAST, "v"), color(b, _SOUTH, "h"), color(b, _WEST, "v"))
                  for b in blocks)
    T = WangTileset(tiles)
    names = T.names()
    F = TableCode(X.alphabet, names, 2, 1, {b: i for i, b in enumerate(blocks)})
    center = pos[(0, 0)]
    G = ProjectionCode(names, X.alphabet, 2, 0, (0, 0), tuple(b[center] for b in blocks))
    return T, F, G
