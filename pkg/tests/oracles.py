"""Brute-force reference implementations, deliberately naive and independent of
the library's search engine. Only usable at tiny sizes."""
from __future__ import annotations

from itertools import product

from sftkit.core import Pattern, ProjectedPattern, SftSpec


def cube(r, d):
    return list(product(range(-r, r + 1), repeat=d))


def box(n, d):
    return list(product(range(n), repeat=d))


def _entry_matches(f, cells: dict, t, index: dict) -> bool:
    """Does forbidden entry f, shifted by t, sit inside ``cells`` and match there?"""
    img = f.projection.image if isinstance(f, ProjectedPattern) else None
    pat = f.pattern if img is not None else f
    for c, v in pat.items():
        z = tuple(a + b for a, b in zip(c, t))
        if z not in cells:
            return False
        s = cells[z] if img is None else img[index[cells[z]]]
        if s != v:
            return False
    return True


def admissible(cells: dict, X: SftSpec) -> bool:
    """Try every translate that could fit, for every forbidden entry."""
    if not cells:
        return True
    d = X.dim
    index = {s: i for i, s in enumerate(X.alphabet)}
    for f in X.forbidden:
        pat = f.pattern if isinstance(f, ProjectedPattern) else f
        if len(pat) == 0:
            return False
        anchor = next(iter(pat.items()))[0]
        for z in cells:
            t = tuple(z[i] - anchor[i] for i in range(d))
            if _entry_matches(f, cells, t, index):
                return False
    return True


def all_patterns(X: SftSpec, support):
    support = list(support)
    for vals in product(list(X.alphabet), repeat=len(support)):
        yield dict(zip(support, vals))


def admissible_blocks(X: SftSpec, n: int) -> list[dict]:
    return [p for p in all_patterns(X, cube(n, X.dim)) if admissible(p, X)]


def count_box(X: SftSpec, n: int) -> int:
    return sum(1 for p in all_patterns(X, box(n, X.dim)) if admissible(p, X))


def torus_valid(X: SftSpec, periods, cells: dict) -> bool:
    """Check a periodic configuration by scanning a window large enough to hold every forbidden translate."""
    d = X.dim
    reach = max([abs(x) for f in X.forbidden
                 for c, _ in (f.pattern if isinstance(f, ProjectedPattern) else f).items() for x in c] + [0])
    big = {}
    rng = [range(-reach - p, reach + 2 * p) for p in periods]
    for z in product(*rng):
        big[z] = cells[tuple(z[i] % periods[i] for i in range(d))]
    return admissible(big, X)


def count_tori(X: SftSpec, periods) -> int:
    dom = box_periods(periods)
    return sum(1 for p in all_patterns(X, dom) if torus_valid(X, periods, p))


def box_periods(periods):
    return list(product(*(range(p) for p in periods)))


def apply_code(F, cells: dict) -> dict:
    """Evaluate a code cell by cell wherever its full window is present."""
    r, d = F.radius, F.dim
    win = cube(r, d)
    out = {}
    for z in cells:
        w = [tuple(a + b for a, b in zip(z, v)) for v in win]
        if all(c in cells for c in w):
            out[z] = F.evaluate([cells[c] for c in w])
    return out


def as_pattern(cells: dict, d: int) -> Pattern:
    return Pattern(cells, d)
