"""Sliding block codes: local rules on B_r windows, application, composition,
and the star augmentation that turns forbidden windows into an error symbol."""
from __future__ import annotations

from functools import lru_cache
from typing import Mapping, Sequence

from .core import (
    STAR, Alphabet, Coord, Pattern, PeriodicConfig, SftInputError, SftSpec,
    as_alphabet, cube, domain_cells,
)


class RuleDomainError(SftInputError):
    """A local rule was asked about a window outside its table."""

    def __init__(self, window: Sequence[str]):
        self.window = tuple(window)
        super().__init__(f"local rule undefined on window {' '.join(self.window)}")


@lru_cache(maxsize=None)
def window_positions(n: int, r: int, d: int) -> tuple[tuple[int, ...], ...]:
    """For each z in B_{n-r} (lex order), the positions of z + B_r inside B_n."""
    big = {c: i for i, c in enumerate(cube(n, d))}
    win = cube(r, d)
    return tuple(tuple(big[tuple(a + b for a, b in zip(z, w))] for w in win) for z in cube(n - r, d))


class SlidingBlockCode:
    """Base class. Subclasses implement ``rule`` on index tuples over cube(radius, dim)."""

    kind = "abstract"

    def __init__(self, source, target, dim: int, radius: int):
        if radius < 0:
            raise SftInputError("radius must be >= 0")
        if dim < 1:
            raise SftInputError("dimension must be >= 1")
        self.source: Alphabet = as_alphabet(source)
        self.target: Alphabet = as_alphabet(target)
        self.dim = dim
        self.radius = radius

    @property
    def window(self) -> list[Coord]:
        return cube(self.radius, self.dim)

    def rule(self, w: tuple[int, ...]) -> int:
        raise NotImplementedError

    def evaluate(self, window: Pattern | Sequence[str]) -> str:
        """Target symbol for a B_r window (a centered Pattern or symbols in cube order)."""
        if isinstance(window, Pattern):
            vals = window.values(self.window)
            if None in vals:
                raise SftInputError("window pattern does not cover B_r")
        else:
            vals = list(window)
        return self.target[self.rule(tuple(self.source.index(s) for s in vals))]

    def apply_block(self, vals: Sequence[int], n: int) -> tuple[int, ...]:
        """Fast path: a B_n block of indices to the B_{n-r} image block."""
        if n < self.radius:
            raise SftInputError(f"block radius {n} is smaller than the code radius {self.radius}")
        rule = self.rule
        return tuple(rule(tuple(vals[p] for p in pos)) for pos in window_positions(n, self.radius, self.dim))

    def _key(self):
        return (self.kind, self.source, self.target, self.dim, self.radius)

    def __eq__(self, other):
        return isinstance(other, SlidingBlockCode) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"{type(self).__name__}(radius={self.radius}, |source|={len(self.source)}, |target|={len(self.target)})"


class TableCode(SlidingBlockCode):
    """Explicit table keyed by window contents (index tuples in cube order).

    ``table`` may also be keyed by symbol tuples with symbol values. Windows
    outside the table raise RuleDomainError unless ``default`` is given.
    """

    kind = "table"

    def __init__(self, source, target, dim: int, radius: int, table: Mapping, default: int | str | None = None):
        super().__init__(source, target, dim, radius)
        size = (2 * radius + 1) ** dim
        conv: dict[tuple[int, ...], int] = {}
        for k, v in table.items():
            k = tuple(k)
            if len(k) != size:
                raise SftInputError(f"table key has {len(k)} cells, windows have {size}")
            ki = tuple(self.source.index(s) if isinstance(s, str) else int(s) for s in k)
            vi = self.target.index(v) if isinstance(v, str) else int(v)
            if not 0 <= vi < len(self.target) or any(not 0 <= x < len(self.source) for x in ki):
                raise SftInputError("table entry out of alphabet range")
            conv[ki] = vi
        self.table = conv
        if isinstance(default, str):
            default = self.target.index(default)
        self.default = default

    def rule(self, w):
        v = self.table.get(w)
        if v is None:
            if self.default is None:
                raise RuleDomainError([self.source[i] for i in w])
            return self.default
        return v

    def _key(self):
        return super()._key() + (tuple(sorted(self.table.items())), self.default)


class ProjectionCode(SlidingBlockCode):
    """Reads the cell at ``offset`` and maps it through ``mapping`` (source index -> target)."""

    kind = "proj"

    def __init__(self, source, target, dim: int, radius: int, offset: Coord, mapping: Sequence[int | str] | None = None):
        super().__init__(source, target, dim, radius)
        offset = tuple(offset)
        if len(offset) != dim or any(abs(x) > radius for x in offset):
            raise SftInputError(f"offset {offset} is not inside B_{radius}")
        self.offset = offset
        self._pos = cube(radius, dim).index(offset)
        if mapping is None:
            mapping = [self.target.index(s) for s in self.source]
        self.mapping = tuple(self.target.index(m) if isinstance(m, str) else int(m) for m in mapping)
        if len(self.mapping) != len(self.source):
            raise SftInputError("projection mapping must cover the source alphabet")

    def rule(self, w):
        return self.mapping[w[self._pos]]

    def _key(self):
        return super()._key() + (self.offset, self.mapping)


class ComposedCode(SlidingBlockCode):
    """``outer`` after ``inner``; radius is the sum of the two radii."""

    kind = "compose"

    def __init__(self, outer: SlidingBlockCode, inner: SlidingBlockCode):
        if inner.target != outer.source:
            raise SftInputError("cannot compose: inner target alphabet differs from outer source alphabet")
        if inner.dim != outer.dim:
            raise SftInputError("cannot compose codes of different dimensions")
        super().__init__(inner.source, outer.target, inner.dim, inner.radius + outer.radius)
        self.outer = outer
        self.inner = inner
        self._pos = window_positions(self.radius, inner.radius, inner.dim)

    def rule(self, w):
        f = self.inner.rule
        return self.outer.rule(tuple(f(tuple(w[p] for p in pos)) for pos in self._pos))

    def _key(self):
        return super()._key() + (self.outer._key(), self.inner._key())


class StarCode(SlidingBlockCode):
    """Star-augmented code F' for a code F whose source is the alphabet of X.

    Source and target gain a final symbol STAR. On a window of radius
    max(r_F, r_X), F' returns STAR when the window holds a STAR or any
    forbidden pattern of X (checked with X's own forbidden supports), and
    otherwise F applied to the central B_{r_F} sub-window.
    """

    kind = "star"

    def __init__(self, base: SlidingBlockCode, X: SftSpec):
        if base.source != X.alphabet:
            raise SftInputError("star augmentation needs the code's source alphabet to equal the SFT's")
        if base.dim != X.dim:
            raise SftInputError("code and SFT dimensions differ")
        if STAR in X.alphabet or STAR in base.target:
            raise SftInputError(f"alphabets already contain {STAR}")
        radius = max(base.radius, X.radius)
        super().__init__(tuple(X.alphabet) + (STAR,), tuple(base.target) + (STAR,), X.dim, radius)
        self.base = base
        self.sft = X
        self.star_in = len(X.alphabet)
        self.star_out = len(base.target)
        cells = cube(radius, X.dim)
        self._plan = X.plan(cells)
        big = {c: i for i, c in enumerate(cells)}
        self._inner = tuple(big[c] for c in cube(base.radius, X.dim))
        self._memo: dict[tuple[int, ...], int] = {}

    def rule(self, w):
        v = self._memo.get(w)
        if v is None:
            if self.star_in in w or self._plan.violations(w):
                v = self.star_out
            else:
                v = self.base.rule(tuple(w[p] for p in self._inner))
            self._memo[w] = v
        return v

    def _key(self):
        return super()._key() + (self.base._key(), self.sft)


def identity_code(alphabet, dim: int = 2) -> ProjectionCode:
    a = as_alphabet(alphabet)
    return ProjectionCode(a, a, dim, 0, (0,) * dim, tuple(range(len(a))))


def symbol_map_code(source, target, mapping: Mapping[str, str], dim: int = 2) -> ProjectionCode:
    """Radius-0 code applying a symbol-to-symbol map."""
    src, tgt = as_alphabet(source), as_alphabet(target)
    return ProjectionCode(src, tgt, dim, 0, (0,) * dim, tuple(tgt.index(mapping[s]) for s in src))


def constant_code(source, target, symbol: str, dim: int = 2) -> ProjectionCode:
    src = as_alphabet(source)
    return symbol_map_code(src, target, {s: symbol for s in src}, dim)


def apply_to_pattern(F: SlidingBlockCode, p: Pattern) -> Pattern:
    """Image pattern on the erosion of p's support by B_r (any support shape)."""
    if p.dim != F.dim:
        raise SftInputError("pattern and code dimensions differ")
    cells = p.as_dict()
    win = F.window
    out = {}
    centers = set()
    for c in cells:
        for w in win:
            centers.add(tuple(a - b for a, b in zip(c, w)))
    for z in sorted(centers):
        vals = []
        for w in win:
            s = cells.get(tuple(a + b for a, b in zip(z, w)))
            if s is None:
                break
            vals.append(s)
        else:
            idx = tuple(F.source.index(s) for s in vals)
            out[z] = F.target[F.rule(idx)]
    return Pattern(out, F.dim)


def apply_to_torus(F: SlidingBlockCode, c: PeriodicConfig) -> PeriodicConfig:
    """Image of a periodic configuration, computed with wraparound windows."""
    if c.dim != F.dim:
        raise SftInputError("configuration and code dimensions differ")
    win = F.window
    out = []
    for z in domain_cells(c.periods):
        idx = tuple(F.source.index(c.at(tuple(a + b for a, b in zip(z, w)))) for w in win)
        out.append(F.target[F.rule(idx)])
    return PeriodicConfig(c.periods, tuple(out))


def compose(G: SlidingBlockCode, F: SlidingBlockCode) -> ComposedCode:
    """G after F."""
    return ComposedCode(G, F)


def star_augment(F: SlidingBlockCode, X: SftSpec) -> StarCode:
    return StarCode(F, X)
