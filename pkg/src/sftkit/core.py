"""Alphabets, patterns, SFT specifications, Wang tilesets and verdicts.

Coordinates are integer tuples. A block of radius r has support
B_r = [-r, r]^d and its cells are always listed in lexicographic order; that
order (together with the alphabet's construction order) fixes every
enumeration order in the package.
"""
from __future__ import annotations

import math
from itertools import product as iproduct
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, Iterable, Mapping, Sequence

from . import engine
from .engine import Coord, cube

STAR = "★"
_RESERVED = set(";=:@#")


class SftInputError(ValueError):
    """Malformed input: alphabet/dimension mismatch, bad radius, bad file."""


_checked: set[str] = set()


def check_symbol(s: str) -> str:
    if s in _checked:
        return s
    if not isinstance(s, str) or not s:
        raise SftInputError(f"symbol names must be non-empty strings, got {s!r}")
    if any(ch.isspace() for ch in s) or any(ch in _RESERVED for ch in s) or "->" in s:
        raise SftInputError(f"symbol {s!r} contains whitespace or a reserved character")
    _checked.add(s)
    return s


@dataclass(frozen=True)
class Alphabet:
    symbols: tuple[str, ...]

    def __post_init__(self):
        syms = tuple(self.symbols)
        for s in syms:
            check_symbol(s)
        if len(set(syms)) != len(syms):
            raise SftInputError(f"duplicate symbols in alphabet {syms}")
        object.__setattr__(self, "symbols", syms)

    @cached_property
    def _index(self) -> dict[str, int]:
        return {s: i for i, s in enumerate(self.symbols)}

    def index(self, s: str) -> int:
        try:
            return self._index[s]
        except KeyError:
            raise SftInputError(f"symbol {s!r} not in alphabet") from None

    def __len__(self):
        return len(self.symbols)

    def __iter__(self):
        return iter(self.symbols)

    def __contains__(self, s):
        return s in self._index

    def __getitem__(self, i):
        return self.symbols[i]


def as_alphabet(a: Alphabet | Iterable[str]) -> Alphabet:
    return a if isinstance(a, Alphabet) else Alphabet(tuple(a))


class Pattern:
    """A finite partial coloring of Z^d.

    Lookups outside the support return ``None``; symbols are never ``None``.
    """

    __slots__ = ("dim", "_cells", "_h", "_m")

    def __init__(self, cells: Mapping[Coord, str] | Iterable[tuple[Coord, str]], dim: int | None = None):
        items = dict(cells.items() if isinstance(cells, Mapping) else cells)
        dims = {len(c) for c in items}
        if dim is None:
            if len(dims) != 1:
                raise SftInputError("cannot infer dimension of an empty or mixed pattern")
            dim = dims.pop()
        elif dims and dims != {dim}:
            raise SftInputError(f"pattern cells do not all have dimension {dim}")
        if dim < 1:
            raise SftInputError("dimension must be >= 1")
        for v in items.values():
            check_symbol(v)
        self.dim = dim
        self._cells = tuple(sorted((tuple(c), v) for c, v in items.items()))
        self._h = None
        self._m = None

    @classmethod
    def block(cls, values: Sequence[str], radius: int, dim: int) -> "Pattern":
        cells = cube(radius, dim)
        if len(values) != len(cells):
            raise SftInputError(f"a radius-{radius} block in dimension {dim} has {len(cells)} cells, got {len(values)}")
        return cls(zip(cells, values), dim)

    @classmethod
    def from_block_indices(cls, cells: Sequence[Coord], vals: Sequence[int], alphabet: "Alphabet", dim: int) -> "Pattern":
        """Fast path for enumerated blocks: ``cells`` sorted, values index an already validated alphabet."""
        p = object.__new__(cls)
        syms = alphabet.symbols
        p.dim = dim
        p._cells = tuple(zip(cells, (syms[v] for v in vals)))
        p._h = None
        p._m = None
        return p

    @property
    def _map(self) -> dict[Coord, str]:
        if self._m is None:
            self._m = dict(self._cells)
        return self._m

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[str]], origin: Coord = (0, 0)) -> "Pattern":
        """2D pattern with ``rows[j][i]`` at ``origin + (i, j)`` (y grows with j)."""
        ox, oy = origin
        return cls({(ox + i, oy + j): s for j, row in enumerate(rows) for i, s in enumerate(row)}, 2)

    def get(self, c: Coord) -> str | None:
        return self._map.get(tuple(c))

    def as_dict(self) -> dict[Coord, str]:
        return dict(self._map)

    def items(self):
        return iter(self._cells)

    @property
    def support(self) -> frozenset[Coord]:
        return frozenset(c for c, _ in self._cells)

    def __len__(self):
        return len(self._cells)

    def __eq__(self, other):
        return isinstance(other, Pattern) and self.dim == other.dim and self._cells == other._cells

    def __hash__(self):
        if self._h is None:
            self._h = hash((self.dim, self._cells))
        return self._h

    def __repr__(self):
        body = ";".join(f"@({','.join(map(str, c))})={v}" for c, v in self._cells)
        return f"Pattern({body!r})"

    def translate(self, v: Coord) -> "Pattern":
        return Pattern({tuple(a + b for a, b in zip(c, v)): s for c, s in self._cells}, self.dim)

    def restrict(self, coords: Iterable[Coord]) -> "Pattern":
        d = self._map
        return Pattern({c: d[c] for c in coords if c in d}, self.dim)

    def values(self, coords: Sequence[Coord]) -> list[str | None]:
        return [self._map.get(c) for c in coords]

    def radius(self) -> int:
        """Smallest r with support inside B_r (0 for the empty pattern)."""
        return max((abs(x) for c, _ in self._cells for x in c), default=0)


def support_radius(cells: Iterable[Coord]) -> int:
    """Smallest r such that some translate of the support fits in B_r."""
    cells = list(cells)
    if not cells:
        return 0
    d = len(cells[0])
    return max(math.ceil((max(c[i] for c in cells) - min(c[i] for c in cells)) / 2) for i in range(d))


def centered(cells: Iterable[Coord]) -> list[Coord]:
    """Translate a support so it sits inside B_{support_radius}."""
    cells = list(cells)
    d = len(cells[0])
    shift = [min(c[i] for c in cells) + (max(c[i] for c in cells) - min(c[i] for c in cells)) // 2 for i in range(d)]
    return [tuple(c[i] - shift[i] for i in range(d)) for c in cells]


@dataclass(frozen=True, eq=False)
class Projection:
    """A named map from an SFT's alphabet onto a component alphabet.

    ``image[i]`` is the component symbol of alphabet symbol ``i`` or ``None``
    when the symbol has no component (it then never matches).
    """
    name: str
    image: tuple[str | None, ...]

    def __post_init__(self):
        check_symbol(self.name)
        object.__setattr__(self, "image", tuple(self.image))
        object.__setattr__(self, "_hash", hash((self.name, self.image)))

    def __eq__(self, other):
        if self is other:
            return True
        return isinstance(other, Projection) and self.name == other.name and self.image == other.image

    def __hash__(self):
        return self._hash


@dataclass(frozen=True)
class ProjectedPattern:
    """Forbids every pattern whose projection equals ``pattern``.

    This is a compact name for a finite set of ordinary forbidden patterns;
    products and unions use it to lift a component's constraints without
    enumerating the free component.
    """
    pattern: Pattern
    projection: Projection


Forbidden = Pattern | ProjectedPattern


def _entry_key(alpha: Alphabet, f: Forbidden):
    if isinstance(f, Pattern):
        return (0, "", len(f), tuple((c, alpha.index(v)) for c, v in f.items()))
    return (1, f.projection.name, len(f.pattern), tuple(f.pattern.items()))


@dataclass(frozen=True)
class SftSpec:
    """Finite alphabet, dimension and a finite set of forbidden patterns.

    The forbidden list is deduplicated and put in canonical order on
    construction, so equal specs compare equal and serialize identically.
    """
    alphabet: Alphabet
    dim: int
    forbidden: tuple[Forbidden, ...] = ()

    def __post_init__(self):
        alpha = as_alphabet(self.alphabet)
        object.__setattr__(self, "alphabet", alpha)
        if self.dim < 1:
            raise SftInputError("dimension must be >= 1")
        names: dict[str, Projection] = {}
        for f in self.forbidden:
            p = f.pattern if isinstance(f, ProjectedPattern) else f
            if not isinstance(p, Pattern):
                raise SftInputError(f"not a pattern: {f!r}")
            if p.dim != self.dim:
                raise SftInputError(f"forbidden pattern of dimension {p.dim} in a {self.dim}-dimensional SFT")
            if isinstance(f, ProjectedPattern):
                proj = f.projection
                if len(proj.image) != len(alpha):
                    raise SftInputError(f"projection {proj.name!r} does not cover the alphabet")
                if names.setdefault(proj.name, proj) != proj:
                    raise SftInputError(f"two different projections named {proj.name!r}")
            else:
                for _, v in p.items():
                    if v not in alpha:
                        raise SftInputError(f"forbidden pattern uses symbol {v!r} outside the alphabet")
        uniq = {f: None for f in self.forbidden}
        ordered = tuple(sorted(uniq, key=lambda f: _entry_key(alpha, f)))
        object.__setattr__(self, "forbidden", ordered)

    @cached_property
    def radius(self) -> int:
        """Radius r_X: every forbidden support fits in a translate of B_r."""
        return max((support_radius(_support(f)) for f in self.forbidden), default=0)

    @cached_property
    def groups(self) -> tuple[engine.Group, ...]:
        entries = []
        projs: dict[str, tuple[tuple[int, ...], dict[str, int]]] = {}
        for f in self.forbidden:
            if isinstance(f, Pattern):
                entries.append(({c: self.alphabet.index(v) for c, v in f.items()}, None))
                continue
            proj = f.projection
            if proj.name not in projs:
                comp: dict[str, int] = {}
                for s in proj.image:
                    if s is not None and s not in comp:
                        comp[s] = len(comp)
                projs[proj.name] = (tuple(-1 if s is None else comp[s] for s in proj.image), comp)
            arr, comp = projs[proj.name]
            if all(v in comp for _, v in f.pattern.items()):
                entries.append(({c: comp[v] for c, v in f.pattern.items()}, arr))
        return engine.compile_groups(entries)

    def plan(self, cells: Sequence[Coord], periods: Sequence[int] | None = None) -> engine.Plan:
        return engine.Plan(self.groups, cells, periods)

    def projections(self) -> list[Projection]:
        seen: dict[str, Projection] = {}
        for f in self.forbidden:
            if isinstance(f, ProjectedPattern):
                seen.setdefault(f.projection.name, f.projection)
        return list(seen.values())

    def expanded_forbidden(self) -> list[Pattern]:
        """Ordinary-pattern form of the forbidden set (can be large)."""
        out: list[Pattern] = []
        for f in self.forbidden:
            if isinstance(f, Pattern):
                out.append(f)
                continue
            pre: dict[str, list[str]] = {}
            for s, img in zip(self.alphabet, f.projection.image):
                if img is not None:
                    pre.setdefault(img, []).append(s)
            coords = [c for c, _ in f.pattern.items()]
            choices = [pre.get(v, []) for _, v in f.pattern.items()]
            for combo in iproduct(*choices):
                out.append(Pattern(zip(coords, combo), self.dim))
        return out


def _support(f: Forbidden) -> list[Coord]:
    p = f.pattern if isinstance(f, ProjectedPattern) else f
    return [c for c, _ in p.items()]


@dataclass(frozen=True)
class WangTileset:
    """Edge-colored unit squares; each tile is (north, east, south, west)."""
    tiles: tuple[tuple[str, str, str, str], ...]

    def __post_init__(self):
        tiles = tuple(tuple(t) for t in self.tiles)
        for t in tiles:
            if len(t) != 4:
                raise SftInputError(f"a Wang tile has four edge colors, got {t!r}")
            for c in t:
                check_symbol(c)
        if len(set(tiles)) != len(tiles):
            raise SftInputError("duplicate Wang tiles")
        object.__setattr__(self, "tiles", tiles)

    def __len__(self):
        return len(self.tiles)

    def names(self) -> list[str]:
        return [f"t{i}" for i in range(len(self.tiles))]


@dataclass(frozen=True)
class PeriodicConfig:
    """A configuration given by its values on the fundamental domain [0, p)^d."""
    periods: tuple[int, ...]
    cells: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "periods", tuple(self.periods))
        object.__setattr__(self, "cells", tuple(self.cells))
        if any(p < 1 for p in self.periods):
            raise SftInputError("periods must be >= 1")
        if len(self.cells) != math.prod(self.periods):
            raise SftInputError("fundamental domain size does not match the periods")

    @property
    def dim(self) -> int:
        return len(self.periods)

    def at(self, c: Coord) -> str:
        idx = 0
        for x, p in zip(c, self.periods):
            idx = idx * p + x % p
        return self.cells[idx]

    def window(self, coords: Iterable[Coord]) -> Pattern:
        return Pattern({c: self.at(c) for c in coords}, self.dim)

    def domain(self) -> Pattern:
        return self.window(domain_cells(self.periods))


def domain_cells(periods: Sequence[int]) -> list[Coord]:
    """Cells of [0, p_1) x ... x [0, p_d) in lexicographic order."""
    return [tuple(c) for c in iproduct(*(range(p) for p in periods))]


@dataclass(frozen=True)
class Verdict:
    """Three-valued result of a budgeted semi-decision procedure.

    ``proven`` and ``refuted`` carry a finitely checkable ``witness``;
    ``unknown`` echoes the exhausted budgets.
    """
    status: str
    witness: Any = None
    budget: Mapping[str, Any] = field(default_factory=dict)
    note: str = ""

    def __post_init__(self):
        if self.status not in ("proven", "refuted", "unknown"):
            raise ValueError(f"bad verdict status {self.status!r}")

    @property
    def proven(self) -> bool:
        return self.status == "proven"

    @property
    def refuted(self) -> bool:
        return self.status == "refuted"

    @property
    def unknown(self) -> bool:
        return self.status == "unknown"


def Proven(witness=None, note="", **budget) -> Verdict:
    return Verdict("proven", witness, budget, note)


def Refuted(witness=None, note="", **budget) -> Verdict:
    return Verdict("refuted", witness, budget, note)


def Unknown(note="", **budget) -> Verdict:
    return Verdict("unknown", None, budget, note)


def check_pattern(p: Pattern, X: SftSpec) -> None:
    if p.dim != X.dim:
        raise SftInputError(f"pattern of dimension {p.dim} for a {X.dim}-dimensional SFT")
    for _, v in p.items():
        if v not in X.alphabet:
            raise SftInputError(f"pattern symbol {v!r} not in the SFT's alphabet")
