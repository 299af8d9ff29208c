"""SFT constructions: full shifts, products, unions, lifts, Robinson tiles,
Turing-machine strips and the hardness instance built from them."""
from __future__ import annotations

from functools import lru_cache
from itertools import product as iproduct
from typing import Sequence

from . import engine
from .blocks import wang_to_sft
from .core import (
    Alphabet, Pattern, Projection, ProjectedPattern, SftInputError, SftSpec, WangTileset,
    as_alphabet,
)
from .tm import TuringMachine

# ----------------------------------------------------------------- basics


def full_shift(k: int | Sequence[str] | Alphabet, dim: int = 2) -> SftSpec:
    """Full shift on ``k`` symbols named 0..k-1, or on an explicit alphabet."""
    if isinstance(k, int):
        if k < 1:
            raise SftInputError("a full shift needs at least one symbol")
        k = [str(i) for i in range(k)]
    return SftSpec(as_alphabet(k), dim, ())


def empty_sft(alphabet: Sequence[str] | Alphabet = ("0",), dim: int = 2) -> SftSpec:
    """Every single-cell pattern is forbidden, so not even the empty block's neighbours survive."""
    a = as_alphabet(alphabet)
    origin = (0,) * dim
    return SftSpec(a, dim, tuple(Pattern({origin: s}, dim) for s in a))


def singleton_sft(symbol: str = "0", dim: int = 2) -> SftSpec:
    return SftSpec(as_alphabet([symbol]), dim, ())


def golden_mean(dim: int = 2) -> SftSpec:
    """No two 1s adjacent along any axis (the hard-square shift in 2D)."""
    origin = (0,) * dim
    bad = []
    for i in range(dim):
        e = tuple(1 if j == i else 0 for j in range(dim))
        bad.append(Pattern({origin: "1", e: "1"}, dim))
    return SftSpec(as_alphabet(["0", "1"]), dim, tuple(bad))


# -------------------------------------------------------------- operators

def pair_symbol(a: str, b: str) -> str:
    return f"<{a},{b}>"


def tag_symbol(side: str, a: str) -> str:
    return f"{side}.{a}"


def _lift(X: SftSpec, image: Sequence[str | None], name: str, pad=None):
    """Re-express X's forbidden entries through a map from a bigger alphabet onto X's."""
    out = []
    base = Projection(name, tuple(image))
    idx = X.alphabet.index
    for f in X.forbidden:
        if isinstance(f, ProjectedPattern):
            inner = f.projection.image
            img = tuple(None if s is None else inner[idx(s)] for s in image)
            proj = Projection(f"{name}.{f.projection.name}", img)
            pat = f.pattern
        else:
            proj, pat = base, f
        if pad is not None:
            pat = pad(pat)
        out.append(ProjectedPattern(pat, proj))
    return out


def product(X: SftSpec, Y: SftSpec) -> SftSpec:
    """Cartesian product; symbols are written <a,b> and each component keeps its own constraints."""
    if X.dim != Y.dim:
        raise SftInputError("product needs SFTs of the same dimension")
    pairs = [(a, b) for a in X.alphabet for b in Y.alphabet]
    alpha = as_alphabet([pair_symbol(a, b) for a, b in pairs])
    forb = _lift(X, [a for a, _ in pairs], "pi1") + _lift(Y, [b for _, b in pairs], "pi2")
    return SftSpec(alpha, X.dim, tuple(forb))


def product_projection(X: SftSpec, Y: SftSpec, which: int = 1):
    """Radius-0 code from product(X, Y) onto one component."""
    from .codes import ProjectionCode

    P = product(X, Y)
    comp = X if which == 1 else Y
    pairs = [(a, b) for a in X.alphabet for b in Y.alphabet]
    mapping = [a if which == 1 else b for a, b in pairs]
    return ProjectionCode(P.alphabet, comp.alphabet, X.dim, 0, (0,) * X.dim, mapping)


def disjoint_union(X: SftSpec, Y: SftSpec) -> SftSpec:
    """Symbols L.a and R.b; adjacent cells must carry the same tag, so configurations are pure."""
    if X.dim != Y.dim:
        raise SftInputError("disjoint union needs SFTs of the same dimension")
    d = X.dim
    syms = [tag_symbol("L", a) for a in X.alphabet] + [tag_symbol("R", b) for b in Y.alphabet]
    alpha = as_alphabet(syms)
    nx = len(X.alphabet)
    left = [a for a in X.alphabet] + [None] * len(Y.alphabet)
    right = [None] * nx + [b for b in Y.alphabet]
    forb = _lift(X, left, "L") + _lift(Y, right, "R")
    tag = Projection("tag", tuple(["L"] * nx + ["R"] * len(Y.alphabet)))
    origin = (0,) * d
    for i in range(d):
        e = tuple(1 if j == i else 0 for j in range(d))
        for s, t in (("L", "R"), ("R", "L")):
            forb.append(ProjectedPattern(Pattern({origin: s, e: t}, d), tag))
    return SftSpec(alpha, d, tuple(forb))


def lift_dimension(X: SftSpec, d_target: int) -> SftSpec:
    """Embed X in d_target dimensions; along every new axis neighbours must be equal."""
    d = X.dim
    if d_target <= d:
        raise SftInputError(f"target dimension {d_target} must exceed {d}")
    extra = (0,) * (d_target - d)

    def pad(p: Pattern) -> Pattern:
        return Pattern({c + extra: v for c, v in p.items()}, d_target)

    forb: list = []
    for f in X.forbidden:
        if isinstance(f, ProjectedPattern):
            forb.append(ProjectedPattern(pad(f.pattern), f.projection))
        else:
            forb.append(pad(f))
    origin = (0,) * d_target
    for i in range(d, d_target):
        e = tuple(1 if j == i else 0 for j in range(d_target))
        for a, b in iproduct(X.alphabet, repeat=2):
            if a != b:
                forb.append(Pattern({origin: a, e: b}, d_target))
    return SftSpec(X.alphabet, d_target, tuple(forb))


# --------------------------------------------------------------- Robinson
#
# Tiles are read off the ideal hierarchical tiling. Write lv(x) for one plus
# the number of trailing 1 bits of x. The cell (x, y) holds a cross of level
# k when lv(x) = lv(y) = k; otherwise it is an arm lying on the principal
# line of whichever coordinate has the larger level. Every edge is crossed
# by exactly one principal arrow, pointing away from the nearest cross of
# the line's level. Square boundaries ("side lines") of level b run along
# rows (columns) of level b between consecutive corner crosses that face each
# other, offset towards the square's interior. Each edge label records the
# arrow direction, the side line (absent, or its offset) and the parity of
# the coordinate across the edge.

ROBINSON_PATCH = 256


def _lv(x: int) -> int:
    k = 1
    while x & 1:
        x >>= 1
        k += 1
    return k


def _arrow(x: int, y: int) -> bool:
    """Principal arrow on the edge between (x, y) and (x+1, y): True when it points east."""
    b = _lv(y)
    return (x - (2 ** (b - 1) - 1)) % 2 ** b < 2 ** (b - 1)


def _side(x: int, y: int) -> int:
    """Side line across that edge: 0 none, +1 offset north, -1 offset south."""
    b = _lv(y)
    if (x - (2 ** (b - 1) - 1)) % 2 ** (b + 1) < 2 ** b:
        return -1 if (y >> b) & 1 else 1
    return 0


def _vertical_edge(x: int, y: int) -> str:
    side = {0: "-", 1: "n", -1: "s"}[_side(x, y)]
    return "v" + ("e" if _arrow(x, y) else "w") + side + str(x & 1)


def _horizontal_edge(x: int, y: int) -> str:
    # the same rule with the axes swapped
    side = {0: "-", 1: "e", -1: "w"}[_side(y, x)]
    return "h" + ("n" if _arrow(y, x) else "s") + side + str(y & 1)


def robinson_tile_at(x: int, y: int) -> tuple[str, str, str, str]:
    return (_horizontal_edge(x, y), _vertical_edge(x, y), _horizontal_edge(x, y - 1), _vertical_edge(x - 1, y))


@lru_cache(maxsize=None)
def robinson_tiles_in_patch(size: int = ROBINSON_PATCH, origin: tuple[int, int] = (1, 1)) -> frozenset:
    ox, oy = origin
    return frozenset(robinson_tile_at(x, y) for x in range(ox, ox + size) for y in range(oy, oy + size))


@lru_cache(maxsize=None)
def robinson_tileset() -> WangTileset:
    """Robinson's tiles (arrows, square boundaries and parity) as Wang tiles, in sorted order."""
    return WangTileset(tuple(sorted(robinson_tiles_in_patch())))


def robinson_patch(width: int, height: int, origin: tuple[int, int] = (1, 1)) -> list[list[int]]:
    """Tile indices of the ideal tiling on a rectangle; rows listed bottom to top."""
    index = {t: i for i, t in enumerate(robinson_tileset().tiles)}
    ox, oy = origin
    return [[index[robinson_tile_at(ox + i, oy + j)] for i in range(width)] for j in range(height)]


def is_cross(tile: tuple[str, str, str, str]) -> bool:
    """All four principal arrows point out of the tile."""
    n, e, s, w = tile
    return n[1] == "n" and e[1] == "e" and s[1] == "s" and w[1] == "w"


# ---------------------------------------------------------- TM strips
#
# Rows are successive configurations, time going up. Bottom row: the seed
# tile (north colour [q0,blank]) flanked by "init" tiles on the ground.
# A cell's north colour is its tape symbol, or [q,a] where the head is. A
# head tile reads [q,a] from below, writes b above and passes the new state
# sideways as "q'>" (moving right) or "<q'" (moving left); the receiving
# tile turns its plain symbol c into [q',c]. Halting states and missing
# transitions have no head tile, so a strip of height h anchored at the seed
# exists exactly when the machine runs for at least h - 1 steps.

STRIP_OFFSET = 1
GROUND, INIT, PLAIN = "ground", "init", "-"


def _hs(q: str, a: str) -> str:
    return f"[{q},{a}]"


def tm_strip_tileset(M: TuringMachine) -> tuple[WangTileset, int]:
    """Computation tiles for M and the index of the seed tile (always 0)."""
    tiles: list[tuple[str, str, str, str]] = []
    tiles.append((_hs(M.init, M.blank), INIT, GROUND, INIT))
    tiles.append((M.blank, INIT, GROUND, INIT))
    for a in M.alphabet:
        tiles.append((a, PLAIN, a, PLAIN))
    for q in M.states:
        for a in M.alphabet:
            tr = M.step(q, a)
            if tr is None:
                continue
            q2, b, mv = tr
            if mv == "R":
                tiles.append((b, f"{q2}>", _hs(q, a), PLAIN))
            else:
                tiles.append((b, PLAIN, _hs(q, a), f"<{q2}"))
    for q in M.states:
        for c in M.alphabet:
            if any(M.step(p, a) is not None and M.step(p, a)[0] == q and M.step(p, a)[2] == "R"
                   for p in M.states for a in M.alphabet):
                tiles.append((_hs(q, c), PLAIN, c, f"{q}>"))
            if any(M.step(p, a) is not None and M.step(p, a)[0] == q and M.step(p, a)[2] == "L"
                   for p in M.states for a in M.alphabet):
                tiles.append((_hs(q, c), f"<{q}", c, PLAIN))
    seen: dict = {}
    for t in tiles:
        seen.setdefault(t, None)
    return WangTileset(tuple(seen)), 0


def strip_exists(M: TuringMachine, h: int) -> bool:
    """Is there an admissible strip [-h, h] x [0, h) with the seed at the origin?

    The seed tile occurs only at the origin. The two outer columns may only
    hold tape-symbol or ground tiles: the real head never gets that far in
    h - 1 steps, and this keeps a head from entering through the open side
    of the region.
    """
    if h < 1:
        raise SftInputError("strip height must be >= 1")
    T, seed = tm_strip_tileset(M)
    X = wang_to_sft(T)
    cells = [(x, y) for y in range(h) for x in range(-h, h + 1)]
    plan = X.plan(cells)
    quiet = frozenset(i for i, t in enumerate(T.tiles) if t[1] in (PLAIN, INIT) and t[3] in (PLAIN, INIT)
                      and not t[0].startswith("[") and not t[2].startswith("["))
    extras: dict[int, list] = {}
    for i, (x, y) in enumerate(cells):
        if abs(x) == h:
            extras.setdefault(i, []).append(lambda vals, i=i: vals[i] in quiet)
        elif (x, y) != (0, 0):
            extras.setdefault(i, []).append(lambda vals, i=i: vals[i] != seed)
    fixed = {plan.index[(0, 0)]: seed}
    return engine.first(plan, len(T), fixed, extras) is not None


def max_strip_height(M: TuringMachine, h_max: int) -> int:
    """Largest h <= h_max with a seed-anchored strip (h_max means: no obstruction found)."""
    best = 0
    for h in range(1, h_max + 1):
        if not strip_exists(M, h):
            break
        best = h
    return best


# -------------------------------------------------------------- R_M

def robinson_machine_sft(M: TuringMachine) -> SftSpec:
    """Robinson layer times computation layer, with the seed allowed only on crosses.

    This couples the two layers at a single point; the full anchoring of
    computations inside the hierarchical squares is not reproduced.
    """
    R = robinson_tileset()
    T, seed = tm_strip_tileset(M)
    base = product(wang_to_sft(R), wang_to_sft(T))
    names_r, names_t = R.names(), T.names()
    bad = [Pattern({(0, 0): pair_symbol(names_r[i], names_t[seed])}, 2)
           for i, t in enumerate(R.tiles) if not is_cross(t)]
    return SftSpec(base.alphabet, 2, base.forbidden + tuple(bad))


def conj_hardness_instance(X: SftSpec, M: TuringMachine) -> SftSpec:
    """X disjoint-union (R_M times the full shift on |Sigma_X| + 1 symbols)."""
    if X.dim != 2:
        raise SftInputError("the hardness instance is two-dimensional")
    RM = robinson_machine_sft(M)
    return disjoint_union(X, product(RM, full_shift(len(X.alphabet) + 1)))
