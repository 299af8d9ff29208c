"""Budgeted semi-decision procedures returning three-valued verdicts.

Every Proven or Refuted verdict carries a witness that can be re-checked
directly (a certificate, a block, a periodic configuration or a radius).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

from . import engine
from .blocks import check_extensibility, ring_cells, first_block, iter_block_indices, search_periodic
from .codes import SlidingBlockCode, StarCode, TableCode, window_positions
from .core import (
    Pattern, SftInputError, SftSpec, Verdict, Proven, Refuted, Unknown, cube,
)


@dataclass(frozen=True)
class ConjugacyCertificate:
    """Codes F: X -> Y and G: Y -> X with the block radius k of the test."""
    F: SlidingBlockCode
    G: SlidingBlockCode
    k: int


def star_radii(X: SftSpec, Y: SftSpec, F: SlidingBlockCode, G: SlidingBlockCode) -> tuple[int, int]:
    return max(F.radius, X.radius), max(G.radius, Y.radius)


def minimal_k(X: SftSpec, Y: SftSpec, F: SlidingBlockCode, G: SlidingBlockCode) -> int:
    rf, rg = star_radii(X, Y, F, G)
    return rf + rg + 1


def _check_pair(X: SftSpec, Y: SftSpec, F: SlidingBlockCode, G: SlidingBlockCode) -> None:
    if X.dim != Y.dim or F.dim != X.dim or G.dim != X.dim:
        raise SftInputError("dimensions of the SFTs and codes differ")
    if F.source != X.alphabet or F.target != Y.alphabet:
        raise SftInputError("F must map the alphabet of X to the alphabet of Y")
    if G.source != Y.alphabet or G.target != X.alphabet:
        raise SftInputError("G must map the alphabet of Y to the alphabet of X")


def _block_pattern(X: SftSpec, vals, n: int) -> Pattern:
    return Pattern.from_block_indices(cube(n, X.dim), vals, X.alphabet, X.dim)


def _one_side(X: SftSpec, Y: SftSpec, F: SlidingBlockCode, G: SlidingBlockCode, k: int) -> Pattern | None:
    """First admissible B_k block b of X with (G'F')(b)(0) != b(0), or None.

    On admissible blocks F' agrees with F, so the value at the origin only
    depends on b restricted to B_m with m = r_G' + r_F. We scan those smaller
    blocks and only look for a B_k extension when one of them fails.
    """
    Gp = StarCode(G, Y)
    m = Gp.radius + F.radius
    d = X.dim
    wins = window_positions(m, F.radius, d)
    centre = len(cube(m, d)) // 2
    f, g = F.rule, Gp.rule
    for c in iter_block_indices(X, m):
        out = g(tuple(f(tuple(c[p] for p in pos)) for pos in wins))
        if out != c[centre]:
            b = first_block(X, k, _block_pattern(X, c, m))
            if b is not None:
                return b
    return None


def verify_conjugacy_certificate(X: SftSpec, Y: SftSpec, cert: ConjugacyCertificate) -> Verdict:
    """Exhaustive block test for a conjugacy certificate.

    Proven when G'F' fixes the origin of every admissible B_k block of X and
    F'G' fixes the origin of every admissible B_k block of Y (a STAR output
    counts as a failure). Refuted carries the first failing block.
    """
    F, G, k = cert.F, cert.G, cert.k
    _check_pair(X, Y, F, G)
    need = minimal_k(X, Y, F, G)
    if k < need:
        raise SftInputError(f"k = {k} violates k > r_F' + r_G' (need k >= {need})")
    b = _one_side(X, Y, F, G, k)
    if b is not None:
        return Refuted(b, note="block of X not fixed by G'F' at the origin", k=k)
    b = _one_side(Y, X, G, F, k)
    if b is not None:
        return Refuted(b, note="block of Y not fixed by F'G' at the origin", k=k)
    return Proven(cert, k=k)


# ---------------------------------------------------------------- search

class _BudgetExhausted(Exception):
    pass


class _Csp:
    """Table entries of F (then G) as variables; block tests as constraints.

    A constraint fires once all the table entries it reads are assigned. It
    either fails or forces one further entry (the one read by the outer code
    at the origin), so forced values are propagated eagerly.
    """

    def __init__(self, X, Y, rF, rG, k, node_budget):
        self.X, self.Y = X, Y
        self.fwins = list(iter_block_indices(X, rF))
        self.gwins = list(iter_block_indices(Y, rG))
        fkey = {w: i for i, w in enumerate(self.fwins)}
        gkey = {w: i for i, w in enumerate(self.gwins)}
        nF = len(self.fwins)
        self.nF = nF
        self.N = nF + len(self.gwins)
        self.doms = [len(Y.alphabet)] * nF + [len(X.alphabet)] * len(self.gwins)
        rFp, rGp = max(rF, X.radius), max(rG, Y.radius)
        self.blocks: list[tuple] = []
        self.nodes = 0
        self.node_budget = node_budget
        # X side: outer G' of radius rGp over F outputs
        self._side(X, Y, rF, rG, rGp, k, fkey, gkey, 0, nF)
        self._side(Y, X, rG, rF, rFp, k, gkey, fkey, nF, 0)
        self.watch: list[list[int]] = [[] for _ in range(self.N)]
        for bi, (vars_, *_rest) in enumerate(self.blocks):
            for v in set(vars_):
                self.watch[v].append(bi)
        self.remaining = [len(set(b[0])) for b in self.blocks]
        self.val = [-1] * self.N
        self.trail: list[int] = []

    def _side(self, A, B, r_in, r_out, r_outp, k, in_key, out_key, in_off, out_off):
        d = A.dim
        m = r_outp + r_in
        inner = cube(m, d)
        # fill outwards ring by ring so conflicts with the prefix surface early
        rest = [c for c in ring_cells(k, d) if max(map(abs, c)) > m]
        plan = A.plan(inner + rest)
        wins = window_positions(m, r_in, d)
        lay = cube(r_outp, d)
        outer = window_positions(r_outp, r_out, d)
        opos = outer[len(outer) // 2]
        centre = len(inner) // 2
        star = B.plan(lay)
        memo: dict[tuple, bool] = {}
        for c in engine.extendable_prefixes(plan, len(A.alphabet), len(inner)):
            self._tick()
            vars_ = tuple(in_off + in_key[tuple(c[p] for p in pos)] for pos in wins)
            self.blocks.append((vars_, opos, c[centre], star, memo, out_key, out_off))

    def _tick(self):
        # one unit per constraint built or value tried
        self.nodes += 1
        if self.node_budget is not None and self.nodes > self.node_budget:
            raise _BudgetExhausted

    def _evaluate(self, bi):
        vars_, opos, want, star, memo, out_key, out_off = self.blocks[bi]
        val = self.val
        img = tuple(val[v] for v in vars_)
        bad = memo.get(img)
        if bad is None:
            bad = memo[img] = star.violations(img)
        if bad:
            return None
        return out_off + out_key[tuple(img[p] for p in opos)], want

    def _assign(self, v, x) -> bool:
        queue = [(v, x)]
        val, watch, remaining = self.val, self.watch, self.remaining
        while queue:
            v, x = queue.pop()
            cur = val[v]
            if cur != -1:
                if cur != x:
                    return False
                continue
            val[v] = x
            self.trail.append(v)
            done = []
            for b in watch[v]:
                remaining[b] -= 1
                if remaining[b] == 0:
                    done.append(b)
            for b in done:
                r = self._evaluate(b)
                if r is None:
                    return False
                queue.append(r)
        return True

    def _undo(self, mark):
        val, watch, remaining, trail = self.val, self.watch, self.remaining, self.trail
        while len(trail) > mark:
            v = trail.pop()
            val[v] = -1
            for b in watch[v]:
                remaining[b] += 1

    def solve(self) -> bool:
        # explicit stack instead of recursion: one frame per variable
        N = self.N
        stack: list[list[int]] = []
        i = 0
        while True:
            while i < N and self.val[i] != -1:
                i += 1
            if i == N:
                return True
            stack.append([i, 0, len(self.trail)])
            while stack:
                frame = stack[-1]
                var, x, mark = frame
                self._undo(mark)
                if x >= self.doms[var]:
                    stack.pop()
                    continue
                frame[1] = x + 1
                self._tick()
                if self._assign(var, x):
                    i = var + 1
                    break
            else:
                return False

    def codes(self, rF, rG):
        X, Y, d = self.X, self.Y, self.X.dim
        F = TableCode(X.alphabet, Y.alphabet, d, rF,
                      {w: max(self.val[i], 0) for i, w in enumerate(self.fwins)}, default=0)
        G = TableCode(Y.alphabet, X.alphabet, d, rG,
                      {w: max(self.val[self.nF + i], 0) for i, w in enumerate(self.gwins)}, default=0)
        return F, G


def radius_pairs(max_radius: int) -> list[tuple[int, int]]:
    """(r_F, r_G) pairs by total radius, then lexicographically."""
    pairs = [(a, b) for a in range(max_radius + 1) for b in range(max_radius + 1)]
    return sorted(pairs, key=lambda p: (p[0] + p[1], p))


def search_conjugacy(X: SftSpec, Y: SftSpec, max_radius: int, max_k: int,
                     node_budget: int | None = None) -> Verdict:
    """Look for a table-coded certificate within the radius and k budgets.

    Candidates are ordered by radius pair, then F's table and G's table in
    lexicographic order (entries indexed by the admissible windows in
    canonical order), then k. Windows that are not admissible map to the
    first symbol. Since a pair passing at k also passes at every larger k,
    the first pair in that order is the lexicographically first solution at
    k = max_k; the reported k is the least one that verifies.

    ``node_budget`` caps, per radius pair, the constraints built plus the
    values tried; a pair that runs out is skipped and the result is Unknown
    unless a later pair succeeds.
    """
    if max_radius < 0 or max_k < 0:
        raise SftInputError("budgets must be >= 0")
    if X.dim != Y.dim:
        raise SftInputError("SFTs of different dimensions")
    budget = dict(max_radius=max_radius, max_k=max_k)
    exhausted = False
    for rF, rG in radius_pairs(max_radius):
        kmin = max(rF, X.radius) + max(rG, Y.radius) + 1
        if kmin > max_k:
            continue
        try:
            csp = _Csp(X, Y, rF, rG, max_k, node_budget)
            found = csp.solve()
        except _BudgetExhausted:
            exhausted = True
            continue
        if not found:
            continue
        F, G = csp.codes(rF, rG)
        for k in range(kmin, max_k + 1):
            cert = ConjugacyCertificate(F, G, k)
            if verify_conjugacy_certificate(X, Y, cert).proven:
                return Proven(cert, **budget)
        raise AssertionError("search produced a certificate that fails verification")
    note = "node budget exhausted for some radius pair" if exhausted else "no certificate within budget"
    if node_budget is not None:
        budget["node_budget"] = node_budget
    return Unknown(note, **budget)


# ------------------------------------------------------------- factors

def _centred_offsets(offsets):
    d = len(offsets[0])
    ext = [max(o[i] for o in offsets) for i in range(d)]
    return tuple(tuple(o[i] - ext[i] // 2 for i in range(d)) for o in offsets)


def check_factor_inclusion(F: SlidingBlockCode, X: SftSpec, Y: SftSpec, r: int) -> Verdict:
    """Scan every admissible B_r block M of X for forbidden patterns of Y in F(M)'s centre.

    Each forbidden support is centred in B_{r_Y} and checked at every
    translate t in B_{r - r_F - r_Y}. A clean scan proves F(X) is inside Y;
    a hit gives Unknown with M, since M need not extend to a configuration.
    """
    if F.source != X.alphabet or F.target != Y.alphabet or F.dim != X.dim or X.dim != Y.dim:
        raise SftInputError("F must map X's alphabet to Y's alphabet in the same dimension")
    need = F.radius + Y.radius
    if r < need:
        raise SftInputError(f"radius {r} too small, need r >= r_F + r_Y = {need}")
    d = X.dim
    n_img = r - F.radius
    idx = {c: i for i, c in enumerate(cube(n_img, d))}
    checks = []
    if any(not g.offsets for g in Y.groups):
        checks.append((None, None, None))
    for g in Y.groups:
        if not g.offsets:
            continue
        offs = _centred_offsets(g.offsets)
        for t in cube(r - need, d):
            pos = tuple(idx[tuple(a + b for a, b in zip(t, o))] for o in offs)
            checks.append((engine._getter(pos), g.proj, g.bad))
    for vals in iter_block_indices(X, r):
        img = F.apply_block(vals, r)
        for get, proj, bad in checks:
            if get is None:
                hit = True
            else:
                tup = get(img)
                if proj is not None:
                    tup = tuple(proj[x] for x in tup)
                hit = tup in bad
            if hit:
                M = _block_pattern(X, vals, r)
                return Unknown("image of this admissible block contains a forbidden pattern of Y; "
                               "retry at a larger r or test the block's extensibility",
                               r=r, block=M)
    return Proven(r, r=r)


SATISFIED_PREIMAGE = "satisfied-by-preimage"
SATISFIED_NONEXT = "satisfied-by-non-extensibility"
REFUTED_BLOCK = "refuted-block"
UNDETERMINED = "undetermined"


@dataclass(frozen=True)
class BlockReport:
    block: Pattern
    status: str
    payload: Any = None


@dataclass(frozen=True)
class SurjectivityReport:
    blocks: tuple[BlockReport, ...]
    verdict: Verdict = field(default=None)


def find_preimage(F: SlidingBlockCode, X: SftSpec, m: Pattern, n: int) -> Pattern | None:
    """First admissible B_{n+r_F} block of X (lexicographic) that F maps onto the B_n block m."""
    d = X.dim
    N = n + F.radius
    plan = X.plan(cube(N, d))
    rule = F.rule
    extras: dict[int, list] = {}
    targets = [F.target.index(s) for s in m.values(cube(n, d))]
    for pos, want in zip(window_positions(N, F.radius, d), targets):
        extras.setdefault(max(pos), []).append(
            lambda vals, pos=pos, want=want: rule(tuple(vals[p] for p in pos)) == want)
    sol = engine.first(plan, len(X.alphabet), None, extras)
    return None if sol is None else _block_pattern(X, sol, N)


IMAGE_TABLE_LIMIT = 1_000_000


def _preimage_lookup(F: SlidingBlockCode, X: SftSpec, n: int):
    """Preimage finder for B_n blocks: one pass over X's blocks when there are few, else per-block search.

    Both return the lexicographically first admissible preimage.
    """
    N = n + F.radius
    plan = X.plan(cube(N, X.dim))
    if engine.count(plan, len(X.alphabet)) > IMAGE_TABLE_LIMIT:
        return lambda vals, m: find_preimage(F, X, m, n)
    table: dict[tuple, tuple] = {}
    for vals in iter_block_indices(X, N):
        table.setdefault(F.apply_block(vals, N), vals)

    def lookup(vals, m):
        hit = table.get(tuple(vals))
        return None if hit is None else _block_pattern(X, hit, N)
    return lookup


def check_surjectivity(F: SlidingBlockCode, X: SftSpec, Y: SftSpec, n: int, R: int,
                       period_budget: int) -> SurjectivityReport:
    """Classify every admissible B_n block of Y by preimage, non-extensibility or periodic witness.

    The aggregate is Refuted if a block is extensible (periodic witness) yet
    has no admissible preimage. "Proven" only means every block at this (n, R)
    was satisfied; it is evidence and is labelled as such.
    """
    if min(n, R, period_budget) < 0:
        raise SftInputError("budgets must be >= 0")
    if F.source != X.alphabet or F.target != Y.alphabet or F.dim != X.dim or X.dim != Y.dim:
        raise SftInputError("F must map X's alphabet to Y's alphabet in the same dimension")
    out = []
    cells = cube(n, Y.dim)
    preimage = _preimage_lookup(F, X, n)
    for vals in iter_block_indices(Y, n):
        m = Pattern.from_block_indices(cells, vals, Y.alphabet, Y.dim)
        p = preimage(vals, m)
        if p is not None:
            out.append(BlockReport(m, SATISFIED_PREIMAGE, p))
            continue
        ext = check_extensibility(m, Y, R, period_budget)
        if ext.refuted:
            out.append(BlockReport(m, SATISFIED_NONEXT, ext.witness))
        elif ext.proven:
            out.append(BlockReport(m, REFUTED_BLOCK, ext.witness))
        else:
            out.append(BlockReport(m, UNDETERMINED))
    budget = dict(n=n, R=R, period_budget=period_budget)
    refuted = [b for b in out if b.status == REFUTED_BLOCK]
    if refuted:
        v = Refuted(refuted[0], note="extensible block of Y with no admissible preimage", **budget)
    elif all(b.status != UNDETERMINED for b in out):
        v = Proven(None, note="evidence only: every block satisfied at this (n, R); not a proof", **budget)
    else:
        v = Unknown("some blocks undetermined", **budget)
    return SurjectivityReport(tuple(out), v)


# ------------------------------------------------------------ emptiness

def prove_empty(X: SftSpec, n_max: int) -> Verdict:
    """Proven(n) for the least n <= n_max with no admissible B_n block."""
    if n_max < 0:
        raise SftInputError("n_max must be >= 0")
    for n in range(n_max + 1):
        if first_block(X, n) is None:
            return Proven(n, n=n, n_max=n_max)
    return Unknown("admissible blocks exist at every tested radius", n_max=n_max)


def prove_nonempty(X: SftSpec, period_budget: int) -> Verdict:
    """Proven(c) for the first valid periodic configuration within the budget."""
    if period_budget < 1:
        raise SftInputError("period budget must be >= 1")
    c = search_periodic(X, period_budget)
    if c is None:
        return Unknown("no periodic configuration within budget (this does not mean empty)",
                       period_budget=period_budget)
    return Proven(c, period_budget=period_budget)
