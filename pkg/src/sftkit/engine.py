"""Backtracking search over finite regions with incremental forbidden-pattern checks.

Everything here works on symbol *indices* (positions in the alphabet) so the
inner loops only touch small ints and tuples. A region is an ordered list of
cells; every forbidden translate that fits in the region is checked exactly
once, at the moment its last cell (in region order) is assigned.
"""
from __future__ import annotations

import os
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from itertools import product as _iproduct
from operator import itemgetter
from typing import Callable, Iterator, Sequence

Coord = tuple[int, ...]

WORKERS_ENV = "SFTKIT_WORKERS"
FILTER_MIN_SYMBOLS = 8


def default_workers() -> int:
    raw = os.environ.get(WORKERS_ENV, "1")
    try:
        n = int(raw)
    except ValueError:
        raise ValueError(f"{WORKERS_ENV} must be an integer >= 1, got {raw!r}")
    if n < 1:
        raise ValueError(f"{WORKERS_ENV} must be an integer >= 1, got {raw!r}")
    return n


def cube(r: int, d: int) -> list[Coord]:
    """Cells of B_r = [-r, r]^d in lexicographic order."""
    return list(_cube(r, d))


@lru_cache(maxsize=64)
def _cube(r: int, d: int) -> tuple[Coord, ...]:
    side = range(-r, r + 1)
    return tuple(tuple(c) for c in _iproduct(side, repeat=d))


def corner_box(n: int, d: int) -> list[Coord]:
    """Cells of [0, n)^d in lexicographic order."""
    return [tuple(c) for c in _iproduct(range(n), repeat=d)]


@dataclass(frozen=True)
class Group:
    """Forbidden tuples sharing one (translation-normalized) support.

    ``proj`` maps alphabet indices to component indices (-1 never matches);
    ``None`` means the identity.
    """
    offsets: tuple[Coord, ...]
    proj: tuple[int, ...] | None
    bad: frozenset


def _normalize(cells: Sequence[Coord]) -> tuple[Coord, tuple[Coord, ...]]:
    d = len(cells[0])
    lo = tuple(min(c[i] for c in cells) for i in range(d))
    return lo, tuple(sorted(tuple(c[i] - lo[i] for i in range(d)) for c in cells))


def compile_groups(entries: Sequence[tuple[dict[Coord, int], tuple[int, ...] | None]]) -> tuple[Group, ...]:
    """Group (cells -> index, projection) entries by support shape and projection."""
    acc: dict[tuple, set] = defaultdict(set)
    for cells, proj in entries:
        if not cells:
            # the empty pattern occurs everywhere: nothing is admissible
            acc[((), proj)].add(())
            continue
        coords = list(cells)
        lo, offs = _normalize(coords)
        shifted = {tuple(c[i] - lo[i] for i in range(len(lo))): v for c, v in cells.items()}
        acc[(offs, proj)].add(tuple(shifted[o] for o in offs))
    return tuple(Group(offs, proj, frozenset(bad)) for (offs, proj), bad in sorted(acc.items(), key=lambda kv: (kv[0][0], kv[0][1] or ())))


class _One:
    __slots__ = ("p",)

    def __init__(self, p: int):
        self.p = p

    def __call__(self, vals):
        return (vals[self.p],)

    def __reduce__(self):
        return (_One, (self.p,))


def _getter(positions: tuple[int, ...]) -> Callable:
    if len(positions) == 1:
        return _One(positions[0])
    return itemgetter(*positions)


class Plan:
    """Compiled check schedule for one region (box or torus)."""

    def __init__(self, groups: Sequence[Group], cells: Sequence[Coord], periods: Sequence[int] | None = None):
        self.cells = list(cells)
        self.index = {c: i for i, c in enumerate(self.cells)}
        self.periods = tuple(periods) if periods is not None else None
        self.empty_forbidden = any(not g.offsets for g in groups)
        n = len(self.cells)
        checks: list[list[tuple]] = [[] for _ in range(n)]
        refs: list[list[tuple[int, ...]]] = [[] for _ in range(n)]
        for g in groups:
            if not g.offsets:
                continue
            for positions in self._placements(g.offsets):
                trig = max(positions)
                checks[trig].append((_getter(positions), g.proj, g.bad))
                refs[trig].append(positions)
        self.checks = checks
        self.refs = refs
        self._filters: dict[int, tuple] = {}
        self._cand_memo: dict[tuple, tuple] = {}

    def _placements(self, offsets: tuple[Coord, ...]) -> Iterator[tuple[int, ...]]:
        index = self.index
        if self.periods is not None:
            per = self.periods
            for t in self.cells:
                yield tuple(index[tuple((t[i] + o[i]) % per[i] for i in range(len(per)))] for o in offsets)
            return
        seen = set()
        o0 = offsets[0]
        for c in self.cells:
            # every placement contains some cell of the region at offsets[0]
            t = tuple(c[i] - o0[i] for i in range(len(c)))
            if t in seen:
                continue
            seen.add(t)
            pos = []
            for o in offsets:
                q = tuple(t[i] + o[i] for i in range(len(t)))
                j = index.get(q)
                if j is None:
                    break
                pos.append(j)
            else:
                yield tuple(pos)

    def pair_filters(self, nsym: int):
        """Per-cell candidate tables derived from two-cell checks.

        Returns ``(filters, rest)``: ``filters[i]`` lists ``(j, table)`` with
        ``table[vals[j]]`` the ascending tuple of values allowed at ``i``;
        ``rest[i]`` holds the checks at ``i`` not covered by a filter.
        """
        cached = self._filters.get(nsym)
        if cached is not None:
            return cached
        filters: list[list[tuple[int, tuple]]] = [[] for _ in self.cells]
        rest: list[list[tuple]] = [[] for _ in self.cells]
        if nsym < FILTER_MIN_SYMBOLS:
            # trying every value is cheaper than table lookups here
            self._filters[nsym] = (filters, [list(c) for c in self.checks])
            return self._filters[nsym]
        for i, (chks, refs) in enumerate(zip(self.checks, self.refs)):
            merged: dict[int, list[set]] = {}
            for chk, pos in zip(chks, refs):
                _get, proj, bad = chk
                if len(pos) != 2 or pos[0] == pos[1] or proj is not None:
                    rest[i].append(chk)
                    continue
                j = pos[0] if pos[1] == i else pos[1]
                first_is_i = pos[0] == i
                forb = merged.setdefault(j, [set() for _ in range(nsym)])
                for a, b in bad:
                    vi, vj = (a, b) if first_is_i else (b, a)
                    if 0 <= vj < nsym:
                        forb[vj].add(vi)
            for j, forb in sorted(merged.items()):
                filters[i].append((j, tuple(tuple(v for v in range(nsym) if v not in f) for f in forb)))
        self._filters[nsym] = (filters, rest)
        return filters, rest

    def candidates(self, i: int, vals: list[int], dom: Sequence[int] | None, filters) -> Sequence[int]:
        flt = filters[i]
        if not flt:
            return dom
        key = (i, dom is None) + tuple(vals[j] for j, _ in flt)
        memo = self._cand_memo
        out = memo.get(key) if dom is None else None
        if out is not None:
            return out
        lists = sorted((table[vals[j]] for j, table in flt), key=len)
        out = lists[0]
        if len(lists) > 1:
            others = [set(t) for t in lists[1:]]
            out = tuple(v for v in out if all(v in s for s in others))
        if dom is not None:
            ds = set(dom)
            return tuple(v for v in out if v in ds)
        memo[key] = out
        return out

    def ok_at(self, i: int, vals: list[int]) -> bool:
        for get, proj, bad in self.checks[i]:
            tup = get(vals)
            if proj is not None:
                tup = tuple(proj[x] for x in tup)
            if tup in bad:
                return False
        return True

    def violations(self, vals: Sequence[int]) -> bool:
        """True if a fully assigned region contains a forbidden translate."""
        if self.empty_forbidden:
            return True
        vals = list(vals)
        return not all(self.ok_at(i, vals) for i in range(len(self.cells)))


Extra = Callable[[list[int]], bool]


def _passes(chk, vals) -> bool:
    for get, proj, bad in chk:
        tup = get(vals)
        if proj is not None:
            tup = tuple(proj[x] for x in tup)
        if tup in bad:
            return False
    return True


def _domains(n, nsym, fixed, first_domain):
    # None marks an unrestricted cell
    doms: list = [[fixed[i]] if i in fixed else None for i in range(n)]
    if first_domain is not None and n and 0 not in fixed:
        doms[0] = list(first_domain)
    return doms


def search(plan: Plan, nsym: int, fixed: dict[int, int] | None = None,
           extras: dict[int, list[Extra]] | None = None,
           first_domain: Sequence[int] | None = None,
           prefix_len: int | None = None) -> Iterator[tuple[int, ...]]:
    """Yield every admissible assignment of the region in lexicographic order.

    With ``prefix_len`` only the first ``prefix_len`` values are yielded, once
    per prefix that completes to a full admissible assignment; the search
    skips the remaining completions of a prefix as soon as one is found.
    """
    n = len(plan.cells)
    if plan.empty_forbidden:
        return
    if n == 0:
        yield ()
        return
    fixed = fixed or {}
    extras = extras or {}
    full = range(nsym)
    doms = _domains(n, nsym, fixed, first_domain)
    filters, rest = plan.pair_filters(nsym)
    cand = plan.candidates
    vals = [-1] * n
    lists: list = [None] * n
    ptr = [0] * n
    i = 0
    lists[0] = cand(0, vals, doms[0], filters) if doms[0] is not None or filters[0] else full
    while i >= 0:
        if i == n:
            if prefix_len is None:
                yield tuple(vals)
                i -= 1
                continue
            yield tuple(vals[:prefix_len])
            for j in range(prefix_len, n):
                vals[j] = -1
            i = prefix_len - 1
            if i < 0:
                return
            continue
        dom = lists[i]
        k = ptr[i]
        chk = rest[i]
        ext = extras.get(i, ())
        placed = False
        while k < len(dom):
            v = dom[k]
            k += 1
            vals[i] = v
            if chk and not _passes(chk, vals):
                continue
            if ext and not all(fn(vals) for fn in ext):
                continue
            placed = True
            break
        if placed:
            ptr[i] = k
            i += 1
            if i < n:
                ptr[i] = 0
                d = doms[i]
                lists[i] = cand(i, vals, d, filters) if (d is not None or filters[i]) else full
        else:
            ptr[i] = 0
            vals[i] = -1
            i -= 1


def extendable_prefixes(plan: Plan, nsym: int, prefix_len: int) -> Iterator[tuple[int, ...]]:
    """Assignments of the first ``prefix_len`` cells that complete to a full admissible assignment."""
    return search(plan, nsym, prefix_len=prefix_len)


def first(plan: Plan, nsym: int, fixed: dict[int, int] | None = None,
          extras: dict[int, list[Extra]] | None = None) -> tuple[int, ...] | None:
    for sol in search(plan, nsym, fixed, extras):
        return sol
    return None


def count(plan: Plan, nsym: int, fixed: dict[int, int] | None = None,
          first_domain: Sequence[int] | None = None) -> int:
    """Exact number of admissible assignments.

    Same left-to-right search, but partial assignments that agree on every
    cell still referenced by a later check are merged (a frontier memo), so
    unconstrained or weakly constrained regions never expand leaf by leaf.
    """
    n = len(plan.cells)
    if plan.empty_forbidden:
        return 0
    fixed = fixed or {}
    full = range(nsym)
    doms = _domains(n, nsym, fixed, first_domain)
    filters, rest = plan.pair_filters(nsym)
    cand = plan.candidates
    # need[i]: cells < i read by checks triggered at positions >= i
    need: list[tuple[int, ...]] = [()] * (n + 1)
    live: set[int] = set()
    for i in range(n - 1, -1, -1):
        for positions in plan.refs[i]:
            live.update(p for p in positions if p != i)
        live.discard(i)
        need[i] = tuple(sorted(live))
    states: dict[tuple, int] = {(): 1}
    vals = [-1] * n
    for i in range(n):
        nxt: dict[tuple, int] = defaultdict(int)
        cur = need[i]
        after = need[i + 1]
        getter = _getter(after) if after else None
        d = doms[i]
        chk = rest[i]
        use_filter = d is not None or filters[i]
        for st, c in states.items():
            for p, v in zip(cur, st):
                vals[p] = v
            for v in (cand(i, vals, d, filters) if use_filter else full):
                vals[i] = v
                if not chk or _passes(chk, vals):
                    key = getter(vals) if getter else ()
                    nxt[key] += c
        states = nxt
        if not states:
            return 0
    return sum(states.values())


def _count_job(args):
    plan, nsym, fixed, dom = args
    return count(plan, nsym, fixed, first_domain=dom)


def _search_job(args):
    plan, nsym, fixed, dom = args
    return list(search(plan, nsym, fixed, first_domain=dom))


def _split_first(nsym: int, workers: int) -> list[list[int]]:
    # contiguous chunks keep the merged stream in canonical order
    size = max(1, -(-nsym // workers))
    return [list(range(a, min(a + size, nsym))) for a in range(0, nsym, size)]


def parallel_count(plan: Plan, nsym: int, fixed: dict[int, int] | None = None, workers: int = 1) -> int:
    if workers <= 1 or not plan.cells or 0 in (fixed or {}):
        return count(plan, nsym, fixed)
    jobs = [(plan, nsym, fixed, dom) for dom in _split_first(nsym, workers)]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return sum(ex.map(_count_job, jobs))


def parallel_search(plan: Plan, nsym: int, fixed: dict[int, int] | None = None, workers: int = 1) -> list[tuple[int, ...]]:
    if workers <= 1 or not plan.cells or 0 in (fixed or {}):
        return list(search(plan, nsym, fixed))
    jobs = [(plan, nsym, fixed, dom) for dom in _split_first(nsym, workers)]
    out: list[tuple[int, ...]] = []
    with ProcessPoolExecutor(max_workers=workers) as ex:
        for chunk in ex.map(_search_job, jobs):
            out.extend(chunk)
    return out
