"""Line-oriented text formats.

``sftkit 1``  SFTs (``dim:``, ``alphabet:``, ``forbid:``) or Wang tilesets (``wang:``).
              Projected forbidden entries use ``project NAME:`` (lines ``sym -> image``,
              image left empty for "no component") and ``forbid NAME:`` sections.
``sbc 1``     sliding block codes of kind table, proj, compose or star.
``tm 1``      Turing machines.

Lines starting with ``#`` and blank lines are ignored. Symbols never contain
``:`` so any line with a colon is a section header.
"""
from __future__ import annotations

from pathlib import Path
from typing import Iterable

from .codes import ComposedCode, ProjectionCode, SlidingBlockCode, StarCode, TableCode
from .core import (
    Pattern, PeriodicConfig, Projection, ProjectedPattern, SftInputError, SftSpec, Verdict,
    WangTileset,
)
from .tm import TuringMachine

SFT_HEADER = "sftkit 1"
SBC_HEADER = "sbc 1"
TM_HEADER = "tm 1"
FORMAT_VERSIONS = {"sft": SFT_HEADER, "code": SBC_HEADER, "machine": TM_HEADER}

# ------------------------------------------------------------- patterns


def format_pattern(p: Pattern) -> str:
    if len(p) == 0:
        return "{}"
    return ";".join(f"@({','.join(map(str, c))})={v}" for c, v in p.items())


def parse_pattern(text: str, dim: int | None = None) -> Pattern:
    text = text.strip()
    if text == "{}":
        if dim is None:
            raise SftInputError("empty pattern needs a known dimension")
        return Pattern({}, dim)
    cells = {}
    for part in text.split(";"):
        part = part.strip()
        if not part.startswith("@(") or ")=" not in part:
            raise SftInputError(f"bad pattern cell {part!r}; expected @(x,y,...)=symbol")
        coord, sym = part[2:].split(")=", 1)
        try:
            c = tuple(int(x) for x in coord.split(","))
        except ValueError:
            raise SftInputError(f"bad coordinate in {part!r}") from None
        if c in cells:
            raise SftInputError(f"cell {c} given twice")
        cells[c] = sym.strip()
    return Pattern(cells, dim)


# ------------------------------------------------------------- sections

def _sections(lines: Iterable[str], header: str) -> list[tuple[str, str, list[str]]]:
    """Split into (name, inline value, body lines). Body lines keep their text (nested docs are indented)."""
    lines = [l.rstrip("\n") for l in lines]
    meaningful = [l for l in lines if l.strip() and not l.lstrip().startswith("#")]
    if not meaningful or meaningful[0].strip() != header:
        raise SftInputError(f"missing header {header!r}")
    out: list[tuple[str, str, list[str]]] = []
    started = False
    for raw in lines:
        if not raw.strip() or raw.lstrip().startswith("#"):
            continue
        if not started:
            started = True
            continue
        if raw.startswith("  "):
            if not out:
                raise SftInputError(f"indented line outside a section: {raw!r}")
            out[-1][2].append(raw[2:])
        elif ":" in raw:
            name, val = raw.split(":", 1)
            out.append((name.strip(), val.strip(), []))
        else:
            if not out:
                raise SftInputError(f"line outside a section: {raw!r}")
            out[-1][2].append(raw.strip())
    return out


def _indent(lines: list[str]) -> list[str]:
    return ["  " + l for l in lines]


def _int(val: str, what: str) -> int:
    try:
        return int(val)
    except ValueError:
        raise SftInputError(f"{what} must be an integer, got {val!r}") from None


# ------------------------------------------------------------------ SFTs

def sft_lines(X: SftSpec) -> list[str]:
    out = [SFT_HEADER, f"dim: {X.dim}", "alphabet:"] + list(X.alphabet)
    plain = [f for f in X.forbidden if isinstance(f, Pattern)]
    out.append("forbid:")
    out += [format_pattern(p) for p in plain]
    projs = X.projections()
    for proj in projs:
        out.append(f"project {proj.name}:")
        out += [f"{s} -> {'' if img is None else img}".rstrip() for s, img in zip(X.alphabet, proj.image)]
        out.append(f"forbid {proj.name}:")
        out += [format_pattern(f.pattern) for f in X.forbidden
                if isinstance(f, ProjectedPattern) and f.projection.name == proj.name]
    return out


def wang_lines(T: WangTileset) -> list[str]:
    return [SFT_HEADER, "wang:"] + [" ".join(t) for t in T.tiles]


def dumps(obj) -> str:
    if isinstance(obj, SftSpec):
        lines = sft_lines(obj)
    elif isinstance(obj, WangTileset):
        lines = wang_lines(obj)
    elif isinstance(obj, SlidingBlockCode):
        lines = code_lines(obj)
    elif isinstance(obj, TuringMachine):
        lines = tm_lines(obj)
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")
    return "\n".join(lines) + "\n"


def parse_sftkit(text: str | list[str]) -> SftSpec | WangTileset:
    lines = text.splitlines() if isinstance(text, str) else text
    secs = _sections(lines, SFT_HEADER)
    names = [n for n, _, _ in secs]
    if "wang" in names:
        if len(secs) != 1:
            raise SftInputError("a wang file has only the wang: section")
        tiles = []
        for l in secs[0][2]:
            parts = l.split()
            if len(parts) != 4:
                raise SftInputError(f"a wang tile line has four colors: {l!r}")
            tiles.append(tuple(parts))
        return WangTileset(tuple(tiles))
    dim, alphabet, plain = None, None, []
    images: dict[str, list] = {}
    proj_forbid: dict[str, list[str]] = {}
    for name, val, body in secs:
        if name == "dim":
            dim = _int(val, "dim")
        elif name == "alphabet":
            alphabet = [l.strip() for l in body]
        elif name == "forbid":
            plain = body
        elif name.startswith("project "):
            pname = name[len("project "):].strip()
            rows = []
            for l in body:
                if "->" not in l:
                    raise SftInputError(f"projection line needs '->': {l!r}")
                a, b = (x.strip() for x in l.split("->", 1))
                rows.append((a, b or None))
            images[pname] = rows
        elif name.startswith("forbid "):
            proj_forbid[name[len("forbid "):].strip()] = body
        else:
            raise SftInputError(f"unknown section {name!r}")
    if dim is None or alphabet is None:
        raise SftInputError("an SFT file needs dim: and alphabet: sections")
    forb: list = [parse_pattern(l, dim) for l in plain]
    for pname, body in proj_forbid.items():
        if pname not in images:
            raise SftInputError(f"forbid {pname}: without a project {pname}: section")
        rows = images[pname]
        if [a for a, _ in rows] != alphabet:
            raise SftInputError(f"projection {pname} must list the alphabet in order")
        proj = Projection(pname, tuple(b for _, b in rows))
        forb += [ProjectedPattern(parse_pattern(l, dim), proj) for l in body]
    return SftSpec(tuple(alphabet), dim, tuple(forb))


def parse_sft(text: str | list[str]) -> SftSpec:
    """Parse an SFT file; Wang tileset files are converted to their tiling SFT."""
    from .blocks import wang_to_sft

    obj = parse_sftkit(text)
    return wang_to_sft(obj) if isinstance(obj, WangTileset) else obj


# ----------------------------------------------------------------- codes

def code_lines(F: SlidingBlockCode) -> list[str]:
    out = [SBC_HEADER, f"kind: {F.kind}", f"dim: {F.dim}", f"radius: {F.radius}"]
    if isinstance(F, (TableCode, ProjectionCode)):
        out += ["source:"] + list(F.source) + ["target:"] + list(F.target)
    if isinstance(F, TableCode):
        if F.default is not None:
            out.append(f"default: {F.target[F.default]}")
        out.append("table:")
        for w, v in sorted(F.table.items()):
            out.append(" ".join(F.source[i] for i in w) + " -> " + F.target[v])
    elif isinstance(F, ProjectionCode):
        out.append(f"offset: {','.join(map(str, F.offset))}")
        out.append("map:")
        out += [f"{s} -> {F.target[m]}" for s, m in zip(F.source, F.mapping)]
    elif isinstance(F, ComposedCode):
        out += ["outer:"] + _indent(code_lines(F.outer)) + ["inner:"] + _indent(code_lines(F.inner))
    elif isinstance(F, StarCode):
        out += ["base:"] + _indent(code_lines(F.base)) + ["sft:"] + _indent(sft_lines(F.sft))
    else:
        raise SftInputError(f"cannot serialize code kind {F.kind!r}")
    return out


def parse_code(text: str | list[str]) -> SlidingBlockCode:
    lines = text.splitlines() if isinstance(text, str) else text
    secs = {}
    for name, val, body in _sections(lines, SBC_HEADER):
        if name in secs:
            raise SftInputError(f"section {name!r} given twice")
        secs[name] = (val, body)
    allowed = {"kind", "dim", "radius", "source", "target", "default", "table", "offset", "map",
               "outer", "inner", "base", "sft"}
    for name in secs:
        if name not in allowed:
            raise SftInputError(f"unknown section {name!r}")
    try:
        kind = secs["kind"][0]
        dim = _int(secs["dim"][0], "dim")
        radius = _int(secs["radius"][0], "radius")
    except KeyError as e:
        raise SftInputError(f"missing section {e.args[0]!r}") from None
    if kind in ("table", "proj"):
        if "source" not in secs or "target" not in secs:
            raise SftInputError("table and proj codes need source: and target:")
        src = tuple(secs["source"][1])
        tgt = tuple(secs["target"][1])
    if kind == "table":
        table = {}
        for l in secs.get("table", ("", []))[1]:
            if "->" not in l:
                raise SftInputError(f"table line needs '->': {l!r}")
            w, v = l.split("->", 1)
            table[tuple(w.split())] = v.strip()
        default = secs["default"][0] if "default" in secs else None
        return TableCode(src, tgt, dim, radius, table, default)
    if kind == "proj":
        offset = tuple(_int(x, "offset") for x in secs["offset"][0].split(","))
        m = dict((a.strip(), b.strip()) for a, b in (l.split("->", 1) for l in secs["map"][1]))
        if set(m) != set(src):
            raise SftInputError("proj map must cover the source alphabet")
        return ProjectionCode(src, tgt, dim, radius, offset, [m[s] for s in src])
    if kind == "compose":
        C = ComposedCode(parse_code(secs["outer"][1]), parse_code(secs["inner"][1]))
    elif kind == "star":
        C = StarCode(parse_code(secs["base"][1]), parse_sft(secs["sft"][1]))
    else:
        raise SftInputError(f"unknown code kind {kind!r}")
    if C.radius != radius or C.dim != dim:
        raise SftInputError("declared radius or dim disagrees with the code body")
    return C


# -------------------------------------------------------------- machines

def tm_lines(M: TuringMachine) -> list[str]:
    out = [TM_HEADER, "states:"] + list(M.states) + ["alphabet:"] + list(M.alphabet)
    out += [f"blank: {M.blank}", f"init: {M.init}", "halt:"] + sorted(M.halt) + ["delta:"]
    out += [f"{q},{a} -> {q2},{b},{mv}" for (q, a), (q2, b, mv) in M.delta.items()]
    return out


def parse_tm(text: str | list[str]) -> TuringMachine:
    lines = text.splitlines() if isinstance(text, str) else text
    states = alphabet = None
    blank = init = None
    halt: list[str] = []
    delta = {}
    for name, val, body in _sections(lines, TM_HEADER):
        if name == "states":
            states = body or [s.strip() for s in val.split(",") if s.strip()]
        elif name == "alphabet":
            alphabet = body or [s.strip() for s in val.split(",") if s.strip()]
        elif name == "blank":
            blank = val
        elif name == "init":
            init = val
        elif name == "halt":
            halt = body or [s.strip() for s in val.split(",") if s.strip()]
        elif name == "delta":
            for l in body:
                try:
                    lhs, rhs = l.split("->")
                    q, a = (x.strip() for x in lhs.split(","))
                    q2, b, mv = (x.strip() for x in rhs.split(","))
                except ValueError:
                    raise SftInputError(f"bad transition line {l!r}; expected q,a -> q',a',L|R") from None
                if (q, a) in delta:
                    raise SftInputError(f"two transitions for ({q},{a})")
                delta[(q, a)] = (q2, b, mv)
        else:
            raise SftInputError(f"unknown section {name!r}")
    if states is None or blank is None or init is None:
        raise SftInputError("a machine needs states:, blank: and init:")
    if alphabet is None:
        seen = {blank: None}
        for (_, a), (_, b, _) in delta.items():
            seen.setdefault(a, None)
            seen.setdefault(b, None)
        alphabet = list(seen)
    return TuringMachine(tuple(states), tuple(alphabet), blank, init, frozenset(halt), delta)


# -------------------------------------------------------------- reports

def _witness_lines(w) -> list[str]:
    from .verify import BlockReport, ConjugacyCertificate

    if w is None:
        return []
    if isinstance(w, Pattern):
        return [f"witness: {format_pattern(w)}"]
    if isinstance(w, int):
        return [f"witness: radius {w}"]
    if isinstance(w, PeriodicConfig):
        return [f"periods: {','.join(map(str, w.periods))}", f"witness: {format_pattern(w.domain())}"]
    if isinstance(w, BlockReport):
        out = [f"witness: {format_pattern(w.block)}"]
        if isinstance(w.payload, PeriodicConfig):
            out.append(f"extension periods: {','.join(map(str, w.payload.periods))}")
            out.append(f"extension: {format_pattern(w.payload.domain())}")
        return out
    if isinstance(w, ConjugacyCertificate):
        return [f"witness: certificate r_F={w.F.radius} r_G={w.G.radius} k={w.k}"]
    return [f"witness: {w}"]


def verdict_lines(v: Verdict) -> list[str]:
    out = [f"verdict: {v.status}"]
    out += _witness_lines(v.witness)
    for k, val in v.budget.items():
        if isinstance(val, Pattern):
            val = format_pattern(val)
        out.append(f"{k}: {val}")
    if v.note:
        out.append(f"note: {v.note}")
    return out


def read_file(path: str | Path) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise SftInputError(f"cannot read {path}: {e.strerror}") from None
