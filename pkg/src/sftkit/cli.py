"""Command-line interface: ``sftkit <subcommand> ...``.

Results go to stdout, progress and errors to stderr. Exit codes: 0 proven,
1 refuted, 2 unknown, 64 usage or input error. The default worker count is
read from SFTKIT_WORKERS.
"""
from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from . import __version__, blocks, constructions, entropy, formats, verify
from .core import Pattern, PeriodicConfig, SftInputError, SftSpec, Verdict, WangTileset, check_pattern
from .engine import default_workers

EXIT = {"proven": 0, "refuted": 1, "unknown": 2}
EX_USAGE = 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _ints(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None


def _load_sft(path) -> SftSpec:
    return formats.parse_sft(formats.read_file(path))


def _load_any(path) -> SftSpec | WangTileset:
    return formats.parse_sftkit(formats.read_file(path))


def _load_code(path):
    return formats.parse_code(formats.read_file(path))


def _load_tm(path):
    return formats.parse_tm(formats.read_file(path))


def _emit(out, lines):
    for l in lines:
        print(l, file=out)


def _verdict(out, v: Verdict) -> int:
    _emit(out, formats.verdict_lines(v))
    return EXIT[v.status]


def _progress(args, msg):
    if not args.quiet:
        print(msg, file=sys.stderr)


def _deepen(args, attempt, start: int):
    """Call ``attempt(level)`` for growing levels until a definite verdict or the time cap."""
    if not args.deepen:
        return attempt(start)
    t0 = time.monotonic()
    level = start
    while True:
        v = attempt(level)
        _progress(args, f"deepen: level {level} -> {v.status}")
        if not v.unknown or time.monotonic() - t0 >= args.deepen:
            return v
        level += 1


# ----------------------------------------------------------- subcommands

def cmd_admissible(args, out):
    X = _load_sft(args.sft)
    p = formats.parse_pattern(args.pattern, X.dim)
    check_pattern(p, X)
    ok = blocks.is_admissible(p, X)
    print(f"admissible: {'yes' if ok else 'no'}", file=out)
    return 0 if ok else 1


def cmd_blocks(args, out):
    X = _load_sft(args.sft)
    if args.count:
        n = sum(1 for _ in blocks.iter_block_indices(X, args.n))
        print(f"count: {n}", file=out)
        return 0
    for b in blocks.enumerate_admissible_blocks(X, args.n, args.workers):
        print(formats.format_pattern(b), file=out)
    return 0


def cmd_empty(args, out):
    X = _load_sft(args.sft)
    return _verdict(out, _deepen(args, lambda n: verify.prove_empty(X, n), args.n_max))


def cmd_nonempty(args, out):
    X = _load_sft(args.sft)
    return _verdict(out, _deepen(args, lambda p: verify.prove_nonempty(X, p), args.period_budget))


def cmd_extend(args, out):
    X = _load_sft(args.sft)
    p = formats.parse_pattern(args.pattern, X.dim)
    return _verdict(out, _deepen(args, lambda R: blocks.check_extensibility(p, X, R, args.period_budget), args.R))


def cmd_entropy(args, out):
    X = _load_sft(args.sft)
    print("n,count,value", file=out)
    for n in args.n:
        e = entropy.entropy_upper_bound(X, n, args.workers)
        val = "empty" if e.empty else repr(e.value)
        print(f"{e.n},{e.count},{val}", file=out)
    return 0


def cmd_verify_conj(args, out):
    X, Y = _load_sft(args.X), _load_sft(args.Y)
    F, G = _load_code(args.F), _load_code(args.G)
    k = args.k if args.k is not None else verify.minimal_k(X, Y, F, G)
    return _verdict(out, verify.verify_conjugacy_certificate(X, Y, verify.ConjugacyCertificate(F, G, k)))


def cmd_search_conj(args, out):
    X, Y = _load_sft(args.X), _load_sft(args.Y)

    def attempt(level):
        return verify.search_conjugacy(X, Y, level, args.max_k + (level - args.max_radius),
                                       node_budget=args.node_budget)

    v = _deepen(args, attempt, args.max_radius)
    if v.proven and args.write_prefix:
        cert = v.witness
        Path(f"{args.write_prefix}.F.sbc").write_text(formats.dumps(cert.F), encoding="utf-8")
        Path(f"{args.write_prefix}.G.sbc").write_text(formats.dumps(cert.G), encoding="utf-8")
    return _verdict(out, v)


def cmd_factor_incl(args, out):
    F, X, Y = _load_code(args.F), _load_sft(args.X), _load_sft(args.Y)
    r0 = args.r if args.r is not None else F.radius + Y.radius
    return _verdict(out, _deepen(args, lambda r: verify.check_factor_inclusion(F, X, Y, r), r0))


def cmd_surj(args, out):
    F, X, Y = _load_code(args.F), _load_sft(args.X), _load_sft(args.Y)
    rep = verify.check_surjectivity(F, X, Y, args.n, args.R, args.period_budget)
    print("block,status,payload", file=out)
    for b in rep.blocks:
        payload = b.payload
        if isinstance(payload, Pattern):
            payload = formats.format_pattern(payload)
        elif isinstance(payload, PeriodicConfig):
            payload = "periods=" + "x".join(map(str, payload.periods)) + " " + formats.format_pattern(payload.domain())
        print(f"{formats.format_pattern(b.block)},{b.status},{'' if payload is None else payload}", file=out)
    return _verdict(out, rep.verdict)


def _built(args):
    kind = args.kind
    d = args.dim
    if kind == "full":
        return constructions.full_shift(args.k, d)
    if kind == "empty":
        return constructions.empty_sft(dim=d)
    if kind == "singleton":
        return constructions.singleton_sft(args.symbol, d)
    if kind == "golden-mean":
        return constructions.golden_mean(d)
    if kind in ("product", "union"):
        if len(args.inputs) != 2:
            raise UsageError(f"build {kind} takes two SFT files")
        A, B = (_load_sft(p) for p in args.inputs)
        return constructions.product(A, B) if kind == "product" else constructions.disjoint_union(A, B)
    if kind == "lift":
        if len(args.inputs) != 1:
            raise UsageError("build lift takes one SFT file")
        return constructions.lift_dimension(_load_sft(args.inputs[0]), d)
    if kind == "robinson":
        return constructions.robinson_tileset()
    if kind == "tm-strip":
        if len(args.inputs) != 1:
            raise UsageError("build tm-strip takes one machine file")
        T, seed = constructions.tm_strip_tileset(_load_tm(args.inputs[0]))
        _progress(args, f"seed tile: t{seed}")
        return T
    if kind == "hardness":
        if len(args.inputs) != 2:
            raise UsageError("build hardness takes an SFT file and a machine file")
        return constructions.conj_hardness_instance(_load_sft(args.inputs[0]), _load_tm(args.inputs[1]))
    raise UsageError(f"unknown build kind {kind!r}")


def cmd_build(args, out):
    text = formats.dumps(_built(args))
    if args.golden:
        same = formats.read_file(args.golden) == text
        print(f"golden: {'match' if same else 'differs'}", file=out)
        return 0 if same else 1
    out.write(text)
    return 0


def cmd_convert(args, out):
    obj = _load_any(args.input)
    if args.direction == "wang2sft":
        if not isinstance(obj, WangTileset):
            raise SftInputError("wang2sft needs a wang: file")
        out.write(formats.dumps(blocks.wang_to_sft(obj)))
        return 0
    if not isinstance(obj, SftSpec):
        raise SftInputError("sft2wang needs an SFT file")
    T, F, G = blocks.sft_to_wang(obj)
    out.write(formats.dumps(T))
    if args.write_prefix:
        Path(f"{args.write_prefix}.F.sbc").write_text(formats.dumps(F), encoding="utf-8")
        Path(f"{args.write_prefix}.G.sbc").write_text(formats.dumps(G), encoding="utf-8")
    return 0


# ----------------------------------------------------------------- render

def palette(i: int) -> str:
    """Deterministic colour for symbol index i (golden-angle hue steps)."""
    h = (i * 137.508) % 360
    s, l = 0.55, 0.45 + 0.15 * (i % 3) / 2
    c = (1 - abs(2 * l - 1)) * s
    x = c * (1 - abs((h / 60) % 2 - 1))
    m = l - c / 2
    r, g, b = [(c, x, 0), (x, c, 0), (0, c, x), (0, x, c), (x, 0, c), (c, 0, x)][int(h // 60) % 6]
    return "#%02x%02x%02x" % tuple(round((v + m) * 255) for v in (r, g, b))


def _grid(p: Pattern) -> tuple[list[int], list[int]]:
    xs = sorted({c[0] for c, _ in p.items()})
    ys = sorted({c[1] for c, _ in p.items()}, reverse=True)
    return xs, ys


def render_ascii(p: Pattern) -> list[str]:
    if p.dim != 2:
        raise SftInputError("render draws two-dimensional patterns")
    xs, ys = _grid(p)
    w = max(len(v) for _, v in p.items())
    return [" ".join((p.get((x, y)) or ".").rjust(w) for x in xs) for y in ys]


def render_svg(p: Pattern, alphabet, tiles: WangTileset | None = None, cell: int = 24) -> list[str]:
    if p.dim != 2:
        raise SftInputError("render draws two-dimensional patterns")
    xs, ys = _grid(p)
    W, H = len(xs) * cell, len(ys) * cell
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">']
    colours = None
    if tiles is not None:
        edge = sorted({c for t in tiles.tiles for c in t})
        colours = {c: palette(i) for i, c in enumerate(edge)}
    index = {s: i for i, s in enumerate(alphabet)}
    for j, y in enumerate(ys):
        for i, x in enumerate(xs):
            v = p.get((x, y))
            if v is None:
                continue
            x0, y0 = i * cell, j * cell
            if colours is None:
                out.append(f'<rect x="{x0}" y="{y0}" width="{cell}" height="{cell}" fill="{palette(index[v])}"/>')
                continue
            n, e, s, w = tiles.tiles[index[v]]
            cx, cy, x1, y1 = x0 + cell / 2, y0 + cell / 2, x0 + cell, y0 + cell
            for col, pts in ((n, f"{x0},{y0} {x1},{y0}"), (e, f"{x1},{y0} {x1},{y1}"),
                             (s, f"{x1},{y1} {x0},{y1}"), (w, f"{x0},{y1} {x0},{y0}")):
                out.append(f'<polygon points="{pts} {cx},{cy}" fill="{colours[col]}"/>')
    out.append("</svg>")
    return out


def cmd_render(args, out):
    obj = _load_any(args.input)
    tiles = obj if isinstance(obj, WangTileset) else None
    X = blocks.wang_to_sft(obj) if tiles else obj
    if args.pattern:
        p = formats.parse_pattern(args.pattern, X.dim)
    elif args.period:
        c = blocks.find_periodic(X, [args.period] * X.dim)
        if c is None:
            print(f"no configuration with period {args.period}", file=sys.stderr)
            return 2
        p = c.domain()
    elif tiles is not None and args.robinson_patch:
        grid = constructions.robinson_patch(args.robinson_patch, args.robinson_patch)
        names = tiles.names()
        p = Pattern({(i, j): names[t] for j, row in enumerate(grid) for i, t in enumerate(row)}, 2)
    else:
        p = blocks.first_block(X, args.n)
        if p is None:
            print(f"no admissible block of radius {args.n}", file=sys.stderr)
            return 2
    check_pattern(p, X)
    lines = render_svg(p, X.alphabet, tiles) if args.format == "svg" else render_ascii(p)
    _emit(out, lines)
    return 0


# ------------------------------------------------------------------ parser

def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="sftkit", description="Subshifts of finite type and Wang tilesets.")
    ap.add_argument("--version", action="store_true", help="print package and file format versions")
    ap.add_argument("--workers", type=int, default=None, help="worker processes (default: SFTKIT_WORKERS or 1)")
    ap.add_argument("--quiet", action="store_true", help="no progress on stderr")
    sub = ap.add_subparsers(dest="cmd", parser_class=_Parser)

    def deepen(p):
        p.add_argument("--deepen", type=float, default=0.0, metavar="SECONDS",
                       help="raise the budget step by step until a definite verdict or the time cap")

    p = sub.add_parser("admissible", help="is a pattern admissible")
    p.add_argument("sft"); p.add_argument("--pattern", required=True)
    p.set_defaults(func=cmd_admissible)

    p = sub.add_parser("blocks", help="list admissible blocks of radius n")
    p.add_argument("sft"); p.add_argument("--n", type=int, required=True)
    p.add_argument("--count", action="store_true")
    p.set_defaults(func=cmd_blocks)

    p = sub.add_parser("empty", help="prove emptiness by block exhaustion")
    p.add_argument("sft"); p.add_argument("--n-max", type=int, default=3); deepen(p)
    p.set_defaults(func=cmd_empty)

    p = sub.add_parser("nonempty", help="prove nonemptiness with a periodic witness")
    p.add_argument("sft"); p.add_argument("--period-budget", type=int, default=3); deepen(p)
    p.set_defaults(func=cmd_nonempty)

    p = sub.add_parser("extend", help="bounded extensibility check for a pattern")
    p.add_argument("sft"); p.add_argument("--pattern", required=True)
    p.add_argument("--R", type=int, default=2); p.add_argument("--period-budget", type=int, default=3); deepen(p)
    p.set_defaults(func=cmd_extend)

    p = sub.add_parser("entropy", help="admissible block counts and entropy upper bounds (CSV)")
    p.add_argument("sft"); p.add_argument("--n", type=_ints, default=[1, 2, 3])
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("verify-conj", help="check a conjugacy certificate")
    for a in ("X", "Y", "F", "G"):
        p.add_argument(a)
    p.add_argument("--k", type=int, default=None, help="block radius (default: the smallest legal one)")
    p.set_defaults(func=cmd_verify_conj)

    p = sub.add_parser("search-conj", help="bounded search for a conjugacy certificate")
    p.add_argument("X"); p.add_argument("Y")
    p.add_argument("--max-radius", type=int, default=0); p.add_argument("--max-k", type=int, default=1)
    p.add_argument("--node-budget", type=int, default=None)
    p.add_argument("--write-prefix", default=None, help="write the found codes to PREFIX.F.sbc and PREFIX.G.sbc")
    deepen(p)
    p.set_defaults(func=cmd_search_conj)

    p = sub.add_parser("verify-factor-incl", help="bounded check that F maps X into Y")
    p.add_argument("F"); p.add_argument("X"); p.add_argument("Y")
    p.add_argument("--r", type=int, default=None); deepen(p)
    p.set_defaults(func=cmd_factor_incl)

    p = sub.add_parser("verify-surj", help="per-block surjectivity report")
    p.add_argument("F"); p.add_argument("X"); p.add_argument("Y")
    p.add_argument("--n", type=int, default=0); p.add_argument("--R", type=int, default=1)
    p.add_argument("--period-budget", type=int, default=2)
    p.set_defaults(func=cmd_surj)

    p = sub.add_parser("build", help="write a constructed SFT or tileset")
    p.add_argument("kind", choices=["full", "empty", "singleton", "golden-mean", "product", "union", "lift",
                                    "robinson", "tm-strip", "hardness"])
    p.add_argument("inputs", nargs="*")
    p.add_argument("--k", type=int, default=2); p.add_argument("--dim", type=int, default=2)
    p.add_argument("--symbol", default="0")
    p.add_argument("--golden", default=None, help="compare with a frozen file instead of printing")
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("render", help="draw a block, torus or pattern as text or SVG")
    p.add_argument("input")
    g = p.add_mutually_exclusive_group()
    g.add_argument("--pattern"); g.add_argument("--period", type=int)
    g.add_argument("--robinson-patch", type=int, metavar="SIZE", help="ideal Robinson tiling patch (wang input)")
    p.add_argument("--n", type=int, default=1, help="radius of the first admissible block to draw")
    p.add_argument("--format", choices=["text", "svg"], default="text")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("convert", help="Wang tileset <-> SFT")
    p.add_argument("direction", choices=["wang2sft", "sft2wang"]); p.add_argument("input")
    p.add_argument("--write-prefix", default=None, help="sft2wang: also write the certificate codes")
    p.set_defaults(func=cmd_convert)
    return ap


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        if args.version:
            print(f"sftkit {__version__}", file=out)
            for k, v in formats.FORMAT_VERSIONS.items():
                print(f"{k} format: {v}", file=out)
            return 0
        if not args.cmd:
            raise UsageError("missing subcommand")
        if args.workers is None:
            try:
                args.workers = default_workers()
            except ValueError as e:
                raise UsageError(str(e)) from None
        elif args.workers < 1:
            raise UsageError("--workers must be >= 1")
        return args.func(args, out)
    except UsageError as e:
        print(f"sftkit: usage error: {e}", file=sys.stderr)
        return EX_USAGE
    except SftInputError as e:
        print(f"sftkit: input error: {e}", file=sys.stderr)
        return EX_USAGE


if __name__ == "__main__":
    sys.exit(main())
