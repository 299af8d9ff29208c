"""Write an SVG of an ideal Robinson patch plus a few aperiodicity probes."""
import time
from dataclasses import dataclass
from pathlib import Path

from _config import parse_config
from sftkit.blocks import first_block, wang_to_sft
from sftkit.cli import render_svg
from sftkit.constructions import robinson_patch, robinson_tileset
from sftkit.core import Pattern
from sftkit.verify import prove_empty, prove_nonempty


@dataclass
class Config:
    size: int = 32
    out: str = "robinson.svg"
    period_budget: int = 4
    n_max: int = 4


def main(cfg: Config):
    T = robinson_tileset()
    names = T.names()
    grid = robinson_patch(cfg.size, cfg.size)
    p = Pattern({(i, j): names[t] for j, row in enumerate(grid) for i, t in enumerate(row)}, 2)
    Path(cfg.out).write_text("\n".join(render_svg(p, names, T)) + "\n")
    print(f"wrote {cfg.out} ({cfg.size}x{cfg.size}, {len(T)} tiles)")
    X = wang_to_sft(T)
    for label, f in [("periodic witness up to period", lambda: prove_nonempty(X, cfg.period_budget).status),
                     ("emptiness up to radius", lambda: prove_empty(X, cfg.n_max).status),
                     ("first block at radius", lambda: first_block(X, cfg.n_max) is not None)]:
        t0 = time.perf_counter()
        res = f()
        print(f"{label} {cfg.period_budget if 'period' in label else cfg.n_max}: {res} "
              f"({time.perf_counter() - t0:.2f} s)")


if __name__ == "__main__":
    main(parse_config(Config, __doc__))
