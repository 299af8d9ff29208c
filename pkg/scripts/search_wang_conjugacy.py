"""Blind conjugacy search between the golden mean and its Wang presentation.

Without a node budget the radius pair (0, 1) is tried before (1, 0) and does
not finish in reasonable time or memory. Use --node-budget to cap each pair.
"""
import time
from dataclasses import dataclass

from _config import parse_config
from sftkit.blocks import sft_to_wang, wang_to_sft
from sftkit.constructions import golden_mean
from sftkit.verify import radius_pairs, search_conjugacy


@dataclass
class Config:
    max_radius: int = 1
    max_k: int = 3
    node_budget: int = 200000


def main(cfg: Config):
    gm = golden_mean()
    T, F, _ = sft_to_wang(gm)
    W = wang_to_sft(T)
    budget = cfg.node_budget if cfg.node_budget > 0 else None
    print(f"pairs in order: {radius_pairs(cfg.max_radius)}; node budget per pair: {budget}")
    t0 = time.perf_counter()
    v = search_conjugacy(gm, W, cfg.max_radius, cfg.max_k, node_budget=budget)
    print(f"verdict: {v.status} after {time.perf_counter() - t0:.1f} s; budget {v.budget}")
    if v.proven:
        c = v.witness
        print(f"certificate r_F={c.F.radius} r_G={c.G.radius} k={c.k}; "
              f"F equals the construction's encoder: {getattr(c.F, 'table', None) == F.table}")


if __name__ == "__main__":
    main(parse_config(Config, __doc__))
