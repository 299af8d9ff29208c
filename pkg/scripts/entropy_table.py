"""Entropy upper bounds for a few constructed SFTs, as CSV on stdout."""
from dataclasses import dataclass

from _config import parse_config
from sftkit.blocks import sft_to_wang, wang_to_sft
from sftkit.constructions import disjoint_union, full_shift, golden_mean, product
from sftkit.entropy import entropy_upper_bound


@dataclass
class Config:
    n_max: int = 5
    workers: int = 1


def main(cfg: Config):
    gm = golden_mean()
    systems = {
        "full2": full_shift(2),
        "golden-mean": gm,
        "golden-mean-wang": wang_to_sft(sft_to_wang(gm)[0]),
        "golden-mean x full2": product(gm, full_shift(2)),
        "golden-mean + full2": disjoint_union(gm, full_shift(2)),
    }
    print("system,n,count,bound")
    for name, X in systems.items():
        for n in range(1, cfg.n_max + 1):
            if name == "golden-mean-wang" and n > 4:
                break  # counts of (n+2)-boxes of the golden mean; n=5 takes minutes
            e = entropy_upper_bound(X, n, cfg.workers)
            print(f"{name},{n},{e.count},{'' if e.value is None else f'{e.value:.6f}'}", flush=True)


if __name__ == "__main__":
    main(parse_config(Config, __doc__))
