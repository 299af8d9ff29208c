"""Seed-anchored strip heights next to simulator step counts for the fixture machines."""
import time
from dataclasses import dataclass

from _config import parse_config
from sftkit.constructions import STRIP_OFFSET, max_strip_height
from sftkit.tm import FIXTURES, Halted, run


@dataclass
class Config:
    h_max: int = 16
    step_budget: int = 1000


def main(cfg: Config):
    print("machine,steps,strip_height,expected,seconds")
    for name, make in sorted(FIXTURES.items()):
        M = make()
        r = run(M, (), cfg.step_budget)
        steps = r.steps if isinstance(r, Halted) else None
        t0 = time.perf_counter()
        h = max_strip_height(M, cfg.h_max)
        dt = time.perf_counter() - t0
        expected = cfg.h_max if steps is None else min(cfg.h_max, steps + STRIP_OFFSET)
        print(f"{name},{'running' if steps is None else steps},{h},{expected},{dt:.3f}")


if __name__ == "__main__":
    main(parse_config(Config, __doc__))
