"""Tiny helper: expose a dataclass's fields as command-line options."""
import argparse
from dataclasses import fields


def parse_config(cls, description: str):
    ap = argparse.ArgumentParser(description=description)
    for f in fields(cls):
        kind = type(f.default) if f.default is not None else int
        ap.add_argument(f"--{f.name.replace('_', '-')}", type=kind, default=f.default)
    return cls(**vars(ap.parse_args()))
