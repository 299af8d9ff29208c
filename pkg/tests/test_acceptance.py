"""The ten acceptance criteria, each with its runtime limit.

Every test records one line in ``conftest.ACCEPTANCE``; the terminal summary
prints them as PASS/FAIL.
"""
import math
import os
import subprocess
import sys
import time
from itertools import product as iproduct
from pathlib import Path

import oracles as O
from conftest import ACCEPTANCE
from sftkit.blocks import enumerate_admissible_blocks, sft_to_wang, wang_to_sft
from sftkit.codes import TableCode, constant_code, identity_code, symbol_map_code
from sftkit.constructions import (
    STRIP_OFFSET, disjoint_union, empty_sft, full_shift, golden_mean, max_strip_height, product, product_projection,
    robinson_tileset,
)
from sftkit.core import Pattern, PeriodicConfig, WangTileset
from sftkit.entropy import count_admissible_blocks_sided, entropy_upper_bound
from sftkit.tm import FIXTURES, Halted, Running, run
from sftkit.verify import (
    REFUTED_BLOCK, SATISFIED_PREIMAGE, ConjugacyCertificate, check_factor_inclusion, check_surjectivity,
    minimal_k, prove_empty, prove_nonempty, search_conjugacy, verify_conjugacy_certificate,
)

GM = golden_mean()


def record(n: int, limit: float | None, check):
    """Run ``check`` (returns a detail string), time it, record the outcome and re-raise failures."""
    t0 = time.perf_counter()
    try:
        detail = check()
    except Exception as e:
        ACCEPTANCE[n] = (False, f"{type(e).__name__}: {e}"[:200])
        raise
    dt = time.perf_counter() - t0
    ok = limit is None or dt < limit
    ACCEPTANCE[n] = (ok, f"{detail} ({dt:.2f} s{'' if limit is None else f', limit {limit:g} s'})")
    assert ok, f"took {dt:.2f} s, limit {limit} s"


def test_1_full_shift_entropy_exact():
    def check():
        for k, n in iproduct((2, 3), (1, 2, 3)):
            e = entropy_upper_bound(full_shift(k), n)
            assert e.count == k ** (n * n)
            assert abs(e.value - math.log2(k)) <= 1e-12
        return "k in {2,3}, n in {1,2,3}: counts k^(n^2), values log2 k"
    record(1, 1.0, check)


def test_2_wang_certificate_round_trip():
    def check():
        T, F, G = sft_to_wang(GM)
        W = wang_to_sft(T)
        k = minimal_k(GM, W, F, G)
        assert verify_conjugacy_certificate(GM, W, ConjugacyCertificate(F, G, k)).proven
        refuted = 0
        for key in sorted(F.table):
            table = dict(F.table)
            table[key] = (table[key] + 1) % len(W.alphabet)
            bad = TableCode(F.source, F.target, F.dim, F.radius, table, F.default)
            v = verify_conjugacy_certificate(GM, W, ConjugacyCertificate(bad, G, k))
            assert v.refuted and isinstance(v.witness, Pattern)
            side = GM if v.witness.get((0,) * 2) in GM.alphabet else W
            assert O.admissible(v.witness.as_dict(), side)
            refuted += 1
        return f"proven at k={k}; {refuted}/{len(F.table)} single-entry mutations refuted with a block"
    record(2, 30.0, check)


def test_3_no_radius_zero_conjugacy_between_full_shifts():
    def check():
        F2, F3 = full_shift(2), full_shift(3)
        accepted = 0
        pairs = 0
        for fmap in iproduct(F3.alphabet, repeat=2):
            for gmap in iproduct(F2.alphabet, repeat=3):
                F = symbol_map_code(F2.alphabet, F3.alphabet, dict(zip(F2.alphabet, fmap)))
                G = symbol_map_code(F3.alphabet, F2.alphabet, dict(zip(F3.alphabet, gmap)))
                pairs += 1
                accepted += verify_conjugacy_certificate(F2, F3, ConjugacyCertificate(F, G, 1)).proven
        assert accepted == 0 and pairs == 72
        assert search_conjugacy(F2, F3, 0, 1).unknown
        return f"{pairs} radius-0 pairs, none accepted; search returns unknown"
    record(3, 5.0, check)


def test_4_factor_inclusion_soundness():
    def check():
        F2 = full_shift(2)
        for X in (F2, GM):
            pi = product_projection(X, F2)
            r = pi.radius + X.radius
            v = check_factor_inclusion(pi, product(X, F2), X, r)
            assert v.proven and v.witness == r
        flip = symbol_map_code(GM.alphabet, GM.alphabet, {"0": "1", "1": "0"})
        v = check_factor_inclusion(flip, GM, GM, 1)
        assert v.unknown
        img = {c: ("1" if s == "0" else "0") for c, s in v.budget["block"].as_dict().items()}
        assert any(img[(x, y)] == "1" and (img.get((x + 1, y)) == "1" or img.get((x, y + 1)) == "1")
                   for (x, y) in img)
        return "projections proven at minimal r; flip unknown with adjacent 1s in the image"
    record(4, 10.0, check)


def test_5_surjectivity_refutation():
    def check():
        one, F2 = full_shift(1), full_shift(2)
        rep = check_surjectivity(constant_code(one.alphabet, F2.alphabet, "0"), one, F2, 0, 1, 1)
        bad = [b for b in rep.blocks if b.status == REFUTED_BLOCK]
        assert rep.verdict.refuted and len(bad) == 1
        assert isinstance(bad[0].payload, PeriodicConfig) and bad[0].payload.periods == (1, 1)
        I = identity_code(GM.alphabet)
        sizes = []
        for n in (0, 1, 2):
            rep = check_surjectivity(I, GM, GM, n, 1, 1)
            assert all(b.status == SATISFIED_PREIMAGE for b in rep.blocks)
            sizes.append(len(rep.blocks))
        return f"constant code refuted at n=0 (period 1); identity satisfied on {sizes} blocks"
    record(5, 5.0, check)


def test_6_emptiness_both_ways():
    def check():
        tile = wang_to_sft(WangTileset((("a", "b", "a", "c"),)))
        v = prove_empty(tile, 2)
        assert v.proven and v.witness == 1
        v = prove_empty(empty_sft(), 2)
        assert v.proven and v.witness == 0
        v = prove_nonempty(GM, 1)
        assert v.proven and v.witness.periods == (1, 1) and v.witness.cells == ("0",)
        return "mismatched tile empty at 1, empty spec at 0, golden mean has the zero torus"
    record(6, 1.0, check)


def test_7_robinson_aperiodicity_evidence():
    def check():
        R = wang_to_sft(robinson_tileset())
        assert prove_nonempty(R, 4).unknown
        assert prove_empty(R, 4).unknown
        assert next(iter(enumerate_admissible_blocks(R, 4)), None) is not None
        return f"{len(R.alphabet)} tiles: no torus up to period 4, blocks exist to radius 4"
    record(7, 600.0, check)


def test_8_strip_height_matches_simulator():
    def check():
        heights = {}
        for name in ("halt0", "halt3"):
            M = FIXTURES[name]()
            r = run(M, (), 100)
            assert isinstance(r, Halted)
            heights[name] = max_strip_height(M, 12)
            assert heights[name] == r.steps + STRIP_OFFSET
        M = FIXTURES["loop"]()
        assert isinstance(run(M, (), 100), Running)
        heights["loop"] = max_strip_height(M, 12)
        assert heights["loop"] == 12
        return f"heights {heights}, offset {STRIP_OFFSET}"
    record(8, 60.0, check)


def test_9_operator_counts_against_oracle():
    def check():
        F2 = full_shift(2)
        n = 2
        for X, Y in ((GM, F2), (F2, GM), (GM, GM)):
            cx, cy = count_admissible_blocks_sided(X, n), count_admissible_blocks_sided(Y, n)
            P, U = product(X, Y), disjoint_union(X, Y)
            assert count_admissible_blocks_sided(P, n) == cx * cy == O.count_box(P, n)
            assert count_admissible_blocks_sided(U, n) == cx + cy == O.count_box(U, n)
        return "product multiplies, union adds at n=2 on three pairs"
    record(9, 10.0, check)


DETERMINISM_COMMANDS = [
    ["build", "golden-mean"],
    ["blocks", "{gm}", "--n", "1"],
    ["entropy", "{gm}", "--n", "1,2,3,4"],
    ["empty", "{gm}", "--n-max", "2"],
    ["nonempty", "{gm}", "--period-budget", "2"],
    ["verify-surj", "{id}", "{gm}", "{gm}", "--n", "1"],
    ["convert", "sft2wang", "{gm}"],
    ["build", "robinson"],
]


def _primary_stream(workers: int, tmp: Path) -> bytes:
    env = dict(os.environ, SFTKIT_WORKERS=str(workers))
    paths = {"gm": str(tmp / "gm.sft"), "id": str(tmp / "id.sbc")}
    out = b""
    for argv in DETERMINISM_COMMANDS:
        argv = [a.format(**paths) for a in argv]
        r = subprocess.run([sys.executable, "-m", "sftkit.cli", "--quiet", *argv], capture_output=True, env=env)
        out += b"$ " + " ".join(argv).replace(str(tmp), "").encode() + b"\n" + r.stdout
        out += f"exit {r.returncode}\n".encode()
    return out


def test_10_determinism_across_runs_and_workers(tmp_path):
    from sftkit.formats import dumps

    def check():
        (tmp_path / "gm.sft").write_text(dumps(GM))
        (tmp_path / "id.sbc").write_text(dumps(identity_code(GM.alphabet)))
        runs = [_primary_stream(w, tmp_path) for w in (1, 1, 3)]
        assert runs[0] == runs[1] == runs[2]
        return f"{len(DETERMINISM_COMMANDS)} commands, {len(runs[0])} bytes identical over workers 1, 1, 3"
    record(10, None, check)
