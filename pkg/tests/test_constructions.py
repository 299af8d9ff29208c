from pathlib import Path

import pytest
from hypothesis import given, settings, strategies as st

import oracles as O
from sftkit.blocks import enumerate_admissible_blocks, first_block, is_admissible, wang_to_sft
from sftkit.codes import symbol_map_code
from sftkit.constructions import (
    conj_hardness_instance, disjoint_union, empty_sft, full_shift, golden_mean, is_cross, lift_dimension,
    max_strip_height, pair_symbol, product, product_projection, robinson_machine_sft, robinson_patch,
    robinson_tile_at, robinson_tileset, singleton_sft, strip_exists, tag_symbol, tm_strip_tileset,
)
from sftkit.core import Pattern, SftInputError
from sftkit.entropy import count_admissible_blocks_sided as count
from sftkit.formats import dumps, parse_sftkit
from sftkit.tm import FIXTURES, Halted, run
from sftkit.verify import (
    ConjugacyCertificate, check_factor_inclusion, prove_empty, prove_nonempty, verify_conjugacy_certificate,
)

GOLDEN = Path(__file__).parent / "golden"
GM = golden_mean()


# ------------------------------------------------------------------ basics

def test_full_shift_basics():
    assert len(list(enumerate_admissible_blocks(full_shift(1), 0))) == 1
    assert count(full_shift(3), 1) == 3
    assert full_shift(2, 3).forbidden == () == lift_dimension(full_shift(2), 3).forbidden[:0]


def test_full_shift_needs_a_symbol():
    with pytest.raises(SftInputError):
        full_shift(0)


def test_empty_sft():
    E = empty_sft()
    assert prove_empty(E, 0).proven
    assert all(count(E, n) == 0 for n in (1, 2, 3))


def test_singleton():
    S = singleton_sft("x")
    assert all(count(S, n) == 1 for n in (1, 2, 3))
    assert len(S.alphabet) == 1 and S.forbidden == ()


# -------------------------------------------------------------- operators

def test_product_symbols_and_projection():
    P = product(GM, full_shift(3))
    assert list(P.alphabet)[:4] == [pair_symbol("0", s) for s in "012"] + [pair_symbol("1", "0")]
    assert check_factor_inclusion(product_projection(GM, full_shift(3)), P, GM, GM.radius).proven


def test_product_dimension_mismatch():
    with pytest.raises(SftInputError):
        product(GM, full_shift(2, 3))


def test_product_with_one_symbol_is_conjugate():
    one = full_shift(1)
    P = product(GM, one)
    F = symbol_map_code(GM.alphabet, P.alphabet, {s: pair_symbol(s, "0") for s in GM.alphabet})
    G = product_projection(GM, one)
    assert verify_conjugacy_certificate(GM, P, ConjugacyCertificate(F, G, 3)).proven


def test_product_is_associative_up_to_relabelling():
    A, B, C = GM, full_shift(2), full_shift(["a"])
    L, R = product(product(A, B), C), product(A, product(B, C))
    rel = {}
    for a in A.alphabet:
        for b in B.alphabet:
            for c in C.alphabet:
                rel[pair_symbol(pair_symbol(a, b), c)] = pair_symbol(a, pair_symbol(b, c))
    F = symbol_map_code(L.alphabet, R.alphabet, rel)
    G = symbol_map_code(R.alphabet, L.alphabet, {v: k for k, v in rel.items()})
    assert verify_conjugacy_certificate(L, R, ConjugacyCertificate(F, G, 3)).proven


def test_union_rejects_mixed_tags():
    U = disjoint_union(GM, full_shift(2))
    assert not is_admissible(Pattern({(0, 0): tag_symbol("L", "0"), (1, 0): tag_symbol("R", "0")}, 2), U)
    assert not is_admissible(Pattern({(0, 0): tag_symbol("R", "1"), (0, 1): tag_symbol("L", "0")}, 2), U)
    assert not is_admissible(Pattern({(0, 0): tag_symbol("L", "1"), (1, 0): tag_symbol("L", "1")}, 2), U)
    assert is_admissible(Pattern({(0, 0): tag_symbol("R", "1"), (1, 0): tag_symbol("R", "1")}, 2), U)


def test_union_is_commutative_up_to_tag_swap():
    A, B = GM, full_shift(2)
    U, V = disjoint_union(A, B), disjoint_union(B, A)
    swap = {tag_symbol("L", a): tag_symbol("R", a) for a in A.alphabet}
    swap.update({tag_symbol("R", b): tag_symbol("L", b) for b in B.alphabet})
    F = symbol_map_code(U.alphabet, V.alphabet, swap)
    G = symbol_map_code(V.alphabet, U.alphabet, {v: k for k, v in swap.items()})
    assert verify_conjugacy_certificate(U, V, ConjugacyCertificate(F, G, 3)).proven


def test_union_with_empty_is_conjugate_to_the_left_part():
    U = disjoint_union(GM, empty_sft())
    F = symbol_map_code(GM.alphabet, U.alphabet, {s: tag_symbol("L", s) for s in GM.alphabet})
    back = {tag_symbol("L", s): s for s in GM.alphabet}
    back[tag_symbol("R", "0")] = "0"
    G = symbol_map_code(U.alphabet, GM.alphabet, back)
    assert verify_conjugacy_certificate(GM, U, ConjugacyCertificate(F, G, 3)).proven
    for n in (1, 2):
        assert count(U, n) == count(GM, n) == O.count_box(U, n)


def test_union_single_cells_are_free():
    U = disjoint_union(full_shift(2), full_shift(3))
    assert count(U, 1) == 5


def test_lift_dimension_constant_along_new_axes():
    base = golden_mean(1)
    L = lift_dimension(base, 2)
    for n in (1, 2, 3):
        assert count(L, n) == count(base, n) == O.count_box(L, n)
    assert count(lift_dimension(base, 3), 1) == count(base, 1)
    assert count(lift_dimension(empty_sft(dim=1), 2), 2) == 0


def test_lift_dimension_must_grow():
    with pytest.raises(SftInputError):
        lift_dimension(GM, 2)


def test_lift_of_full_shift():
    L = lift_dimension(full_shift(2, 1), 2)
    assert all(count(L, n) == 2 ** n for n in (1, 2, 3))


@settings(max_examples=15, deadline=None)
@given(st.lists(st.tuples(st.sampled_from("01"), st.sampled_from("01")), max_size=2))
def test_product_and_union_counts_on_random_specs(pairs):
    from sftkit.core import SftSpec

    X = SftSpec(("0", "1"), 2, tuple(Pattern({(0, 0): a, (1, 1): b}, 2) for a, b in pairs))
    assert count(product(X, GM), 2) == count(X, 2) * count(GM, 2)
    assert count(disjoint_union(X, GM), 2) == count(X, 2) + count(GM, 2)


def test_constructions_are_deterministic():
    assert dumps(product(GM, full_shift(2))) == dumps(product(golden_mean(), full_shift(2)))
    assert dumps(robinson_tileset()) == dumps(robinson_tileset.__wrapped__())


# --------------------------------------------------------------- Robinson

ROB = wang_to_sft(robinson_tileset())


def test_robinson_golden_file():
    assert (GOLDEN / "robinson.txt").read_text() == dumps(robinson_tileset())
    assert len(robinson_tileset()) == 56


def test_robinson_tiles_are_stable_across_patches():
    from sftkit.constructions import robinson_tiles_in_patch

    assert robinson_tiles_in_patch(512, (1, 1)) == robinson_tiles_in_patch(256, (1, 1))
    assert robinson_tiles_in_patch(256, (1000, 77)) <= robinson_tiles_in_patch(256, (1, 1))


def test_robinson_patch_is_a_valid_tiling():
    grid = robinson_patch(40, 40)
    names = robinson_tileset().names()
    p = Pattern({(i, j): names[t] for j, row in enumerate(grid) for i, t in enumerate(row)}, 2)
    assert is_admissible(p, ROB)


def test_robinson_has_eight_cross_tiles():
    # four orientations of the cross, each in two parities
    assert sum(is_cross(t) for t in robinson_tileset().tiles) == 8
    assert is_cross(robinson_tile_at(0, 0)) and not is_cross(robinson_tile_at(0, 1))


def test_robinson_nonempty_at_small_radii():
    for n in range(5):
        assert first_block(ROB, n) is not None
    assert prove_empty(ROB, 4).unknown


def test_robinson_has_no_small_periods():
    assert prove_nonempty(ROB, 4).unknown


# ---------------------------------------------------------------- strips

@pytest.mark.parametrize("name", sorted(FIXTURES))
def test_strip_golden_files(name):
    T, seed = tm_strip_tileset(FIXTURES[name]())
    assert (GOLDEN / f"tm_strip_{name}.txt").read_text() == dumps(T)
    assert seed == 0


def test_strip_heights_halt_at_three():
    M = FIXTURES["halt3"]()
    assert strip_exists(M, 3) and strip_exists(M, 4)
    assert not strip_exists(M, 5)


def test_strip_heights_no_transitions():
    M = FIXTURES["halt0"]()
    assert strip_exists(M, 1) and not strip_exists(M, 2)


def test_strip_heights_never_halting():
    assert max_strip_height(FIXTURES["loop"](), 8) == 8


@pytest.mark.parametrize("name", ["halt0", "halt3"])
def test_strip_height_is_steps_plus_one(name):
    M = FIXTURES[name]()
    r = run(M, (), 100)
    assert isinstance(r, Halted)
    assert max_strip_height(M, r.steps + 4) == r.steps + 1


def test_strip_height_must_be_positive():
    with pytest.raises(SftInputError):
        strip_exists(FIXTURES["halt0"](), 0)


# --------------------------------------------------------------- hardness

def test_robinson_machine_golden():
    R = robinson_machine_sft(FIXTURES["halt0"]())
    assert (GOLDEN / "robinson_machine_halt0.txt").read_text() == dumps(R)


def test_hardness_alphabet_size():
    M = FIXTURES["halt3"]()
    H = conj_hardness_instance(GM, M)
    nR = len(robinson_tileset()) * len(tm_strip_tileset(M)[0])
    assert len(H.alphabet) == len(GM.alphabet) + nR * (len(GM.alphabet) + 1)


def test_hardness_left_blocks_are_blocks_of_x():
    H = conj_hardness_instance(GM, FIXTURES["halt0"]())
    lefts = [s for s in H.alphabet if s.startswith("L.")]
    assert lefts == [tag_symbol("L", s) for s in GM.alphabet]
    untag = {tag_symbol("L", s): s for s in GM.alphabet}
    for vals in [("1", "1"), ("0", "1"), ("1", "0")]:
        p = Pattern({(0, 0): tag_symbol("L", vals[0]), (1, 0): tag_symbol("L", vals[1])}, 2)
        q = Pattern({c: untag[v] for c, v in p.items()}, 2)
        assert is_admissible(p, H) == is_admissible(q, GM)


def test_hardness_round_trips_through_the_file_format():
    H = conj_hardness_instance(GM, FIXTURES["halt0"]())
    assert parse_sftkit(dumps(H)) == H


def test_hardness_needs_two_dimensions():
    with pytest.raises(SftInputError):
        conj_hardness_instance(golden_mean(1), FIXTURES["halt0"]())

