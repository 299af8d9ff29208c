from itertools import product as iproduct

import pytest
from hypothesis import given, settings, strategies as st

import oracles as O
from sftkit.blocks import enumerate_admissible_blocks, sft_to_wang
from sftkit.codes import (
    ComposedCode, ProjectionCode, RuleDomainError, TableCode, apply_to_pattern, apply_to_torus, compose,
    constant_code, identity_code, star_augment, symbol_map_code,
)
from sftkit.constructions import full_shift, golden_mean, pair_symbol, product, product_projection
from sftkit.core import STAR, Pattern, PeriodicConfig, SftInputError

GM = golden_mean()
BIN = ("0", "1")


def majority() -> TableCode:
    table = {w: "1" if w.count("1") >= 5 else "0" for w in iproduct(BIN, repeat=9)}
    return TableCode(BIN, BIN, 2, 1, table)


def block(vals, r=1):
    return Pattern.block(list(vals), r, 2)


def random_table(draw, r=1):
    size = (2 * r + 1) ** 2
    bits = draw(st.lists(st.sampled_from(BIN), min_size=2 ** size, max_size=2 ** size))
    return TableCode(BIN, BIN, 2, r, dict(zip(iproduct(BIN, repeat=size), bits)))


tables = st.composite(random_table)


def test_identity_is_identity():
    b = block("010000101")
    assert apply_to_pattern(identity_code(BIN), b) == b


def test_first_component_projection():
    P = product(GM, full_shift(3))
    pi = product_projection(GM, full_shift(3))
    b = Pattern({(0, 0): pair_symbol("1", "2"), (1, 0): pair_symbol("0", "0")}, 2)
    assert apply_to_pattern(pi, b) == Pattern({(0, 0): "1", (1, 0): "0"}, 2)
    assert pi.source == P.alphabet


def test_majority_on_isolated_one():
    vals = ["0"] * 25
    vals[12] = "1"
    assert apply_to_pattern(majority(), block(vals, 2)) == block("0" * 9)


def test_output_support_is_erosion():
    p = Pattern({(x, y): "0" for x in range(4) for y in range(2)}, 2)
    F = TableCode(BIN, BIN, 2, 1, {w: "0" for w in iproduct(BIN, repeat=9)})
    assert apply_to_pattern(F, p).support == frozenset()
    q = Pattern({(x, y): "0" for x in range(4) for y in range(3)}, 2)
    assert apply_to_pattern(F, q).support == {(1, 1), (2, 1)}


def test_table_outside_domain_raises():
    F = TableCode(BIN, BIN, 2, 0, {("0",): "1"})
    with pytest.raises(RuleDomainError) as e:
        F.evaluate(["1"])
    assert e.value.window == ("1",)
    assert TableCode(BIN, BIN, 2, 0, {("0",): "1"}, default="0").evaluate(["1"]) == "0"


def test_identity_on_torus():
    c = PeriodicConfig((2, 3), tuple("010100"))
    assert apply_to_torus(identity_code(BIN), c) == c


def test_projection_on_product_torus():
    pi = product_projection(GM, full_shift(2))
    c = PeriodicConfig((1, 2), (pair_symbol("0", "1"), pair_symbol("1", "1")))
    assert apply_to_torus(pi, c) == PeriodicConfig((1, 2), ("0", "1"))


def test_torus_application_matches_unrolled_block():
    F = majority()
    c = PeriodicConfig((2, 3), tuple("110100"))
    out = apply_to_torus(F, c)
    big = {z: c.at(z) for z in O.box(6, 2)}
    direct = O.apply_code(F, big)
    for z, v in direct.items():
        assert out.at(z) == v


def test_compose_radius_and_alphabet_check():
    F = majority()
    C = compose(F, F)
    assert isinstance(C, ComposedCode) and C.radius == 2
    with pytest.raises(SftInputError):
        compose(identity_code(("a",)), F)


def test_compose_with_identity_is_the_code():
    F = majority()
    C = compose(identity_code(BIN), F)
    for w in iproduct(BIN, repeat=9):
        assert C.evaluate(w) == F.evaluate(w)


def test_projection_after_pairing_is_identity():
    pair = symbol_map_code(BIN, [pair_symbol(a, "0") for a in BIN], {a: pair_symbol(a, "0") for a in BIN})
    back = symbol_map_code(pair.target, BIN, {pair_symbol(a, "0"): a for a in BIN})
    C = compose(back, pair)
    assert all(C.evaluate([a]) == a for a in BIN)


def test_wang_codes_recover_centre_block():
    T, F, G = sft_to_wang(GM)
    GF = compose(G, F)
    for b in enumerate_admissible_blocks(GM, 2):
        assert apply_to_pattern(GF, b) == b.restrict(O.cube(1, 2))


@settings(max_examples=30, deadline=None)
@given(tables(), tables(), st.lists(st.sampled_from(BIN), min_size=25, max_size=25))
def test_compose_agrees_with_sequential_application(F, G, vals):
    b = block(vals, 2)
    assert apply_to_pattern(compose(G, F), b) == apply_to_pattern(G, apply_to_pattern(F, b))


# ------------------------------------------------------------------- star

def test_star_on_full_shift_is_the_code():
    F = majority()
    S = star_augment(F, full_shift(2))
    assert S.radius == 1
    for w in iproduct(BIN, repeat=9):
        assert S.evaluate(w) == F.evaluate(w)


def test_star_window_gives_star():
    S = star_augment(identity_code(BIN), GM)
    assert S.radius == 1
    w = ["0"] * 9
    w[0] = STAR
    assert S.evaluate(w) == STAR


def test_forbidden_window_gives_star():
    S = star_augment(identity_code(BIN), GM)
    assert S.evaluate(list("000011000")) == STAR
    assert S.evaluate(list("000010000")) == "1"


def test_star_radius_is_max():
    S = star_augment(constant_code(BIN, BIN, "0"), GM)
    assert S.radius == max(0, GM.radius)


def test_star_absorbs_through_composition():
    A = star_augment(identity_code(BIN), GM)
    T, F, G = sft_to_wang(GM)
    from sftkit.blocks import wang_to_sft

    W = wang_to_sft(T)
    chain = compose(star_augment(G, W), star_augment(F, GM))
    for i in range(chain.radius * 2 + 1):
        for j in range(chain.radius * 2 + 1):
            w = ["0"] * (2 * chain.radius + 1) ** 2
            w[i * (2 * chain.radius + 1) + j] = STAR
            assert chain.evaluate(w) == STAR
    assert A.evaluate([STAR] * 9) == STAR


def test_star_agrees_on_admissible_windows():
    T, F, G = sft_to_wang(GM)
    S = star_augment(F, GM)
    for b in enumerate_admissible_blocks(GM, S.radius):
        vals = [b.get(c) for c in O.cube(S.radius, 2)]
        assert S.evaluate(vals) == F.evaluate(vals)


def test_projection_offset_must_be_inside_window():
    with pytest.raises(SftInputError):
        ProjectionCode(BIN, BIN, 2, 0, (1, 0))
    P = ProjectionCode(BIN, BIN, 2, 1, (1, 0))
    w = ["0"] * 9
    w[7] = "1"
    assert P.evaluate(w) == "1"
