"""Wreath family: endomorphism formulas, homomorphism property on the
subgroup, well-definedness of the localized endomorphism, transversals,
and action probes."""

import random

import pytest

from selfsim.engine import (
    decompose,
    faithfulness_probe,
    product_rule_check,
    transitivity_check,
    transversal_validate,
)
from selfsim.instances import InstanceConfigError, load_config
from selfsim.instances.wreath import NotInH, WreathElem, WreathInstance, validate_localizer
from selfsim.ring import DensePoly, MultiLaurent


def P(p, *coeffs):
    return DensePoly(p, coeffs)


def base(p=2, d=2):
    return WreathInstance(p, d)


def localized(p=2, d=2):
    return WreathInstance(p, d, g=P(p, 1, 1, 1), localized=True)


def mono(inst, exps, c=1):
    m = MultiLaurent.monomial(inst.p, inst.d, exps, c)
    return inst.mring.from_laurent(m) if inst.localized else m


def test_validate_localizer():
    assert validate_localizer(2, P(2, 1, 1, 1)) == []
    assert validate_localizer(2, P(2, 0, 0, 1))  # monomial x^2
    assert validate_localizer(2, P(2, 1))  # constant
    assert validate_localizer(2, P(2, 1, 1))  # vanishes at 1 over F_2
    with pytest.raises(InstanceConfigError):
        WreathInstance(2, 2, g=P(2, 1, 1), localized=True)
    with pytest.raises(InstanceConfigError):
        WreathInstance(2, 2, localized=True)


def test_load_config():
    inst = load_config({"family": "wreath", "p": 2, "d": 2})
    assert isinstance(inst, WreathInstance) and not inst.localized
    inst = load_config(
        {"family": "wreath", "p": 2, "d": 2, "g": [1, 1, 1], "localized": True}
    )
    assert inst.localized and inst.degree == 8


def test_degrees():
    assert base(2, 2).degree == 4
    assert base(3, 2).degree == 9
    assert localized(2, 2).degree == 8


def test_group_laws():
    rng = random.Random(3)
    for inst in (base(), localized(), base(3, 2), base(2, 1)):
        e = inst.identity()
        for _ in range(40):
            a, b, c = (inst.random_element(rng) for _ in range(3))
            assert inst.multiply(inst.multiply(a, b), c) == inst.multiply(
                a, inst.multiply(b, c)
            )
            assert inst.multiply(a, inst.invert(a)) == e


def test_order_p_of_a():
    inst = base(3, 2)
    a = inst.generators()["a"]
    assert inst.elem_pow(a, 3) == inst.identity()


def test_transversals_validate():
    rng = random.Random(5)
    for inst in (base(), localized(), base(3, 1)):
        sample = [inst.random_element(rng) for _ in range(8)]
        assert transversal_validate(inst, sample)


def test_coset_index_closed_form_matches_search():
    rng = random.Random(21)
    for inst in (base(2, 2), base(3, 2), localized(2, 2), WreathInstance(3, 2, g=P(3, 2, 1, 1), localized=True)):
        for _ in range(60):
            g = inst.random_element(rng)
            assert inst.coset_index(g) == inst.coset_index_exhaustive(g)


# -- base endomorphism -------------------------------------------------------------


def test_endo_on_basic_exponents():
    inst = base(2, 3)
    # a^{x_1 - 1} -> a
    r = MultiLaurent(2, 3, {(1, 0, 0): 1, (0, 0, 0): 1})  # x_1 - 1 over F_2
    g = WreathElem(r, (0, 0, 0))
    img = inst.endo_f(g)
    assert img.r == MultiLaurent.one(2, 3)
    # a^{x_2 - 1} -> identity (x_2 lies in the subgroup lattice)
    r = MultiLaurent(2, 3, {(0, 1, 0): 1, (0, 0, 0): 1})
    img = inst.endo_f(WreathElem(r, (0, 0, 0)))
    assert img.r.is_zero
    # a^{x_2 x_1 - 1} -> a^{x_3}
    r = MultiLaurent(2, 3, {(1, 1, 0): 1, (0, 0, 0): 1})
    img = inst.endo_f(WreathElem(r, (0, 0, 0)))
    assert img.r == MultiLaurent.monomial(2, 3, (0, 0, 1))


def test_endo_on_torsion_free_part():
    inst = base(2, 3)
    zero = MultiLaurent.zero(2, 3)
    # x_1^p -> x_2, x_2 -> x_3, x_3 -> x_1
    assert inst.endo_f(WreathElem(zero, (2, 0, 0))).q == (0, 1, 0)
    assert inst.endo_f(WreathElem(zero, (0, 1, 0))).q == (0, 0, 1)
    assert inst.endo_f(WreathElem(zero, (0, 0, 1))).q == (1, 0, 0)


def test_endo_rejects_non_members():
    inst = base(2, 2)
    with pytest.raises(NotInH):
        inst.endo_f(WreathElem(MultiLaurent.one(2, 2), (0, 0)))
    with pytest.raises(NotInH):
        inst.endo_f(WreathElem(MultiLaurent.zero(2, 2), (1, 0)))


def test_endo_homomorphism_on_h():
    rng = random.Random(7)
    for inst in (base(2, 2), base(3, 2), base(2, 3)):
        for _ in range(60):
            a = inst.random_h_element(rng)
            b = inst.random_h_element(rng)
            assert inst.h_member(a) and inst.h_member(b)
            assert inst.endo_f(inst.multiply(a, b)) == inst.multiply(
                inst.endo_f(a), inst.endo_f(b)
            )


# -- localized endomorphism -----------------------------------------------------------


def test_localized_endo_reduces_to_base_on_trivial_denominator():
    rng = random.Random(9)
    loc = localized()
    flat = base()
    for _ in range(40):
        gb = flat.random_h_element(rng)
        gl = WreathElem(loc.mring.from_laurent(gb.r), gb.q, (0, 0))
        img_l = loc.endo_f(gl)
        img_b = flat.endo_f(gb)
        assert img_l.r == loc.mring.from_laurent(img_b.r)
        assert img_l.q == img_b.q and img_l.y == (0, 0)


def test_localized_endo_clears_denominator_example():
    # a^{x_1 - 1}/g(x_1)^2 -> a/g(x_2)
    loc = localized()
    num = MultiLaurent(2, 2, {(1, 0): 1, (0, 0): 1})
    r = loc.mring.fraction(num, (2, 0))
    g = WreathElem(r, (0, 0), (0, 0))
    img = loc.endo_f(g)
    assert img.r == loc.mring.fraction(MultiLaurent.one(2, 2), (0, 1))


def test_localized_endo_well_defined():
    rng = random.Random(11)
    loc = localized()
    for _ in range(60):
        g = loc.random_h_element(rng)
        assert loc.h_member(g)
        assert loc.endo_f(g) == loc.localized_endo_with_slack(g, 1)
        assert loc.endo_f(g) == loc.localized_endo_with_slack(g, 2)


def test_localized_endo_homomorphism_on_h():
    rng = random.Random(13)
    loc = localized()
    for _ in range(60):
        a = loc.random_h_element(rng)
        b = loc.random_h_element(rng)
        assert loc.endo_f(loc.multiply(a, b)) == loc.multiply(
            loc.endo_f(a), loc.endo_f(b)
        )


def test_localized_endo_on_y_part():
    loc = localized()
    zero = loc.mring.zero
    assert loc.endo_f(WreathElem(zero, (0, 0), (2, 0))).y == (0, 1)
    assert loc.endo_f(WreathElem(zero, (0, 0), (0, 1))).y == (1, 0)


# -- engine interplay --------------------------------------------------------------------


def test_product_rule_wreath():
    rng = random.Random(17)
    for inst in (base(), localized()):
        for _ in range(10):
            g = inst.random_element(rng)
            h = inst.random_element(rng)
            assert product_rule_check(inst, g, h, 3)


def test_transitivity():
    for inst in (base(), localized()):
        gens = [g for name, g in inst.generators().items() if name != "e"]
        assert transitivity_check(inst, gens)


def test_faithfulness_probe_on_words():
    rng = random.Random(19)
    inst = localized()
    checked = 0
    for _ in range(40):
        g = inst.random_word(rng, 6)
        if g == inst.identity():
            continue
        checked += 1
        assert faithfulness_probe(inst, g, 8) is not None
    assert checked >= 35


def test_cap_exceeded_allowed():
    from selfsim.engine import CapExceeded, states_bfs

    inst = base(2, 2)
    gens = inst.generators()
    g = inst.multiply(gens["a"], gens["x1"])
    res = states_bfs(inst, g, 4)
    assert isinstance(res, (CapExceeded, type(res)))
