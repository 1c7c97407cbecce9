import pytest

from oracles import oracle_dims
from properties import reduction_properties

from operad_forge import trees
from operad_forge.algebra import Element
from operad_forge.catalog import make_order, preset
from operad_forge.expressions import Presentation, parse_expression, shuffle_presentation, to_element
from operad_forge.orders import PathLex
from operad_forge.rewriting import (
    RewriteRule,
    RewriteSystem,
    StepLimitExceeded,
    complete,
    critical_pairs,
    s_polynomial,
    suboperad_dims,
    unresolved_pairs,
)
from operad_forge.trees import Generator


def _complete(name, n, order_name="pathlex", threads=1):
    p = preset(name)
    order = make_order(order_name, p)
    return complete(shuffle_presentation(p, order), order, n, threads)


@pytest.mark.parametrize("name", ["com", "lie", "ass", "poisson", "prelie", "fm", "plc", "almost(com,lie)"])
def test_dims_match_oracle(name):
    up_to = 4 if name in ("plc", "poisson") else 5
    system, _ = _complete(name, up_to)
    assert system.dims(up_to) == oracle_dims(preset(name), up_to)


def test_com_rules():
    system, report = _complete("com", 4)
    # two of the three arity-3 monomials are leading terms; nothing new later
    assert report.rules_per_arity == {1: 0, 2: 0, 3: 2, 4: 0}
    assert system.normal_monomials(3) == [("o", 1, ("o", 2, 3))]


def test_completed_systems_have_no_unresolved_pairs():
    for name in ("fm", "prelie", "lie"):
        system, _ = _complete(name, 4)
        assert unresolved_pairs(system) == []


def test_truncation_and_step_limit():
    system, _ = _complete("fm", 3)
    e = Element.monomial(("o", ("o", ("o", 1, 2), 3), 4))
    with pytest.raises(ValueError):
        system.reduce(e)
    tight = RewriteSystem(system.signature, system.order, system.rules, 3, step_limit=0)
    with pytest.raises(StepLimitExceeded):
        tight.reduce(Element.monomial(("o", ("o", 1, 2), 3)), strategy="outermost")


def test_non_terminating_rules_hit_the_step_limit():
    # a -> b, b -> a with an inconsistent order hint
    sig = trees.ShuffleSignature.from_generators([Generator("o", 2, "symmetric")])
    a, b = ("o", ("o", 1, 2), 3), ("o", 1, ("o", 2, 3))
    rules = [RewriteRule(a, Element.monomial(b)), RewriteRule(b, Element.monomial(a))]
    system = RewriteSystem(sig, PathLex(("o",)), rules, 3, step_limit=50)
    with pytest.raises(StepLimitExceeded):
        system.reduce(Element.monomial(a))


def test_reduction_properties():
    cases, bad = reduction_properties()
    assert cases >= 1000 and not bad


def test_certificate_replay_example():
    system, _ = _complete("fm", 4)
    hm = to_element(parse_expression(preset("fm").relations[2], preset("fm").generators), system.signature)
    nf, steps = system.reduce(hm, certificate=True)
    assert not nf and steps
    assert system.replay(steps) == hm
    assert system.ideal_membership(hm)


def test_serialization_round_trip():
    system, _ = _complete("fm", 4)
    again = RewriteSystem.loads(system.dumps())
    assert again.dumps() == system.dumps()
    assert again.dims(4) == system.dims(4)


def test_thread_count_does_not_change_the_result():
    one, _ = _complete("fm", 4, threads=1)
    four, _ = _complete("fm", 4, threads=4)
    assert one.dumps() == four.dumps()


def test_weighted_and_xy_orders_give_the_same_dims():
    for order_name in ("weighted-pathlex", "xy-augmented"):
        for name in ("fm", "almost(com,lie)"):
            system, _ = _complete(name, 5, order_name)
            assert system.dims(5) == [1, 2, 9, 64, 625]


def test_xy_order_rule_counts():
    _, fm = _complete("fm", 5, "xy-augmented")
    _, acl = _complete("almost(com,lie)", 5, "xy-augmented")
    assert fm.rules_per_arity == acl.rules_per_arity


def test_critical_pairs_and_s_polynomial():
    sig = trees.ShuffleSignature.from_generators([Generator("o", 2, "symmetric")])
    order = PathLex(("o",))
    rel = to_element(parse_expression("(a1 o a2) o a3 - a1 o (a2 o a3)", (Generator("o", 2, "symmetric"),)), sig)
    lead = rel.leading_monomial(order)
    rule = RewriteRule(lead, Element.monomial(lead) - rel)
    ovs = critical_pairs(rule, rule, sig, 4)
    assert ovs and all(trees.arity(ov.tree) == 4 for ov in ovs)
    for ov in ovs:
        s = s_polynomial(ov)
        assert ov.tree not in s.terms


def test_suboperad_dims():
    pl, _ = _complete("prelie", 4)
    o = Element({("dot", 1, 2): 1, ("dot'", 1, 2): 1})
    b = Element({("dot", 1, 2): 1, ("dot'", 1, 2): -1})
    assert suboperad_dims(pl, [o, b], 4) == [1, 2, 9, 64]
    assert suboperad_dims(pl, [o], 4) == [1, 1, 3, 15]
    assert suboperad_dims(pl, [b], 4) == [1, 1, 2, 6]
    with pytest.raises(ValueError):
        suboperad_dims(pl, [o], 5)


def test_complete_rejects_bad_arity():
    p = preset("com")
    order = PathLex(("o",))
    with pytest.raises(ValueError):
        complete(shuffle_presentation(p, order), order, 0)


def test_presentation_with_redundant_relation():
    o = Generator("o", 2, "symmetric")
    p = Presentation("twice", (o,), ("(a1 o a2) o a3 - a1 o (a2 o a3)", "2*(a1 o a2) o a3 - 2*a1 o (a2 o a3)"))
    order = PathLex(("o",))
    system, _ = complete(shuffle_presentation(p, order), order, 4)
    assert system.dims(4) == [1, 1, 1, 1]
