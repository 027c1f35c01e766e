import dataclasses
from fractions import Fraction

import pytest

from pfu.algebra import FEASIBILITY, NEG_INF
from pfu.dinner import dinner_network, dinner_query
from pfu.errors import CapExceeded, ConditioningDomainError
from pfu.network import DECISION, ComponentDag, Component, eliminate
from pfu.solvers import completion, conditional, semantic_oracle, tree_search

F = Fraction


@pytest.fixture(scope="module")
def dinner():
    return dinner_network()


def test_completion_spreads_over_decisions(dinner):
    joint, feas = completion(dinner)
    s = dinner.structure.plaus
    total = eliminate(joint.function, joint.function.scope, s.elim_p)
    assert total.table == (1,)
    a = {"mc": "fish", "w": "white", "bp_J": "t", "bp_M": "f", "ep_J": "f", "ep_M": "f"}
    assert joint(a) == F(3, 5) * F(1, 4)
    assert feas({**a, "w": "red"}) is False


def test_conditionals(dinner):
    s = dinner.structure.plaus
    joint, _ = completion(dinner)
    c = conditional(joint, ("bp_J", "bp_M"), ("mc", "w"), s)
    assert c({"mc": "meat", "w": "red", "bp_J": "t", "bp_M": "f"}) == F(3, 5)
    assert c.is_defined({"mc": "meat", "w": "red"})
    m = conditional(joint, ("bp_J",), (), s)
    assert m({"bp_J": "t"}) == F(3, 5)
    # chain rule: P(ep_J, bp_J | mc, w) = P(ep_J | bp_J, mc, w) P(bp_J | mc, w)
    pj = conditional(joint, ("ep_J", "bp_J"), ("mc", "w"), s)
    pe = conditional(joint, ("ep_J",), ("bp_J", "mc", "w"), s)
    pb = conditional(joint, ("bp_J",), ("mc", "w"), s)
    for mc in ("fish", "meat"):
        for w in ("white", "red"):
            for b in ("f", "t"):
                for e in ("f", "t"):
                    a = {"mc": mc, "w": w, "bp_J": b, "ep_J": e}
                    assert pj(a) == pe(a) * pb(a)


def test_conditional_rejects_overlap(dinner):
    joint, _ = completion(dinner)
    with pytest.raises(ConditioningDomainError):
        conditional(joint, ("bp_J",), ("bp_J",), dinner.structure.plaus)


def test_feasibility_conditional(dinner):
    _, feas = completion(dinner)
    c = conditional(feas, ("w",), ("mc",), FEASIBILITY)
    assert c({"mc": "fish", "w": "red"}) is False
    assert c({"mc": "meat", "w": "red"}) is True


def test_no_decision_variables_leave_plausibilities_unchanged(dinner):
    env = tuple(v for v in dinner.variables if v.kind != DECISION)
    dag = ComponentDag(tuple(dataclasses.replace(c, parents=tuple(p for p in c.parents if p != "menu"))
                             for c in dinner.dag.components if c.kind != DECISION))
    P = tuple(f for f in dinner.P if all(v.kind != DECISION for v in f.scope))
    n = dataclasses.replace(dinner, variables=env, dag=dag, P=P, F=(), U=())
    joint, _ = completion(n)
    a = {"bp_J": "t", "bp_M": "f", "ep_J": "t", "ep_M": "f"}
    assert joint(a) == F(3, 5)


def test_oracle_matches_operational_answers():
    r = semantic_oracle(dinner_query("query1"))
    assert r.answer.value() == 6
    assert r.policy == tree_search(dinner_query("query1")).policy
    assert semantic_oracle(dinner_query("query3")).answer.value() == NEG_INF


def test_oracle_respects_cap():
    with pytest.raises(CapExceeded):
        semantic_oracle(dinner_query("query1"), cap=2)

