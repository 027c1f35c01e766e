import dataclasses
from fractions import Fraction

import pytest

from pfu.algebra import NEG_INF, UNFEASIBLE
from pfu.dinner import dinner_network
from pfu.errors import CapExceeded
from pfu.encoders import encode_bn
from pfu.formats import parse_uai
from pfu.network import (
    DECISION, FEASIBILITY_CODOMAIN, PLAUSIBILITY, ScopedFunction, Variable, combine, combine_all,
    constant, eliminate, global_functions, validate_network,
)

F = Fraction


@pytest.fixture(scope="module")
def dinner():
    return dinner_network()


def by_name(n, name):
    return next(f for f in n.P + n.F + n.U if f.name == name)


def test_combine_plausibilities(dinner):
    s = dinner.structure
    f = combine(by_name(dinner, "P1"), by_name(dinner, "P2"), s.plaus.comb_p)
    assert f({"bp_J": "t", "bp_M": "f"}) == F(3, 5)
    assert f({"bp_J": "t", "bp_M": "t"}) == 0


def test_combine_utilities_and_identity(dinner):
    s = dinner.structure
    u = combine(by_name(dinner, "U2"), by_name(dinner, "U3"), s.util.comb_u)
    assert [v.name for v in u.scope] == ["ep_J", "ep_M"]
    assert u({"ep_J": "t", "ep_M": "t"}) == 60
    same = combine(by_name(dinner, "U1"), constant(s.util.one_u), s.util.comb_u)
    assert same.table == by_name(dinner, "U1").table


def test_combine_with_unfeasible_is_absorbing():
    x = Variable("x", DECISION, ("a", "b"))
    f = ScopedFunction((x,), [UNFEASIBLE, 2])
    g = combine(f, constant(3), lambda a, b: a + b)
    assert g.table == (UNFEASIBLE, 5)


def test_eliminate(dinner):
    s = dinner.structure
    p1 = by_name(dinner, "P1")
    assert eliminate(p1, [], s.plaus.elim_p).table == p1.table
    total = eliminate(p1, p1.scope, s.plaus.elim_p)
    assert total.scope == () and total.table == (1,)
    x = Variable("x", DECISION, ("a", "b"))
    assert eliminate(ScopedFunction((x,), [UNFEASIBLE, 7]), [x], max).table == (7,)
    assert eliminate(ScopedFunction((x,), [UNFEASIBLE, UNFEASIBLE]), [x], max).table == (UNFEASIBLE,)


def test_eliminate_absent_variable_repeats_values():
    x = Variable("x", DECISION, ("a", "b", "c"))
    y = Variable("y", DECISION, ("a", "b"))
    f = eliminate(ScopedFunction((y,), [1, 2]), [x], lambda a, b: a + b)
    assert f.table == (3, 6)


def test_dinner_validates(dinner):
    rep = validate_network(dinner)
    assert rep.ok, rep.lines()
    assert not rep.failed_clauses


def test_always_false_feasibility_is_rejected(dinner):
    f1 = by_name(dinner, "F1")
    dead = ScopedFunction(f1.scope, [False] * len(f1.table), FEASIBILITY_CODOMAIN, f1.owner, "F1")
    rep = validate_network(dataclasses.replace(dinner, F=(dead,)))
    assert rep.failed_clauses == ["F-normalization"]


def test_unnormalized_plausibility_is_rejected(dinner):
    p1 = by_name(dinner, "P1")
    off = ScopedFunction(p1.scope, [F(1, 4)] * 4, PLAUSIBILITY, p1.owner, "P1")
    rep = validate_network(dataclasses.replace(dinner, P=(off,) + dinner.P[1:]))
    assert rep.failed_clauses == ["P-normalization"]


def test_uai_network_validates(data_dir):
    bn = parse_uai((data_dir / "chain.uai").read_text())
    assert validate_network(encode_bn(bn).network).ok


def test_global_functions(dinner):
    s = dinner.structure
    P, Fg, U = global_functions(dinner)
    assert Fg({"mc": "fish", "w": "red", "bp_J": "t", "bp_M": "f", "ep_J": "t", "ep_M": "t"}) is False
    env = [v for v in dinner.variables if v.kind != DECISION]
    marg = eliminate(P, env, s.plaus.elim_p)
    assert set(marg.table) == {1}
    empty = dataclasses.replace(dinner, U=())
    _, _, U0 = global_functions(empty)
    assert set(U0.table) == {s.util.one_u}
    assert NEG_INF in U.table


def test_global_functions_cap(dinner):
    with pytest.raises(CapExceeded):
        global_functions(dinner, cap=10)


def test_combine_all_respects_cap(dinner):
    with pytest.raises(CapExceeded):
        combine_all(dinner.P, dinner.structure.plaus.comb_p, 1, cap=3)
