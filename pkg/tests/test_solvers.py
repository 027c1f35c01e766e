from fractions import Fraction

import pytest

from pfu.algebra import NEG_INF, UNFEASIBLE, builtin_structure
from pfu.dinner import dinner_query
from pfu.encoders import CnfInstance, encode_cnf
from pfu.errors import CapExceeded, SolverPreconditionError
from pfu.generators import random_instance
from pfu.network import DECISION, ComponentDag, Component, PfuNetwork, ScopedFunction, Variable
from pfu.query import policy_differences, validate_query
from pfu.solvers import (
    ALGORITHMS, applicable, semantic_oracle, stage_function, tree_search, ve_ax1, ve_ax2, ve_naive,
)

DINNER = {"query1": (6,), "query2": (26,), "query3": (NEG_INF,),
          "query4": (NEG_INF, UNFEASIBLE, NEG_INF, 6)}


@pytest.mark.parametrize("name", sorted(DINNER))
@pytest.mark.parametrize("algo", ["tree", "ve", "ve-ax2", "oracle"])
def test_dinner_answers(name, algo):
    assert ALGORITHMS[algo](dinner_query(name)).answer.entries == DINNER[name]


def test_dinner_policies():
    r = tree_search(dinner_query("query1"))
    assert r.policy.rule(0)(()) == ("meat", "red")
    r2 = tree_search(dinner_query("query2"))
    rule = r2.policy.rule(1)
    assert rule(("t", "f")) == ("meat", "red") and rule(("f", "t")) == ("fish", "white")
    assert ve_naive(dinner_query("query2")).policy == r2.policy


def test_oracle_records_only_reached_contexts():
    sem = semantic_oracle(dinner_query("query2"))
    assert set(sem.policy.rule(1).entries) == {("t", "f"), ("f", "t")}
    assert not policy_differences(sem.policy, tree_search(dinner_query("query2")).policy)


def single_max(values):
    s = builtin_structure("prob-additive")
    x = Variable("x", DECISION, ("a", "b"))
    n = PfuNetwork(s, (x,), ComponentDag((Component("d", DECISION, ("x",)),)),
                   (), (), (ScopedFunction((x,), list(values), name="U1"),))
    return validate_query(n, [("max", ("x",))])


@pytest.mark.parametrize("algo", ["tree", "ve", "ve-ax2"])
def test_single_max_and_tie(algo):
    r = ALGORITHMS[algo](single_max([3, 7]))
    assert r.answer.value() == 7 and r.policy.rule(0)(()) == ("b",)
    tie = ALGORITHMS[algo](single_max([5, 5]))
    assert tie.policy.rule(0)(()) == ("a",)


def test_ve_ax1_on_quantified_formula():
    q = encode_cnf(CnfInstance(3, [[-1, 3], [2, 3]],
                               [("exists", 1), ("forall", 2), ("exists", 3)]))
    assert q.network.structure.name == "prob-sat"
    assert ve_ax1(q).answer.value() == 1 == tree_search(q).answer.value()
    sat = encode_cnf(CnfInstance(3, [[-1, 3], [2, 3]]))
    assert sat.network.structure.name == "bool-opt-conj"
    assert ve_ax1(sat).answer.value() is True
    false = encode_cnf(CnfInstance(3, [[1, 2], [-1, 3], [-2, -3]],
                                   [("exists", 1), ("forall", 2), ("exists", 3)]))
    assert ve_ax1(false).answer.value() == 0 == tree_search(false).answer.value()


def test_preconditions():
    with pytest.raises(SolverPreconditionError):
        ve_ax1(dinner_query("query1"))
    q = encode_cnf(CnfInstance(2, [[1, 2]]))
    with pytest.raises(SolverPreconditionError):
        ve_ax2(q)
    assert applicable(builtin_structure("prob-additive")) == ["tree", "ve", "ve-ax2", "oracle"]
    assert applicable(builtin_structure("bool-pess-disj")) == ["tree", "ve", "oracle"]


def test_ve_ax2_without_plausibilities():
    r = ve_ax2(single_max([Fraction(1, 3), Fraction(2, 3)]))
    assert r.answer.value() == Fraction(2, 3)


def test_ve_naive_cap():
    with pytest.raises(CapExceeded):
        ve_naive(dinner_query("query1"), cap=8)


def test_ax1_elimination_table_bound():
    s = builtin_structure("kappa")
    for seed in range(20):
        q = random_instance(s, seed)
        r = ve_ax1(q)
        assert r.answer == tree_search(q).answer
        assert r.stats.peak_table <= 3 ** len(q.network.variables)


def _value_at(f, ctx_names, ctx, choice_names, choice):
    env = dict(zip(ctx_names, ctx))
    env.update(zip(choice_names, choice))
    return f(env)


@pytest.mark.parametrize("name", ["poss-optimistic", "poss-pessimistic"])
def test_possibilistic_policy_differences_are_value_ties(name):
    s = builtin_structure(name)
    seen = 0
    for seed in range(60):
        q = random_instance(s, seed)
        sem, op = semantic_oracle(q), tree_search(q)
        assert sem.answer == op.answer
        for i, ctx, mine, theirs in policy_differences(sem.policy, op.policy):
            rule = op.policy.rule(i)
            if mine is UNFEASIBLE or theirs is UNFEASIBLE:
                assert mine is theirs
                continue
            phi = stage_function(q, i)
            assert _value_at(phi, rule.context, ctx, rule.choice, mine) == \
                _value_at(phi, rule.context, ctx, rule.choice, theirs)
            seen += 1
    assert seen > 0
