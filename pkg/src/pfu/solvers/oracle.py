"""Decision-tree semantics of a query, computed from conditional distributions."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Optional, Sequence

from ..algebra import (
    ELIM, FEASIBILITY, UNFEASIBLE, PlausibilityStructure, comb_ext, cond_div, elim_ext, uniform,
)
from ..errors import CapExceeded, ConditioningDomainError, OracleConsistencyError
from ..network import (
    DEFAULT_CAP, PfuNetwork, ScopedFunction, eliminate, global_functions, strides, table_size,
)
from ..query import Query
from .common import SolveResult, SolveStats, answer_from, new_policy

ORACLE_CAP = 12


@dataclass(frozen=True)
class ConditionalDistribution:
    """A table over ``given`` then ``target`` with a defined flag per given assignment."""

    target: tuple
    given: tuple
    function: ScopedFunction
    defined: tuple

    def __call__(self, assignment):
        return self.function(assignment)

    def is_defined(self, assignment) -> bool:
        if not self.given:
            return self.defined[0]
        gvars = self.function.scope[:len(self.given)]
        i = 0
        for v, st in zip(gvars, strides(gvars)):
            i += v.index(assignment[v.name]) * st
        return self.defined[i]


def completion(n: PfuNetwork, cap: int = DEFAULT_CAP):
    """Completed joint plausibility and feasibility over all variables.

    The plausibility joint is ``(⊗P) ⊗_p p0`` where ``p0`` is the uniform
    element for the number of decision assignments; the feasibility joint is
    ``(∧F) ∧ t``.
    """
    s = n.structure
    if not s.conditionable:
        raise ConditioningDomainError(f"{s.name} is not conditionable")
    P, F, _ = global_functions(n, cap)
    p0 = uniform(table_size(n.dec_vars), s.plaus)
    joint = ScopedFunction(P.scope, [s.plaus.comb_p(x, p0) for x in P.table], P.codomain)
    names = tuple(v.name for v in n.variables)
    return (ConditionalDistribution(names, (), joint, (True,)),
            ConditionalDistribution(names, (), F, (True,)))


def conditional(joint, S: Sequence, given: Sequence,
                structure: PlausibilityStructure) -> ConditionalDistribution:
    """``P_{S | given}`` by marginalization and canonical conditioning.

    ``joint`` is a ScopedFunction or a ConditionalDistribution with no
    conditioning part. Use ``FEASIBILITY`` as ``structure`` for feasibilities.
    """
    f = joint.function if isinstance(joint, ConditionalDistribution) else joint
    S, given = set(S), set(given)
    if S & given:
        raise ConditioningDomainError("target and given sets overlap")
    gvars = tuple(v for v in f.scope if v.name in given)
    tvars = tuple(v for v in f.scope if v.name in S)
    others = [v for v in f.scope if v.name not in S | given]
    num = eliminate(f, others, structure.elim_p)
    den = eliminate(num, tvars, structure.elim_p)
    scope = gvars + tvars
    nt = table_size(tvars)
    table, defined = [], []
    for gi, d in enumerate(_reordered(den, gvars)):
        ok = d != structure.zero_p
        defined.append(ok)
        for ti in range(nt):
            a = dict(zip((v.name for v in scope), _labels(scope, gi * nt + ti)))
            table.append(cond_div(num(a), d, structure) if ok else structure.zero_p)
    return ConditionalDistribution(tuple(v.name for v in tvars), tuple(v.name for v in gvars),
                                   ScopedFunction(scope, table, f.codomain), tuple(defined))


def _labels(scope, i):
    out = []
    for v, st in zip(scope, strides(scope)):
        out.append(v.domain[(i // st) % len(v.domain)])
    return out


def _reordered(f: ScopedFunction, scope):
    for i in range(table_size(scope)):
        yield f(dict(zip((v.name for v in scope), _labels(scope, i))))


class _Marginals:
    """Cached marginals of a joint table, looked up with a global index assignment."""

    def __init__(self, joint: ScopedFunction, op, pos):
        self.joint, self.op, self.pos = joint, op, pos
        self.cache = {}

    def __call__(self, names: frozenset, assign):
        m = self.cache.get(names)
        if m is None:
            drop = [v for v in self.joint.scope if v.name not in names]
            f = eliminate(self.joint, drop, self.op)
            m = (tuple(self.pos[v.name] for v in f.scope), strides(f.scope), f.table)
            self.cache[names] = m
        pos, st, table = m
        i = 0
        for p, s in zip(pos, st):
            i += assign[p] * s
        return table[i]


def semantic_oracle(q: Query, cap: int = ORACLE_CAP) -> SolveResult:
    """Answer a query through its decision-tree semantics.

    Environment branches are weighted by ``P_{S | l(S)}`` and restricted to
    nonzero plausibility; decision branches are restricted to assignments
    whose conditional feasibility is true. Refuses non-conditionable
    structures and networks with more than ``cap`` variables.
    """
    n = q.network
    s = n.structure
    if not s.conditionable:
        raise ConditioningDomainError(f"{s.name} is not conditionable; the oracle does not apply")
    if len(n.variables) > cap:
        raise CapExceeded(f"{len(n.variables)} variables exceed the oracle cap of {cap}")
    Pd, Fd = completion(n)
    _, _, U = global_functions(n)
    names = [v.name for v in n.variables]
    pos = {x: k for k, x in enumerate(names)}
    margP = _Marginals(Pd.function, s.plaus.elim_p, pos)
    margF = _Marginals(Fd.function, FEASIBILITY.elim_p, pos)
    ust = strides(U.scope)
    zero_p = s.plaus.zero_p
    combx, elimx = comb_ext(s.comb_pu), elim_ext(s.elim_u)
    stats = SolveStats("oracle")
    policy = new_policy(q)
    variables = n.variables

    pairs = []
    for i, p in enumerate(q.sov):
        vs = q.variables_of(p.vars)
        left = frozenset(q.left_set(i))
        pairs.append((p.op, tuple(pos[x] for x in p.vars), left, left | set(p.vars),
                      tuple(pos[x] for x in q.left_set(i)),
                      list(itertools.product(*(range(len(v.domain)) for v in vs))), vs,
                      policy.rules.get(i)))
    K = len(pairs)
    assign = [0] * len(names)

    def rec(k):
        stats.nodes += 1
        if k == K:
            return U.table[sum(a * st for a, st in zip(assign, ust))]
        op, ppos, left, both, ctx, rng, vs, rule = pairs[k]
        if op == ELIM:
            den = margP(left, assign)
            if den == zero_p:
                raise OracleConsistencyError(f"zero plausibility on the context of pair {k}")
            acc, seen = UNFEASIBLE, False
            for combo in rng:
                for p_, c in zip(ppos, combo):
                    assign[p_] = c
                w = cond_div(margP(both, assign), den, s.plaus)
                if w == zero_p:
                    continue
                seen = True
                acc = elimx(acc, combx(w, rec(k + 1)))
            if not seen:
                raise OracleConsistencyError(f"no plausible branch for pair {k}")
            return acc
        if not margF(left, assign):
            raise OracleConsistencyError(f"unfeasible context reached at pair {k}")
        best, arg = UNFEASIBLE, None
        for combo in rng:
            for p_, c in zip(ppos, combo):
                assign[p_] = c
            if not margF(both, assign):
                continue
            v = rec(k + 1)
            if v is UNFEASIBLE:
                continue
            if best is UNFEASIBLE or s.better(op, v, best):
                best, arg = v, combo
        if arg is None:
            raise OracleConsistencyError(f"no feasible decision for pair {k}")
        key = tuple(variables[p_].domain[assign[p_]] for p_ in ctx)
        rule.entries[key] = tuple(v.domain[c] for v, c in zip(vs, arg))
        return best

    free = frozenset(q.free_vars)
    free_pos = [pos[x] for x in q.free_vars]
    entries = []
    for combo in itertools.product(*(range(len(v.domain)) for v in q.free_variables)):
        for p_, c in zip(free_pos, combo):
            assign[p_] = c
        if not margF(free, assign):
            entries.append(UNFEASIBLE)
            continue
        v = rec(0)
        if v is UNFEASIBLE:
            raise OracleConsistencyError("feasible free assignment with an unfeasible answer")
        entries.append(v)
    # keep rule entries in row-major context order for stable output
    for rule in policy.rules.values():
        ctx_vars = q.variables_of(rule.context)
        order = {labels: k for k, labels in enumerate(itertools.product(*(v.domain for v in ctx_vars)))}
        rule.entries = dict(sorted(rule.entries.items(), key=lambda kv: order[kv[0]]))
    return SolveResult(answer_from(q, entries), policy, stats)
