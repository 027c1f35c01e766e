"""Variable elimination: on the full joint, by buckets (Ax1), and on pairs (Ax2)."""

from __future__ import annotations

import itertools

import numpy as np

from ..algebra import ELIM, UNFEASIBLE, comb_ext, elimination_operator
from ..errors import CapExceeded, SolverPreconditionError
from ..network import (
    DEFAULT_CAP, ScopedFunction, combine_all, constant, eliminate, strides, table_size,
)
from ..query import Query
from .common import Indexer, SolveResult, SolveStats, answer_from, choose, lookup, new_policy


def _record(q: Query, i: int, funcs, comb, identity, project, rule):
    """Fill ``rule`` by evaluating the combination of ``funcs`` pointwise.

    Values are computed cell by cell for every context of the left set and
    every assignment of the decided set; nothing is materialized.
    """
    s = q.network.structure
    ctx = q.variables_of(q.left_set(i))
    dec = q.variables_of(q.sov[i].vars)
    local = {v.name: k for k, v in enumerate(ctx + dec)}
    specs = [(tuple(local[v.name] for v in f.scope), strides(f.scope), f.table) for f in funcs]
    dec_combos = list(itertools.product(*(range(len(v.domain)) for v in dec)))
    for cc in itertools.product(*(range(len(v.domain)) for v in ctx)):
        def values():
            for dc in dec_combos:
                a = cc + dc
                acc = identity
                for spec in specs:
                    acc = comb(acc, lookup(spec, a))
                yield dc, project(acc)
        _, arg = choose(s, rule.op, values())
        key = tuple(v.domain[c] for v, c in zip(ctx, cc))
        rule.entries[key] = (UNFEASIBLE if arg is UNFEASIBLE
                             else tuple(v.domain[c] for v, c in zip(dec, arg)))


def _identity(x):
    return x


def joint_value_function(q: Query, cap: int = DEFAULT_CAP) -> ScopedFunction:
    """``(∧F) ⋆ ((⊗P) ⊗_pu (⊗U))`` over all variables in declaration order."""
    n = q.network
    s = n.structure
    size = table_size(n.variables)
    if size > cap:
        raise CapExceeded(f"joint table of {size} cells exceeds cap {cap}")
    ix = Indexer(n)
    Fs = [ix.spec(f) for f in n.F]
    Ps = [ix.spec(f) for f in n.P]
    Us = [ix.spec(f) for f in n.U]
    table = []
    for a in itertools.product(*(range(len(v.domain)) for v in n.variables)):
        if not all(lookup(f, a) for f in Fs):
            table.append(UNFEASIBLE)
            continue
        p = s.plaus.one_p
        for f in Ps:
            p = s.plaus.comb_p(p, lookup(f, a))
        u = s.util.one_u
        for f in Us:
            u = s.util.comb_u(u, lookup(f, a))
        table.append(s.comb_pu(p, u))
    return ScopedFunction(n.variables, table)


def stage_function(q: Query, i: int, cap: int = DEFAULT_CAP) -> ScopedFunction:
    """Value of the query suffix starting at pair ``i``, as a table over l(S_i) and S_i."""
    s = q.network.structure
    phi = joint_value_function(q, cap)
    for j in reversed(range(i + 1, len(q.sov))):
        pair = q.sov[j]
        phi = eliminate(phi, q.variables_of(pair.vars), elimination_operator(s, pair.op))
    return phi


def ve_naive(q: Query, cap: int = DEFAULT_CAP) -> SolveResult:
    """Materialize the whole joint value function, then eliminate right to left."""
    s = q.network.structure
    phi = joint_value_function(q, cap)
    stats = SolveStats("ve", peak_table=len(phi.table))
    policy = new_policy(q)
    for i in reversed(range(len(q.sov))):
        pair = q.sov[i]
        if pair.op != ELIM:
            _record(q, i, [phi], lambda a, b: b, None, _identity, policy.rules[i])
        phi = eliminate(phi, q.variables_of(pair.vars), elimination_operator(s, pair.op))
        stats.eliminations += len(pair.vars)
        stats.elimination_order.extend(pair.vars)
    return SolveResult(answer_from(q, phi.table), policy, stats)


def _feasibility_as(f: ScopedFunction, one) -> ScopedFunction:
    return ScopedFunction(f.scope, [one if b else UNFEASIBLE for b in f.table], f.codomain)


def ve_ax1(q: Query) -> SolveResult:
    """Bucket elimination for structures where plausibilities and utilities coincide.

    Feasibilities become ``1`` or ⋄, after which every factor is combined with
    the same operator and each variable only touches the factors that mention it.
    """
    n = q.network
    s = n.structure
    if not s.ax1:
        raise SolverPreconditionError(f"{s.name} does not satisfy Ax1")
    one = s.plaus.one_p
    comb = s.util.comb_u
    combx = comb_ext(comb)
    funcs = list(n.P) + list(n.U) + [_feasibility_as(f, one) for f in n.F]
    stats = SolveStats("ve-ax1")
    policy = new_policy(q)
    for i in reversed(range(len(q.sov))):
        pair = q.sov[i]
        if pair.op != ELIM:
            _record(q, i, funcs, combx, one, _identity, policy.rules[i])
        op = elimination_operator(s, pair.op)
        for x in q.variables_of(pair.vars):
            bucket = [f for f in funcs if x.name in f.names]
            rest = [f for f in funcs if x.name not in f.names]
            if bucket:
                g = combine_all(bucket, comb, one)
                stats.peak_table = max(stats.peak_table, len(g.table))
            else:
                g = constant(one)
                stats.peak_table = max(stats.peak_table, 1)
            funcs = rest + [eliminate(g, [x], op)]
            stats.eliminations += 1
            stats.elimination_order.append(x.name)
    final = combine_all(funcs, comb, one, scope=q.free_variables)
    return SolveResult(answer_from(q, final.table), policy, stats)


def _split(f: ScopedFunction, x):
    """Rows of ``f`` indexed by the other variables, each listing the values along ``x``."""
    keep = tuple(v for v in f.scope if v.name != x.name)
    k = [v.name for v in f.scope].index(x.name)
    shape = tuple(len(v.domain) for v in f.scope)
    axes = [j for j in range(len(shape)) if j != k] + [k]
    perm = np.arange(len(f.table)).reshape(shape).transpose(axes)
    perm = perm.reshape(table_size(keep), len(x.domain)).tolist()
    return keep, [[f.table[i] for i in row] for row in perm]


def ve_ax2(q: Query) -> SolveResult:
    """Elimination on (plausibility, value) pairs for structures with ⊕_u = ⊗_u.

    A plausibility factor becomes ``(P, 0_u)``, a utility factor ``(1_p, U)``
    and a feasibility ``(1_p, 0_u)`` or ⋄. Pairs combine bilinearly:
    ``(p1, v1)·(p2, v2) = (p1 ⊗_p p2, (p2 ⊗_pu v1) ⊕_u (p1 ⊗_pu v2))``, so the
    value part of the product of all pairs is always the current value
    function. A decision variable is eliminated inside its bucket only when
    the bucket's plausibility does not depend on it; otherwise every factor
    is merged first.
    """
    n = q.network
    s = n.structure
    if not s.ax2:
        raise SolverPreconditionError(f"{s.name} does not satisfy Ax2")
    P, zero_u, one_p = s.plaus, s.zero_u, s.plaus.one_p
    comb_p, comb_pu, elim_u, elim_p = P.comb_p, s.comb_pu, s.elim_u, P.elim_p
    unit = (one_p, zero_u)

    def pcomb(a, b):
        return (comb_p(a[0], b[0]), elim_u(comb_pu(b[0], a[1]), comb_pu(a[0], b[1])))

    def pelim(a, b):
        return (elim_p(a[0], b[0]), elim_u(a[1], b[1]))

    pcombx = comb_ext(pcomb)
    funcs = ([ScopedFunction(f.scope, [(p, zero_u) for p in f.table], "pair") for f in n.P]
             + [ScopedFunction(f.scope, [(one_p, u) for u in f.table], "pair") for f in n.U]
             + [ScopedFunction(f.scope, [unit if b else UNFEASIBLE for b in f.table], "pair")
                for f in n.F])
    stats = SolveStats("ve-ax2")
    policy = new_policy(q)

    def value(x):
        return x if x is UNFEASIBLE else x[1]

    for i in reversed(range(len(q.sov))):
        pair = q.sov[i]
        if pair.op != ELIM:
            _record(q, i, funcs, pcombx, unit, value, policy.rules[i])
        for x in q.variables_of(pair.vars):
            stats.eliminations += 1
            stats.elimination_order.append(x.name)
            bucket = [f for f in funcs if x.name in f.names]
            rest = [f for f in funcs if x.name not in f.names]
            if pair.op == ELIM:
                g = combine_all(bucket, pcomb, unit, "pair") if bucket else constant(unit, "pair")
                stats.peak_table = max(stats.peak_table, len(g.table))
                funcs = rest + [eliminate(g, [x], pelim)]
                continue
            if not bucket:
                continue  # min/max over identical copies changes nothing
            g = combine_all(bucket, pcomb, unit, "pair")
            keep, rows = _split(g, x)
            constant_p = all(len({c[0] for c in row if c is not UNFEASIBLE}) <= 1 for row in rows)
            if rest and not constant_p:
                g = combine_all(funcs, pcomb, unit, "pair")
                keep, rows = _split(g, x)
                rest = []
            stats.peak_table = max(stats.peak_table, len(g.table))
            out = []
            for row in rows:
                best = UNFEASIBLE
                for c in row:
                    if c is UNFEASIBLE:
                        continue
                    if best is UNFEASIBLE or s.better(pair.op, c[1], best[1]):
                        best = c
                if best is UNFEASIBLE:
                    out.append(UNFEASIBLE)
                elif rest:
                    out.append(best)
                else:
                    # nothing left to combine with: the plausibility part is inert
                    out.append((one_p, best[1]))
            funcs = rest + [ScopedFunction(keep, out, "pair")]
    final = combine_all(funcs, pcomb, unit, "pair", scope=q.free_variables)
    return SolveResult(answer_from(q, [value(x) for x in final.table]), policy, stats)
