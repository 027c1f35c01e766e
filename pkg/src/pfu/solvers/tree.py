"""Depth-first evaluation of a query along its operator sequence."""

from __future__ import annotations

import itertools

from ..algebra import ELIM, UNFEASIBLE
from ..query import Query
from .common import Indexer, SolveResult, SolveStats, answer_from, lookup, new_policy


def tree_search(q: Query) -> SolveResult:
    """Answer and policy by enumerating the search tree of the operator sequence.

    Each leaf is a complete assignment valued by ``(∧F) ⋆ ((⊗P) ⊗_pu (⊗U))``.
    Elimination nodes fold their children with ⊕_u, decision nodes keep the
    best child and record it; ⋄ children are ignored by both.
    """
    n = q.network
    s = n.structure
    ix = Indexer(n)
    Fs = [ix.spec(f) for f in n.F]
    Ps = [ix.spec(f) for f in n.P]
    Us = [ix.spec(f) for f in n.U]
    comb_p, one_p = s.plaus.comb_p, s.plaus.one_p
    comb_u, one_u = s.util.comb_u, s.util.one_u
    comb_pu, elim_u, better = s.comb_pu, s.elim_u, s.better
    stats = SolveStats("tree")
    policy = new_policy(q)

    pairs = []
    for i, p in enumerate(q.sov):
        vs = q.variables_of(p.vars)
        pos = ix.positions(p.vars)
        ctx = ix.positions(q.left_set(i))
        rng = list(itertools.product(*(range(len(v.domain)) for v in vs)))
        rule = policy.rules.get(i)
        pairs.append((p.op, pos, ctx, rng, rule.entries if rule else None, vs))
    K = len(pairs)
    assign = [0] * len(ix.names)
    variables = n.variables

    def leaf():
        stats.nodes += 1
        for spec in Fs:
            if not lookup(spec, assign):
                return UNFEASIBLE
        p = one_p
        for spec in Ps:
            p = comb_p(p, lookup(spec, assign))
        u = one_u
        for spec in Us:
            u = comb_u(u, lookup(spec, assign))
        return comb_pu(p, u)

    def rec(k):
        if k == K:
            return leaf()
        op, pos, ctx, rng, entries, vs = pairs[k]
        stats.nodes += 1
        best, arg = UNFEASIBLE, None
        for combo in rng:
            for p_, c in zip(pos, combo):
                assign[p_] = c
            v = rec(k + 1)
            if v is UNFEASIBLE:
                continue
            if best is UNFEASIBLE:
                best, arg = v, combo
            elif op == ELIM:
                best = elim_u(best, v)
            elif better(op, v, best):
                best, arg = v, combo
        if entries is not None:
            key = tuple(variables[p_].domain[assign[p_]] for p_ in ctx)
            entries[key] = (UNFEASIBLE if arg is None
                            else tuple(v.domain[c] for v, c in zip(vs, arg)))
        return best

    free_pos = ix.positions(q.free_vars)
    entries = []
    for combo in itertools.product(*(range(len(v.domain)) for v in q.free_variables)):
        for p_, c in zip(free_pos, combo):
            assign[p_] = c
        entries.append(rec(0))
    return SolveResult(answer_from(q, entries), policy, stats)
