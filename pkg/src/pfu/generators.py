"""Seeded random PFU networks and valid queries, for testing and benchmarking."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .algebra import INF, NEG_INF, ExpectedUtilityStructure
from .network import (
    DECISION, ENVIRONMENT, FEASIBILITY_CODOMAIN, PLAUSIBILITY, UTILITY, Component, ComponentDag,
    PfuNetwork, ScopedFunction, Variable, table_size,
)
from .query import Query, validate_query


@dataclass
class GeneratorConfig:
    max_vars: int = 8
    max_domain: int = 3
    max_factors: int = 10
    max_component: int = 2
    arc_probability: float = 0.35
    max_free: int = 2


def _rows(rng, n_rows, width, draw):
    return [draw(width) for _ in range(n_rows)]


def _normalized_row(s: ExpectedUtilityStructure, rng: random.Random, width: int) -> list:
    """Random plausibility values over ``width`` cells whose ⊕_p-sum is 1_p."""
    P = s.plaus
    if P.name == "probability":
        weights = [rng.choice((0, 0, 1, 1, 2, 3)) for _ in range(width)]
        if not any(weights):
            weights[rng.randrange(width)] = 1
        total = sum(weights)
        return [Fraction(x, total) for x in weights]
    if P.name == "possibility":
        row = [rng.choice((0, Fraction(1, 4), Fraction(1, 2), Fraction(3, 4), 1)) for _ in range(width)]
        row = [Fraction(x) for x in row]
        row[rng.randrange(width)] = Fraction(1)
        return row
    if P.name == "kappa":
        row = [rng.choice((0, 1, 2, 3, INF)) for _ in range(width)]
        row[rng.randrange(width)] = 0
        return row
    if P.elements == (False, True):
        row = [rng.random() < 0.6 for _ in range(width)]
        row[rng.randrange(width)] = True
        return row
    raise ValueError(f"no random plausibilities for {s.name}")


def _utility(s: ExpectedUtilityStructure, rng: random.Random):
    U = s.util
    if U.name == "additive":
        if rng.random() < 0.08:
            return NEG_INF
        return rng.randint(-4, 12)
    if U.name == "probability":
        return Fraction(rng.randint(0, 6), rng.choice((1, 2, 3)))
    if U.name == "unit-min":
        return Fraction(rng.randint(0, 4), 4)
    if U.name == "kappa":
        return INF if rng.random() < 0.1 else rng.randint(0, 5)
    if U.elements is not None:
        return rng.choice(U.elements)
    return U.sample(rng)


def random_network(s: ExpectedUtilityStructure, rng: random.Random,
                   cfg: GeneratorConfig = GeneratorConfig()) -> PfuNetwork:
    """A valid network on ``s``: normalized P and F, random utilities and DAG."""
    n_vars = rng.randint(2, cfg.max_vars)
    variables = []
    for k in range(n_vars):
        kind = DECISION if rng.random() < 0.45 else ENVIRONMENT
        size = rng.randint(1, cfg.max_domain) if rng.random() < 0.15 else rng.randint(2, cfg.max_domain)
        variables.append(Variable(f"x{k}", kind, tuple(f"v{j}" for j in range(size))))

    # group same-kind variables into components, in a random causal order
    order = variables[:]
    rng.shuffle(order)
    comps, k = [], 0
    while k < len(order):
        size = rng.randint(1, cfg.max_component)
        group = [order[k]]
        j = k + 1
        while j < len(order) and len(group) < size and order[j].kind == group[0].kind:
            group.append(order[j])
            j += 1
        comps.append(group)
        k = j
    comp_objs, parents_of = [], {}
    for ci, group in enumerate(comps):
        parents = tuple(f"c{pj}" for pj in range(ci) if rng.random() < cfg.arc_probability)
        parents_of[f"c{ci}"] = parents
        comp_objs.append(Component(f"c{ci}", group[0].kind, tuple(v.name for v in group), parents))
    by_id = {f"c{ci}": group for ci, group in enumerate(comps)}

    budget = cfg.max_factors
    P, F = [], []
    for ci, group in enumerate(comps):
        cid = f"c{ci}"
        pa = [v for p in parents_of[cid] for v in by_id[p]]
        cond = [v for v in pa if rng.random() < 0.6]
        scope = _declared(variables, cond + group)
        given = [v for v in scope if v not in group]
        inner = [v for v in scope if v in group]
        if group[0].kind == ENVIRONMENT:
            table = _conditional_table(scope, given, inner, lambda w: _normalized_row(s, rng, w))
            P.append(ScopedFunction(scope, table, PLAUSIBILITY, cid))
            budget -= 1
            if budget > 3 and rng.random() < 0.25:
                # a second factor equal to 1_p wherever the first is nonzero
                P.append(ScopedFunction(scope, [s.plaus.one_p if x != s.plaus.zero_p else
                                                rng.choice((s.plaus.zero_p, s.plaus.one_p))
                                                for x in table], PLAUSIBILITY, cid))
                budget -= 1
        elif rng.random() < 0.6:
            table = _conditional_table(scope, given, inner,
                                       lambda w: _normalized_row_bool(rng, w))
            F.append(ScopedFunction(scope, table, FEASIBILITY_CODOMAIN, cid))
            budget -= 1

    U = []
    n_u = rng.randint(1, max(1, budget))
    for _ in range(n_u):
        k = rng.randint(1, min(3, n_vars))
        scope = _declared(variables, rng.sample(variables, k))
        U.append(ScopedFunction(scope, [_utility(s, rng) for _ in range(table_size(scope))], UTILITY))
    return PfuNetwork(s, tuple(variables), ComponentDag(tuple(comp_objs)), tuple(P), tuple(F), tuple(U))


def _normalized_row_bool(rng, width):
    row = [rng.random() < 0.6 for _ in range(width)]
    row[rng.randrange(width)] = True
    return row


def _declared(variables, subset):
    names = {v.name for v in subset}
    return tuple(v for v in variables if v.name in names)


def _conditional_table(scope, given, inner, draw):
    """Row-major table over ``scope`` normalized along ``inner`` for each ``given`` assignment."""
    import itertools

    rows = {g: draw(table_size(inner))
            for g in itertools.product(*(range(len(v.domain)) for v in given))}
    gpos = [scope.index(v) for v in given]
    ipos = [scope.index(v) for v in inner]
    table = []
    for a in itertools.product(*(range(len(v.domain)) for v in scope)):
        g = tuple(a[p] for p in gpos)
        i = 0
        for p in ipos:
            i = i * len(scope[p].domain) + a[p]
        table.append(rows[g][i])
    return table


def random_query(n: PfuNetwork, rng: random.Random, cfg: GeneratorConfig = GeneratorConfig()) -> Query:
    """A random operator sequence satisfying all query conditions."""
    comp_of = n.dag.component_of()
    desc = n.dag.descendants()
    vmap = n.var_map()
    # decision variables with no environment ancestor may stay free
    anc_env = {x: any(vmap[y].kind == ENVIRONMENT and comp_of[x] in desc[comp_of[y]] for y in vmap)
               for x in vmap}
    cands = [v.name for v in n.dec_vars if not anc_env[v.name]]
    rng.shuffle(cands)
    free = set(cands[:rng.randint(0, min(cfg.max_free, len(cands)))])

    # random linear extension of "different kind and reachable implies earlier"
    must_precede = {y: {x for x in vmap if x != y and vmap[x].kind != vmap[y].kind
                        and comp_of[y] in desc[comp_of[x]] and x not in free}
                    for y in vmap}
    placed, seq = set(), []
    todo = [x for x in vmap if x not in free]
    while todo:
        ready = [x for x in todo if must_precede[x] <= placed]
        x = rng.choice(ready)
        seq.append(x)
        placed.add(x)
        todo.remove(x)

    sov = []
    for x in seq:
        kind = vmap[x].kind
        if sov and sov[-1][2] == kind and rng.random() < 0.6:
            sov[-1][1].append(x)
        else:
            op = "elim" if kind == ENVIRONMENT else rng.choice(("min", "max"))
            sov.append([op, [x], kind])
    return validate_query(n, [(op, vs) for op, vs, _ in sov])


def random_instance(s: ExpectedUtilityStructure, seed: int,
                    cfg: GeneratorConfig = GeneratorConfig()) -> Query:
    rng = random.Random(seed)
    n = random_network(s, rng, cfg)
    return random_query(n, rng, cfg)
