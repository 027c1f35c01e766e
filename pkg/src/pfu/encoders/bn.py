"""Bayesian networks: marginals, probability of evidence, MPE and MAP."""

from __future__ import annotations

import graphlib
from dataclasses import dataclass, field
from fractions import Fraction

from ..algebra import builtin_structure
from ..errors import EncodingError
from ..network import (
    DECISION, ENVIRONMENT, PLAUSIBILITY, UTILITY, Component, ComponentDag, PfuNetwork,
    ScopedFunction, Variable, assignments,
)
from ..query import validate_query

MARGINAL, EVIDENCE, MPE, MAP = "marginal", "evidence", "mpe", "map"


@dataclass
class BnInstance:
    variables: dict        # name -> domain labels, in declaration order
    parents: dict          # name -> tuple of parent names
    cpts: dict             # name -> row-major table over parents + (name,)
    task: str = EVIDENCE
    targets: tuple = ()    # marginal: variables left free
    evidence: dict = field(default_factory=dict)
    explanation: tuple = ()  # map: variables maximized

    def order(self) -> list:
        ts = graphlib.TopologicalSorter({x: self.parents.get(x, ()) for x in self.variables})
        try:
            return list(ts.static_order())
        except graphlib.CycleError as e:
            raise EncodingError("the network graph has a cycle") from e

    def cpt_scope(self, x) -> tuple:
        return tuple(self.parents.get(x, ())) + (x,)

    def check(self):
        for x in self.variables:
            for p in self.parents.get(x, ()):
                if p not in self.variables:
                    raise EncodingError(f"unknown parent {p!r} of {x!r}")
            if x not in self.cpts:
                raise EncodingError(f"no table for {x!r}")
            k = len(self.variables[x])
            table = [Fraction(v) for v in self.cpts[x]]
            rows = 1
            for p in self.parents.get(x, ()):
                rows *= len(self.variables[p])
            if len(table) != rows * k:
                raise EncodingError(f"table of {x!r} has {len(table)} entries, expected {rows * k}")
            for r in range(rows):
                row = table[r * k:(r + 1) * k]
                if any(v < 0 for v in row) or sum(row) != 1:
                    raise EncodingError(f"row {r} of the table of {x!r} does not sum to 1")
        self.order()
        for x, val in self.evidence.items():
            if x not in self.variables or val not in self.variables[x]:
                raise EncodingError(f"evidence {x}={val!r} is not in the domain")
        for x in tuple(self.targets) + tuple(self.explanation):
            if x not in self.variables:
                raise EncodingError(f"unknown variable {x!r}")
        if set(self.explanation) & set(self.evidence):
            raise EncodingError("explanation and evidence sets overlap")
        if set(self.targets) & set(self.evidence):
            raise EncodingError("target and evidence sets overlap")


def decided_set(b: BnInstance) -> list:
    """Variables that become decisions: targets, explanation, or all non-evidence for MPE."""
    if b.task == MARGINAL:
        return list(b.targets)
    if b.task == MPE:
        return [x for x in b.variables if x not in b.evidence]
    if b.task == MAP:
        return list(b.explanation)
    if b.task == EVIDENCE:
        return []
    raise EncodingError(f"unknown task {b.task!r}")


def encode_bn(b: BnInstance):
    """Encode ``b`` on prob-sat, one component per variable.

    Variables in D (decided) or O (observed) have their incoming arcs
    removed and their table moved to the utilities. Decided ones become
    decision variables. Observed ones stay environment variables carrying a
    constant plausibility ``1/|dom|`` compensated by the constant utility
    ``|dom|``, together with a 0/1 indicator of the observed value.
    Query: D free for marginals, otherwise (max, D) then a sum over the rest.
    """
    b.check()
    D = decided_set(b)
    O = [x for x in b.variables if x in b.evidence]
    split = set(D) | set(O)
    variables = tuple(Variable(x, DECISION if x in D else ENVIRONMENT, tuple(b.variables[x]))
                      for x in b.variables)
    vmap = {v.name: v for v in variables}

    comps, P, U = [], [], []
    for x in b.variables:
        scope = tuple(vmap[y] for y in b.cpt_scope(x))
        cpt = _declared(ScopedFunction(scope, [Fraction(v) for v in b.cpts[x]]), variables)
        if x not in split:
            comps.append(Component(x, ENVIRONMENT, (x,), tuple(b.parents.get(x, ()))))
            P.append(ScopedFunction(cpt.scope, cpt.table, PLAUSIBILITY, x, f"P_{x}"))
            continue
        kind = DECISION if x in D else ENVIRONMENT
        comps.append(Component(x, kind, (x,)))
        U.append(ScopedFunction(cpt.scope, cpt.table, UTILITY, None, f"P_{x}"))
        if x in O:
            k = len(b.variables[x])
            P.append(ScopedFunction((), (Fraction(1, k),), PLAUSIBILITY, x, f"p0_{x}"))
            U.append(ScopedFunction((), (Fraction(k),), UTILITY, None, f"p1_{x}"))
            U.append(ScopedFunction((vmap[x],), [Fraction(int(lab == b.evidence[x]))
                                                 for lab in vmap[x].domain],
                                    UTILITY, None, f"delta_{x}"))
    n = PfuNetwork(builtin_structure("prob-sat"), variables, ComponentDag(tuple(comps)),
                   tuple(P), (), tuple(U))
    rest = tuple(x for x in b.variables if x not in D)
    sov = []
    if b.task in (MPE, MAP) and D:
        sov.append(("max", tuple(D)))
    if rest:
        sov.append(("elim", rest))
    return validate_query(n, sov)


def _declared(f: ScopedFunction, variables) -> ScopedFunction:
    """Reorder ``f`` so that its scope follows declaration order."""
    order = {v.name: k for k, v in enumerate(variables)}
    scope = tuple(sorted(f.scope, key=lambda v: order[v.name]))
    if scope == f.scope:
        return f
    table = [f(dict(zip([v.name for v in scope], a))) for a in assignments(scope)]
    return ScopedFunction(scope, table, f.codomain)
