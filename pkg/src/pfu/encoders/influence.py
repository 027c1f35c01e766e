"""Influence diagrams with additive utilities."""

from __future__ import annotations

import graphlib
from dataclasses import dataclass
from fractions import Fraction

from ..algebra import builtin_structure, parse_value
from ..errors import EncodingError
from ..network import (
    DECISION, ENVIRONMENT, PLAUSIBILITY, UTILITY, Component, ComponentDag, PfuNetwork,
    ScopedFunction, Variable,
)
from ..query import validate_query
from .bn import _declared


@dataclass
class ChanceNode:
    name: str
    domain: tuple
    parents: tuple
    cpt: list      # row-major over parents + (name,)


@dataclass
class DecisionNode:
    name: str
    domain: tuple
    parents: tuple = ()  # variables observed before the decision


@dataclass
class UtilityNode:
    name: str
    parents: tuple
    table: list     # row-major over parents


@dataclass
class IdInstance:
    chance: list
    decisions: list
    utilities: list

    def nodes(self) -> dict:
        return {x.name: x for x in list(self.chance) + list(self.decisions)}

    def graph(self) -> dict:
        return {x.name: tuple(x.parents) for x in list(self.chance) + list(self.decisions)}

    def decision_order(self) -> list:
        """Decisions in the total order the graph implies."""
        g = self.graph()
        try:
            order = list(graphlib.TopologicalSorter(g).static_order())
        except graphlib.CycleError as e:
            raise EncodingError("the diagram has a cycle") from e
        ancestors = {}
        for x in order:
            ancestors[x] = set(g[x]).union(*(ancestors[p] for p in g[x]))
        ds = [x for x in order if x in {d.name for d in self.decisions}]
        for a, b in zip(ds, ds[1:]):
            if a not in ancestors[b]:
                raise EncodingError(f"decisions {a!r} and {b!r} are not ordered by the graph")
        return ds

    def check(self):
        nodes = self.nodes()
        if len(nodes) != len(self.chance) + len(self.decisions):
            raise EncodingError("repeated node name")
        for x in list(self.chance) + list(self.decisions) + list(self.utilities):
            for p in x.parents:
                if p not in nodes:
                    raise EncodingError(f"unknown parent {p!r} of {x.name!r}")
        for c in self.chance:
            k = len(c.domain)
            rows = 1
            for p in c.parents:
                rows *= len(nodes[p].domain)
            table = [Fraction(v) for v in c.cpt]
            if len(table) != rows * k:
                raise EncodingError(f"table of {c.name!r} has {len(table)} entries, expected {rows * k}")
            for r in range(rows):
                if sum(table[r * k:(r + 1) * k]) != 1 or any(v < 0 for v in table[r * k:(r + 1) * k]):
                    raise EncodingError(f"row {r} of the table of {c.name!r} does not sum to 1")
        for u in self.utilities:
            size = 1
            for p in u.parents:
                size *= len(nodes[p].domain)
            if len(u.table) != size:
                raise EncodingError(f"utility {u.name!r} has {len(u.table)} entries, expected {size}")
        self.decision_order()


def encode_id(d: IdInstance):
    """Encode ``d`` on prob-additive.

    Every node gets its own component; arcs into decisions are dropped, the
    chance tables become plausibilities and utility nodes become utility
    functions on their parents. The elimination sequence walks the
    decisions in order: a sum over the not yet placed parents of the next
    decision, then a max over the decision, and finally a sum over the
    remaining chance variables.
    """
    d.check()
    order = d.decision_order()
    decisions = {x.name for x in d.decisions}
    variables = tuple(Variable(x.name, DECISION if x.name in decisions else ENVIRONMENT,
                               tuple(x.domain))
                      for x in list(d.chance) + list(d.decisions))
    vmap = {v.name: v for v in variables}
    comps = [Component(c.name, ENVIRONMENT, (c.name,), tuple(c.parents)) for c in d.chance]
    comps += [Component(x.name, DECISION, (x.name,)) for x in d.decisions]
    P = tuple(
        _as(_declared(ScopedFunction(tuple(vmap[p] for p in c.parents) + (vmap[c.name],),
                                     [Fraction(v) for v in c.cpt]), variables),
            PLAUSIBILITY, c.name, f"P_{c.name}")
        for c in d.chance)
    U = tuple(
        _as(_declared(ScopedFunction(tuple(vmap[p] for p in u.parents),
                                     [parse_value(v) for v in u.table]), variables),
            UTILITY, None, u.name)
        for u in d.utilities)
    n = PfuNetwork(builtin_structure("prob-additive"), variables, ComponentDag(tuple(comps)),
                   P, (), U)

    nodes = d.nodes()
    placed, sov = set(), []
    for x in order:
        observed = tuple(p for p in nodes[x].parents if p not in placed and p not in decisions)
        if observed:
            sov.append(("elim", observed))
            placed.update(observed)
        sov.append(("max", (x,)))
        placed.add(x)
    rest = tuple(c.name for c in d.chance if c.name not in placed)
    if rest:
        sov.append(("elim", rest))
    return validate_query(n, sov)


def _as(f: ScopedFunction, codomain, owner, name) -> ScopedFunction:
    return ScopedFunction(f.scope, f.table, codomain, owner, name)
