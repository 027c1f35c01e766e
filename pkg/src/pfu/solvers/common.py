"""Pieces shared by all solvers: results, stats, index arithmetic, policy recording."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence

from ..algebra import UNFEASIBLE
from ..network import PfuNetwork, ScopedFunction, strides
from ..query import AnswerTable, DecisionRule, Policy, Query


@dataclass
class SolveStats:
    algorithm: str = ""
    nodes: int = 0
    eliminations: int = 0
    peak_table: int = 0
    elimination_order: list = field(default_factory=list)

    def as_dict(self) -> dict:
        return {"algorithm": self.algorithm, "nodes": self.nodes,
                "eliminations": self.eliminations, "peak_table": self.peak_table,
                "elimination_order": list(self.elimination_order)}


@dataclass
class SolveResult:
    answer: AnswerTable
    policy: Policy
    stats: SolveStats


class Indexer:
    """Row-major lookups of scoped functions under a global index assignment.

    ``assign`` is a list with one domain index per network variable, in
    declaration order.
    """

    def __init__(self, network: PfuNetwork):
        self.names = [v.name for v in network.variables]
        self.pos = {x: k for k, x in enumerate(self.names)}
        self.variables = network.variables

    def spec(self, f: ScopedFunction):
        return (tuple(self.pos[v.name] for v in f.scope), strides(f.scope), f.table)

    def positions(self, names: Sequence[str]) -> tuple:
        return tuple(self.pos[x] for x in names)

    def labels(self, positions, assign) -> tuple:
        vs = self.variables
        return tuple(vs[p].domain[assign[p]] for p in positions)


def lookup(spec, assign):
    pos, st, table = spec
    i = 0
    for p, s in zip(pos, st):
        i += assign[p] * s
    return table[i]


def ranges(variables) -> list:
    return [range(len(v.domain)) for v in variables]


def combos(variables):
    """Index tuples of ``variables`` in lexicographic (row-major) order."""
    return itertools.product(*ranges(variables))


def new_policy(q: Query) -> Policy:
    rules = {}
    for i, p in enumerate(q.sov):
        if p.op != "elim":
            rules[i] = DecisionRule(i, p.op, q.left_set(i), p.vars, {})
    return Policy(rules)


def answer_from(q: Query, entries) -> AnswerTable:
    return AnswerTable(q.free_variables, entries)


def choose(structure, op, values):
    """Best non-⋄ entry of ``(choice, value)`` pairs; ties keep the earliest."""
    best, arg = UNFEASIBLE, UNFEASIBLE
    for choice, v in values:
        if v is UNFEASIBLE:
            continue
        if best is UNFEASIBLE or structure.better(op, v, best):
            best, arg = v, choice
    return best, arg
