"""SAT, QBF and stochastic SAT as PFU queries."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from ..algebra import builtin_structure
from ..errors import EncodingError
from ..network import (
    DECISION, ENVIRONMENT, PLAUSIBILITY, UTILITY, Component, ComponentDag, PfuNetwork,
    ScopedFunction, Variable, assignments,
)
from ..query import bounded_query, validate_query

EXISTS, FORALL, RANDOM = "exists", "forall", "random"
_QUANT_OP = {EXISTS: "max", FORALL: "min", RANDOM: "elim"}
BOOL_DOMAIN = ("f", "t")


@dataclass
class CnfInstance:
    n_vars: int
    clauses: list
    prefix: Optional[list] = None          # ordered (quantifier, variable) pairs
    threshold: Optional[Fraction] = None
    blocks: Optional[list] = field(default=None, repr=False)  # optional explicit grouping

    def check(self):
        for c in self.clauses:
            for lit in c:
                if lit == 0 or abs(lit) > self.n_vars:
                    raise EncodingError(f"literal {lit} out of range 1..{self.n_vars}")
        if self.prefix is not None:
            seen = set()
            for qt, x in self.prefix:
                if qt not in _QUANT_OP:
                    raise EncodingError(f"unknown quantifier {qt!r}")
                if not 1 <= x <= self.n_vars or x in seen:
                    raise EncodingError(f"bad or repeated prefix variable {x}")
                seen.add(x)
        if self.threshold is not None and not 0 <= self.threshold <= 1:
            raise EncodingError("threshold must lie in [0, 1]")


def var_name(i: int) -> str:
    return f"x{i}"


def _clause_table(scope, clause, true, false):
    by_name = {}
    for lit in clause:
        by_name.setdefault(var_name(abs(lit)), set()).add(lit > 0)
    table = []
    for a in assignments(scope):
        sat = any((lab == "t") in by_name[v.name] for v, lab in zip(scope, a))
        table.append(true if sat else false)
    return table


def prefix_blocks(prefix) -> list:
    """Group consecutive variables with the same quantifier."""
    blocks = []
    for qt, x in prefix:
        if blocks and blocks[-1][0] == qt:
            blocks[-1][1].append(x)
        else:
            blocks.append((qt, [x]))
    return blocks


def encode_cnf(c: CnfInstance):
    """Encode a CNF, QBF or SSAT instance.

    Without a prefix: satisfiability on bool-opt-conj, one decision component,
    query (max, V). With a prefix: prob-sat, one decision component per ∃/∀
    variable, one environment component holding all randomized variables
    with the constant factor 0.5^|V_E|, clauses as 0/1 utilities, and the
    prefix turned into max/min/elim pairs. A threshold yields a BoundedQuery.
    """
    c.check()
    prefix = c.prefix
    if prefix is None and c.threshold is not None:
        prefix = [(EXISTS, i) for i in range(1, c.n_vars + 1)]
    if prefix is None:
        variables = tuple(Variable(var_name(i), DECISION, BOOL_DOMAIN) for i in range(1, c.n_vars + 1))
        dag = ComponentDag((Component("V", DECISION, tuple(v.name for v in variables)),))
        U = [_clause_function(variables, cl, True, False, k) for k, cl in enumerate(c.clauses)]
        n = PfuNetwork(builtin_structure("bool-opt-conj"), variables, dag, (), (), tuple(U))
        return validate_query(n, [("max", tuple(v.name for v in variables))])

    # variables missing from the prefix are existential and outermost
    listed = {x for _, x in prefix}
    prefix = [(EXISTS, i) for i in range(1, c.n_vars + 1) if i not in listed] + list(prefix)
    kind_of = {x: (ENVIRONMENT if qt == RANDOM else DECISION) for qt, x in prefix}
    variables = tuple(Variable(var_name(i), kind_of[i], BOOL_DOMAIN) for i in range(1, c.n_vars + 1))
    comps = [Component(var_name(x), DECISION, (var_name(x),)) for qt, x in prefix if qt != RANDOM]
    randoms = [var_name(x) for qt, x in prefix if qt == RANDOM]
    P = []
    if randoms:
        comps.append(Component("R", ENVIRONMENT, tuple(randoms)))
        P.append(ScopedFunction((), (Fraction(1, 2 ** len(randoms)),), PLAUSIBILITY, "R", "phi0"))
    U = [_clause_function(variables, cl, Fraction(1), Fraction(0), k) for k, cl in enumerate(c.clauses)]
    n = PfuNetwork(builtin_structure("prob-sat"), variables, ComponentDag(tuple(comps)),
                   tuple(P), (), tuple(U))
    blocks = c.blocks if c.blocks is not None else prefix_blocks(prefix)
    sov = [(_QUANT_OP[qt], tuple(var_name(x) for x in xs)) for qt, xs in blocks]
    q = validate_query(n, sov)
    if c.threshold is not None:
        return bounded_query(q, Fraction(c.threshold))
    return q


def _clause_function(variables, clause, true, false, k):
    names = {var_name(abs(lit)) for lit in clause}
    scope = tuple(v for v in variables if v.name in names)
    return ScopedFunction(scope, _clause_table(scope, clause, true, false), UTILITY, None, f"C{k + 1}")
