"""Constraint networks and their variants: hard, valued, quantified, stochastic."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from ..algebra import builtin_structure, parse_value, valued_structure
from ..errors import EncodingError
from ..network import (
    DECISION, ENVIRONMENT, PLAUSIBILITY, UTILITY, Component, ComponentDag, PfuNetwork,
    ScopedFunction, Variable, assignments,
)
from ..query import bounded_query, validate_query

HARD, VALUED, QUANTIFIED, STOCHASTIC = "hard", "valued", "quantified", "stochastic"
TASKS = ("consistency", "solve", "count", "optimize", "quantified", "stochastic-policy")
_COMPATIBLE = {
    "consistency": (HARD,), "solve": (HARD,), "count": (HARD,),
    "optimize": (VALUED,), "quantified": (QUANTIFIED,), "stochastic-policy": (STOCHASTIC,),
}


@dataclass
class Constraint:
    scope: tuple
    table: list   # row-major over scope; booleans for hard constraints, valuations otherwise
    name: Optional[str] = None


@dataclass
class CspInstance:
    variables: dict            # name -> domain labels, in declaration order
    constraints: list
    flavor: str = HARD
    valuation: object = None   # "weighted", "fuzzy" or a finite valuation table
    prefix: Optional[list] = None          # quantified: [(exists|forall, name)]
    probabilities: dict = field(default_factory=dict)  # stochastic: name -> unary distribution
    stages: Optional[list] = None          # stochastic: ordered lists of variable names
    threshold: Optional[Fraction] = None

    def check(self):
        if self.flavor not in (HARD, VALUED, QUANTIFIED, STOCHASTIC):
            raise EncodingError(f"unknown flavor {self.flavor!r}")
        for c in self.constraints:
            for x in c.scope:
                if x not in self.variables:
                    raise EncodingError(f"constraint mentions unknown variable {x!r}")
            size = 1
            for x in c.scope:
                size *= len(self.variables[x])
            if len(c.table) != size:
                raise EncodingError(f"constraint on {c.scope} has {len(c.table)} entries, expected {size}")
        if self.flavor == QUANTIFIED:
            names = [x for _, x in self.prefix or ()]
            if sorted(names) != sorted(self.variables):
                raise EncodingError("prefix must quantify every variable exactly once")
        if self.flavor == STOCHASTIC:
            for x, dist in self.probabilities.items():
                if x not in self.variables or len(dist) != len(self.variables[x]):
                    raise EncodingError(f"bad distribution for {x!r}")
                if sum(Fraction(p) for p in dist) != 1 or any(Fraction(p) < 0 for p in dist):
                    raise EncodingError(f"distribution of {x!r} does not sum to 1")
            staged = [x for st in self.stages or () for x in st]
            if sorted(staged) != sorted(self.variables):
                raise EncodingError("stages must cover every variable exactly once")
            for st in self.stages:
                if len({x in self.probabilities for x in st}) > 1:
                    raise EncodingError("a stage mixes decision and stochastic variables")


def domain_size(c: CspInstance) -> int:
    size = 1
    for dom in c.variables.values():
        size *= len(dom)
    return size


def encode_csp(c: CspInstance, task: str):
    """Encode ``c`` for one of the tasks in ``TASKS``.

    consistency and solve: bool-opt-conj with (max, V); the policy of the
    single pair holds a solution. count: prob-sat, every variable in one
    environment component carrying the constant 1/|dom(V)|, so the answer
    times |dom(V)| is the number of solutions. optimize: a valued structure
    with (min, V). quantified: min/max per prefix block. stochastic-policy:
    prob-sat with one component per variable, unary plausibilities on the
    stochastic ones and a max/sum pair per stage.
    """
    if task not in _COMPATIBLE:
        raise EncodingError(f"unknown task {task!r}")
    if c.flavor not in _COMPATIBLE[task]:
        raise EncodingError(f"task {task!r} does not apply to a {c.flavor} instance")
    c.check()
    names = list(c.variables)

    def variables(kind_of):
        return tuple(Variable(x, kind_of(x), tuple(c.variables[x])) for x in names)

    def utilities(vs, convert):
        vmap = {v.name: v for v in vs}
        out = []
        for k, con in enumerate(c.constraints):
            scope = tuple(vmap[x] for x in con.scope)
            out.append(ScopedFunction(scope, [convert(t) for t in con.table], UTILITY, None,
                                      con.name or f"C{k + 1}"))
        return out

    def hard(t):
        return bool(t)

    def zero_one(t):
        return Fraction(1) if t else Fraction(0)

    if task in ("consistency", "solve", "quantified"):
        vs = variables(lambda x: DECISION)
        if task == "quantified":
            comps = tuple(Component(x, DECISION, (x,)) for x in names)
        else:
            comps = (Component("V", DECISION, tuple(names)),)
        n = PfuNetwork(builtin_structure("bool-opt-conj"), vs, ComponentDag(comps), (), (),
                       tuple(utilities(vs, hard)))
        if task != "quantified":
            return validate_query(n, [("max", tuple(names))])
        sov = []
        for qt, x in c.prefix:
            op = {"exists": "max", "forall": "min"}.get(qt)
            if op is None:
                raise EncodingError(f"unknown quantifier {qt!r}")
            if sov and sov[-1][0] == op:
                sov[-1][1].append(x)
            else:
                sov.append((op, [x]))
        return validate_query(n, sov)

    if task == "count":
        vs = variables(lambda x: ENVIRONMENT)
        phi0 = ScopedFunction((), (Fraction(1, domain_size(c)),), PLAUSIBILITY, "V", "phi0")
        n = PfuNetwork(builtin_structure("prob-sat"), vs,
                       ComponentDag((Component("V", ENVIRONMENT, tuple(names)),)),
                       (phi0,), (), tuple(utilities(vs, zero_one)))
        return validate_query(n, [("elim", tuple(names))])

    if task == "optimize":
        s = valued_structure(c.valuation if c.valuation is not None else "weighted")
        vs = variables(lambda x: DECISION)
        n = PfuNetwork(s, vs, ComponentDag((Component("V", DECISION, tuple(names)),)), (), (),
                       tuple(utilities(vs, parse_value)))
        return validate_query(n, [("min", tuple(names))])

    # stochastic-policy
    stochastic = set(c.probabilities)
    vs = variables(lambda x: ENVIRONMENT if x in stochastic else DECISION)
    comps = tuple(Component(x, ENVIRONMENT if x in stochastic else DECISION, (x,)) for x in names)
    vmap = {v.name: v for v in vs}
    P = tuple(ScopedFunction((vmap[x],), [Fraction(p) for p in c.probabilities[x]],
                             PLAUSIBILITY, x, f"P_{x}") for x in names if x in stochastic)
    n = PfuNetwork(builtin_structure("prob-sat"), vs, ComponentDag(comps), P, (),
                   tuple(utilities(vs, zero_one)))
    sov = [("elim" if st[0] in stochastic else "max", tuple(st)) for st in c.stages]
    q = validate_query(n, sov)
    if c.threshold is not None:
        return bounded_query(q, Fraction(c.threshold))
    return q


def model_count(c: CspInstance, answer_value) -> int:
    """Number of solutions from the answer of the counting query."""
    count = Fraction(answer_value) * domain_size(c)
    if count.denominator != 1:
        raise EncodingError(f"non-integral count {count}")
    return int(count)


def table_for(c: CspInstance, scope, predicate) -> list:
    """Row-major table over ``scope`` (variable names) built from ``predicate(*labels)``."""
    vs = [Variable(x, DECISION, tuple(c.variables[x])) for x in scope]
    return [predicate(*a) for a in assignments(vs)]
