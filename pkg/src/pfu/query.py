"""Queries over PFU networks, answers, policies and thresholds."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional

from .algebra import ELIM, MAX, MIN, UNFEASIBLE, ExpectedUtilityStructure
from .errors import QueryValidationError
from .network import DECISION, ENVIRONMENT, PfuNetwork, Variable, assignments

OPS = (MIN, MAX, ELIM)
_OP_ALIASES = {"min": MIN, "max": MAX, "elim": ELIM, "+": ELIM, "sum": ELIM, "plus": ELIM}


@dataclass(frozen=True)
class Pair:
    op: str
    vars: tuple

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))


@dataclass(frozen=True)
class Query:
    network: PfuNetwork
    sov: tuple
    free_vars: tuple

    def left_set(self, i: int) -> tuple:
        """Names of V_fr followed by the sets of the pairs before ``i``."""
        if not 0 <= i < len(self.sov):
            raise IndexError(f"pair index {i} out of range")
        out = list(self.free_vars)
        for p in self.sov[:i]:
            out.extend(p.vars)
        return tuple(out)

    def right_set(self, i: int) -> tuple:
        if not 0 <= i < len(self.sov):
            raise IndexError(f"pair index {i} out of range")
        out = []
        for p in self.sov[i + 1:]:
            out.extend(p.vars)
        return tuple(out)

    def variables_of(self, names: Iterable[str]) -> tuple:
        vm = self.network.var_map()
        return tuple(vm[x] for x in names)

    @property
    def free_variables(self) -> tuple:
        return self.variables_of(self.free_vars)


@dataclass(frozen=True)
class BoundedQuery:
    query: Query
    threshold: object


def _normalize_pair(item) -> Pair:
    if isinstance(item, Pair):
        op, vs = item.op, item.vars
    elif isinstance(item, dict):
        op, vs = item.get("op"), item.get("vars", ())
    else:
        op, vs = item
    if isinstance(vs, str):
        vs = (vs,)
    key = op.lower() if isinstance(op, str) else op
    if key not in _OP_ALIASES:
        raise QueryValidationError([("operator", [str(op)])])
    return Pair(_OP_ALIASES[key], tuple(vs))


def validate_query(n: PfuNetwork, sov) -> Query:
    """Check the four query conditions and return the query with its free variables."""
    pairs = [_normalize_pair(p) for p in sov]
    vmap = n.var_map()
    violations = []

    unknown = [x for p in pairs for x in p.vars if x not in vmap]
    if unknown:
        raise QueryValidationError([("unknown-variable", unknown)])

    counts = {}
    for p in pairs:
        for x in p.vars:
            counts[x] = counts.get(x, 0) + 1
    dup = [x for x in vmap if counts.get(x, 0) > 1]
    if dup:
        violations.append(("condition-1", dup))

    # keep declaration order inside each set
    order = {v.name: k for k, v in enumerate(n.variables)}
    pairs = [Pair(p.op, sorted(set(p.vars), key=order.__getitem__)) for p in pairs]
    where = {x: i for i, p in enumerate(pairs) for x in p.vars}

    wrong = [x for p in pairs for x in p.vars
             if (p.op == ELIM) != (vmap[x].kind == ENVIRONMENT)]
    if wrong:
        violations.append(("condition-2", wrong))

    free = [v.name for v in n.variables if v.name not in where]
    bad_free = [x for x in free if vmap[x].kind != DECISION]
    if bad_free:
        violations.append(("condition-3", bad_free))

    comp_of = n.dag.component_of()
    if all(x in comp_of for x in vmap) and n.dag.is_acyclic():
        desc = n.dag.descendants()
        pos = {x: where.get(x, -1) for x in vmap}
        bad4 = []
        for x in vmap:
            for y in vmap:
                if vmap[x].kind == vmap[y].kind:
                    continue
                if comp_of[y] not in desc[comp_of[x]]:
                    continue
                if y not in where and vmap[y].kind != DECISION:
                    continue  # already reported as a free environment variable
                if x in where and not pos[x] < pos[y]:
                    bad4.append(f"{x}->{y}")
        if bad4:
            violations.append(("condition-4", bad4))

    if any(p.op in (MIN, MAX) for p in pairs) and not n.structure.queryable:
        violations.append(("total-order", [n.structure.name]))

    if violations:
        raise QueryValidationError(violations)
    return Query(n, tuple(pairs), tuple(free))


def bounded_query(q: Query, threshold) -> BoundedQuery:
    if not q.network.structure.util.contains(threshold):
        raise QueryValidationError([("threshold", [repr(threshold)])])
    return BoundedQuery(q, threshold)


# ------------------------------------------------------------------ answers


@dataclass(frozen=True)
class AnswerTable:
    variables: tuple
    entries: tuple

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(self, "entries", tuple(self.entries))

    @property
    def names(self) -> tuple:
        return tuple(v.name for v in self.variables)

    def items(self):
        return zip(assignments(self.variables), self.entries)

    def value(self, assignment=None):
        """Entry at a label assignment of the free variables (or the only entry)."""
        if not self.variables:
            return self.entries[0]
        i, st = 0, 1
        for v in reversed(self.variables):
            i += v.index(assignment[v.name]) * st
            st *= len(v.domain)
        return self.entries[i]

    def __eq__(self, other):
        if not isinstance(other, AnswerTable):
            return NotImplemented
        return self.names == other.names and self.entries == other.entries

    def __hash__(self):
        return hash((self.names, self.entries))


@dataclass
class DecisionRule:
    """Chosen assignment of one min/max set for each context of its left set."""

    pair_index: int
    op: str
    context: tuple
    choice: tuple
    entries: dict = field(default_factory=dict)

    def __call__(self, context_labels):
        return self.entries[tuple(context_labels)]


@dataclass
class Policy:
    rules: dict = field(default_factory=dict)

    def rule(self, i: int) -> DecisionRule:
        return self.rules[i]

    def __eq__(self, other):
        if not isinstance(other, Policy):
            return NotImplemented
        if set(self.rules) != set(other.rules):
            return False
        return all(self.rules[i].entries == other.rules[i].entries for i in self.rules)


def policy_differences(a: Policy, b: Policy) -> list:
    """Contexts recorded in ``a`` where ``b`` records another choice or nothing."""
    out = []
    for i, r in a.rules.items():
        other = b.rules.get(i)
        for ctx, choice in r.entries.items():
            theirs = other.entries.get(ctx, None) if other else None
            if theirs != choice:
                out.append((i, ctx, choice, theirs))
    return out


def apply_threshold(a: AnswerTable, theta, s: ExpectedUtilityStructure) -> AnswerTable:
    """Pointwise ``entry >= theta`` under the utility order; ⋄ maps to false."""
    leq = s.util.order_u
    return AnswerTable(a.variables,
                       [False if e is UNFEASIBLE else bool(leq(theta, e)) for e in a.entries])


def free_assignment_count(variables: Iterable[Variable]) -> int:
    n = 1
    for v in variables:
        n *= len(v.domain)
    return n
