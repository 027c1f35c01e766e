"""Variables, scoped functions and PFU networks."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from graphlib import CycleError, TopologicalSorter
from typing import Callable, Iterable, Mapping, Optional, Sequence

import numpy as np

from .algebra import FEASIBILITY, UNFEASIBLE, ExpectedUtilityStructure, comb_ext, elim_ext
from .errors import CapExceeded, NetworkError

DECISION = "decision"
ENVIRONMENT = "environment"
KINDS = (DECISION, ENVIRONMENT)

PLAUSIBILITY = "plausibility"
FEASIBILITY_CODOMAIN = "feasibility"
UTILITY = "utility"

DEFAULT_CAP = 2 ** 20


@dataclass(frozen=True)
class Variable:
    name: str
    kind: str
    domain: tuple

    def __post_init__(self):
        object.__setattr__(self, "domain", tuple(self.domain))

    @property
    def size(self) -> int:
        return len(self.domain)

    def index(self, label) -> int:
        try:
            return self.domain.index(label)
        except ValueError:
            raise NetworkError(f"{label!r} is not in the domain of {self.name}") from None


def table_size(scope: Sequence[Variable]) -> int:
    n = 1
    for v in scope:
        n *= len(v.domain)
    return n


def assignments(scope: Sequence[Variable]):
    """Label tuples of ``scope`` in row-major order (last variable fastest)."""
    return itertools.product(*(v.domain for v in scope))


def index_tuples(scope: Sequence[Variable]):
    return itertools.product(*(range(len(v.domain)) for v in scope))


def strides(scope: Sequence[Variable]) -> tuple:
    out, s = [], 1
    for v in reversed(scope):
        out.append(s)
        s *= len(v.domain)
    return tuple(reversed(out))


@dataclass(frozen=True)
class ScopedFunction:
    """A dense table over the assignments of ``scope`` in row-major order."""

    scope: tuple
    table: tuple
    codomain: str = UTILITY
    owner: Optional[str] = None
    name: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "scope", tuple(self.scope))
        object.__setattr__(self, "table", tuple(self.table))
        names = [v.name for v in self.scope]
        if len(set(names)) != len(names):
            raise NetworkError(f"repeated variable in scope {names}")
        if len(self.table) != table_size(self.scope):
            raise NetworkError(
                f"table of {self.name or 'function'} has {len(self.table)} entries, "
                f"expected {table_size(self.scope)}")

    @property
    def names(self) -> tuple:
        return tuple(v.name for v in self.scope)

    def index_of(self, assignment: Mapping[str, object]) -> int:
        """Row-major index of a label assignment (extra bindings are ignored)."""
        i = 0
        for v, st in zip(self.scope, strides(self.scope)):
            i += v.index(assignment[v.name]) * st
        return i

    def assignment_of(self, i: int) -> dict:
        out = {}
        for v, st in zip(self.scope, strides(self.scope)):
            out[v.name] = v.domain[(i // st) % len(v.domain)]
        return out

    def __call__(self, assignment: Mapping[str, object]):
        return self.table[self.index_of(assignment)]

    def items(self):
        return zip(assignments(self.scope), self.table)


def constant(value, codomain: str = UTILITY) -> ScopedFunction:
    return ScopedFunction((), (value,), codomain)


def index_map(out_scope: Sequence[Variable], sub_scope: Sequence[Variable]) -> np.ndarray:
    """For each row-major cell of ``out_scope``, the matching cell of ``sub_scope``."""
    n = table_size(out_scope)
    if not out_scope:
        return np.zeros(1, dtype=np.int64)
    pos = {v.name: k for k, v in enumerate(out_scope)}
    shape = tuple(len(v.domain) for v in out_scope)
    grids = np.indices(shape).reshape(len(shape), n)
    idx = np.zeros(n, dtype=np.int64)
    stride = 1
    for v in reversed(sub_scope):
        idx += grids[pos[v.name]] * stride
        stride *= len(v.domain)
    return idx


def broadcast(f: ScopedFunction, scope: Sequence[Variable]) -> list:
    """Values of ``f`` listed over the cells of a larger ``scope``."""
    t = f.table
    return [t[i] for i in index_map(scope, f.scope).tolist()]


def union_scope(*scopes: Sequence[Variable]) -> tuple:
    out, seen = [], set()
    for sc in scopes:
        for v in sc:
            if v.name not in seen:
                seen.add(v.name)
                out.append(v)
    return tuple(out)


def combine(f1: ScopedFunction, f2: ScopedFunction, op: Callable,
            codomain: Optional[str] = None) -> ScopedFunction:
    """Pointwise ``op`` over the union scope; ⋄ operands are absorbing."""
    scope = union_scope(f1.scope, f2.scope)
    m1 = index_map(scope, f1.scope).tolist()
    m2 = index_map(scope, f2.scope).tolist()
    t1, t2 = f1.table, f2.table
    o = comb_ext(op)
    return ScopedFunction(scope, [o(t1[i], t2[j]) for i, j in zip(m1, m2)],
                          codomain or f1.codomain)


def combine_all(fs: Iterable[ScopedFunction], op: Callable, identity,
                codomain: str = UTILITY, scope: Optional[Sequence[Variable]] = None,
                cap: Optional[int] = None) -> ScopedFunction:
    """Combine many functions at once over their union scope (or over ``scope``)."""
    fs = list(fs)
    if scope is None:
        scope = union_scope(*(f.scope for f in fs))
    scope = tuple(scope)
    n = table_size(scope)
    if cap is not None and n > cap:
        raise CapExceeded(f"table of {n} cells exceeds cap {cap}")
    out = [identity] * n
    o = comb_ext(op)
    for f in fs:
        t = f.table
        for k, i in enumerate(index_map(scope, f.scope).tolist()):
            out[k] = o(out[k], t[i])
    return ScopedFunction(scope, out, codomain)


def eliminate(f: ScopedFunction, S: Iterable[Variable], op: Callable) -> ScopedFunction:
    """Fold ``op`` over the variables of ``S``; ⋄ entries are skipped.

    A variable of ``S`` absent from the scope contributes ``|dom|`` copies of
    each value to the fold.
    """
    S = list(S)
    names = {v.name for v in S}
    keep = [v for v in f.scope if v.name not in names]
    gone = [v for v in f.scope if v.name in names]
    extra = 1
    for v in S:
        if v.name not in {g.name for g in f.scope}:
            extra *= len(v.domain)
    o = elim_ext(op)
    if not gone:
        if extra == 1:
            return ScopedFunction(tuple(keep), f.table, f.codomain)
        rows = [[x] for x in f.table]
    else:
        shape = tuple(len(v.domain) for v in f.scope)
        axes = [k for k, v in enumerate(f.scope) if v.name not in names]
        axes += [k for k, v in enumerate(f.scope) if v.name in names]
        perm = np.arange(len(f.table)).reshape(shape).transpose(axes)
        perm = perm.reshape(table_size(keep), table_size(gone)).tolist()
        t = f.table
        rows = [[t[i] for i in row] for row in perm]
    out = []
    for row in rows:
        acc = UNFEASIBLE
        for _ in range(extra):
            for x in row:
                acc = o(acc, x)
        out.append(acc)
    return ScopedFunction(tuple(keep), out, f.codomain)


# ------------------------------------------------------------------ the DAG


@dataclass(frozen=True)
class Component:
    id: str
    kind: str
    vars: tuple
    parents: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "vars", tuple(self.vars))
        object.__setattr__(self, "parents", tuple(self.parents))


@dataclass(frozen=True)
class ComponentDag:
    components: tuple

    def __post_init__(self):
        object.__setattr__(self, "components", tuple(self.components))

    def by_id(self) -> dict:
        return {c.id: c for c in self.components}

    def component_of(self) -> dict:
        """Map variable name to the id of its component."""
        return {x: c.id for c in self.components for x in c.vars}

    def parents(self, cid: str) -> tuple:
        return self.by_id()[cid].parents

    def is_acyclic(self) -> bool:
        try:
            self.topological_order()
        except CycleError:
            return False
        return True

    def topological_order(self) -> list:
        ts = TopologicalSorter({c.id: c.parents for c in self.components})
        return list(ts.static_order())

    def descendants(self) -> dict:
        """For each component id, the ids reachable by a nonempty directed path."""
        children = {c.id: [] for c in self.components}
        for c in self.components:
            for p in c.parents:
                children.setdefault(p, []).append(c.id)
        out = {}
        for c in self.components:
            seen, stack = set(), list(children[c.id])
            while stack:
                x = stack.pop()
                if x not in seen:
                    seen.add(x)
                    stack.extend(children.get(x, ()))
            out[c.id] = seen
        return out


@dataclass(frozen=True)
class PfuNetwork:
    structure: ExpectedUtilityStructure
    variables: tuple
    dag: ComponentDag
    P: tuple = ()
    F: tuple = ()
    U: tuple = ()

    def __post_init__(self):
        for name in ("variables", "P", "F", "U"):
            object.__setattr__(self, name, tuple(getattr(self, name)))

    def var(self, name: str) -> Variable:
        for v in self.variables:
            if v.name == name:
                return v
        raise NetworkError(f"unknown variable {name!r}")

    def var_map(self) -> dict:
        return {v.name: v for v in self.variables}

    @property
    def env_vars(self) -> tuple:
        return tuple(v for v in self.variables if v.kind == ENVIRONMENT)

    @property
    def dec_vars(self) -> tuple:
        return tuple(v for v in self.variables if v.kind == DECISION)

    def factors_of(self, cid: str) -> list:
        return [f for f in self.P + self.F if f.owner == cid]

    def sorted_vars(self, names: Iterable[str]) -> tuple:
        """Variables of ``names`` in declaration order."""
        names = set(names)
        return tuple(v for v in self.variables if v.name in names)


# -------------------------------------------------------------- validation


@dataclass
class Check:
    clause: str
    passed: bool
    message: str = ""


@dataclass
class ValidationReport:
    checks: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    @property
    def failures(self) -> list:
        return [c for c in self.checks if not c.passed]

    @property
    def failed_clauses(self) -> list:
        out = []
        for c in self.failures:
            if c.clause not in out:
                out.append(c.clause)
        return out

    def add(self, clause, passed, message=""):
        self.checks.append(Check(clause, bool(passed), message))

    def lines(self) -> list:
        return [f"{c.clause:<18} {'ok' if c.passed else 'FAIL'}" + (f"  {c.message}" if c.message else "")
                for c in self.checks]


def validate_network(n: PfuNetwork, cap: int = DEFAULT_CAP) -> ValidationReport:
    """Check every well-formedness clause of a PFU network and report each one."""
    rep = ValidationReport()
    s = n.structure

    # variables
    names = [v.name for v in n.variables]
    bad = [v.name for v in n.variables
           if v.kind not in KINDS or not v.domain or len(set(v.domain)) != len(v.domain)]
    dup = sorted({x for x in names if names.count(x) > 1})
    rep.add("variables", not bad and not dup,
            "; ".join(filter(None, [f"duplicate names {dup}" if dup else "",
                                    f"bad kind or domain for {bad}" if bad else ""])))
    vmap = n.var_map()

    # partition of V into components, parents known
    seen, problems = {}, []
    ids = [c.id for c in n.dag.components]
    if len(set(ids)) != len(ids):
        problems.append("duplicate component ids")
    for c in n.dag.components:
        if not c.vars:
            problems.append(f"component {c.id} is empty")
        for x in c.vars:
            if x not in vmap:
                problems.append(f"component {c.id} names unknown variable {x}")
            elif x in seen:
                problems.append(f"{x} is in both {seen[x]} and {c.id}")
            else:
                seen[x] = c.id
        for p in c.parents:
            if p not in ids:
                problems.append(f"component {c.id} has unknown parent {p}")
    missing = [x for x in names if x not in seen]
    if missing:
        problems.append(f"variables in no component: {missing}")
    rep.add("dag-partition", not problems, "; ".join(problems))

    typing = [c.id for c in n.dag.components
              if c.kind not in KINDS or any(x in vmap and vmap[x].kind != c.kind for x in c.vars)]
    rep.add("dag-typing", not typing, f"mixed or mistyped components {typing}" if typing else "")

    acyclic = not any(p not in ids for c in n.dag.components for p in c.parents) and n.dag.is_acyclic()
    rep.add("dag-acyclic", acyclic, "" if acyclic else "component graph has a cycle or dangling parent")

    # codomain membership and known scopes
    cod = []
    for label, fs, kind, contains in (("P", n.P, PLAUSIBILITY, s.plaus.contains),
                                      ("F", n.F, FEASIBILITY_CODOMAIN, FEASIBILITY.contains),
                                      ("U", n.U, UTILITY, s.util.contains)):
        for k, f in enumerate(fs):
            fname = f.name or f"{label}{k + 1}"
            if any(v.name not in vmap or vmap[v.name] != v for v in f.scope):
                cod.append(f"{fname} has a scope variable not declared in the network")
            if f.codomain != kind:
                cod.append(f"{fname} is tagged {f.codomain}, expected {kind}")
            badv = [x for x in f.table if x is UNFEASIBLE or not contains(x)]
            if badv:
                cod.append(f"{fname} has values outside its codomain, e.g. {badv[0]!r}")
    rep.add("codomain", not cod, "; ".join(cod))

    comps = n.dag.by_id()
    for label, fs, kind in (("P", n.P, ENVIRONMENT), ("F", n.F, DECISION)):
        msgs = []
        for k, f in enumerate(fs):
            fname = f.name or f"{label}{k + 1}"
            c = comps.get(f.owner)
            if c is None or c.kind != kind:
                msgs.append(f"{fname} is not attached to a {kind} component")
                continue
            allowed = set(c.vars)
            for p in c.parents:
                if p in comps:
                    allowed |= set(comps[p].vars)
            out = [v.name for v in f.scope if v.name not in allowed]
            if out:
                msgs.append(f"{fname} mentions {out} outside its component and parents")
        rep.add(f"{label}-scope", not msgs, "; ".join(msgs))

    # normalization, only meaningful once the structure above is sound
    if rep.ok:
        _check_normalization(n, rep, cap)
    else:
        rep.add("P-normalization", True, "skipped: earlier clauses failed")
        rep.add("F-normalization", True, "skipped: earlier clauses failed")
    return rep


def _check_normalization(n: PfuNetwork, rep: ValidationReport, cap: int):
    s = n.structure
    vmap = n.var_map()
    for label, kind, op, mul, one, ident in (
            ("P", ENVIRONMENT, s.plaus.elim_p, s.plaus.comb_p, s.plaus.one_p, s.plaus.one_p),
            ("F", DECISION, lambda a, b: a or b, lambda a, b: a and b, True, True)):
        msgs = []
        codomain = PLAUSIBILITY if label == "P" else FEASIBILITY_CODOMAIN
        for c in n.dag.components:
            if c.kind != kind:
                continue
            fs = [f for f in (n.P if label == "P" else n.F) if f.owner == c.id]
            cvars = [vmap[x] for x in c.vars]
            size = table_size(union_scope(cvars, *(f.scope for f in fs)))
            if size > cap:
                msgs.append(f"component {c.id}: table of {size} cells exceeds cap {cap}")
                continue
            joint = combine_all(fs, mul, ident, codomain)
            marg = eliminate(joint, cvars, op)
            wrong = [a for a, x in marg.items() if x != one]
            if wrong:
                where = dict(zip(marg.names, wrong[0]))
                msgs.append(f"component {c.id} does not sum to the unit at {where}")
        rep.add(f"{label}-normalization", not msgs, "; ".join(msgs))


def global_functions(n: PfuNetwork, cap: int = DEFAULT_CAP):
    """Full joint tables (⊗_p P, ∧ F, ⊗_u U) over all variables in declaration order."""
    size = table_size(n.variables)
    if size > cap:
        raise CapExceeded(f"joint state space of {size} cells exceeds cap {cap}")
    s = n.structure
    P = combine_all(n.P, s.plaus.comb_p, s.plaus.one_p, PLAUSIBILITY, scope=n.variables)
    F = combine_all(n.F, lambda a, b: a and b, True, FEASIBILITY_CODOMAIN, scope=n.variables)
    U = combine_all(n.U, s.util.comb_u, s.util.one_u, UTILITY, scope=n.variables)
    return P, F, U
