"""PFU-JSON: networks, queries and answers as JSON documents."""

from __future__ import annotations

import json

from ..algebra import UNFEASIBLE, format_value, parse_value, structure_from_descriptor
from ..errors import AlgebraError, NetworkError, ParseError
from ..network import (
    FEASIBILITY_CODOMAIN, PLAUSIBILITY, UTILITY, Component, ComponentDag, PfuNetwork,
    ScopedFunction, Variable, assignments,
)
from ..query import AnswerTable, BoundedQuery, DecisionRule, Policy, Query, bounded_query, validate_query


def dumps(doc) -> str:
    """Deterministic JSON text with a trailing newline."""
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def read_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise ParseError(f"{path}: {e}") from e


# ------------------------------------------------------------------ network


def _function_doc(f: ScopedFunction) -> dict:
    doc = {}
    if f.name:
        doc["name"] = f.name
    if f.owner is not None:
        doc["owner"] = f.owner
    doc["scope"] = list(f.names)
    doc["table"] = [format_value(v) for v in f.table]
    return doc


def network_to_dict(n: PfuNetwork) -> dict:
    return {
        "structure": n.structure.descriptor,
        "variables": [{"name": v.name, "kind": v.kind, "domain": list(v.domain)}
                      for v in n.variables],
        "components": [{"id": c.id, "kind": c.kind, "vars": list(c.vars),
                        "parents": list(c.parents)} for c in n.dag.components],
        "P": [_function_doc(f) for f in n.P],
        "F": [_function_doc(f) for f in n.F],
        "U": [_function_doc(f) for f in n.U],
    }


def _feasibility_literal(x):
    v = parse_value(x)
    if v in (0, 1) and not isinstance(v, bool):
        return bool(v)
    return v


def network_from_dict(doc: dict) -> PfuNetwork:
    """Build a network; structural defects are left for validation to report."""
    try:
        s = structure_from_descriptor(doc["structure"])
        variables = tuple(Variable(v["name"], v["kind"], tuple(v["domain"]))
                          for v in doc["variables"])
        vmap = {v.name: v for v in variables}
        comps = tuple(Component(c["id"], c["kind"], tuple(c["vars"]), tuple(c.get("parents", ())))
                      for c in doc["components"])

        def functions(key, codomain, convert):
            out = []
            for f in doc.get(key, ()):
                scope = tuple(_lookup_var(vmap, x) for x in f["scope"])
                out.append(ScopedFunction(scope, [convert(x) for x in f["table"]], codomain,
                                          f.get("owner"), f.get("name")))
            return tuple(out)

        return PfuNetwork(s, variables, ComponentDag(comps),
                          functions("P", PLAUSIBILITY, parse_value),
                          functions("F", FEASIBILITY_CODOMAIN, _feasibility_literal),
                          functions("U", UTILITY, parse_value))
    except (KeyError, TypeError, ValueError, AttributeError, NetworkError, AlgebraError) as e:
        raise ParseError(f"malformed network document: {e!r}") from e


def _lookup_var(vmap, x):
    if x in vmap:
        return vmap[x]
    # an unknown variable is a validation matter; keep a placeholder to report it
    return Variable(x, "unknown", ("?",))


# -------------------------------------------------------------------- query


def query_to_dict(q) -> dict:
    inner = q.query if isinstance(q, BoundedQuery) else q
    doc = {"sov": [{"op": p.op, "vars": list(p.vars)} for p in inner.sov]}
    if isinstance(q, BoundedQuery):
        doc["threshold"] = format_value(q.threshold)
    return doc


def sov_from_dict(doc: dict) -> list:
    try:
        return [(p["op"], tuple(p["vars"])) for p in doc["sov"]]
    except (KeyError, TypeError) as e:
        raise ParseError(f"malformed query document: {e!r}") from e


def query_from_dict(doc: dict, n: PfuNetwork):
    """Validated Query, or BoundedQuery when the document carries a threshold."""
    q = validate_query(n, sov_from_dict(doc))
    if "threshold" in doc:
        return bounded_query(q, parse_value(doc["threshold"]))
    return q


# ------------------------------------------------------------------- answer


def answer_to_dict(q: Query, answer: AnswerTable, policy: Policy, threshold=None,
                   algorithms=None, stats=None) -> dict:
    doc = {"structure": q.network.structure.descriptor, "free": list(answer.names)}
    if threshold is not None:
        doc["threshold"] = format_value(threshold)
    doc["entries"] = [{"assignment": dict(zip(answer.names, a)), "value": format_value(v)}
                      for a, v in answer.items()]
    doc["policy"] = {}
    for i in sorted(policy.rules):
        r = policy.rules[i]
        doc["policy"][str(i)] = {
            "op": r.op, "context": list(r.context), "choice": list(r.choice),
            "rules": [{"context": list(ctx),
                       "choice": "unfeasible" if ch is UNFEASIBLE else list(ch)}
                      for ctx, ch in r.entries.items()],
        }
    if algorithms is not None:
        doc["algorithms"] = list(algorithms)
    if stats is not None:
        doc["stats"] = stats
    return doc


def answer_from_dict(doc: dict, n: PfuNetwork):
    """(AnswerTable, Policy) from an answer document."""
    try:
        free = tuple(n.var(x) for x in doc["free"])
        by_assignment = {tuple(e["assignment"][x] for x in doc["free"]): parse_value(e["value"])
                         for e in doc["entries"]}
        entries = [by_assignment[a] for a in assignments(free)]
        rules = {}
        for key, r in doc.get("policy", {}).items():
            ents = {tuple(e["context"]): (UNFEASIBLE if e["choice"] == "unfeasible"
                                          else tuple(e["choice"]))
                    for e in r["rules"]}
            rules[int(key)] = DecisionRule(int(key), r["op"], tuple(r["context"]),
                                           tuple(r["choice"]), ents)
        return AnswerTable(free, entries), Policy(rules)
    except (KeyError, TypeError, ValueError, NetworkError) as e:
        raise ParseError(f"malformed answer document: {e!r}") from e
