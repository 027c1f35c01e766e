"""JSON documents for CSP, influence-diagram and MDP instances.

CSP::

    {"variables": {"x": ["a", "b"], ...},
     "constraints": [{"scope": ["x", "y"], "table": [...]} | {"scope": [...], "allowed": [[...], ...]}],
     "flavor": "hard" | "valued" | "quantified" | "stochastic",
     "valuation": "weighted" | "fuzzy" | {"values": [...], "times": [[...]]},
     "prefix": [["forall", "x"], ["exists", "y"]],
     "probabilities": {"y": ["1/2", "1/2"]}, "stages": [["x"], ["y"]], "threshold": "1/2"}

Influence diagram::

    {"chance": [{"name", "domain", "parents", "cpt"}],
     "decisions": [{"name", "domain", "parents"}],
     "utilities": [{"name", "parents", "table"}]}

MDP::

    {"horizon", "states", "actions", "transition", "reward", "feasible"?, "flavor"?}
"""

from __future__ import annotations

from fractions import Fraction

from ..encoders.csp import Constraint, CspInstance
from ..encoders.influence import ChanceNode, DecisionNode, IdInstance, UtilityNode
from ..encoders.mdp import MdpInstance
from ..errors import ParseError
from ..network import DECISION, Variable, assignments


def _wrap(kind, build, doc):
    try:
        return build(doc)
    except (KeyError, TypeError, ValueError, AttributeError) as e:
        raise ParseError(f"malformed {kind} document: {e!r}") from e


def csp_from_dict(doc: dict) -> CspInstance:
    def build(d):
        variables = {x: tuple(dom) for x, dom in d["variables"].items()}
        cons = []
        for k, c in enumerate(d["constraints"]):
            scope = tuple(c["scope"])
            if "allowed" in c:
                allowed = {tuple(t) for t in c["allowed"]}
                vs = [Variable(x, DECISION, variables[x]) for x in scope]
                table = [a in allowed for a in assignments(vs)]
            else:
                table = list(c["table"])
            cons.append(Constraint(scope, table, c.get("name")))
        th = d.get("threshold")
        return CspInstance(
            variables, cons, d.get("flavor", "hard"), d.get("valuation"),
            [tuple(p) for p in d["prefix"]] if "prefix" in d else None,
            {x: list(p) for x, p in d.get("probabilities", {}).items()},
            [list(st) for st in d["stages"]] if "stages" in d else None,
            Fraction(th) if th is not None else None)
    return _wrap("CSP", build, doc)


def id_from_dict(doc: dict) -> IdInstance:
    def build(d):
        return IdInstance(
            [ChanceNode(c["name"], tuple(c["domain"]), tuple(c.get("parents", ())), list(c["cpt"]))
             for c in d.get("chance", ())],
            [DecisionNode(x["name"], tuple(x["domain"]), tuple(x.get("parents", ())))
             for x in d["decisions"]],
            [UtilityNode(u["name"], tuple(u.get("parents", ())), list(u["table"]))
             for u in d["utilities"]])
    return _wrap("influence diagram", build, doc)


def mdp_from_dict(doc: dict) -> MdpInstance:
    def build(d):
        return MdpInstance(int(d["horizon"]), tuple(d["states"]), tuple(d["actions"]),
                           list(d.get("transition", ())), list(d["reward"]), d.get("feasible"),
                           d.get("flavor", "probabilistic"))
    return _wrap("MDP", build, doc)
