"""The dinner problem: a host chooses a main course and a wine for guests who may leave."""

from __future__ import annotations

from fractions import Fraction

from .algebra import NEG_INF, builtin_structure
from .network import (
    DECISION, ENVIRONMENT, FEASIBILITY_CODOMAIN, PLAUSIBILITY, UTILITY, Component, ComponentDag,
    PfuNetwork, ScopedFunction, Variable, assignments,
)
from .query import validate_query

TF = ("f", "t")


def tabulate(scope, fn, codomain=UTILITY, owner=None, name=None) -> ScopedFunction:
    """Scoped function whose entries are ``fn(**labels)`` over ``scope``."""
    names = [v.name for v in scope]
    table = [fn(**dict(zip(names, a))) for a in assignments(scope)]
    return ScopedFunction(tuple(scope), table, codomain, owner, name)


def dinner_network() -> PfuNetwork:
    mc = Variable("mc", DECISION, ("fish", "meat"))
    w = Variable("w", DECISION, ("white", "red"))
    bpj = Variable("bp_J", ENVIRONMENT, TF)
    bpm = Variable("bp_M", ENVIRONMENT, TF)
    epj = Variable("ep_J", ENVIRONMENT, TF)
    epm = Variable("ep_M", ENVIRONMENT, TF)
    dag = ComponentDag((
        Component("menu", DECISION, ("mc", "w")),
        Component("present", ENVIRONMENT, ("bp_J", "bp_M")),
        Component("john_stays", ENVIRONMENT, ("ep_J",), ("present", "menu")),
        Component("mary_stays", ENVIRONMENT, ("ep_M",), ("present", "menu")),
    ))
    one, zero = Fraction(1), Fraction(0)

    def p1(bp_J, bp_M):
        return {("t", "f"): Fraction(3, 5), ("f", "t"): Fraction(2, 5)}.get((bp_J, bp_M), zero)

    P = (
        tabulate((bpj, bpm), p1, PLAUSIBILITY, "present", "P1"),
        tabulate((bpj, bpm), lambda bp_J, bp_M: one if bp_J != bp_M else zero,
                 PLAUSIBILITY, "present", "P2"),
        tabulate((bpj, epj), lambda bp_J, ep_J: one if bp_J == "t" or ep_J == "f" else zero,
                 PLAUSIBILITY, "john_stays", "P3"),
        tabulate((bpj, w, epj),
                 lambda bp_J, w, ep_J: one if bp_J == "f" or (ep_J == "t") == (w != "white") else zero,
                 PLAUSIBILITY, "john_stays", "P4"),
        tabulate((bpm, epm), lambda bp_M, ep_M: one if bp_M == "t" or ep_M == "f" else zero,
                 PLAUSIBILITY, "mary_stays", "P5"),
        tabulate((bpm, mc, epm),
                 lambda bp_M, mc, ep_M: one if bp_M == "f" or (ep_M == "t") == (mc != "meat") else zero,
                 PLAUSIBILITY, "mary_stays", "P6"),
    )
    F = (tabulate((mc, w), lambda mc, w: not (mc == "fish" and w == "red"),
                  FEASIBILITY_CODOMAIN, "menu", "F1"),)
    U = (
        tabulate((bpj, epj), lambda bp_J, ep_J: 0 if bp_J == "f" or ep_J == "t" else NEG_INF,
                 name="U1"),
        tabulate((epj,), lambda ep_J: 10 if ep_J == "t" else 0, name="U2"),
        tabulate((epm,), lambda ep_M: 50 if ep_M == "t" else 0, name="U3"),
    )
    return PfuNetwork(builtin_structure("prob-additive"), (mc, w, bpj, bpm, epj, epm), dag, P, F, U)


ENV = ("bp_J", "bp_M", "ep_J", "ep_M")

DINNER_SOVS = {
    "query1": [("max", ("mc", "w")), ("elim", ENV)],
    "query2": [("elim", ("bp_J", "bp_M")), ("max", ("mc", "w")), ("elim", ("ep_J", "ep_M"))],
    "query3": [("min", ("mc",)), ("elim", ("bp_J", "bp_M")), ("max", ("w",)),
               ("elim", ("ep_J", "ep_M"))],
    "query4": [("elim", ENV)],
}


def dinner_query(name: str, network: PfuNetwork = None):
    return validate_query(network or dinner_network(), DINNER_SOVS[name])
