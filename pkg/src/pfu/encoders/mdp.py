"""Finite-horizon MDPs under several uncertainty models, and POMDP query shapes."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from ..algebra import builtin_structure, parse_value
from ..errors import EncodingError
from ..network import (
    DECISION, ENVIRONMENT, FEASIBILITY_CODOMAIN, PLAUSIBILITY, UTILITY, Component, ComponentDag,
    PfuNetwork, ScopedFunction, Variable,
)
from ..query import validate_query

FLAVORS = {
    "probabilistic": "prob-additive",
    "possibilistic-pessimistic": "poss-pessimistic",
    "possibilistic-optimistic": "poss-optimistic",
    "kappa": "kappa",
}


def _per_step(tables, n_steps, what):
    """Accept one stationary table or a list with one table per step."""
    if tables and isinstance(tables[0], (list, tuple)):
        if len(tables) != n_steps:
            raise EncodingError(f"{what}: expected {n_steps} per-step tables, got {len(tables)}")
        return [list(t) for t in tables]
    return [list(tables)] * n_steps


@dataclass
class MdpInstance:
    horizon: int
    states: tuple
    actions: tuple
    transition: list          # over (s_t, d_t, s_t+1), stationary or one per step
    reward: list              # over (s_t, d_t)
    feasible: Optional[list] = None   # over (s_t, d_t)
    flavor: str = "probabilistic"

    def structure(self):
        if self.flavor not in FLAVORS:
            raise EncodingError(f"unknown flavor {self.flavor!r}")
        return builtin_structure(FLAVORS[self.flavor])

    def tables(self):
        T = self.horizon
        if T < 1:
            raise EncodingError("horizon must be at least 1")
        s = self.structure()
        P = [[parse_value(v) for v in t] for t in _per_step(self.transition, T - 1, "transition")] \
            if T > 1 else []
        R = [[parse_value(v) for v in t] for t in _per_step(self.reward, T, "reward")]
        F = None
        if self.feasible is not None:
            F = [[bool(v) for v in t] for t in _per_step(self.feasible, T, "feasible")]
        ns, na = len(self.states), len(self.actions)
        for t, table in enumerate(P):
            if len(table) != ns * na * ns:
                raise EncodingError(f"transition of step {t + 1} has {len(table)} entries")
            for r in range(ns * na):
                row = table[r * ns:(r + 1) * ns]
                if not all(s.plaus.contains(v) for v in row):
                    raise EncodingError(f"transition row {r} of step {t + 1} has invalid values")
                total = s.plaus.zero_p
                for v in row:
                    total = s.plaus.elim_p(total, v)
                if total != s.plaus.one_p:
                    raise EncodingError(f"transition row {r} of step {t + 1} is not normalized")
        for t, table in enumerate(R):
            if len(table) != ns * na or not all(s.util.contains(v) for v in table):
                raise EncodingError(f"reward of step {t + 1} is malformed")
        for t, table in enumerate(F or ()):
            if len(table) != ns * na:
                raise EncodingError(f"feasibility of step {t + 1} has {len(table)} entries")
            for r in range(ns):
                if not any(table[r * na:(r + 1) * na]):
                    raise EncodingError(f"no feasible decision in state {self.states[r]!r} at step {t + 1}")
        return P, R, F


def encode_mdp(m: MdpInstance):
    """Encode ``m``: s1 is a free decision-typed variable, d_t depends on s_t,
    s_t+1 on (s_t, d_t); the sequence is (max, d1) (sum, s2) ... (max, dT)."""
    P, R, F = m.tables()
    T = m.horizon
    s_ = [Variable(f"s{t}", DECISION if t == 1 else ENVIRONMENT, tuple(m.states))
          for t in range(1, T + 1)]
    d_ = [Variable(f"d{t}", DECISION, tuple(m.actions)) for t in range(1, T + 1)]
    variables = tuple(v for t in range(T) for v in (s_[t], d_[t]))
    comps = [Component("s1", DECISION, ("s1",))]
    Ps, Fs, Us = [], [], []
    for t in range(T):
        comps.append(Component(d_[t].name, DECISION, (d_[t].name,), (s_[t].name,)))
        Us.append(ScopedFunction((s_[t], d_[t]), R[t], UTILITY, None, f"R{t + 1}"))
        if F is not None:
            Fs.append(ScopedFunction((s_[t], d_[t]), F[t], FEASIBILITY_CODOMAIN, d_[t].name,
                                     f"F{t + 1}"))
        if t + 1 < T:
            comps.append(Component(s_[t + 1].name, ENVIRONMENT, (s_[t + 1].name,),
                                   (s_[t].name, d_[t].name)))
            Ps.append(ScopedFunction((s_[t], d_[t], s_[t + 1]), P[t], PLAUSIBILITY,
                                     s_[t + 1].name, f"P{t + 2}"))
    n = PfuNetwork(m.structure(), variables, ComponentDag(tuple(comps)), tuple(Ps), tuple(Fs),
                   tuple(Us))
    sov = []
    for t in range(T):
        if t:
            sov.append(("elim", (s_[t].name,)))
        sov.append(("max", (d_[t].name,)))
    return validate_query(n, sov)


@dataclass
class PomdpInstance:
    horizon: int
    states: tuple
    actions: tuple
    observations: tuple
    initial: list            # over s1
    transition: list         # over (s_t, d_t, s_t+1)
    observation: list        # over (s_t, o_t)
    reward: list             # over (s_t, d_t)


def encode_pomdp(m: PomdpInstance):
    """Probabilistic POMDP as a policy-tree query.

    Decisions alternate with observations o2..oT; all states are summed
    out last: (max, d1) (sum, o2) (max, d2) ... (max, dT) (sum, s1..sT).
    """
    T = m.horizon
    if T < 1:
        raise EncodingError("horizon must be at least 1")
    conv = lambda t: [parse_value(v) for v in t]  # noqa: E731
    s_ = [Variable(f"s{t}", ENVIRONMENT, tuple(m.states)) for t in range(1, T + 1)]
    d_ = [Variable(f"d{t}", DECISION, tuple(m.actions)) for t in range(1, T + 1)]
    o_ = {t: Variable(f"o{t}", ENVIRONMENT, tuple(m.observations)) for t in range(2, T + 1)}
    variables = []
    for t in range(1, T + 1):
        variables += [s_[t - 1]] + ([o_[t]] if t in o_ else []) + [d_[t - 1]]
    comps = [Component("s1", ENVIRONMENT, ("s1",))]
    Ps = [ScopedFunction((s_[0],), conv(m.initial), PLAUSIBILITY, "s1", "P1")]
    Us = []
    for t in range(1, T + 1):
        comps.append(Component(f"d{t}", DECISION, (f"d{t}",)))
        Us.append(ScopedFunction((s_[t - 1], d_[t - 1]), conv(m.reward), UTILITY, None, f"R{t}"))
        if t < T:
            comps.append(Component(f"s{t + 1}", ENVIRONMENT, (f"s{t + 1}",), (f"s{t}", f"d{t}")))
            Ps.append(ScopedFunction((s_[t - 1], d_[t - 1], s_[t]), conv(m.transition),
                                     PLAUSIBILITY, f"s{t + 1}", f"P{t + 1}"))
        if t in o_:
            comps.append(Component(f"o{t}", ENVIRONMENT, (f"o{t}",), (f"s{t}",)))
            Ps.append(ScopedFunction((s_[t - 1], o_[t]), conv(m.observation), PLAUSIBILITY,
                                     f"o{t}", f"O{t}"))
    n = PfuNetwork(builtin_structure("prob-additive"), tuple(variables), ComponentDag(tuple(comps)),
                   tuple(Ps), (), tuple(Us))
    sov = [("max", ("d1",))]
    for t in range(2, T + 1):
        sov += [("elim", (f"o{t}",)), ("max", (f"d{t}",))]
    sov.append(("elim", tuple(v.name for v in s_)))
    return validate_query(n, sov)
