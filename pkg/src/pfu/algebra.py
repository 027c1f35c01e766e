"""Algebraic structures for plausibilities, feasibilities and utilities.

Values are plain Python objects: ``int``/``Fraction`` for exact rationals,
``math.inf``/``-math.inf`` for the infinite elements, ``bool`` for the
boolean rows and tuples for product structures. The unfeasible marker is the
singleton ``UNFEASIBLE``; it never belongs to a plausibility or utility set.
"""

from __future__ import annotations

import itertools
import math
import operator
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Optional

from .errors import (
    AlgebraError,
    ConditioningDomainError,
    ParseError,
    UndefinedConditioning,
    UnknownStructure,
)

INF = math.inf
NEG_INF = -math.inf


class _Unfeasible:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "UNFEASIBLE"

    def __reduce__(self):
        return (_Unfeasible, ())


UNFEASIBLE = _Unfeasible()

MIN, MAX, ELIM = "min", "max", "elim"


# ---------------------------------------------------------------- structures


@dataclass(frozen=True)
class PlausibilityStructure:
    """A commutative semiring with a monotone order (``order_p`` is "less or equal")."""

    name: str
    elim_p: Callable[[Any, Any], Any]
    comb_p: Callable[[Any, Any], Any]
    zero_p: Any
    one_p: Any
    order_p: Callable[[Any, Any], bool]
    contains: Callable[[Any], bool]
    conditionable: bool = False
    divide: Optional[Callable[[Any, Any], Any]] = None
    uniform_of: Optional[Callable[[int], Any]] = None
    sample: Optional[Callable[[random.Random], Any]] = None
    elements: Optional[tuple] = None
    total: bool = True


@dataclass(frozen=True)
class UtilityStructure:
    name: str
    comb_u: Callable[[Any, Any], Any]
    one_u: Any
    order_u: Callable[[Any, Any], bool]
    contains: Callable[[Any], bool]
    sample: Optional[Callable[[random.Random], Any]] = None
    elements: Optional[tuple] = None
    total: bool = True


@dataclass(frozen=True)
class ExpectedUtilityStructure:
    name: str
    plaus: PlausibilityStructure
    util: UtilityStructure
    elim_u: Callable[[Any, Any], Any]
    zero_u: Any
    comb_pu: Callable[[Any, Any], Any]
    ax1: bool = False
    ax2: bool = False
    descriptor: Any = None

    @property
    def conditionable(self) -> bool:
        return self.plaus.conditionable

    @property
    def queryable(self) -> bool:
        """True when min/max over utilities are defined (total utility order)."""
        return self.util.total

    def better(self, op: str, a, b) -> bool:
        """True when ``a`` is strictly preferred to ``b`` under ``op`` (min or max)."""
        leq = self.util.order_u
        if op == MAX:
            return not leq(a, b)
        return not leq(b, a)

    def opt(self, op: str, a, b):
        return a if self.better(op, a, b) else b


# ------------------------------------------------------------ value helpers


def _is_rational(v) -> bool:
    return isinstance(v, (int, Fraction)) and not isinstance(v, bool)


def _is_nonneg(v) -> bool:
    return _is_rational(v) and v >= 0


def _is_unit(v) -> bool:
    return _is_rational(v) and 0 <= v <= 1


def _is_signed_ext(v) -> bool:
    return _is_rational(v) or (type(v) is float and v == NEG_INF)


def _is_kappa(v) -> bool:
    if type(v) is float:
        return v == INF
    return _is_rational(v) and v >= 0 and Fraction(v).denominator == 1


def _is_bool(v) -> bool:
    return isinstance(v, bool)


def _sample_nonneg(rng):
    r = rng.random()
    if r < 0.15:
        return Fraction(0)
    if r < 0.3:
        return Fraction(1)
    return Fraction(rng.randint(0, 12), rng.randint(1, 6))


def _sample_unit(rng):
    d = rng.randint(1, 8)
    return Fraction(rng.randint(0, d), d)


def _sample_signed_ext(rng):
    if rng.random() < 0.1:
        return NEG_INF
    return Fraction(rng.randint(-12, 12), rng.randint(1, 6))


def _sample_kappa(rng):
    if rng.random() < 0.1:
        return INF
    return rng.randint(0, 10)


# Row 1 utilities: + with an absorbing -inf. The only float a row-1 utility
# can hold is -inf, so a type test is enough.
def _ext_add(a, b):
    if type(a) is float or type(b) is float:
        return NEG_INF
    return a + b


def _times_pu_additive(p, u):
    # 0 x (-inf) is taken to be 0 so that 0_p (x) u = 0_u holds.
    if not p:
        return p
    if type(u) is float:
        return u
    return p * u


def _kappa_add(a, b):
    if type(a) is float or type(b) is float:
        return INF
    return a + b


def _kappa_leq(a, b):
    return a >= b


def _num_leq(a, b):
    return a <= b


def _bool_leq(a, b):
    return (not a) or b


def _or(a, b):
    return a or b


def _and(a, b):
    return a and b


def _implies(p, u):
    return (not p) or u


def _poss_pess_pu(p, u):
    return max(1 - p, u)


def _prob_divide(num, den):
    return Fraction(num) / den


def _poss_divide(num, den):
    return num if num < den else Fraction(1)


def _kappa_divide(num, den):
    if type(num) is float:
        return INF
    return num - den


def _bool_divide(num, den):
    return num


BOOL_ELEMENTS = (False, True)


def _prob_plaus():
    return PlausibilityStructure(
        name="probability", elim_p=operator.add, comb_p=operator.mul,
        zero_p=Fraction(0), one_p=Fraction(1), order_p=_num_leq, contains=_is_nonneg,
        conditionable=True, divide=_prob_divide, uniform_of=lambda n: Fraction(1, n),
        sample=_sample_nonneg)


def _poss_plaus():
    return PlausibilityStructure(
        name="possibility", elim_p=max, comb_p=min, zero_p=Fraction(0), one_p=Fraction(1),
        order_p=_num_leq, contains=_is_unit, conditionable=True, divide=_poss_divide,
        uniform_of=lambda n: Fraction(1), sample=_sample_unit)


def _kappa_plaus():
    return PlausibilityStructure(
        name="kappa", elim_p=min, comb_p=_kappa_add, zero_p=INF, one_p=0,
        order_p=_kappa_leq, contains=_is_kappa, conditionable=True, divide=_kappa_divide,
        uniform_of=lambda n: 0, sample=_sample_kappa)


def _bool_plaus(name="boolean"):
    return PlausibilityStructure(
        name=name, elim_p=_or, comb_p=_and, zero_p=False, one_p=True, order_p=_bool_leq,
        contains=_is_bool, conditionable=True, divide=_bool_divide,
        uniform_of=lambda n: True, sample=lambda rng: rng.random() < 0.5,
        elements=BOOL_ELEMENTS)


FEASIBILITY = _bool_plaus("feasibility")


def _bool_util(comb, one):
    return UtilityStructure(
        name="boolean", comb_u=comb, one_u=one, order_u=_bool_leq, contains=_is_bool,
        sample=lambda rng: rng.random() < 0.5, elements=BOOL_ELEMENTS)


def _row(name):
    if name == "prob-additive":
        util = UtilityStructure(name="additive", comb_u=_ext_add, one_u=0, order_u=_num_leq,
                                contains=_is_signed_ext, sample=_sample_signed_ext)
        return ExpectedUtilityStructure(name, _prob_plaus(), util, _ext_add, 0,
                                        _times_pu_additive, ax1=False, ax2=True)
    if name == "prob-sat":
        util = UtilityStructure(name="probability", comb_u=operator.mul, one_u=Fraction(1),
                                order_u=_num_leq, contains=_is_nonneg, sample=_sample_nonneg)
        return ExpectedUtilityStructure(name, _prob_plaus(), util, operator.add, Fraction(0),
                                        operator.mul, ax1=True, ax2=False)
    if name == "poss-optimistic":
        util = UtilityStructure(name="unit-min", comb_u=min, one_u=Fraction(1), order_u=_num_leq,
                                contains=_is_unit, sample=_sample_unit)
        return ExpectedUtilityStructure(name, _poss_plaus(), util, max, Fraction(0), min,
                                        ax1=True, ax2=False)
    if name == "poss-pessimistic":
        util = UtilityStructure(name="unit-min", comb_u=min, one_u=Fraction(1), order_u=_num_leq,
                                contains=_is_unit, sample=_sample_unit)
        return ExpectedUtilityStructure(name, _poss_plaus(), util, min, Fraction(1),
                                        _poss_pess_pu, ax1=False, ax2=True)
    if name == "kappa":
        util = UtilityStructure(name="kappa", comb_u=_kappa_add, one_u=0, order_u=_kappa_leq,
                                contains=_is_kappa, sample=_sample_kappa)
        return ExpectedUtilityStructure(name, _kappa_plaus(), util, min, INF, _kappa_add,
                                        ax1=True, ax2=False)
    if name == "bool-opt-conj":
        return ExpectedUtilityStructure(name, _bool_plaus(), _bool_util(_and, True), _or, False,
                                        _and, ax1=True, ax2=False)
    if name == "bool-pess-conj":
        return ExpectedUtilityStructure(name, _bool_plaus(), _bool_util(_and, True), _and, True,
                                        _implies, ax1=False, ax2=True)
    if name == "bool-opt-disj":
        return ExpectedUtilityStructure(name, _bool_plaus(), _bool_util(_or, False), _or, False,
                                        _and, ax1=False, ax2=True)
    if name == "bool-pess-disj":
        return ExpectedUtilityStructure(name, _bool_plaus(), _bool_util(_or, False), _and, True,
                                        _implies, ax1=False, ax2=False)
    raise UnknownStructure(f"unknown structure id {name!r}")


CATALOG = (
    "prob-additive", "prob-sat", "poss-optimistic", "poss-pessimistic", "kappa",
    "bool-opt-conj", "bool-pess-conj", "bool-opt-disj", "bool-pess-disj",
)

_CACHE: dict = {}


def builtin_structure(name: str) -> ExpectedUtilityStructure:
    """Return one of the nine catalog structures by id."""
    if name not in _CACHE:
        s = _row(name)
        _CACHE[name] = ExpectedUtilityStructure(
            s.name, s.plaus, s.util, s.elim_u, s.zero_u, s.comb_pu, s.ax1, s.ax2, descriptor=name)
    return _CACHE[name]


# ------------------------------------------------------------------ products


def _pairwise(f, g):
    return lambda a, b: (f(a[0], b[0]), g(a[1], b[1]))


def _both(f, g):
    return lambda a, b: f(a[0], b[0]) and g(a[1], b[1])


def _lex(leq_a, leq_b):
    def leq(a, b):
        if a[0] == b[0]:
            return leq_b(a[1], b[1])
        return leq_a(a[0], b[0])
    return leq


def _pair_contains(ca, cb):
    return lambda v: isinstance(v, tuple) and len(v) == 2 and ca(v[0]) and cb(v[1])


def _pair_sample(sa, sb):
    if sa is None or sb is None:
        return None
    return lambda rng: (sa(rng), sb(rng))


def _pair_elements(ea, eb):
    if ea is None or eb is None:
        return None
    return tuple(itertools.product(ea, eb))


def product_structure(a: ExpectedUtilityStructure, b: ExpectedUtilityStructure,
                      lexicographic: bool = False) -> ExpectedUtilityStructure:
    """Componentwise product of two structures.

    Both orders are componentwise (hence partial). With ``lexicographic`` the
    utility order is refined to the lexicographic one so that min/max queries
    become possible; whether the refinement keeps the monotonicity axioms is
    for ``check_axioms`` to say.
    """
    pa, pb = a.plaus, b.plaus
    conditionable = pa.conditionable and pb.conditionable

    def part(ps, n, d):
        # A zero component is conditioned to the unit, the largest value not above 1_p.
        return ps.one_p if d == ps.zero_p else ps.divide(n, d)

    def divide(num, den):
        return (part(pa, num[0], den[0]), part(pb, num[1], den[1]))

    plaus = PlausibilityStructure(
        name=f"{pa.name}*{pb.name}",
        elim_p=_pairwise(pa.elim_p, pb.elim_p), comb_p=_pairwise(pa.comb_p, pb.comb_p),
        zero_p=(pa.zero_p, pb.zero_p), one_p=(pa.one_p, pb.one_p),
        order_p=_both(pa.order_p, pb.order_p), contains=_pair_contains(pa.contains, pb.contains),
        conditionable=conditionable, divide=divide if conditionable else None,
        uniform_of=(lambda n: (pa.uniform_of(n), pb.uniform_of(n))) if conditionable else None,
        sample=_pair_sample(pa.sample, pb.sample), elements=_pair_elements(pa.elements, pb.elements),
        total=False)
    ua, ub = a.util, b.util
    util = UtilityStructure(
        name=f"{ua.name}*{ub.name}", comb_u=_pairwise(ua.comb_u, ub.comb_u),
        one_u=(ua.one_u, ub.one_u),
        order_u=_lex(ua.order_u, ub.order_u) if lexicographic else _both(ua.order_u, ub.order_u),
        contains=_pair_contains(ua.contains, ub.contains),
        sample=_pair_sample(ua.sample, ub.sample), elements=_pair_elements(ua.elements, ub.elements),
        total=lexicographic)
    descriptor = {"product": [a.descriptor, b.descriptor]}
    if lexicographic:
        descriptor["order"] = "lexicographic"
    return ExpectedUtilityStructure(
        name=f"{a.name}*{b.name}", plaus=plaus, util=util,
        elim_u=_pairwise(a.elim_u, b.elim_u), zero_u=(a.zero_u, b.zero_u),
        comb_pu=_pairwise(a.comb_pu, b.comb_pu),
        ax1=a.ax1 and b.ax1, ax2=a.ax2 and b.ax2, descriptor=descriptor)


# ------------------------------------------------------ valued-CSP structures


def valued_structure(kind) -> ExpectedUtilityStructure:
    """Structure for valued constraint problems.

    Plausibilities are booleans; utilities are violation degrees ordered from
    best to worst, combined with the valuation operator and projected with
    min. ``false (x) u`` is the worst valuation and ``true (x) u`` is ``u``.
    ``kind`` is ``"weighted"`` (costs in N u {inf}, summed), ``"fuzzy"``
    (degrees in [0, 1], combined with max) or a mapping
    ``{"values": [...ascending], "times": [[...]]}`` describing a finite
    totally ordered valuation structure.
    """
    if kind == "weighted":
        worst, best = INF, 0
        comb, leq, contains, sample, elements = _kappa_add, _num_leq, _is_kappa, _sample_kappa, None
    elif kind == "fuzzy":
        worst, best = Fraction(1), Fraction(0)
        comb, leq, contains, sample, elements = max, _num_leq, _is_unit, _sample_unit, None
    elif isinstance(kind, dict):
        values = tuple(parse_value(v) for v in kind["values"])
        table = kind["times"]
        pos = {v: i for i, v in enumerate(values)}
        lookup = {(x, y): parse_value(table[i][j])
                  for i, x in enumerate(values) for j, y in enumerate(values)}
        comb = lambda a, b: lookup[(a, b)]  # noqa: E731
        leq = lambda a, b: pos[a] <= pos[b]  # noqa: E731
        contains = lambda v: _hashable(v) and v in pos  # noqa: E731
        worst, best = values[-1], values[0]
        sample = lambda rng: rng.choice(values)  # noqa: E731
        elements = values
    else:
        raise UnknownStructure(f"unknown valuation structure {kind!r}")

    def comb_pu(p, u):
        return u if p else worst

    def elim(a, b):
        return a if leq(a, b) else b

    util = UtilityStructure(name="valuation", comb_u=comb, one_u=best, order_u=leq,
                            contains=contains, sample=sample, elements=elements)
    return ExpectedUtilityStructure(name=f"vcsp-{kind if isinstance(kind, str) else 'table'}",
                                    plaus=_bool_plaus(), util=util, elim_u=elim, zero_u=worst,
                                    comb_pu=comb_pu, descriptor={"vcsp": kind})


def _hashable(v) -> bool:
    try:
        hash(v)
    except TypeError:
        return False
    return True


# --------------------------------------------------------- finite structures


def finite_structure(spec: dict) -> ExpectedUtilityStructure:
    """Build a structure from operation tables over finite, totally ordered sets.

    ``spec`` holds ``plausibility`` and ``utility`` blocks, each with
    ``elements`` listed in ascending order and its operation tables, plus
    ``plus_u``, ``zero_u`` and ``times_pu``. Tables are lists of rows indexed
    by element position. Meant for user-defined structures and for checking
    hand-written tables with ``check_axioms``.
    """
    try:
        pspec, uspec = spec["plausibility"], spec["utility"]
        pel = tuple(parse_value(v) for v in pspec["elements"])
        uel = tuple(parse_value(v) for v in uspec["elements"])
        ppos = {v: i for i, v in enumerate(pel)}
        upos = {v: i for i, v in enumerate(uel)}

        def op(table, left, right):
            t = {(x, y): parse_value(table[i][j])
                 for i, x in enumerate(left) for j, y in enumerate(right)}
            return lambda a, b: t[(a, b)]

        plus_p = op(pspec["plus"], pel, pel)
        times_p = op(pspec["times"], pel, pel)
        zero_p, one_p = parse_value(pspec["zero"]), parse_value(pspec["one"])
        times_u = op(uspec["times"], uel, uel)
        one_u = parse_value(uspec["one"])
        plus_u = op(spec["plus_u"], uel, uel)
        zero_u = parse_value(spec["zero_u"])
        times_pu = op(spec["times_pu"], pel, uel)
    except (KeyError, IndexError, TypeError) as exc:
        raise ParseError(f"malformed finite structure: {exc}") from exc

    p_leq = lambda a, b: ppos[a] <= ppos[b]  # noqa: E731
    conditionable = bool(pspec.get("conditionable", False))

    def divide(num, den):
        cands = [p for p in pel if times_p(p, den) == num]
        if not cands:
            raise ConditioningDomainError("no solution to num = p (x) den")
        return max(cands, key=lambda p: ppos[p])

    def uniform_of(n):
        for p in pel:
            acc = p
            for _ in range(n - 1):
                acc = plus_p(acc, p)
            if acc == one_p:
                return p
        raise ConditioningDomainError(f"no uniform element for n={n}")

    name = spec.get("name", "finite")
    plaus = PlausibilityStructure(
        name=name, elim_p=plus_p, comb_p=times_p, zero_p=zero_p, one_p=one_p, order_p=p_leq,
        contains=lambda v: _hashable(v) and v in ppos, conditionable=conditionable,
        divide=divide if conditionable else None, uniform_of=uniform_of if conditionable else None,
        sample=lambda rng: rng.choice(pel), elements=pel)
    util = UtilityStructure(
        name=name, comb_u=times_u, one_u=one_u, order_u=lambda a, b: upos[a] <= upos[b],
        contains=lambda v: _hashable(v) and v in upos, sample=lambda rng: rng.choice(uel),
        elements=uel)
    return ExpectedUtilityStructure(
        name=name, plaus=plaus, util=util, elim_u=plus_u, zero_u=zero_u, comb_pu=times_pu,
        ax1=bool(spec.get("ax1", False)), ax2=bool(spec.get("ax2", False)),
        descriptor={"finite": spec})


def structure_from_descriptor(desc) -> ExpectedUtilityStructure:
    """Inverse of ``ExpectedUtilityStructure.descriptor``."""
    if isinstance(desc, str):
        return builtin_structure(desc)
    if isinstance(desc, list) and len(desc) == 2:
        return product_structure(structure_from_descriptor(desc[0]),
                                 structure_from_descriptor(desc[1]))
    if isinstance(desc, dict):
        if "product" in desc:
            a, b = desc["product"]
            return product_structure(structure_from_descriptor(a), structure_from_descriptor(b),
                                     lexicographic=desc.get("order") == "lexicographic")
        if "vcsp" in desc:
            return valued_structure(desc["vcsp"])
        if "finite" in desc:
            return finite_structure(desc["finite"])
    raise UnknownStructure(f"cannot build a structure from {desc!r}")


# ------------------------------------------------ conditioning, uniform, ⋄


def cond_div(num, den, s: PlausibilityStructure):
    """Canonical conditioning: the largest p with ``num = p (x) den``."""
    if not s.conditionable or s.divide is None:
        raise ConditioningDomainError(f"structure {s.name} is not conditionable")
    if den == s.zero_p:
        raise UndefinedConditioning("conditioning on a zero plausibility")
    if not s.order_p(num, den):
        raise ConditioningDomainError(f"{num!r} is not below {den!r}")
    return s.divide(num, den)


def uniform(n: int, s: PlausibilityStructure):
    """The element whose n-fold sum is the unit plausibility."""
    if not s.conditionable or s.uniform_of is None:
        raise ConditioningDomainError(f"structure {s.name} is not conditionable")
    if n < 1:
        raise AlgebraError("uniform needs n >= 1")
    return s.uniform_of(n)


def truncate(b: bool, e):
    return e if b else UNFEASIBLE


def elim_ext(op):
    """Extension of an elimination operator where ⋄ is the identity."""
    def f(a, b):
        if a is UNFEASIBLE:
            return b
        if b is UNFEASIBLE:
            return a
        return op(a, b)
    return f


def comb_ext(op):
    """Extension of a combination operator where ⋄ is absorbing."""
    def f(a, b):
        if a is UNFEASIBLE or b is UNFEASIBLE:
            return UNFEASIBLE
        return op(a, b)
    return f


def fold(op, values, start=UNFEASIBLE):
    """Fold with the elimination extension: ⋄ operands are skipped."""
    acc = start
    for v in values:
        if v is UNFEASIBLE:
            continue
        acc = v if acc is UNFEASIBLE else op(acc, v)
    return acc


def elimination_operator(s: ExpectedUtilityStructure, op: str):
    """Binary operator for a Sov operator name."""
    if op == ELIM:
        return s.elim_u
    if op in (MIN, MAX):
        if not s.util.total:
            raise AlgebraError(f"{s.name}: min/max need a total utility order")
        return lambda a, b: s.opt(op, a, b)
    raise AlgebraError(f"unknown operator {op!r}")


# ------------------------------------------------------------ axiom checking


@dataclass
class AxiomResult:
    name: str
    passed: bool
    checked: int
    counterexample: Optional[tuple] = None


@dataclass
class AxiomReport:
    structure: str
    exhaustive: bool
    results: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failures(self):
        return [r for r in self.results if not r.passed]

    def lines(self):
        out = []
        for r in self.results:
            status = "PASS" if r.passed else "FAIL"
            line = f"{self.structure:<20} {r.name:<28} {status} ({r.checked} checked)"
            if r.counterexample is not None:
                line += " counterexample " + ", ".join(value_text(v) for v in r.counterexample)
            out.append(line)
        return out


def _axioms(s: ExpectedUtilityStructure):
    P, U = s.plaus, s.util
    pp, pt, p0, p1, pleq = P.elim_p, P.comb_p, P.zero_p, P.one_p, P.order_p
    ut, u1, uleq = U.comb_u, U.one_u, U.order_u
    up, u0, pu = s.elim_u, s.zero_u, s.comb_pu

    def implies(a, b):
        return (not a) or b

    ax = [
        ("p.plus.commutative", "pp", lambda a, b: pp(a, b) == pp(b, a)),
        ("p.plus.associative", "ppp", lambda a, b, c: pp(pp(a, b), c) == pp(a, pp(b, c))),
        ("p.plus.identity", "p", lambda a: pp(a, p0) == a and pp(p0, a) == a),
        ("p.times.commutative", "pp", lambda a, b: pt(a, b) == pt(b, a)),
        ("p.times.associative", "ppp", lambda a, b, c: pt(pt(a, b), c) == pt(a, pt(b, c))),
        ("p.times.identity", "p", lambda a: pt(a, p1) == a and pt(p1, a) == a),
        ("p.annihilator", "p", lambda a: pt(a, p0) == p0 and pt(p0, a) == p0),
        ("p.distributivity", "ppp", lambda a, b, c: pt(a, pp(b, c)) == pp(pt(a, b), pt(a, c))),
        ("p.zero.minimum", "p", lambda a: pleq(p0, a)),
        ("p.plus.monotone", "ppp", lambda a, b, c: implies(pleq(a, b), pleq(pp(a, c), pp(b, c)))),
        ("p.times.monotone", "ppp", lambda a, b, c: implies(pleq(a, b), pleq(pt(a, c), pt(b, c)))),
        ("u.times.commutative", "uu", lambda a, b: ut(a, b) == ut(b, a)),
        ("u.times.associative", "uuu", lambda a, b, c: ut(ut(a, b), c) == ut(a, ut(b, c))),
        ("u.times.identity", "u", lambda a: ut(a, u1) == a and ut(u1, a) == a),
        ("u.plus.commutative", "uu", lambda a, b: up(a, b) == up(b, a)),
        ("u.plus.associative", "uuu", lambda a, b, c: up(up(a, b), c) == up(a, up(b, c))),
        ("u.plus.identity", "u", lambda a: up(a, u0) == a and up(u0, a) == a),
        ("u.plus.monotone", "uuu", lambda a, b, c: implies(uleq(a, b), uleq(up(a, c), up(b, c)))),
        ("pu.distributes.plus_u", "puu", lambda p, a, b: pu(p, up(a, b)) == up(pu(p, a), pu(p, b))),
        ("pu.distributes.plus_p", "ppu", lambda p, q, u: pu(pp(p, q), u) == up(pu(p, u), pu(q, u))),
        ("pu.linearity", "ppu", lambda p, q, u: pu(p, pu(q, u)) == pu(pt(p, q), u)),
        ("pu.zero", "u", lambda u: pu(p0, u) == u0),
        ("pu.one", "u", lambda u: pu(p1, u) == u),
        ("pu.right.monotone", "puu", lambda p, a, b: implies(uleq(a, b), uleq(pu(p, a), pu(p, b)))),
    ]
    if U.total:
        ax.append(("u.order.total", "uu", lambda a, b: uleq(a, b) or uleq(b, a)))
    if s.ax1:
        ax.append(("ax1", "pp", lambda a, b: U.contains(a) and U.contains(b)
                   and pp(a, b) == up(a, b) and pt(a, b) == ut(a, b) == pu(a, b)
                   and pleq(a, b) == uleq(a, b)))
    if s.ax2:
        ax.append(("ax2", "uu", lambda a, b: up(a, b) == ut(a, b)))
    if P.conditionable:
        def roundtrip(p, d):
            if d == p0 or not pleq(p, p1):
                return True
            num = pt(p, d)
            return pt(cond_div(num, d, P), d) == num
        ax.append(("p.conditioning.roundtrip", "pp", roundtrip))
    return ax


def check_axioms(s: ExpectedUtilityStructure, n_samples: int = 1000, seed: int = 0,
                 exhaustive: Optional[bool] = None) -> AxiomReport:
    """Check the semiring, monoid, semimodule and monotonicity axioms.

    Finite structures are checked exhaustively; others on ``n_samples`` seeded
    random tuples per axiom. A failure carries its counterexample tuple.
    """
    P, U = s.plaus, s.util
    finite = P.elements is not None and U.elements is not None
    if exhaustive is None:
        exhaustive = finite
    if exhaustive and not finite:
        raise AlgebraError(f"{s.name} has no finite element list")
    if not exhaustive and (P.sample is None or U.sample is None):
        raise AlgebraError(f"{s.name} has no sampler")
    report = AxiomReport(structure=s.name, exhaustive=exhaustive)
    rng = random.Random(seed)
    for name, kinds, pred in _axioms(s):
        if exhaustive:
            pools = [P.elements if k == "p" else U.elements for k in kinds]
            tuples = itertools.product(*pools)
        else:
            samplers = [P.sample if k == "p" else U.sample for k in kinds]
            tuples = (tuple(f(rng) for f in samplers) for _ in range(n_samples))
        checked, bad = 0, None
        for args in tuples:
            checked += 1
            try:
                ok = pred(*args)
            except (ArithmeticError, AlgebraError, KeyError, TypeError):
                ok = False
            if not ok:
                bad = args
                break
        report.results.append(AxiomResult(name, bad is None, checked, bad))
    if P.conditionable:
        n_ok, bad = True, None
        for n in range(1, 65):
            acc = P.zero_p
            p = uniform(n, P)
            for _ in range(n):
                acc = P.elim_p(acc, p)
            if acc != P.one_p:
                n_ok, bad = False, (n,)
                break
        report.results.append(AxiomResult("p.uniform", n_ok, 64, bad))
    return report


# ----------------------------------------------------------- literal grammar


def parse_value(x):
    """Parse a literal: int, ``a/b``, decimal, ``inf``, ``-inf``, booleans, pairs, ``unfeasible``."""
    if isinstance(x, bool):
        return x
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x
    if isinstance(x, float):
        if math.isinf(x):
            return INF if x > 0 else NEG_INF
        if math.isnan(x):
            raise ParseError("NaN is not a value")
        return Fraction(repr(x))
    if isinstance(x, (list, tuple)):
        if len(x) != 2:
            raise ParseError(f"pair literal needs two components: {x!r}")
        return (parse_value(x[0]), parse_value(x[1]))
    if isinstance(x, str):
        t = x.strip()
        low = t.lower()
        if low in ("inf", "+inf", "infinity"):
            return INF
        if low in ("-inf", "-infinity"):
            return NEG_INF
        if low in ("true", "t"):
            return True
        if low in ("false", "f"):
            return False
        if low == "unfeasible":
            return UNFEASIBLE
        try:
            v = Fraction(t)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"bad value literal {x!r}") from exc
        return int(v) if v.denominator == 1 else v
    raise ParseError(f"bad value literal {x!r}")


def format_value(v):
    """JSON-ready form of a value; rationals are exact strings, never decimals."""
    if v is UNFEASIBLE:
        return "unfeasible"
    if isinstance(v, bool):
        return v
    if isinstance(v, tuple):
        return [format_value(v[0]), format_value(v[1])]
    if type(v) is float:
        if v == INF:
            return "inf"
        if v == NEG_INF:
            return "-inf"
        raise AlgebraError(f"unexpected float value {v!r}")
    if isinstance(v, Fraction):
        return int(v) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(v, int):
        return v
    if isinstance(v, str):
        return v
    raise AlgebraError(f"cannot format value {v!r}")


def value_text(v) -> str:
    if isinstance(v, tuple):
        return "[" + value_text(v[0]) + "," + value_text(v[1]) + "]"
    f = format_value(v)
    if isinstance(f, bool):
        return "true" if f else "false"
    return str(f)
