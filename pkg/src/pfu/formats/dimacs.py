"""DIMACS CNF, QDIMACS and the SSAT extension.

Prefix lines are ``e``/``a``/``r`` followed by variables and a final 0;
``r`` marks randomized variables (probability 1/2). An optional line
``t <value>`` sets the threshold of a bounded query.
"""

from __future__ import annotations

from fractions import Fraction

from ..encoders.sat import EXISTS, FORALL, RANDOM, CnfInstance
from ..errors import ParseError

_PREFIX = {"e": EXISTS, "a": FORALL, "r": RANDOM}


def parse_cnf(text: str, allow=("e", "a", "r", "t")) -> CnfInstance:
    """Parse CNF text; ``allow`` lists the extension line kinds accepted."""
    n_vars = n_clauses = None
    prefix, blocks, clauses, current = [], [], [], []
    threshold = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        head, *rest = line.split()
        if head == "p":
            if n_vars is not None or len(rest) != 3 or rest[0] != "cnf":
                raise ParseError(f"line {lineno}: bad problem line {line!r}")
            n_vars, n_clauses = _ints(rest[1:], lineno)
            continue
        if n_vars is None:
            raise ParseError(f"line {lineno}: content before the problem line")
        if head in _PREFIX or head == "t":
            if head not in allow:
                raise ParseError(f"line {lineno}: '{head}' lines are not allowed in this format")
            if current:
                raise ParseError(f"line {lineno}: prefix line inside a clause")
            if head == "t":
                if len(rest) != 1 or threshold is not None:
                    raise ParseError(f"line {lineno}: bad threshold line")
                try:
                    threshold = Fraction(rest[0])
                except (ValueError, ZeroDivisionError) as e:
                    raise ParseError(f"line {lineno}: bad threshold {rest[0]!r}") from e
                continue
            if clauses:
                raise ParseError(f"line {lineno}: prefix after clauses")
            xs = _ints(rest, lineno)
            if not xs or xs[-1] != 0 or 0 in xs[:-1] or any(x < 0 for x in xs):
                raise ParseError(f"line {lineno}: prefix line must list positive variables and end with 0")
            blocks.append((_PREFIX[head], xs[:-1]))
            prefix += [(_PREFIX[head], x) for x in xs[:-1]]
            continue
        for lit in _ints([head] + rest, lineno):
            if lit == 0:
                clauses.append(current)
                current = []
            else:
                current.append(lit)
    if n_vars is None:
        raise ParseError("missing problem line")
    if current:
        clauses.append(current)
    if len(clauses) != n_clauses:
        raise ParseError(f"problem line announces {n_clauses} clauses, found {len(clauses)}")
    inst = CnfInstance(n_vars, clauses, prefix or None, threshold)
    try:
        inst.check()
    except Exception as e:
        raise ParseError(str(e)) from e
    return inst


def _ints(tokens, lineno):
    try:
        return [int(t) for t in tokens]
    except ValueError as e:
        raise ParseError(f"line {lineno}: expected integers") from e


def format_cnf(c: CnfInstance) -> str:
    lines = [f"p cnf {c.n_vars} {len(c.clauses)}"]
    if c.prefix:
        code = {v: k for k, v in _PREFIX.items()}
        blocks = []
        for qt, x in c.prefix:
            if blocks and blocks[-1][0] == qt:
                blocks[-1][1].append(x)
            else:
                blocks.append((qt, [x]))
        lines += [f"{code[qt]} {' '.join(map(str, xs))} 0" for qt, xs in blocks]
    if c.threshold is not None:
        lines.append(f"t {c.threshold}")
    lines += [" ".join(map(str, cl + [0])) for cl in c.clauses]
    return "\n".join(lines) + "\n"
