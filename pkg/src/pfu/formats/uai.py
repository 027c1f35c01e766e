"""UAI Bayesian network files and evidence files."""

from __future__ import annotations

from fractions import Fraction

from ..encoders.bn import BnInstance
from ..errors import EncodingError, ParseError


def parse_uai(text: str) -> BnInstance:
    """Parse a ``BAYES`` file: variables ``v0..v{n-1}`` with labels ``0..k-1``.

    Each function scope lists the parents first and the child last, so there
    is exactly one table per variable.
    """
    tokens = text.split()
    if not tokens:
        raise ParseError("empty UAI file")
    if tokens[0].upper() != "BAYES":
        raise ParseError(f"unsupported network type {tokens[0]!r}")
    pos = 1

    def take_int():
        nonlocal pos
        if pos >= len(tokens):
            raise ParseError("unexpected end of file")
        try:
            v = int(tokens[pos])
        except ValueError as e:
            raise ParseError(f"expected an integer, got {tokens[pos]!r}") from e
        pos += 1
        return v

    n = take_int()
    cards = [take_int() for _ in range(n)]
    if any(k < 1 for k in cards):
        raise ParseError("cardinalities must be positive")
    m = take_int()
    scopes = []
    for _ in range(m):
        k = take_int()
        scope = [take_int() for _ in range(k)]
        if not scope or any(not 0 <= x < n for x in scope) or len(set(scope)) != k:
            raise ParseError(f"bad function scope {scope}")
        scopes.append(scope)
    tables = []
    for scope in scopes:
        size = take_int()
        expect = 1
        for x in scope:
            expect *= cards[x]
        if size != expect:
            raise ParseError(f"table for scope {scope} has {size} entries, expected {expect}")
        vals = tokens[pos:pos + size]
        if len(vals) != size:
            raise ParseError("unexpected end of file in a table")
        pos += size
        try:
            tables.append([Fraction(v) for v in vals])
        except (ValueError, ZeroDivisionError) as e:
            raise ParseError(f"bad probability in table for scope {scope}") from e
    if pos != len(tokens):
        raise ParseError("trailing tokens after the last table")

    children = [s[-1] for s in scopes]
    if sorted(children) != list(range(n)):
        raise ParseError("each variable needs exactly one table, with the variable last in its scope")
    name = [f"v{i}" for i in range(n)]
    variables = {name[i]: tuple(str(j) for j in range(cards[i])) for i in range(n)}
    parents, cpts = {}, {}
    for scope, table in zip(scopes, tables):
        x = name[scope[-1]]
        parents[x] = tuple(name[p] for p in scope[:-1])
        cpts[x] = table
    b = BnInstance(variables, parents, cpts)
    try:
        b.check()
    except EncodingError as e:
        raise ParseError(str(e)) from e
    return b


def parse_evidence(text: str) -> dict:
    """``k v1 x1 ... vk xk``, optionally preceded by a sample count of 1."""
    try:
        nums = [int(t) for t in text.split()]
    except ValueError as e:
        raise ParseError("evidence must be integers") from e
    if not nums:
        return {}
    if len(nums) == 2 * nums[0] + 1:
        body = nums[1:]
    elif nums[0] == 1 and len(nums) >= 2 and len(nums) == 2 * nums[1] + 2:
        body = nums[2:]
    else:
        raise ParseError("malformed evidence")
    return {f"v{body[i]}": str(body[i + 1]) for i in range(0, len(body), 2)}
