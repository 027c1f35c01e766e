"""Command-line front end: validate, solve, encode, check-algebra, oracle-diff."""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass, field
from typing import Optional

from .algebra import (
    CATALOG, builtin_structure, check_axioms, parse_value, structure_from_descriptor, value_text,
)
from .encoders import encode_bn, encode_cnf, encode_csp, encode_id, encode_mdp
from .encoders.bn import EVIDENCE, MAP, MARGINAL, MPE
from .errors import (
    AlgebraError, CapExceeded, EncodingError, OracleConsistencyError, ParseError, PfuError,
    QueryValidationError,
)
from .formats import (
    answer_to_dict, csp_from_dict, dumps, id_from_dict, mdp_from_dict, network_from_dict,
    network_to_dict, parse_cnf, parse_evidence, parse_uai, query_from_dict, query_to_dict,
    read_json,
)
from .network import DEFAULT_CAP, validate_network
from .query import BoundedQuery, apply_threshold, bounded_query, policy_differences
from .solvers import ALGORITHMS, applicable
from .solvers.oracle import ORACLE_CAP

EXIT_OK, EXIT_PARSE, EXIT_INVALID, EXIT_CAP, EXIT_MISMATCH = 0, 1, 2, 3, 4
FORMATS = ("dimacs", "qdimacs", "ssat", "uai", "csp", "id", "mdp")


class CliError(Exception):
    def __init__(self, code: int, message: str):
        super().__init__(message)
        self.code = code


@dataclass
class RunConfig:
    command: str
    inputs: list = field(default_factory=list)
    algorithm: str = "tree"
    threshold: Optional[str] = None
    seed: int = 0
    cap: int = DEFAULT_CAP
    oracle_cap: int = ORACLE_CAP
    out: Optional[str] = None
    samples: int = 1000


# ----------------------------------------------------------------- loading


def load_network(path, cap=DEFAULT_CAP, out=None):
    n = network_from_dict(read_json(path))
    rep = validate_network(n, cap)
    if not rep.ok:
        for line in rep.lines():
            print(line, file=out or sys.stdout)
        raise CliError(EXIT_INVALID, "network failed validation: " + ", ".join(rep.failed_clauses))
    return n, rep


def load_query(path, n, threshold=None):
    try:
        q = query_from_dict(read_json(path), n)
    except QueryValidationError as e:
        raise CliError(EXIT_INVALID, "query violates " + "; ".join(
            f"{c}: {', '.join(map(str, vs))}" for c, vs in e.violations)) from e
    if threshold is not None:
        inner = q.query if isinstance(q, BoundedQuery) else q
        try:
            q = bounded_query(inner, parse_value(threshold))
        except (QueryValidationError, ParseError) as e:
            raise CliError(EXIT_INVALID, f"bad threshold {threshold!r}") from e
    return q


def _write(path, text):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _answer_lines(answer):
    out = []
    for a, v in answer.items():
        label = " ".join(f"{x}={lab}" for x, lab in zip(answer.names, a))
        out.append(f"{label + ' ' if label else ''}-> {value_text(v)}")
    return out


def _choice_text(ch) -> str:
    if ch is None:
        return "none"
    return ",".join(map(str, ch)) if isinstance(ch, tuple) else value_text(ch)


def _policy_lines(policy):
    out = []
    for i in sorted(policy.rules):
        r = policy.rules[i]
        out.append(f"rule {i} ({r.op} {','.join(r.choice)} | {','.join(r.context) or '-'})")
        for ctx, ch in r.entries.items():
            lhs = ",".join(map(str, ctx)) or "-"
            out.append(f"  {lhs} => {_choice_text(ch)}")
    return out


# ---------------------------------------------------------------- commands


def cmd_validate(cfg: RunConfig) -> int:
    n, rep = load_network(cfg.inputs[0], cfg.cap)
    for line in rep.lines():
        print(line)
    if len(cfg.inputs) > 1:
        q = load_query(cfg.inputs[1], n)
        inner = q.query if isinstance(q, BoundedQuery) else q
        print("query ok: " + " ".join(f"({p.op},{{{','.join(p.vars)}}})" for p in inner.sov))
    return EXIT_OK


def _run(name, q, cfg):
    fn = ALGORITHMS[name]
    if name == "oracle":
        return fn(q, cfg.oracle_cap)
    if name == "ve":
        return fn(q, cfg.cap)
    return fn(q)


def cmd_solve(cfg: RunConfig) -> int:
    n, _ = load_network(cfg.inputs[0], cfg.cap)
    q = load_query(cfg.inputs[1], n, cfg.threshold)
    inner = q.query if isinstance(q, BoundedQuery) else q
    ok = applicable(n.structure)
    if cfg.algorithm == "all":
        names = ok
    elif cfg.algorithm not in ok:
        raise CliError(EXIT_INVALID, f"algorithm {cfg.algorithm} does not apply to {n.structure.name}")
    else:
        names = [cfg.algorithm]
    results = {name: _run(name, inner, cfg) for name in names}
    first = names[0]
    res = results[first]
    for name in names[1:]:
        if results[name].answer != res.answer:
            for line in _answer_lines(res.answer):
                print(f"{first}: {line}")
            for line in _answer_lines(results[name].answer):
                print(f"{name}: {line}")
            raise CliError(EXIT_MISMATCH, f"answers of {first} and {name} differ")
    answer = res.answer
    theta = q.threshold if isinstance(q, BoundedQuery) else None
    if theta is not None:
        answer = apply_threshold(answer, theta, n.structure)
    for line in _answer_lines(answer):
        print(line)
    for line in _policy_lines(res.policy):
        print(line)
    if cfg.out:
        doc = answer_to_dict(inner, answer, res.policy, theta, names,
                             {name: r.stats.as_dict() for name, r in results.items()})
        _write(cfg.out, dumps(doc))
    return EXIT_OK


def cmd_oracle_diff(cfg: RunConfig) -> int:
    n, _ = load_network(cfg.inputs[0], cfg.cap)
    q = load_query(cfg.inputs[1], n)
    inner = q.query if isinstance(q, BoundedQuery) else q
    try:
        sem = ALGORITHMS["oracle"](inner, cfg.oracle_cap)
    except AlgebraError as e:
        raise CliError(EXIT_INVALID, str(e)) from e
    op = ALGORITHMS["tree"](inner)
    diffs = policy_differences(sem.policy, op.policy)
    same = sem.answer == op.answer
    print(f"answers {'agree' if same else 'differ'}")
    for line in _answer_lines(sem.answer):
        print(f"oracle {line}")
    if not same:
        for line in _answer_lines(op.answer):
            print(f"tree   {line}")
    print(f"policy differences: {len(diffs)}")
    for i, ctx, a, b in diffs:
        where = ",".join(map(str, ctx)) or "-"
        print(f"  rule {i} at {where}: oracle {_choice_text(a)} tree {_choice_text(b)}")
    return EXIT_OK if same and not diffs else EXIT_MISMATCH


def _read_text(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as e:
        raise ParseError(f"{path}: {e}") from e


def _evidence(spec, text_reader=_read_text):
    """``x=a,y=b`` or a UAI evidence file."""
    if spec is None:
        return {}
    if "=" in spec:
        out = {}
        for item in spec.split(","):
            x, _, v = item.partition("=")
            out[x.strip()] = v.strip()
        return out
    return parse_evidence(text_reader(spec))


def encode_source(fmt, path, task=None, targets=None, evidence=None, explain=None):
    """Parse ``path`` in ``fmt`` and return its encoded query."""
    if fmt in ("dimacs", "qdimacs", "ssat"):
        allow = {"dimacs": (), "qdimacs": ("e", "a"), "ssat": ("e", "a", "r", "t")}[fmt]
        return encode_cnf(parse_cnf(_read_text(path), allow))
    if fmt == "uai":
        b = parse_uai(_read_text(path))
        b.evidence = _evidence(evidence)
        b.task = task or (MARGINAL if targets else EVIDENCE)
        if b.task not in (MARGINAL, EVIDENCE, MPE, MAP):
            raise EncodingError(f"unknown task {b.task!r}")
        b.targets = tuple(targets.split(",")) if targets else ()
        b.explanation = tuple(explain.split(",")) if explain else ()
        return encode_bn(b)
    if fmt == "csp":
        c = csp_from_dict(read_json(path))
        default = {"hard": "consistency", "valued": "optimize", "quantified": "quantified",
                   "stochastic": "stochastic-policy"}.get(c.flavor)
        return encode_csp(c, task or default)
    if fmt == "id":
        return encode_id(id_from_dict(read_json(path)))
    if fmt == "mdp":
        return encode_mdp(mdp_from_dict(read_json(path)))
    raise CliError(EXIT_INVALID, f"unknown format {fmt!r}")


def cmd_encode(cfg: RunConfig, fmt, task, targets, evidence, explain) -> int:
    try:
        q = encode_source(fmt, cfg.inputs[0], task, targets, evidence, explain)
    except (EncodingError, QueryValidationError) as e:
        raise CliError(EXIT_INVALID, f"cannot encode: {e}") from e
    inner = q.query if isinstance(q, BoundedQuery) else q
    net_doc, q_doc = network_to_dict(inner.network), query_to_dict(q)
    # emitted documents must read back to the same objects
    n2 = network_from_dict(net_doc)
    if network_to_dict(n2) != net_doc or query_to_dict(query_from_dict(q_doc, n2)) != q_doc:
        raise CliError(EXIT_INVALID, "encoded documents do not round-trip")
    rep = validate_network(n2, cfg.cap)
    if not rep.ok:
        raise CliError(EXIT_INVALID, "encoded network fails validation: " + ", ".join(rep.failed_clauses))
    prefix = cfg.out or "encoded"
    _write(f"{prefix}.net.json", dumps(net_doc))
    _write(f"{prefix}.query.json", dumps(q_doc))
    n = inner.network
    print(f"network: {len(n.variables)} variables ({len(n.dec_vars)} decision, "
          f"{len(n.env_vars)} environment), {len(n.dag.components)} components, "
          f"{len(n.P)} P, {len(n.F)} F, {len(n.U)} U on {n.structure.name}")
    print("query: " + " ".join(f"({p.op},{{{','.join(p.vars)}}})" for p in inner.sov)
          + (f" threshold {value_text(q.threshold)}" if isinstance(q, BoundedQuery) else ""))
    print(f"wrote {prefix}.net.json {prefix}.query.json")
    return EXIT_OK


def cmd_check_algebra(cfg: RunConfig, structure_path=None, names=None) -> int:
    if structure_path:
        try:
            structures = [structure_from_descriptor(read_json(structure_path))]
        except (AlgebraError, KeyError, TypeError, ValueError) as e:
            raise CliError(EXIT_PARSE, f"bad structure file: {e}") from e
    else:
        structures = [builtin_structure(x) for x in CATALOG if not names or x in names]
    failed = 0
    for s in structures:
        rep = check_axioms(s, cfg.samples, cfg.seed)
        for line in rep.lines():
            print(line)
        failed += not rep.ok
    print(f"{len(structures) - failed}/{len(structures)} structures pass")
    return EXIT_OK if not failed else EXIT_INVALID


# ------------------------------------------------------------------ parser


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="pfu", description="Plausibility-feasibility-utility networks.")
    sub = p.add_subparsers(dest="command", required=True)

    def caps(sp):
        sp.add_argument("--cap", type=int, default=DEFAULT_CAP, help="largest table materialized")
        sp.add_argument("--oracle-cap", type=int, default=ORACLE_CAP,
                        help="most variables the oracle accepts")
        sp.add_argument("--seed", type=int, default=0)

    v = sub.add_parser("validate", help="check a network and optionally a query")
    v.add_argument("network")
    v.add_argument("query", nargs="?")
    caps(v)

    s = sub.add_parser("solve", help="answer a query")
    s.add_argument("network")
    s.add_argument("query")
    s.add_argument("--algo", default="tree", choices=sorted(ALGORITHMS) + ["all"])
    s.add_argument("--threshold", help="answer 'value >= threshold' instead of the value")
    s.add_argument("--out", help="write the answer document here")
    caps(s)

    e = sub.add_parser("encode", help="translate another formalism into network and query files")
    e.add_argument("--from", dest="fmt", required=True, choices=FORMATS)
    e.add_argument("input")
    e.add_argument("--out", required=True, help="prefix of the written files")
    e.add_argument("--task", help="csp or bn task")
    e.add_argument("--targets", help="comma-separated marginal targets (uai)")
    e.add_argument("--evidence", help="x=a,y=b or a UAI evidence file")
    e.add_argument("--explain", help="comma-separated MAP variables (uai)")
    caps(e)

    c = sub.add_parser("check-algebra", help="check the structure axioms")
    c.add_argument("--samples", type=int, default=1000)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--structure", help="JSON structure descriptor to check instead of the catalog")
    c.add_argument("--name", action="append", help="restrict to catalog rows with this name")

    o = sub.add_parser("oracle-diff", help="compare the semantic oracle with tree search")
    o.add_argument("network")
    o.add_argument("query")
    caps(o)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(args.command, seed=getattr(args, "seed", 0),
                    cap=getattr(args, "cap", DEFAULT_CAP),
                    oracle_cap=getattr(args, "oracle_cap", ORACLE_CAP),
                    out=getattr(args, "out", None))
    try:
        if args.command == "validate":
            cfg.inputs = [args.network] + ([args.query] if args.query else [])
            return cmd_validate(cfg)
        if args.command == "solve":
            cfg.inputs = [args.network, args.query]
            cfg.algorithm, cfg.threshold = args.algo, args.threshold
            return cmd_solve(cfg)
        if args.command == "encode":
            cfg.inputs = [args.input]
            return cmd_encode(cfg, args.fmt, args.task, args.targets, args.evidence, args.explain)
        if args.command == "check-algebra":
            cfg.samples = args.samples
            return cmd_check_algebra(cfg, args.structure, args.name)
        if args.command == "oracle-diff":
            cfg.inputs = [args.network, args.query]
            return cmd_oracle_diff(cfg)
    except CliError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.code
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_PARSE
    except CapExceeded as e:
        print(f"cap exceeded: {e}", file=sys.stderr)
        return EXIT_CAP
    except OracleConsistencyError as e:
        print(f"mismatch: {e}", file=sys.stderr)
        return EXIT_MISMATCH
    except PfuError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
