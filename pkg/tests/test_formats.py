import json
from fractions import Fraction

import pytest

from pfu.algebra import builtin_structure, product_structure
from pfu.dinner import dinner_network, dinner_query
from pfu.encoders import CnfInstance, encode_bn, encode_cnf
from pfu.errors import ParseError
from pfu.formats import (
    answer_from_dict, answer_to_dict, csp_from_dict, dumps, format_cnf, id_from_dict,
    mdp_from_dict, network_from_dict, network_to_dict, parse_cnf, parse_evidence, parse_uai,
    query_from_dict, query_to_dict, read_json,
)
from pfu.network import validate_network
from pfu.query import BoundedQuery
from pfu.solvers import tree_search


def test_network_round_trip():
    n = dinner_network()
    doc = json.loads(dumps(network_to_dict(n)))
    back = network_from_dict(doc)
    assert back.variables == n.variables
    assert [f.table for f in back.P + back.F + back.U] == [f.table for f in n.P + n.F + n.U]
    assert dumps(network_to_dict(back)) == dumps(doc)


def test_product_structure_round_trip():
    n = dinner_network()
    doc = network_to_dict(n)
    doc["structure"] = product_structure(builtin_structure("prob-sat"),
                                         builtin_structure("kappa")).descriptor
    s = network_from_dict({**doc, "P": [], "F": [], "U": []}).structure
    assert s.plaus.one_p == (1, 0)


def test_fixture_matches_builder(data_dir):
    n = network_from_dict(read_json(data_dir / "dinner.json"))
    assert validate_network(n).ok
    for k in range(1, 5):
        q = query_from_dict(read_json(data_dir / f"query{k}.json"), n)
        assert tree_search(q).answer == tree_search(dinner_query(f"query{k}")).answer


def test_malformed_network_documents():
    with pytest.raises(ParseError):
        network_from_dict({"variables": []})
    doc = network_to_dict(dinner_network())
    doc["U"][1]["table"] = ["ten", 0]
    with pytest.raises(ParseError):
        network_from_dict(doc)


def test_read_json_errors(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{not json")
    with pytest.raises(ParseError):
        read_json(p)
    with pytest.raises(ParseError):
        read_json(tmp_path / "missing.json")


def test_query_and_answer_round_trip():
    q = dinner_query("query2")
    r = tree_search(q)
    assert query_from_dict(query_to_dict(q), q.network) == q
    doc = json.loads(dumps(answer_to_dict(q, r.answer, r.policy)))
    answer, policy = answer_from_dict(doc, q.network)
    assert answer == r.answer and policy == r.policy
    q4 = dinner_query("query4")
    r4 = tree_search(q4)
    a4, _ = answer_from_dict(json.loads(dumps(answer_to_dict(q4, r4.answer, r4.policy))), q4.network)
    assert a4 == r4.answer


def test_bounded_query_document():
    q = encode_cnf(CnfInstance(2, [[1, 2]], [("random", 1), ("random", 2)], Fraction(1, 2)))
    doc = json.loads(dumps(query_to_dict(q)))
    assert doc["threshold"] == "1/2"
    back = query_from_dict(doc, q.query.network)
    assert isinstance(back, BoundedQuery) and back.threshold == Fraction(1, 2)


def test_dimacs(data_dir):
    c = parse_cnf((data_dir / "qbf.qdimacs").read_text())
    assert c.n_vars == 3 and c.clauses == [[-1, 3], [2, 3]]
    assert c.prefix == [("exists", 1), ("forall", 2), ("exists", 3)]
    again = parse_cnf(format_cnf(c))
    assert (again.clauses, again.prefix) == (c.clauses, c.prefix)
    s = parse_cnf((data_dir / "majsat.ssat").read_text())
    assert s.threshold == Fraction(1, 2) and s.prefix == [("random", 1), ("random", 2)]
    assert parse_cnf(format_cnf(s)).threshold == Fraction(1, 2)


@pytest.mark.parametrize("text", [
    "1 2 0",                              # no header
    "p cnf 2 1\n1 3 0",                   # literal out of range
    "p cnf 2 2\n1 0",                     # clause count
    "p cnf 2 1\n1 0\ne 1 0",              # prefix after clauses
    "p cnf 2 1\nx 1 0\n1 0",              # unknown line
    "p cnf 2 1\nt 3/2\n1 0",              # threshold outside [0, 1]
])
def test_dimacs_errors(text):
    with pytest.raises(ParseError):
        parse_cnf(text)


def test_dimacs_allowed_lines():
    with pytest.raises(ParseError):
        parse_cnf("p cnf 1 1\ne 1 0\n1 0", allow=())
    with pytest.raises(ParseError):
        parse_cnf("p cnf 1 1\nr 1 0\n1 0", allow=("e", "a"))


def test_uai(data_dir):
    b = parse_uai((data_dir / "chain.uai").read_text())
    assert list(b.variables) == ["v0", "v1"] and b.parents["v1"] == ("v0",)
    assert b.cpts["v0"] == [Fraction(3, 10), Fraction(7, 10)]
    b.task, b.targets = "marginal", ("v1",)
    r = tree_search(encode_bn(b))
    assert r.answer.value({"v1": "1"}) == Fraction(41, 100)


@pytest.mark.parametrize("text", [
    "",
    "MARKOV\n1\n2\n1\n1 0\n2\n0.5 0.5",
    "BAYES\n1\n2\n1\n1 0\n3\n0.5 0.5 0",
    "BAYES\n2\n2 2\n1\n1 0\n2\n0.5 0.5",
])
def test_uai_errors(text):
    with pytest.raises(ParseError):
        parse_uai(text)


def test_evidence():
    assert parse_evidence("1 1 1") == {"v1": "1"}
    assert parse_evidence("2 0 1 1 0") == {"v0": "1", "v1": "0"}
    assert parse_evidence("1 2 0 1 1 0") == {"v0": "1", "v1": "0"}
    assert parse_evidence("") == {}
    with pytest.raises(ParseError):
        parse_evidence("2 0 1")
    with pytest.raises(ParseError):
        parse_evidence("one")


def test_instance_documents(data_dir):
    c = csp_from_dict(read_json(data_dir / "csp_neq.json"))
    assert c.constraints[0].table == [False, True, True, False]
    d = id_from_dict(read_json(data_dir / "id_dinner.json"))
    assert d.decision_order()
    m = mdp_from_dict(read_json(data_dir / "mdp.json"))
    assert m.horizon == 3
    for reader in (csp_from_dict, id_from_dict, mdp_from_dict):
        with pytest.raises(ParseError):
            reader({})
