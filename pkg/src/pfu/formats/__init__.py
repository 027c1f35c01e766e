"""Readers and writers for PFU-JSON and the classical input formats."""

from .dimacs import format_cnf, parse_cnf
from .instances import csp_from_dict, id_from_dict, mdp_from_dict
from .pfujson import (
    answer_from_dict, answer_to_dict, dumps, network_from_dict, network_to_dict, query_from_dict,
    query_to_dict, read_json, sov_from_dict,
)
from .uai import parse_evidence, parse_uai

__all__ = [
    "answer_from_dict", "answer_to_dict", "csp_from_dict", "dumps", "format_cnf", "id_from_dict",
    "mdp_from_dict", "network_from_dict", "network_to_dict", "parse_cnf", "parse_evidence",
    "parse_uai", "query_from_dict", "query_to_dict", "read_json", "sov_from_dict",
]
