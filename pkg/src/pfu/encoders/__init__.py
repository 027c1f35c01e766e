"""Translations of classical formalisms into PFU networks and queries."""

from .bn import BnInstance, encode_bn
from .csp import Constraint, CspInstance, encode_csp, model_count
from .influence import ChanceNode, DecisionNode, IdInstance, UtilityNode, encode_id
from .mdp import MdpInstance, PomdpInstance, encode_mdp, encode_pomdp
from .sat import CnfInstance, encode_cnf

__all__ = [
    "BnInstance", "ChanceNode", "CnfInstance", "Constraint", "CspInstance", "DecisionNode",
    "IdInstance", "MdpInstance", "PomdpInstance", "UtilityNode", "encode_bn", "encode_cnf",
    "encode_csp", "encode_id", "encode_mdp", "encode_pomdp", "model_count",
]
