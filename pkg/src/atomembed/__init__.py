"""Atomic embeddability of graph maps: a polynomial-time decider, rewrite
operations, reductions and an exhaustive oracle for small inputs."""

from .decider import Decision, InternalError, decide, decide_subcubic, decide_toroidal, verify_witness
from .instance import Instance, InvalidInstance, InstanceFormatError, load_instance, validate
from .operations import Rewriter, RewriteTrace, replay
from .oracle import OracleLimits, Overflow, neuwirth_check, oracle_decide
from .reductions import ClusteredInstance, Polyhedron, from_cplanarity, from_thickenability, to_thickenability

__all__ = [
    "ClusteredInstance",
    "Decision",
    "Instance",
    "InstanceFormatError",
    "InternalError",
    "InvalidInstance",
    "OracleLimits",
    "Overflow",
    "Polyhedron",
    "RewriteTrace",
    "Rewriter",
    "decide",
    "decide_subcubic",
    "decide_toroidal",
    "from_cplanarity",
    "from_thickenability",
    "load_instance",
    "neuwirth_check",
    "oracle_decide",
    "replay",
    "to_thickenability",
    "validate",
    "verify_witness",
]
