"""Group actions, their inversion problems, blinded-query self-reductions and
an interactive proof for orbit distinctness, all at enumerable scale."""

from .core import (
    DEFAULT_ENUM_BOUND,
    NOT_IN_ORBIT,
    DeltaSolution,
    EnumerationBoundExceeded,
    GactError,
    GroupAction,
    MembershipError,
    Properties,
    check_action_axioms,
)
from .actions import CodePerm, Deck, DiscreteLog, GraphIso, ModAdd, action_from_id
from .problems import GaipInstance, MGaipInstance, PGaipInstance, Problem
from .tape import RandomTape, TapeExhausted

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_ENUM_BOUND", "NOT_IN_ORBIT", "DeltaSolution", "EnumerationBoundExceeded",
    "GactError", "GroupAction", "MembershipError", "Properties", "check_action_axioms",
    "CodePerm", "Deck", "DiscreteLog", "GraphIso", "ModAdd", "action_from_id",
    "GaipInstance", "MGaipInstance", "PGaipInstance", "Problem",
    "RandomTape", "TapeExhausted",
]
