"""Finite rough groups, topological rough groups and their exhaustive checking."""

from .core import (ApproximationSpace, OpTable, Partition, RoughGroup, Universe, Verdict,
                   check_rough_group)
from .errors import RoughTopError
from .fintop import Topology
from .trg import RoughStructure, check_trg

__version__ = "0.1.0"

__all__ = ["ApproximationSpace", "OpTable", "Partition", "RoughGroup", "Universe", "Verdict",
           "check_rough_group", "RoughTopError", "Topology", "RoughStructure", "check_trg"]
