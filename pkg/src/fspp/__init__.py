"""Fine-grained qualitative point positions: classification and reasoning."""

from .calculus import CellIndex, Classification, Granularity, Point, SpecialRel, classify
from .doi import Doi, PolarVector
from .grid import BoolGrid, Connectivity
from .reasoning import UnaryOp, compose, compose_bordered, unary
from .relation import FsppRelation

__version__ = "0.1.0"

__all__ = [
    "BoolGrid", "CellIndex", "Classification", "Connectivity", "Doi", "FsppRelation",
    "Granularity", "Point", "PolarVector", "SpecialRel", "UnaryOp", "classify", "compose",
    "compose_bordered", "unary",
]
