"""Enums for discretization schemes and their options"""
from enum import Enum


class SchemeEnum(str, Enum):
    """Discretization of the Poisson-Dirichlet problem"""
    MIXED = "mixed"
    TPFA = "tpfa"
    PETROV = "petrov"


class ClosureEnum(str, Enum):
    """Choice within the two-parameter family of six-point stencils"""
    MIN_NORM = "minnorm"
    MIN_OUTER = "minouter"
    FIXED = "fixed"


class SplitEnum(str, Enum):
    """Diagonal used to cut each square of a structured mesh"""
    DIAGONAL = "diagonal"
    ANTIDIAGONAL = "antidiagonal"


class CaseEnum(str, Enum):
    """Manufactured solutions on the unit square"""
    SINSIN = "sinsin"
    BUBBLE = "bubble"
    ZERO = "zero"
