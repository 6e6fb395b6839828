"""
Core enumerations for gfregular.

Operation selectors, family kinds, verdicts and tangle axioms.
"""

from enum import IntEnum


class ArithOp(IntEnum):
    Add = 0
    Sub = 1
    Mul = 2
    Div = 3
    Inv = 4
    Pow = 5


class SubspaceOp(IntEnum):
    Intersect = 0
    Sum = 1
    Contains = 2
    Equals = 3


class RankQuery(IntEnum):
    Rank = 0
    Closure = 1


class SimplifyQuery(IntEnum):
    Simplify = 0
    Epsilon = 1


class FamilyKind(IntEnum):
    PG = 0
    AG = 1
    HAT = 2
    BAR = 3
    OBSTRUCTION = 4


class ObstructionMode(IntEnum):
    Canonical = 0
    Enumerate = 1


class Verdict(IntEnum):
    HAT = 0
    BAR = 1
    BAD = 2


class TangleAxiom(IntEnum):
    T1 = 1
    T2 = 2
    T3 = 3
