"""
Four-valued verdicts and their extension with the checker-level Demands
outcome (another state must be produced before anything can be said).
"""

from enum import Enum, IntEnum
from typing import Union


class Verdict(IntEnum):
    DEFINITELY_FALSE = 0
    PRESUMABLY_FALSE = 1
    PRESUMABLY_TRUE = 2
    DEFINITELY_TRUE = 3

    @property
    def is_definitive(self) -> bool:
        return self in (Verdict.DEFINITELY_FALSE, Verdict.DEFINITELY_TRUE)

    @property
    def is_false(self) -> bool:
        return self in (Verdict.DEFINITELY_FALSE, Verdict.PRESUMABLY_FALSE)

    @property
    def label(self) -> str:
        return _LABELS[self]

    def join(self, other: "Verdict") -> "Verdict":
        return max(self, other)

    def meet(self, other: "Verdict") -> "Verdict":
        return min(self, other)

    def negate(self) -> "Verdict":
        return Verdict(3 - int(self))

    def weaken(self) -> "Verdict":
        if self == Verdict.DEFINITELY_TRUE:
            return Verdict.PRESUMABLY_TRUE
        if self == Verdict.DEFINITELY_FALSE:
            return Verdict.PRESUMABLY_FALSE
        return self

    @classmethod
    def from_bool(cls, value: bool) -> "Verdict":
        return cls.DEFINITELY_TRUE if value else cls.DEFINITELY_FALSE

    @classmethod
    def from_label(cls, label: str) -> "Verdict":
        for verdict, known in _LABELS.items():
            if known == label:
                return verdict
        raise ValueError(f"unknown verdict '{label}'")


class Demands(Enum):
    DEMANDS = "Demands"

    @property
    def label(self) -> str:
        return self.value

    def negate(self) -> "Demands":
        return self


DEMANDS = Demands.DEMANDS

ExtVerdict = Union[Verdict, Demands]

_LABELS = {
    Verdict.DEFINITELY_FALSE: "DefinitelyFalse",
    Verdict.PRESUMABLY_FALSE: "PresumablyFalse",
    Verdict.PRESUMABLY_TRUE: "PresumablyTrue",
    Verdict.DEFINITELY_TRUE: "DefinitelyTrue",
}


def ext_and(left: ExtVerdict, right: ExtVerdict) -> ExtVerdict:
    if left == Verdict.DEFINITELY_FALSE or right == Verdict.DEFINITELY_FALSE:
        return Verdict.DEFINITELY_FALSE
    if left is DEMANDS or right is DEMANDS:
        return DEMANDS

    return left.meet(right)


def ext_not(verdict: ExtVerdict) -> ExtVerdict:
    return verdict.negate()


def ext_or(left: ExtVerdict, right: ExtVerdict) -> ExtVerdict:
    if left == Verdict.DEFINITELY_TRUE or right == Verdict.DEFINITELY_TRUE:
        return Verdict.DEFINITELY_TRUE
    if left is DEMANDS or right is DEMANDS:
        return DEMANDS

    return left.join(right)
