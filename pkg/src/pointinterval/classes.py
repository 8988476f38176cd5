"""Classes of linear orders and their inheritance."""

from __future__ import annotations

from enum import Enum


class ClassTag(str, Enum):
    LIN = "Lin"
    DEN = "Den"
    DIS = "Dis"
    UNB = "Unb"

    @classmethod
    def parse(cls, text: str) -> "ClassTag":
        for c in cls:
            if c.value.lower() == text.strip().lower():
                return c
        raise ValueError(f"unknown class {text!r}; expected one of Lin, Den, Dis, Unb")

    @property
    def ancestors(self) -> frozenset["ClassTag"]:
        """Classes whose definability facts also hold here (superclasses and self)."""
        if self is ClassTag.LIN:
            return frozenset({ClassTag.LIN})
        return frozenset({ClassTag.LIN, self})

    def __str__(self):
        return self.value
