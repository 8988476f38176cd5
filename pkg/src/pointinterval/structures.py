"""Finite chain structures: the brute-force model oracle."""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property

from .relations import Kind, Relation, Sort


class SortError(TypeError):
    """An element of the wrong sort was supplied for a relation argument."""


def region_of(interval, c) -> int:
    a, b = interval
    if c < a:
        return 0
    if c == a:
        return 1
    if c < b:
        return 2
    return 3 if c == b else 4


def point_region(p, c) -> int:
    return 0 if c < p else (2 if c == p else 4)


def sort_of(x) -> Sort:
    return Sort.INTERVAL if isinstance(x, tuple) else Sort.POINT


def holds_raw(r: Relation, x, y) -> bool:
    """Evaluate ``r(x, y)`` on concrete coordinates.

    Points are plain comparable values; intervals are ``(left, right)`` tuples.
    Works for any linear order whose values support ``<``/``==``.
    """
    sx, sy = r.signature
    if sort_of(x) is not sx or sort_of(y) is not sy:
        raise SortError(f"{r.name} expects ({sx.value}, {sy.value}), got {x!r}, {y!r}")
    k = r.kind
    if k is Kind.II:
        return (region_of(x, y[0]), region_of(x, y[1])) == r.regions
    if k is Kind.IP:
        return region_of(x, y) == r.regions[0]
    if k is Kind.PI:
        return (point_region(x, y[0]), point_region(x, y[1])) == r.regions
    return point_region(x, y) == r.regions[0]


@dataclass(frozen=True)
class Chain:
    """The chain 0 < 1 < ... < n-1 with all strict intervals over it."""

    size: int

    def __post_init__(self):
        if self.size < 0:
            raise ValueError("chain size must be non-negative")

    @cached_property
    def points(self) -> tuple[int, ...]:
        return tuple(range(self.size))

    @cached_property
    def intervals(self) -> tuple[tuple[int, int], ...]:
        n = self.size
        return tuple((a, b) for a in range(n) for b in range(a + 1, n))

    def domain(self, sort: Sort):
        return self.points if sort is Sort.POINT else self.intervals

    def contains(self, x) -> bool:
        if isinstance(x, tuple):
            a, b = x
            return 0 <= a < b < self.size
        return 0 <= x < self.size

    def holds(self, r: Relation, x, y) -> bool:
        for e in (x, y):
            if not self.contains(e):
                raise ValueError(f"{e!r} is not an element of chain({self.size})")
        return holds_raw(r, x, y)

    def dual_element(self, x):
        top = self.size - 1
        if isinstance(x, tuple):
            return (top - x[1], top - x[0])
        return top - x

    def dual(self) -> "Chain":
        # chains are self-dual up to the element map dual_element
        return self


def holds(r: Relation, F: Chain, x, y) -> bool:
    return F.holds(r, x, y)


def dual(F: Chain) -> Chain:
    return F.dual()


_ELEMENT = re.compile(r"^\s*(?:\[\s*(-?\d+)\s*,\s*(-?\d+)\s*\]|(-?\d+))\s*$")


def parse_element(text: str):
    """``"3"`` -> point 3, ``"[0,2]"`` -> interval (0, 2)."""
    m = _ELEMENT.match(text)
    if not m:
        raise ValueError(f"bad element syntax {text!r}; use an integer or [a,b]")
    if m.group(3) is not None:
        return int(m.group(3))
    a, b = int(m.group(1)), int(m.group(2))
    if not a < b:
        raise ValueError(f"interval [{a},{b}] needs left < right")
    return (a, b)


def format_element(x) -> str:
    if isinstance(x, tuple):
        return f"[{x[0]},{x[1]}]"
    return str(x)
