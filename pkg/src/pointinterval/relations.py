"""Relation vocabulary for two-sorted point/interval structures.

Every relation is named by the regions of a partition: an interval ``[a,b]``
splits the line into regions 0 (before ``a``), 1 (``a``), 2 (strictly
inside), 3 (``b``) and 4 (after ``b``); a point ``c`` splits it into 0, 2, 4.

* ``ii{k}{k'}``: the left/right endpoints of the second interval fall in
  regions ``k``/``k'`` of the first.
* ``ip{k}``: the point falls in region ``k`` of the interval.
* ``pi{k}{k'}``: the interval's endpoints fall in regions ``k``/``k'`` of the point.
* ``pp{k}``: the second point falls in region ``k`` of the first.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum


class Kind(str, Enum):
    PP = "pp"
    IP = "ip"
    PI = "pi"
    II = "ii"


class Sort(str, Enum):
    POINT = "p"
    INTERVAL = "i"


_SIGNATURE = {
    Kind.PP: (Sort.POINT, Sort.POINT),
    Kind.IP: (Sort.INTERVAL, Sort.POINT),
    Kind.PI: (Sort.POINT, Sort.INTERVAL),
    Kind.II: (Sort.INTERVAL, Sort.INTERVAL),
}

II_PAIRS = ((0, 0), (0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4),
            (2, 2), (2, 3), (2, 4), (3, 4), (4, 4))
PI_PAIRS = ((0, 0), (0, 2), (0, 4), (2, 4), (4, 4))
POINT_REGIONS = (0, 2, 4)


class RelationError(ValueError):
    pass


@dataclass(frozen=True, order=True)
class Relation:
    kind: Kind
    regions: tuple[int, ...]

    def __post_init__(self):
        k, regs = self.kind, self.regions
        if k in (Kind.PP, Kind.IP):
            allowed = POINT_REGIONS if k is Kind.PP else (0, 1, 2, 3, 4)
            if len(regs) != 1 or regs[0] not in allowed:
                raise RelationError(f"invalid regions {regs} for {k.value}")
        elif k is Kind.PI:
            if regs not in PI_PAIRS:
                raise RelationError(f"invalid regions {regs} for pi")
        elif regs not in II_PAIRS:
            raise RelationError(f"invalid regions {regs} for ii")

    @property
    def signature(self) -> tuple[Sort, Sort]:
        return _SIGNATURE[self.kind]

    @property
    def region_name(self) -> str:
        return self.kind.value + "".join(map(str, self.regions))

    @property
    def name(self) -> str:
        return _CANONICAL.get(self.region_name, self.region_name)

    def __str__(self):
        return self.name

    def __repr__(self):
        return f"Relation({self.name})"


def _make(text: str) -> Relation:
    return Relation(Kind(text[:2]), tuple(int(c) for c in text[2:]))


_CANONICAL = {"pp4": "lt", "pp0": "gtp", "pp2": "eqp", "ii13": "eqi"}

ALIASES = {
    "lt": "pp4", "gtp": "pp0", "gt": "pp0", "eqp": "pp2", "eq_p": "pp2",
    "eqi": "ii13", "eq_i": "ii13", "<": "pp4", ">": "pp0",
    "meets": "ii34", "before": "ii44", "starts": "ii14", "finishes": "ii03",
    "during": "ii04", "overlaps": "ii24", "contains": "ii22",
}

ALL: tuple[Relation, ...] = tuple(
    [_make(f"pp{k}") for k in POINT_REGIONS]
    + [_make(f"ip{k}") for k in range(5)]
    + [_make(f"pi{a}{b}") for a, b in PI_PAIRS]
    + [_make(f"ii{a}{b}") for a, b in II_PAIRS]
)


def rel(name: str) -> Relation:
    """Resolve a canonical name, region name or alias to a relation."""
    key = name.strip()
    key = ALIASES.get(key, ALIASES.get(key.lower(), key))
    try:
        return _make(key)
    except (ValueError, KeyError, IndexError):
        raise RelationError(f"unknown relation {name!r}") from None


LT, EQP, GTP = rel("lt"), rel("eqp"), rel("gtp")
IP0, IP1, IP2, IP3, IP4 = (rel(f"ip{k}") for k in range(5))
II34, II44, II14, II03, II04, II24, EQI = (
    rel(n) for n in ("ii34", "ii44", "ii14", "ii03", "ii04", "ii24", "eqi"))

# Bit positions are part of the rulebase/table file contract; do not reorder.
EXPLICIT: tuple[Relation, ...] = (
    LT, EQP, IP0, IP1, IP2, IP3, IP4, II34, II44, II14, II03, II04, II24, EQI)
BIT = {r: i for i, r in enumerate(EXPLICIT)}
FULL_MASK = (1 << len(EXPLICIT)) - 1

I_PLUS = frozenset({II34, II44, II14, II03, II04, II24, EQI})
M_PLUS = frozenset({IP0, IP1, IP2, IP3, IP4})
P_PLUS = frozenset({LT, EQP})

_REVERSE = {IP0: IP4, IP4: IP0, IP1: IP3, IP3: IP1, II14: II03, II03: II14}
SELF_SYMMETRIC = frozenset({IP2, II04})


def is_explicit(r: Relation) -> bool:
    return r in BIT


def _require_explicit(r: Relation) -> None:
    if r not in BIT:
        raise RelationError(f"{r.name} is not one of the 14 explicit relations")


def is_reversible(r: Relation) -> bool:
    return r in _REVERSE


# Concrete layout used to compute inverses: interval [10,20], regions mapped to
# representative coordinates (two of them when both endpoints share a region).
_SINGLE = {0: 5, 1: 10, 2: 15, 3: 20, 4: 25}
_DOUBLE = {0: (1, 2), 2: (13, 17), 4: (25, 27)}


def _iregion(a, b, c) -> int:
    if c < a:
        return 0
    if c == a:
        return 1
    if c < b:
        return 2
    return 3 if c == b else 4


def _pregion(a, c) -> int:
    return 0 if c < a else (2 if c == a else 4)


def _place(k: int, kk: int) -> tuple[int, int]:
    if k == kk:
        return _DOUBLE[k]
    return _SINGLE[k], _SINGLE[kk]


def inverse(r: Relation) -> Relation:
    """The relation r̄ with r(x, y) iff r̄(y, x)."""
    if r.kind is Kind.PP:
        return Relation(Kind.PP, (4 - r.regions[0],))
    if r.kind is Kind.II:
        c, d = _place(*r.regions)
        return Relation(Kind.II, (_iregion(c, d, 10), _iregion(c, d, 20)))
    if r.kind is Kind.IP:
        c = _SINGLE[r.regions[0]]
        return Relation(Kind.PI, (_pregion(c, 10), _pregion(c, 20)))
    # pi: the point sits at 15; place the interval accordingly
    k, kk = r.regions
    pos = {0: 10, 2: 15, 4: 20}
    a, b = (pos[k], pos[kk]) if k != kk else ({0: (5, 10), 4: (20, 25)}[k])
    return Relation(Kind.IP, (_iregion(a, b, 15),))


def reverse(r: Relation) -> Relation:
    """Reverse of a reversible explicit relation; other explicit relations are fixed."""
    _require_explicit(r)
    return _REVERSE.get(r, r)


def dual_symbol_action(r: Relation) -> tuple[Relation, bool]:
    """How ``r`` reads in the order dual: ``(symbol, swap_arguments)``."""
    _require_explicit(r)
    if r in _REVERSE:
        return _REVERSE[r], False
    if r in SELF_SYMMETRIC:
        return r, False
    return r, True


# -- relation sets over the 14 explicit relations, as bitmasks ---------------

def to_mask(rels) -> int:
    m = 0
    for r in rels:
        if isinstance(r, str):
            r = rel(r)
        _require_explicit(r)
        m |= 1 << BIT[r]
    return m


def from_mask(mask: int) -> frozenset[Relation]:
    return frozenset(r for r in EXPLICIT if mask >> BIT[r] & 1)


def mask_names(mask: int) -> list[str]:
    return [r.name for r in EXPLICIT if mask >> BIT[r] & 1]


def format_set(mask: int) -> str:
    return "{" + ", ".join(mask_names(mask)) + "}"


def parse_set(text: str) -> int:
    """Parse ``r1,r2,...`` (braces optional) into a mask."""
    text = text.strip().strip("{}").strip()
    if not text:
        return 0
    return to_mask(rel(t) for t in text.split(","))


_REV_MASK = [1 << BIT[reverse(r)] for r in EXPLICIT]


def symmetric_mask(mask: int) -> int:
    out = 0
    for i, bit in enumerate(_REV_MASK):
        if mask >> i & 1:
            out |= bit
    return out


def symmetric_set(rels):
    """Replace every reversible member by its reverse.

    Accepts a mask or an iterable of relations and returns the same kind.
    """
    if isinstance(rels, int):
        return symmetric_mask(rels)
    return frozenset(reverse(r) for r in rels)
