"""Closure of relation sets under definability rules, and what it implies.

Sets are bitmasks over the 14 explicit relations. The closure of every one of
the 16384 subsets is computed at once, so spectra and harvests are exact
enumerations rather than a guess-and-refine search.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np

from .classes import ClassTag
from .relations import BIT, EXPLICIT, FULL_MASK, I_PLUS, M_PLUS, Relation, format_set, mask_names, parse_set, rel, reverse, symmetric_mask, to_mask
from .rulebase import Rule, expand_symmetry, load

N_SETS = FULL_MASK + 1


def _popcount(m: int) -> int:
    return bin(m).count("1")


def _minimal_rules(rules) -> list[tuple[int, int]]:
    """(premises, target bit) pairs with redundant premises dropped."""
    by_target: dict[int, set[int]] = {}
    for r in rules:
        by_target.setdefault(r.target_bit, set()).add(r.premises)
    out = []
    for t, prems in by_target.items():
        for p in prems:
            if p & t:
                continue  # a rule whose premises contain its target never fires usefully
            if not any(q != p and q & p == q for q in prems):
                out.append((p, t))
    return sorted(out)


class ClosureEngine:
    """All closures for one class under a fixed rule set."""

    def __init__(self, rules, cls: ClassTag | str):
        self.cls = ClassTag.parse(cls) if isinstance(cls, str) else cls
        self.rules = [r for r in rules if r.cls in self.cls.ancestors]
        self.pairs = _minimal_rules(self.rules)

    @cached_property
    def table(self) -> np.ndarray:
        cur = np.arange(N_SETS, dtype=np.int32)
        changed = True
        while changed:
            changed = False
            for p, t in self.pairs:
                fire = ((cur & p) == p) & ((cur & t) == 0)
                if fire.any():
                    cur[fire] |= t
                    changed = True
        return cur

    def closure(self, s: int) -> int:
        return int(self.table[s])

    def complete_for(self, r: Relation) -> np.ndarray:
        """Boolean vector: does set ``i`` define ``r``?"""
        return (self.table & (1 << BIT[r])) != 0

    def spectrum(self, r: Relation, scope: int = FULL_MASK) -> "Spectrum":
        t = 1 << BIT[r]
        universe = scope & ~t
        ok = self.complete_for(r)
        subsets = _subsets(universe)
        mcs, mis = [], []
        for s in subsets:
            if ok[s]:
                if all(not ok[s & ~(1 << i)] for i in _bits(s)):
                    mcs.append(s)
            elif all(ok[s | (1 << i)] for i in _bits(universe & ~s)):
                mis.append(s)
        return Spectrum(r, self.cls, scope, _canon(mcs), _canon(mis))

    def harvest(self) -> "Harvest":
        full = self.table == FULL_MASK
        mcs, mis = [], []
        for s in range(N_SETS):
            if full[s]:
                if all(not full[s & ~(1 << i)] for i in _bits(s)):
                    mcs.append(s)
            elif all(full[s | (1 << i)] for i in _bits(FULL_MASK & ~s)):
                mis.append(s)
        return Harvest(self.cls, _canon(mcs), _canon(mis))


def _bits(m: int):
    i = 0
    while m:
        if m & 1:
            yield i
        m >>= 1
        i += 1


def _subsets(universe: int) -> list[int]:
    out, s = [], universe
    while True:
        out.append(s)
        if s == 0:
            return out
        s = (s - 1) & universe


def _canon(sets) -> list[int]:
    """Canonical order: by size, then by the sorted bit positions."""
    return sorted(set(sets), key=lambda m: (_popcount(m), [i for i in _bits(m)]))


@dataclass(frozen=True)
class Spectrum:
    target: Relation
    cls: ClassTag
    scope: int
    mcs: list[int]
    mis: list[int]


@dataclass(frozen=True)
class Harvest:
    cls: ClassTag
    mcs: list[int]
    mis: list[int]


_ENGINES: dict[tuple, ClosureEngine] = {}


def engine(cls: ClassTag | str, rules=None) -> ClosureEngine:
    """Cached engine over the bundled (symmetry-expanded) rulebase, or ``rules``."""
    cls = ClassTag.parse(cls) if isinstance(cls, str) else cls
    if rules is not None:
        return ClosureEngine(rules, cls)
    key = ("bundled", cls)
    if key not in _ENGINES:
        _ENGINES[key] = ClosureEngine(expand_symmetry(load()), cls)
    return _ENGINES[key]


def closure(s, cls: ClassTag | str, rules=None):
    """Closure of a mask or a relation collection; returns the same kind."""
    e = engine(cls, rules)
    if isinstance(s, int):
        return e.closure(s)
    from .relations import from_mask
    return from_mask(e.closure(to_mask(s)))


def spectrum(r: Relation | str, cls: ClassTag | str, scope: int = FULL_MASK, rules=None) -> Spectrum:
    r = rel(r) if isinstance(r, str) else r
    return engine(cls, rules).spectrum(r, scope)


def harvest(cls: ClassTag | str, rules=None) -> Harvest:
    return engine(cls, rules).harvest()


# -- expected tables -----------------------------------------------------------
#
# One entry per line, ``<key>: r1,r2,...`` (a tab may replace ``": "``). Keys are
# relation names for spectrum tables, ``mcs``/``mis`` for harvest tables.
# A trailing ``!suspect <note>`` marks a printed entry believed wrong;
# ``!omitted <note>`` marks an entry the printed table lacks but should have.
# Directives start with ``@``:
#   @class den|unb|...
#   @kind mcs|mis|harvest
#   @scope all | I+ | M+ | r1,r2,...      (premise universe of the table)
#   @targets r1,r2,...                    (columns the table covers)
#   @mirror                               (columns for reversible targets the
#                                          table leaves out are its mirror images)

SCOPES = {"all": FULL_MASK, "I+": to_mask(I_PLUS), "M+": to_mask(M_PLUS)}


class TableError(ValueError):
    def __init__(self, errors: list[tuple[int, str]], source: str):
        self.errors = errors
        super().__init__("\n".join(f"{source}:{n}: {m}" for n, m in errors))


@dataclass(frozen=True)
class Entry:
    key: str
    mask: int
    mark: str = ""      # "", "suspect" or "omitted"
    note: str = ""
    line: int = 0


@dataclass
class ExpectedTable:
    name: str
    cls: ClassTag | None = None
    kind: str = "mcs"
    scope: int = FULL_MASK
    targets: list[str] = field(default_factory=list)
    mirror: bool = False
    entries: list[Entry] = field(default_factory=list)
    duplicates: list[Entry] = field(default_factory=list)

    def keys(self) -> list[str]:
        if self.kind == "harvest":
            return ["mcs", "mis"]
        keys = list(self.targets) or sorted({e.key for e in self.entries}, key=lambda k: BIT[rel(k)])
        if self.mirror:
            for k in list(keys):
                m = reverse(rel(k)).name
                if m not in keys:
                    keys.append(m)
        return keys

    def expanded(self) -> list[Entry]:
        """Entries with mirrored columns filled in when ``@mirror`` is set."""
        out = list(self.entries)
        if self.mirror and self.kind != "harvest":
            listed = set(self.targets) or {e.key for e in self.entries}
            for e in self.entries:
                m = reverse(rel(e.key)).name
                if m not in listed:
                    out.append(Entry(m, symmetric_mask(e.mask), e.mark, e.note, e.line))
        return out


_LINE = re.compile(r"^\s*([A-Za-z0-9_+]+)\s*(?::|\t)\s*([^!]*?)\s*(?:!(suspect|omitted)\b\s*(.*))?$")


def parse_table(text: str, name: str = "<table>") -> ExpectedTable:
    t = ExpectedTable(name)
    errors = []
    seen = {}
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            if line.startswith("@"):
                _directive(t, line[1:].split(None, 1))
                continue
            m = _LINE.match(line)
            if not m:
                raise ValueError(f"cannot parse entry {line!r}")
            key, body, mark, note = m.group(1), m.group(2), m.group(3) or "", (m.group(4) or "").strip()
            if t.kind == "harvest":
                if key not in ("mcs", "mis"):
                    raise ValueError(f"harvest tables use keys mcs/mis, got {key!r}")
            else:
                key = rel(key).name
                if key not in {r.name for r in EXPLICIT}:
                    raise ValueError(f"{key} is not an explicit relation")
            e = Entry(key, parse_set(body), mark, note, n)
            if (key, e.mask) in seen:
                t.duplicates.append(e)
                continue
            seen[(key, e.mask)] = e
            t.entries.append(e)
        except ValueError as ex:
            errors.append((n, str(ex)))
    if errors:
        raise TableError(errors, name)
    return t


def _directive(t: ExpectedTable, parts: list[str]) -> None:
    name = parts[0]
    arg = parts[1].strip() if len(parts) > 1 else ""
    if name == "class":
        t.cls = ClassTag.parse(arg)
    elif name == "kind":
        if arg not in ("mcs", "mis", "harvest"):
            raise ValueError(f"unknown table kind {arg!r}")
        t.kind = arg
    elif name == "scope":
        t.scope = SCOPES[arg] if arg in SCOPES else parse_set(arg)
    elif name == "targets":
        t.targets = [rel(x).name for x in arg.split(",") if x.strip()]
    elif name == "mirror":
        t.mirror = True
    else:
        raise ValueError(f"unknown directive @{name}")


def load_table(path: str | Path) -> ExpectedTable:
    p = Path(path)
    return parse_table(p.read_text("utf-8"), p.name)


def bundled_tables() -> dict[str, ExpectedTable]:
    from importlib import resources
    root = resources.files("pointinterval").joinpath("data/tables")
    out = {}
    for item in sorted(root.iterdir(), key=lambda p: p.name):
        if item.name.endswith(".txt"):
            out[item.name[:-4]] = parse_table(item.read_text("utf-8"), item.name)
    return out


# -- diffing -------------------------------------------------------------------

@dataclass(frozen=True)
class Adjudication:
    key: str
    mask: int
    mark: str
    status: str         # SUSPECT-CONFIRMED or SUSPECT-CLEARED
    reason: str


@dataclass
class DiffReport:
    table: str
    match: list[tuple[str, int]] = field(default_factory=list)
    missing: list[tuple[str, int]] = field(default_factory=list)
    extra: list[tuple[str, int]] = field(default_factory=list)
    suspects: list[Adjudication] = field(default_factory=list)
    duplicates: list[tuple[str, int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.missing and not self.extra

    def lines(self) -> list[str]:
        out = [f"table {self.table}: {len(self.match)} MATCH, {len(self.missing)} MISSING, "
               f"{len(self.extra)} EXTRA, {len(self.suspects)} SUSPECT"]
        for title, items in (("MISSING", self.missing), ("EXTRA", self.extra)):
            for k, m in items:
                out.append(f"{title} {k}: {format_set(m)}")
        for a in self.suspects:
            out.append(f"{a.status} {a.key}: {format_set(a.mask)} ({a.reason})")
        for k, m in self.duplicates:
            out.append(f"DUPLICATE {k}: {format_set(m)}")
        return out


def computed_sets(table: ExpectedTable, cls: ClassTag | None = None, rules=None) -> dict[str, list[int]]:
    cls = cls or table.cls
    if cls is None:
        raise ValueError(f"table {table.name} names no class; pass one")
    if table.kind == "harvest":
        h = harvest(cls, rules)
        return {"mcs": h.mcs, "mis": h.mis}
    out = {}
    for k in table.keys():
        s = spectrum(k, cls, table.scope, rules)
        out[k] = s.mcs if table.kind == "mcs" else s.mis
    return out


def _explain(key: str, mask: int, kind: str, cls: ClassTag, eng: ClosureEngine, computed: bool) -> str:
    if kind == "harvest":
        target_ok = eng.closure(mask) == FULL_MASK
        what = "the full vocabulary"
    else:
        r = rel(key)
        if mask >> BIT[r] & 1:
            return f"the set contains its own target {key}"
        target_ok = bool(eng.closure(mask) >> BIT[r] & 1)
        what = key
    if computed:
        return f"the engine lists it: {format_set(mask)} is {'minimal for' if kind != 'mis' else 'maximal without'} {what}"
    if kind == "mis" or (kind == "harvest" and key == "mis"):
        if target_ok:
            return f"its closure over {cls.value} already yields {what}"
        return f"not maximal: a larger set still misses {what}"
    if not target_ok:
        return f"its closure over {cls.value} does not yield {what}"
    return f"not minimal: a proper subset already yields {what}"


def diff_tables(computed: dict[str, list[int]], table: ExpectedTable, cls: ClassTag | None = None,
                rules=None) -> DiffReport:
    cls = cls or table.cls
    eng = engine(cls, rules)
    rep = DiffReport(table.name, duplicates=[(e.key, e.mask) for e in table.duplicates])
    entries = table.expanded()
    marked = {(e.key, e.mask): e for e in entries if e.mark}
    plain = {(e.key, e.mask) for e in entries if not e.mark}
    got = {(k, m) for k, ms in computed.items() for m in ms}
    for k in table.keys():
        for m in computed.get(k, []):
            if (k, m) in marked:
                continue
            (rep.match if (k, m) in plain else rep.extra).append((k, m))
    for k, m in sorted(plain - got, key=lambda km: (km[0], km[1])):
        rep.missing.append((k, m))
    for (k, m), e in marked.items():
        present = (k, m) in got
        confirmed = present if e.mark == "omitted" else not present
        reason = _explain(k, m, table.kind, cls, eng, present)
        rep.suspects.append(Adjudication(k, m, e.mark, "SUSPECT-CONFIRMED" if confirmed else "SUSPECT-CLEARED", reason))
    return rep


def format_computed(computed: dict[str, list[int]], fmt: str = "text") -> list[str]:
    out = []
    for k, sets in computed.items():
        for m in sets:
            names = ",".join(mask_names(m))
            out.append(f"{k}\t{names}" if fmt == "tsv" else f"{k}: {names}")
    return out
