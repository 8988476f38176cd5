"""Definability facts: loading, symmetry expansion and verification.

A rule file is line oriented. Each non-blank, non-comment line reads::

    rule <id> class=<C> premises=<r1,r2,...> target=<r> [formula="<text>"] src="<citation>"

A rule says that the premises define the target over every order in the
class. Rules that carry a formula can be checked by :mod:`pointinterval.decide`;
the rest are trusted imports or shortcuts that the closure engine can rebuild.
"""

from __future__ import annotations

import shlex
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path

from .classes import ClassTag
from .formulas import DefinabilityQuery, Formula, FormulaError, dual_transform, parse, rename_free, to_text
from .relations import (
    BIT, Relation, RelationError, dual_symbol_action, format_set, from_mask, parse_set, rel, reverse,
    symmetric_mask,
)

TRUSTED = "TRUSTED"
SYM_SUFFIX = "~sym"
_KEYS = {"class", "premises", "target", "formula", "src"}


class RulebaseError(ValueError):
    """Diagnostics for a rule file; ``errors`` holds ``(line, message)`` pairs."""

    def __init__(self, errors: list[tuple[int, str]], source: str = "<rules>"):
        self.errors = errors
        self.source = source
        super().__init__("\n".join(f"{source}:{n}: {m}" for n, m in errors))


@dataclass(frozen=True)
class Rule:
    id: str
    cls: ClassTag
    premises: int                   # mask over the explicit relations
    target: Relation
    formula: Formula | None = None
    src: str = ""

    @property
    def premise_set(self) -> frozenset[Relation]:
        return from_mask(self.premises)

    @property
    def target_bit(self) -> int:
        return 1 << BIT[self.target]

    def query(self) -> DefinabilityQuery:
        if self.formula is None:
            raise ValueError(f"rule {self.id} has no formula")
        return DefinabilityQuery(self.premise_set, self.target, self.formula)

    def line(self) -> str:
        parts = [f"rule {self.id}", f"class={self.cls.value}",
                 f"premises={','.join(r.name for r in sorted(self.premise_set, key=BIT.get))}",
                 f"target={self.target.name}"]
        if self.formula is not None:
            parts.append(f'formula="{to_text(self.formula)}"')
        parts.append(f'src="{self.src}"')
        return " ".join(parts)


def _fields(text: str) -> tuple[str, dict[str, str]]:
    toks = shlex.split(text, comments=False, posix=True)
    if len(toks) < 2 or toks[0] != "rule":
        raise ValueError("expected 'rule <id> key=value ...'")
    rid, out = toks[1], {}
    if "=" in rid:
        raise ValueError("missing rule id")
    for t in toks[2:]:
        key, sep, val = t.partition("=")
        if not sep:
            raise ValueError(f"expected key=value, got {t!r}")
        if key not in _KEYS:
            raise ValueError(f"unknown field {key!r}")
        if key in out:
            raise ValueError(f"field {key!r} given twice")
        out[key] = val
    for need in ("class", "premises", "target", "src"):
        if need not in out:
            raise ValueError(f"missing field {need!r}")
    return rid, out


def parse_rule(text: str) -> Rule:
    rid, f = _fields(text)
    cls = ClassTag.parse(f["class"])
    try:
        premises = parse_set(f["premises"])
        target = rel(f["target"])
    except RelationError as e:
        raise ValueError(str(e)) from None
    if not premises:
        raise ValueError("empty premise set")
    if target not in BIT:
        raise ValueError(f"target {target.name} is not an explicit relation")
    formula = None
    if "formula" in f:
        formula = parse(f["formula"], dict(zip(("x", "y"), target.signature)))
        # validates sorts and premise coverage
        DefinabilityQuery(from_mask(premises), target, formula)
    return Rule(rid, cls, premises, target, formula, f["src"])


def loads(text: str, source: str = "<rules>") -> list[Rule]:
    rules, errors, seen = [], [], {}
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            r = parse_rule(line)
        except (ValueError, FormulaError) as e:
            errors.append((n, str(e)))
            continue
        if r.id in seen:
            errors.append((n, f"duplicate rule id {r.id!r} (first on line {seen[r.id]})"))
            continue
        seen[r.id] = n
        rules.append(r)
    if errors:
        raise RulebaseError(errors, source)
    return rules


def load(path: str | Path | None = None) -> list[Rule]:
    """Load a rule file; ``None`` means the bundled rulebase."""
    if path is None:
        text = resources.files("pointinterval").joinpath("data/rules.txt").read_text("utf-8")
        return loads(text, "rules.txt")
    p = Path(path)
    return loads(p.read_text("utf-8"), str(p))


# -- symmetry ----------------------------------------------------------------

def symmetric_rule(r: Rule) -> Rule:
    """The rule obtained by reading ``r`` in the order dual."""
    formula = None
    if r.formula is not None:
        formula = dual_transform(r.formula)
        if dual_symbol_action(r.target)[1]:
            formula = rename_free(formula, {"x": "y", "y": "x"})
    return Rule(r.id + SYM_SUFFIX, r.cls, symmetric_mask(r.premises), reverse(r.target), formula, r.src)


def _key(r: Rule):
    return r.cls, r.premises, r.target, r.formula


def expand_symmetry(rules) -> list[Rule]:
    out = list(rules)
    keys = {_key(r) for r in out}
    ids = {r.id for r in out}
    for r in list(out):
        s = symmetric_rule(r)
        if _key(s) in keys:
            continue
        if s.id in ids:
            s = replace(s, id=f"{s.id}#{len(out)}")
        keys.add(_key(s))
        ids.add(s.id)
        out.append(s)
    return out


# -- verification ------------------------------------------------------------

@dataclass(frozen=True)
class RuleReport:
    id: str
    cls: ClassTag
    verdict: str
    detail: str = ""

    def line(self) -> str:
        return f"{self.id} {self.verdict}" + (f" {self.detail}" if self.detail else "")


def verify_rules(rules, cls: ClassTag | str | None = None, check=None) -> list[RuleReport]:
    """Decide every formula-bearing rule under its own class policy.

    ``cls`` filters by rule class; ``check`` overrides the decision function
    (it receives the query and the class and returns a verdict).
    """
    from .decide import decide_validity
    check = check or decide_validity
    if isinstance(cls, str):
        cls = ClassTag.parse(cls)
    out = []
    for r in rules:
        if cls is not None and r.cls is not cls:
            continue
        if r.formula is None:
            out.append(RuleReport(r.id, r.cls, TRUSTED))
            continue
        v = check(r.query(), r.cls)
        detail = v.line("").strip()[len(v.status):].strip()
        out.append(RuleReport(r.id, r.cls, v.status, detail))
    return out


def describe(r: Rule) -> str:
    return f"{r.id}: {format_set(r.premises)} -> {r.target.name} over {r.cls.value}"
