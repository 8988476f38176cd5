"""Surjective truth-preserving relations between concrete structures.

A relation is given by a bijection on each sort (guarded affine pieces plus
finite overrides, with the inverse supplied) and a finite list of extra pairs.
The graph of a bijection is total and surjective, so adding extras keeps both
properties; what remains to check is that every relation in ``respects`` is
preserved in both directions, and that each broken relation has a witness.

All arithmetic is exact (``fractions.Fraction``).  Checks are property based:
a deterministic grid plus seeded random samples.
"""

from __future__ import annotations

import ast
import random
import re
import shlex
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from itertools import product
from pathlib import Path
from typing import Callable

from .classes import ClassTag
from .relations import (
    BIT, EXPLICIT, I_PLUS, M_PLUS, P_PLUS, Relation, RelationError, Sort, format_set, rel, to_mask,
)
from .structures import holds_raw


class ZetaError(ValueError):
    """Malformed catalog entry."""


# -- orders ------------------------------------------------------------------

@dataclass(frozen=True)
class Order:
    name: str
    discrete: bool
    lo: Fraction | None = None
    hi: Fraction | None = None

    def has_point(self, v) -> bool:
        if not isinstance(v, (int, Fraction)):
            return False
        if self.discrete and Fraction(v).denominator != 1:
            return False
        if self.lo is not None and v < self.lo:
            return False
        return self.hi is None or v <= self.hi

    def has(self, e) -> bool:
        if isinstance(e, tuple):
            return len(e) == 2 and self.has_point(e[0]) and self.has_point(e[1]) and e[0] < e[1]
        return self.has_point(e)

    def grid(self) -> list[Fraction]:
        """p/q with |p| <= 20 and q <= 6 inside the order; integers -20..20 if discrete."""
        if self.discrete:
            vals = {Fraction(p) for p in range(-20, 21)}
        else:
            vals = {Fraction(p, q) for q in range(1, 7) for p in range(-20, 21)}
        return sorted(v for v in vals if self.has_point(v))

    def random_point(self, rng: random.Random, anchors: list[Fraction]) -> Fraction:
        if anchors and rng.random() < 0.6:
            return rng.choice(anchors)
        if self.discrete:
            return Fraction(rng.randint(-25, 25))
        q = rng.randint(1, 12)
        if self.lo is not None and self.hi is not None:
            return self.lo + (self.hi - self.lo) * Fraction(rng.randint(0, q), q)
        return Fraction(rng.randint(-25 * q, 25 * q), q)


ORDERS = {
    "QQ": Order("QQ", False),
    "ZZ": Order("ZZ", True),
    "QQ01": Order("QQ01", False, Fraction(0), Fraction(1)),
}


# -- expressions -------------------------------------------------------------

_NODES = (ast.Expression, ast.BinOp, ast.UnaryOp, ast.Add, ast.Sub, ast.Mult, ast.Div, ast.USub,
          ast.UAdd, ast.Constant, ast.Name, ast.Load, ast.Compare, ast.BoolOp, ast.And, ast.Lt,
          ast.LtE, ast.Gt, ast.GtE, ast.Eq, ast.NotEq, ast.List, ast.Tuple)


class _Exact(ast.NodeTransformer):
    def visit_Constant(self, node):
        if not isinstance(node.value, int) or isinstance(node.value, bool):
            raise ZetaError(f"only integer literals are allowed, got {node.value!r}")
        return ast.copy_location(ast.Call(ast.Name("F", ast.Load()), [node], []), node)


def _compile(text: str, names: tuple[str, ...], mode: str) -> Callable:
    """Compile an affine expression, a guard, or an interval output ``[e1,e2]``."""
    src = text.replace("&", " and ")
    src = re.sub(r"(?<![<>!=])=(?!=)", "==", src)
    try:
        tree = ast.parse(src.strip() or "True", mode="eval")
    except SyntaxError as e:
        raise ZetaError(f"cannot parse {text!r}: {e.msg}") from None
    for node in ast.walk(tree):
        if not isinstance(node, _NODES):
            raise ZetaError(f"unsupported syntax in {text!r}")
        if isinstance(node, ast.Name) and node.id not in names:
            raise ZetaError(f"unknown variable {node.id!r} in {text!r}")
    body = tree.body
    if mode == "interval" and not (isinstance(body, (ast.List, ast.Tuple)) and len(body.elts) == 2):
        raise ZetaError(f"interval output must read [left,right], got {text!r}")
    if mode == "point" and isinstance(body, (ast.List, ast.Tuple)):
        raise ZetaError(f"point output must be a single expression, got {text!r}")
    if text.strip():
        tree = ast.fix_missing_locations(_Exact().visit(tree))
    code = compile(tree, "<zeta>", "eval")
    scope = {"__builtins__": {}, "F": Fraction}
    if mode == "interval":
        return lambda env: tuple(eval(code, scope, env))
    return lambda env: eval(code, scope, env)


def parse_element(text: str):
    t = text.strip()
    try:
        if t.startswith("["):
            if not t.endswith("]"):
                raise ValueError
            a, b = t[1:-1].split(",")
            return Fraction(a.strip()), Fraction(b.strip())
        return Fraction(t)
    except ValueError:
        raise ZetaError(f"bad element {text!r}; use a rational or [a,b]") from None


def format_element(e) -> str:
    if isinstance(e, tuple):
        return f"[{e[0]},{e[1]}]"
    return str(e)


def _env(e) -> dict:
    return {"a": e[0], "b": e[1]} if isinstance(e, tuple) else {"a": e}


# -- maps --------------------------------------------------------------------

@dataclass(frozen=True)
class Piece:
    guard_text: str
    out_text: str
    guard: Callable = field(compare=False, repr=False)
    out: Callable = field(compare=False, repr=False)


@dataclass
class GuardedMap:
    """First matching override or piece wins; no pieces at all means identity."""
    sort: Sort
    pieces: list[Piece] = field(default_factory=list)
    overrides: dict = field(default_factory=dict)

    @property
    def identity(self) -> bool:
        return not self.pieces and not self.overrides

    def add_piece(self, guard: str, out: str) -> None:
        names = ("a", "b") if self.sort is Sort.INTERVAL else ("a",)
        mode = "interval" if self.sort is Sort.INTERVAL else "point"
        self.pieces.append(Piece(guard, out, _compile(guard, names, "guard"), _compile(out, names, mode)))

    def matching(self, e) -> int:
        if e in self.overrides:
            return 1
        if not self.pieces:
            return 1
        env = _env(e)
        return sum(1 for p in self.pieces if p.guard(env))

    def __call__(self, e):
        if e in self.overrides:
            return self.overrides[e]
        if not self.pieces:
            return e
        env = _env(e)
        for p in self.pieces:
            if p.guard(env):
                return p.out(env)
        return None


# -- specs -------------------------------------------------------------------

CHECKS = ("injective", "surjective", "codomain", "coverage", "respect", "break", "soundness")


@dataclass
class ZetaSpec:
    id: str
    cls: ClassTag
    domain: Order
    codomain: Order
    respects: int
    breaks: list[Relation]
    point_map: GuardedMap = field(default_factory=lambda: GuardedMap(Sort.POINT))
    point_inverse: GuardedMap = field(default_factory=lambda: GuardedMap(Sort.POINT))
    interval_map: GuardedMap = field(default_factory=lambda: GuardedMap(Sort.INTERVAL))
    interval_inverse: GuardedMap = field(default_factory=lambda: GuardedMap(Sort.INTERVAL))
    extras: dict = field(default_factory=dict)          # element -> list of extra images
    witnesses: dict = field(default_factory=dict)       # Relation -> ((x, y), (x', y'))
    flags: list[str] = field(default_factory=list)
    expect_fail: frozenset[str] = frozenset()

    def forward(self, e):
        return (self.interval_map if isinstance(e, tuple) else self.point_map)(e)

    def backward(self, e):
        return (self.interval_inverse if isinstance(e, tuple) else self.point_inverse)(e)

    def images(self, e) -> list:
        out = [self.forward(e)]
        out.extend(x for x in self.extras.get(e, ()) if x not in out)
        return out

    def anchors(self) -> list[Fraction]:
        """Coordinates mentioned by overrides, extras and witnesses."""
        vals = set()

        def add(e):
            vals.update(e if isinstance(e, tuple) else (e,))

        for m in (self.point_map, self.point_inverse, self.interval_map, self.interval_inverse):
            for k, v in m.overrides.items():
                add(k)
                add(v)
        for k, vs in self.extras.items():
            add(k)
            for v in vs:
                add(v)
        for (x, y), (u, v) in self.witnesses.values():
            for e in (x, y, u, v):
                add(e)
        return sorted(vals)


def _relations(text: str) -> int:
    mask = 0
    groups = {"I+": I_PLUS, "M+": M_PLUS, "P+": P_PLUS}
    for tok in (t.strip() for t in text.split(",")):
        if not tok:
            continue
        if tok in groups:
            mask |= to_mask(groups[tok])
            continue
        r = rel(tok)
        if r not in BIT:
            raise ZetaError(f"{r.name} is not an explicit relation")
        mask |= 1 << BIT[r]
    return mask


def _header(toks: list[str]) -> ZetaSpec:
    if len(toks) < 2:
        raise ZetaError("expected 'zeta <id> key=value ...'")
    kv = {}
    for t in toks[2:]:
        k, sep, v = t.partition("=")
        if not sep:
            raise ZetaError(f"expected key=value, got {t!r}")
        kv[k] = v
    unknown = set(kv) - {"class", "domain", "codomain", "respects", "breaks", "flags", "expect"}
    if unknown:
        raise ZetaError(f"unknown field(s) {sorted(unknown)}")
    for need in ("class", "domain", "respects", "breaks"):
        if need not in kv:
            raise ZetaError(f"missing field {need!r}")
    try:
        dom = ORDERS[kv["domain"]]
        cod = ORDERS[kv.get("codomain", kv["domain"])]
    except KeyError as e:
        raise ZetaError(f"unknown order {e.args[0]!r}; expected one of {sorted(ORDERS)}") from None
    respects = _relations(kv["respects"])
    breaks = [rel(x) for x in kv["breaks"].split(",") if x.strip()]
    clash = [r.name for r in breaks if respects >> BIT.get(r, 99) & 1]
    if clash:
        raise ZetaError(f"relations both respected and broken: {clash}")
    expect = frozenset(x for x in kv.get("expect", "").split(",") if x)
    if expect - set(CHECKS):
        raise ZetaError(f"unknown check(s) in expect: {sorted(expect - set(CHECKS))}")
    return ZetaSpec(toks[1], ClassTag.parse(kv["class"]), dom, cod, respects, breaks,
                    flags=[x for x in kv.get("flags", "").split(",") if x], expect_fail=expect)


def _body(spec: ZetaSpec, toks: list[str]) -> None:
    head, rest = toks[0], toks[1:]
    if head == "witness":
        if not rest:
            raise ZetaError("witness needs a relation name")
        r = rel(rest[0])
        kv = dict(t.partition("=")[::2] for t in rest[1:])
        try:
            x, y = (parse_element(s) for s in kv["args"].split(";"))
            u, v = (parse_element(s) for s in kv["images"].split(";"))
        except (KeyError, ValueError):
            raise ZetaError("witness needs args=\"x;y\" images=\"x';y'\"") from None
        spec.witnesses[r] = ((x, y), (u, v))
        return
    if head not in ("point", "interval") or not rest:
        raise ZetaError(f"unexpected line starting with {head!r}")
    sort = Sort.POINT if head == "point" else Sort.INTERVAL
    what = rest[0]
    kv = dict(t.partition("=")[::2] for t in rest[1:])
    fwd, inv = ((spec.point_map, spec.point_inverse) if sort is Sort.POINT
                else (spec.interval_map, spec.interval_inverse))
    if what in ("map", "inverse"):
        if "out" not in kv:
            raise ZetaError(f"{head} {what} needs out=\"...\"")
        (fwd if what == "map" else inv).add_piece(kv.get("guard", ""), kv["out"])
    elif what in ("override", "inverse-override", "extra"):
        if "in" not in kv or "out" not in kv:
            raise ZetaError(f"{head} {what} needs in=... out=...")
        a, b = parse_element(kv["in"]), parse_element(kv["out"])
        if isinstance(a, tuple) != (sort is Sort.INTERVAL) or isinstance(b, tuple) != (sort is Sort.INTERVAL):
            raise ZetaError(f"{head} {what}: element of the wrong sort")
        if what == "extra":
            spec.extras.setdefault(a, []).append(b)
        else:
            (fwd if what == "override" else inv).overrides[a] = b
    else:
        raise ZetaError(f"unknown {head} entry {what!r}")


def loads(text: str, source: str = "<zeta>") -> list[ZetaSpec]:
    specs, errors, cur = [], [], None
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        try:
            toks = shlex.split(line)
            if toks[0] == "zeta":
                cur = _header(toks)
                if any(s.id == cur.id for s in specs):
                    raise ZetaError(f"duplicate id {cur.id!r}")
                specs.append(cur)
            elif cur is None:
                raise ZetaError("entry before any 'zeta' header")
            else:
                _body(cur, toks)
        except (ZetaError, RelationError, ValueError) as e:
            errors.append(f"{source}:{n}: {e}")
    for s in specs:
        for fwd, inv in ((s.point_map, s.point_inverse), (s.interval_map, s.interval_inverse)):
            if not fwd.pieces and inv.pieces:
                errors.append(f"{source}: {s.id}: inverse pieces given for an identity map")
            if fwd.pieces and not inv.pieces:
                errors.append(f"{source}: {s.id}: map pieces given without an inverse")
    if errors:
        raise ZetaError("\n".join(errors))
    return specs


def load(path: str | Path | None = None) -> list[ZetaSpec]:
    if path is None:
        text = resources.files("pointinterval").joinpath("data/zeta.txt").read_text("utf-8")
        return loads(text, "zeta.txt")
    p = Path(path)
    return loads(p.read_text("utf-8"), str(p))


def catalog() -> list[ZetaSpec]:
    return load()


# -- verification ------------------------------------------------------------

@dataclass(frozen=True)
class Row:
    check: str
    ok: bool
    detail: str = ""


@dataclass
class ZetaReport:
    id: str
    rows: list[Row]
    expect_fail: frozenset[str] = frozenset()
    samples: int = 0

    @property
    def failed(self) -> set[str]:
        return {r.check.split(":")[0] for r in self.rows if not r.ok}

    @property
    def ok(self) -> bool:
        return not self.failed

    @property
    def as_expected(self) -> bool:
        return self.failed == set(self.expect_fail)

    def lines(self) -> list[str]:
        out = []
        for r in self.rows:
            out.append(f"{'PASS' if r.ok else 'FAIL'} {self.id} {r.check}" + (f": {r.detail}" if r.detail else ""))
        verdict = "PASS" if self.ok else "FAIL"
        note = ""
        if self.expect_fail:
            note = " (expected failure confirmed)" if self.as_expected else " (expected failures not reproduced)"
        out.append(f"{self.id}: {verdict}{note}, {self.samples} random samples")
        return out


def _grid(spec: ZetaSpec, order: Order) -> tuple[list, list]:
    pts = order.grid()
    coarse = [v for v in pts if v.denominator <= 2 and abs(v) <= 4] or pts
    ivs = [(a, b) for a in coarse for b in coarse if a < b]
    anchors = [a for a in spec.anchors() if order.has_point(a)]
    extra_pts = sorted(set(anchors) - set(pts))
    pts = pts + extra_pts
    near = sorted(set(coarse) | set(anchors))
    ivs = sorted(set(ivs) | {(a, b) for a in near for b in near if a < b})
    return pts, ivs


def _random_element(order: Order, sort: Sort, rng: random.Random, anchors: list):
    if sort is Sort.POINT:
        return order.random_point(rng, anchors)
    while True:
        a, b = order.random_point(rng, anchors), order.random_point(rng, anchors)
        if a != b:
            return (min(a, b), max(a, b))


def _respected(spec: ZetaSpec) -> dict[tuple[Sort, Sort], list[Relation]]:
    by_sig: dict[tuple[Sort, Sort], list[Relation]] = {}
    for r in EXPLICIT:
        if spec.respects >> BIT[r] & 1:
            by_sig.setdefault(r.signature, []).append(r)
    return by_sig


def verify(spec: ZetaSpec, samples: int = 1000, seed: int = 0, rules=None) -> ZetaReport:
    """Run every check on ``spec``; see the module docstring for what each one means."""
    rng = random.Random(seed)
    rows: list[Row] = []
    dom, cod = spec.domain, spec.codomain
    dpts, divs = _grid(spec, dom)
    cpts, civs = _grid(spec, cod)
    danchors = [a for a in spec.anchors() if dom.has_point(a)] + [v for v in dpts if v.denominator == 1 and abs(v) <= 5]
    canchors = [a for a in spec.anchors() if cod.has_point(a)] + [v for v in cpts if v.denominator == 1 and abs(v) <= 5]
    dsample = dpts + divs + [_random_element(dom, s, rng, danchors) for s in (Sort.POINT, Sort.INTERVAL)
                             for _ in range(max(samples // 10, 1))]
    csample = cpts + civs + [_random_element(cod, s, rng, canchors) for s in (Sort.POINT, Sort.INTERVAL)
                             for _ in range(max(samples // 10, 1))]

    # coverage and codomain
    bad_cov = next((e for e in dsample if (spec.interval_map if isinstance(e, tuple) else spec.point_map).matching(e) != 1), None)
    if bad_cov is None:
        bad_cov = next((e for e in csample if (spec.interval_inverse if isinstance(e, tuple) else spec.point_inverse).matching(e) != 1), None)
    rows.append(Row("coverage", bad_cov is None, "" if bad_cov is None else
                    f"{format_element(bad_cov)} matches no piece or more than one"))
    bad = next((e for e in dsample if not cod.has(spec.forward(e))), None)
    if bad is None:
        bad = next((e for e in csample if not dom.has(spec.backward(e))), None)
    rows.append(Row("codomain", bad is None, "" if bad is None else f"{format_element(bad)} leaves its order"))

    # bijection: backward(forward(e)) = e on the domain, forward(backward(e)) = e on the codomain
    bad = next((e for e in dsample if spec.backward(spec.forward(e)) != e), None)
    rows.append(Row("injective", bad is None, "" if bad is None else
                    f"{format_element(bad)} -> {format_element(spec.forward(bad))} -> "
                    f"{format_element(spec.backward(spec.forward(bad)))}"))
    bad = None
    for e in csample:
        if spec.forward(spec.backward(e)) != e and not any(e in v for v in spec.extras.values()):
            bad = e
            break
    rows.append(Row("surjective", bad is None, "" if bad is None else f"{format_element(bad)} has no preimage"))

    # respect: both directions, every combination of images
    by_sig = _respected(spec)
    sigs = [sig for sig, rs in by_sig.items() if rs]
    special = sorted({e for e in spec.extras} | set(spec.point_map.overrides) | set(spec.interval_map.overrides)
                     | {spec.backward(e) for e in spec.point_inverse.overrides}
                     | {spec.backward(e) for e in spec.interval_inverse.overrides},
                     key=lambda e: (isinstance(e, tuple), e))
    special = [e for e in special if dom.has(e)]
    pairs = []
    for e in special:
        for f in dpts + divs:
            pairs.append((e, f))
            pairs.append((f, e))
    for _ in range(samples):
        if not sigs:
            break
        sx, sy = rng.choice(sigs)
        pairs.append((_random_element(dom, sx, rng, danchors), _random_element(dom, sy, rng, danchors)))
    violation = None
    for x, y in pairs:
        sig = (Sort.INTERVAL if isinstance(x, tuple) else Sort.POINT,
               Sort.INTERVAL if isinstance(y, tuple) else Sort.POINT)
        rs = by_sig.get(sig, [])
        if not rs:
            continue
        ix, iy = spec.images(x), spec.images(y)
        for r in rs:
            before = holds_raw(r, x, y)
            for u, v in product(ix, iy):
                if holds_raw(r, u, v) != before:
                    violation = (r, x, y, u, v, before)
                    break
            if violation:
                break
        if violation:
            break
    if violation:
        r, x, y, u, v, before = violation
        rows.append(Row("respect", False, f"{r.name}({format_element(x)},{format_element(y)}) is {before} "
                                          f"but {r.name}({format_element(u)},{format_element(v)}) is {not before}"))
    else:
        rows.append(Row("respect", True, f"{len(pairs)} pairs over {format_set(spec.respects)}"))

    # breaks
    for r in spec.breaks:
        w = spec.witnesses.get(r)
        if w is None:
            rows.append(Row(f"break:{r.name}", False, "no witness supplied"))
            continue
        rows.append(_check_witness(spec, r, w))

    rows.append(_soundness(spec, rules))
    return ZetaReport(spec.id, rows, spec.expect_fail, samples)


def _check_witness(spec: ZetaSpec, r: Relation, w) -> Row:
    (x, y), (u, v) = w
    name = f"break:{r.name}"
    shown = f"{r.name}({format_element(x)},{format_element(y)}) vs {r.name}({format_element(u)},{format_element(v)})"
    if not (spec.domain.has(x) and spec.domain.has(y)):
        return Row(name, False, f"witness arguments leave the domain: {shown}")
    if u not in spec.images(x) or v not in spec.images(y):
        return Row(name, False, f"witness images are not related to its arguments: {shown}")
    try:
        a, b = holds_raw(r, x, y), holds_raw(r, u, v)
    except TypeError as e:
        return Row(name, False, str(e))
    if a == b:
        return Row(name, False, f"biconditional holds at {shown}")
    return Row(name, True, f"{shown}: {a} then {b}")


def _soundness(spec: ZetaSpec, rules) -> Row:
    """No rule may derive a broken relation from the respected ones."""
    from .closure import engine
    from .rulebase import expand_symmetry
    if rules is None:
        eng = engine(spec.cls)
        rules = eng.rules
    else:
        rules = expand_symmetry(rules)
        eng = engine(spec.cls, rules)
    derived = eng.closure(spec.respects)
    hit = [r.name for r in spec.breaks if derived >> BIT[r] & 1]
    if not hit:
        return Row("soundness", True)
    culprits = [r.id for r in rules if r.cls in spec.cls.ancestors and r.formula is not None
                and r.premises & ~spec.respects == 0 and r.target.name in hit]
    detail = f"the rulebase derives {','.join(hit)} from the respected set"
    if culprits:
        detail += f" (directly: {', '.join(culprits)})"
    return Row("soundness", False, detail)


def find_witness(spec: ZetaSpec, r: Relation, limit: int = 4):
    """Search small elements for a pair whose images disagree on ``r``."""
    pts = [v for v in spec.domain.grid() if v.denominator <= 2 and abs(v) <= limit]
    pts = sorted(set(pts) | {a for a in spec.anchors() if spec.domain.has_point(a)}, key=lambda v: (abs(v), v))
    ivs = sorted(((a, b) for a in pts for b in pts if a < b), key=lambda e: (max(abs(e[0]), abs(e[1])), e))
    pool = {Sort.POINT: pts, Sort.INTERVAL: ivs}
    sx, sy = r.signature
    for x in pool[sx]:
        for y in pool[sy]:
            before = holds_raw(r, x, y)
            for u, v in product(spec.images(x), spec.images(y)):
                if holds_raw(r, u, v) != before:
                    return (x, y), (u, v)
    return None


def verify_all(specs=None, samples: int = 1000, seed: int = 0, rules=None) -> list[ZetaReport]:
    return [verify(s, samples, seed, rules) for s in (specs if specs is not None else catalog())]
