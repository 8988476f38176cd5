"""Two-sorted formulas to one-sorted point formulas.

An interval variable ``x`` becomes the endpoint pair ``x.l < x.r``; every atom
unfolds into endpoint comparisons through the region semantics.
"""

from __future__ import annotations

import itertools

from ..formulas import And, Atom, DefinabilityQuery, Exists, Formula, Iff, Implies, Not, Or
from ..relations import Kind, Sort
from .pointlogic import PAll, PAnd, PEx, PF, PNot, POr, TRUE, eq, iff, implies, lt, mk_and


def endpoints(var: str) -> tuple[str, str]:
    return f"{var}.l", f"{var}.r"


def _interval_region(lo: str, hi: str, c: str, k: int) -> PF:
    if k == 0:
        return lt(c, lo)
    if k == 1:
        return eq(c, lo)
    if k == 2:
        return PAnd((lt(lo, c), lt(c, hi)))
    if k == 3:
        return eq(c, hi)
    return lt(hi, c)


def _point_region(p: str, c: str, k: int) -> PF:
    if k == 0:
        return lt(c, p)
    if k == 2:
        return eq(c, p)
    return lt(p, c)


def translate_atom(a: Atom, names: dict[str, str]) -> PF:
    """Endpoint form of one atom; ``names`` maps formula variables to point names."""
    x, y = names[a.lhs], names[a.rhs]
    r = a.rel
    if r.kind is Kind.II:
        (xl, xr), (yl, yr) = endpoints(x), endpoints(y)
        k1, k2 = r.regions
        return mk_and((_interval_region(xl, xr, yl, k1), _interval_region(xl, xr, yr, k2)))
    if r.kind is Kind.IP:
        xl, xr = endpoints(x)
        return _interval_region(xl, xr, y, r.regions[0])
    if r.kind is Kind.PI:
        yl, yr = endpoints(y)
        k1, k2 = r.regions
        return mk_and((_point_region(x, yl, k1), _point_region(x, yr, k2)))
    return _point_region(x, y, r.regions[0])


def translate_formula(f: Formula, names: dict[str, str], counter=None) -> PF:
    """Translate ``f``; free variables are looked up in ``names``.

    Interval names are stems: their endpoints are ``stem.l`` and ``stem.r``.
    Bound variables get fresh stems so no capture can happen.
    """
    counter = counter if counter is not None else itertools.count(1)

    def go(g, env):
        if isinstance(g, Atom):
            return translate_atom(g, env)
        if isinstance(g, Not):
            return PNot(go(g.body, env))
        if isinstance(g, And):
            return PAnd((go(g.left, env), go(g.right, env)))
        if isinstance(g, Or):
            return POr((go(g.left, env), go(g.right, env)))
        if isinstance(g, Implies):
            return implies(go(g.left, env), go(g.right, env))
        if isinstance(g, Iff):
            return iff(go(g.left, env), go(g.right, env))
        stem = f"{g.var}#{next(counter)}"
        body = go(g.body, {**env, g.var: stem})
        ex = isinstance(g, Exists)
        if g.sort is Sort.POINT:
            return PEx(stem, body) if ex else PAll(stem, body)
        lo, hi = endpoints(stem)
        guard = lt(lo, hi)
        if ex:
            return PEx(lo, PEx(hi, PAnd((guard, body))))
        return PAll(lo, PAll(hi, implies(guard, body)))

    return go(f, names)


def free_point_vars(q: DefinabilityQuery) -> list[str]:
    """Point variables standing for the query's free variables, in order."""
    out = []
    for v, s in zip(q.free, q.target.signature):
        out.extend(endpoints(v) if s is Sort.INTERVAL else (v,))
    return out


def guards(q: DefinabilityQuery) -> PF:
    return mk_and(lt(*endpoints(v)) for v, s in zip(q.free, q.target.signature)
                  if s is Sort.INTERVAL)


def translate_open(q: DefinabilityQuery) -> tuple[PF, PF]:
    """``(guard, body* <-> target*)`` with the free endpoints left free."""
    names = {v: v for v in q.free}
    body = translate_formula(q.body, names)
    target = translate_atom(q.target_atom(), names)
    return guards(q), iff(body, target)


def translate(q: DefinabilityQuery) -> PF:
    """The universal closure of ``guard -> (body* <-> target*)`` as a sentence."""
    g, core = translate_open(q)
    f = core if g == TRUE else implies(g, core)
    for v in reversed(free_point_vars(q)):
        f = PAll(v, f)
    return f

